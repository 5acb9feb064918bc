#include <cmath>

#include <doctest.h>

#include "cogevo/metrics.hpp"
#include "cogevo/rng.hpp"

using namespace cogevo;

namespace {

// All-pairs oracle with the same integer accounting as the implementation.
double auc_oracle(const std::vector<double>& preds, const std::vector<bool>& labels) {
    int64_t twice_wins = 0, pos = 0, neg = 0;
    for (size_t i = 0; i < preds.size(); ++i) {
        if (labels[i]) ++pos; else ++neg;
        for (size_t j = 0; j < preds.size(); ++j) {
            if (!labels[i] || labels[j]) continue;
            if (preds[i] > preds[j]) twice_wins += 2;
            else if (preds[i] == preds[j]) twice_wins += 1;
        }
    }
    return static_cast<double>(twice_wins) /
           (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

} // namespace

TEST_CASE("auc: separation, ties, spec example") {
    CHECK(auc({0.1, 0.2, 0.8, 0.9}, {false, false, true, true}) == 1.0);
    CHECK(auc({0.5, 0.5, 0.5, 0.5}, {false, true, false, true}) == 0.5);

    std::vector<double> preds{0.1, 0.4, 0.35, 0.8};
    std::vector<bool> labels{false, false, true, true};
    CHECK(auc(preds, labels) == auc_oracle(preds, labels));
    CHECK(auc(preds, labels) == doctest::Approx(0.75));
}

TEST_CASE("auc equals the all-pairs oracle exactly on random instances") {
    Rng rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = 2 + rng.below(199);
        std::vector<double> preds;
        std::vector<bool> labels;
        bool has_pos = false, has_neg = false;
        for (size_t i = 0; i < n; ++i) {
            // quantized predictions force plenty of ties
            preds.push_back(rng.below(20) / 20.0);
            bool pos = rng.bernoulli(0.4);
            labels.push_back(pos);
            has_pos |= pos;
            has_neg |= !pos;
        }
        if (!has_pos || !has_neg) {
            labels[0] = !labels[0];
        }
        CHECK(auc(preds, labels) == auc_oracle(preds, labels));
    }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
    Rng rng(8);
    std::vector<double> preds;
    std::vector<bool> labels;
    for (int i = 0; i < 100; ++i) {
        preds.push_back(rng.uniform01());
        labels.push_back(rng.bernoulli(0.5));
    }
    labels[0] = true;
    labels[1] = false;
    std::vector<double> warped;
    for (double p : preds) warped.push_back(std::exp(3.0 * p) - 0.5);
    CHECK(auc(preds, labels) == doctest::Approx(auc(warped, labels)).epsilon(1e-12));
}

TEST_CASE("auc complement identity for tie-free predictions") {
    Rng rng(9);
    std::vector<double> preds;
    std::vector<bool> labels, flipped;
    for (int i = 0; i < 80; ++i) {
        preds.push_back((i + rng.uniform01()) / 81.0); // strictly distinct
        bool pos = rng.bernoulli(0.5);
        labels.push_back(pos);
        flipped.push_back(!pos);
    }
    labels[0] = true;
    labels[1] = false;
    flipped[0] = false;
    flipped[1] = true;
    CHECK(auc(preds, labels) + auc(preds, flipped) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("auc: single-class labels are an undefined metric") {
    CHECK_THROWS_AS(auc({0.1, 0.9}, {true, true}), UndefinedMetricError);
    CHECK_THROWS_AS(auc({0.1, 0.9}, {false, false}), UndefinedMetricError);
}

TEST_CASE("rmse cases") {
    CHECK(rmse({0.0, 1.0, 1.0}, {false, true, true}) == 0.0);
    CHECK(rmse({0.5, 0.5, 0.5}, {true, false, true}) == doctest::Approx(0.5));
    CHECK(rmse({0.2, 0.9}, {false, true}) ==
          doctest::Approx(std::sqrt((0.04 + 0.01) / 2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rmse({}, {}), UndefinedMetricError);
}

TEST_CASE("mistake precision counting") {
    SUBCASE("matches over all agent errors") {
        std::vector<MistakeObs> obs{
            {true, true, true},   // counted, match
            {true, true, true},   // counted, match
            {true, false, false}, // agent-only error: counts against
            {false, true, false}, // truth-only error: ignored
            {false, false, false},
        };
        auto mp = mistake_precision(obs);
        CHECK(mp.strict == doctest::Approx(2.0 / 3.0));
        CHECK(mp.co_error == doctest::Approx(1.0));
        CHECK(mp.n_agent_errors == 3);
        CHECK(mp.n_co_errors == 2);
    }
    SUBCASE("perfect matching") {
        std::vector<MistakeObs> obs{{true, true, true}, {true, true, true}};
        CHECK(mistake_precision(obs).strict == doctest::Approx(1.0));
    }
    SUBCASE("agent never incorrect is undefined") {
        std::vector<MistakeObs> obs{{false, true, false}};
        CHECK_THROWS_AS(mistake_precision(obs), UndefinedMetricError);
    }
}

TEST_CASE("fit_power_law: noiseless recovery") {
    PowerLawParams truth{0.8, 0.5, 0.05};
    std::vector<std::pair<double, double>> series;
    for (int n = 1; n <= 60; ++n) series.emplace_back(n, truth.error_rate(n));
    auto fit = fit_power_law(series);
    CHECK(std::abs(fit.params.a_pl - truth.a_pl) <= 0.01);
    CHECK(std::abs(fit.params.alpha_pl - truth.alpha_pl) <= 0.01);
    CHECK(std::abs(fit.params.eps_pl - truth.eps_pl) <= 0.01);
    CHECK(fit.fit_r2 >= 0.999);
    CHECK(!fit.degenerate);
    CHECK(!fit.non_decaying);
}

TEST_CASE("fit_power_law: recovery across the grid") {
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        PowerLawParams truth;
        truth.a_pl = 0.1 + 0.01 * static_cast<double>(rng.below(81)); // 0.10..0.90
        truth.alpha_pl = 0.01 * static_cast<double>(10 + rng.below(281)); // 0.10..2.90
        truth.eps_pl = 0.01 * static_cast<double>(rng.below(31));         // 0..0.30
        std::vector<std::pair<double, double>> series;
        // raw law, no clamping: A + eps may exceed 1 at n = 1
        for (int n = 1; n <= 80; ++n)
            series.emplace_back(n, truth.a_pl * std::pow(n, -truth.alpha_pl) + truth.eps_pl);
        auto fit = fit_power_law(series);
        CHECK(std::abs(fit.params.a_pl - truth.a_pl) <= 0.01);
        CHECK(std::abs(fit.params.alpha_pl - truth.alpha_pl) <= 0.01);
        CHECK(std::abs(fit.params.eps_pl - truth.eps_pl) <= 0.01);
        CHECK(fit.fit_r2 >= 0.999);
    }
}

TEST_CASE("fit_power_law: degenerate and pathological series") {
    SUBCASE("constant series") {
        std::vector<std::pair<double, double>> flat;
        for (int n = 1; n <= 10; ++n) flat.emplace_back(n, 0.3);
        auto fit = fit_power_law(flat);
        CHECK(fit.degenerate);
        CHECK(fit.params.a_pl == 0.0);
        CHECK(fit.params.eps_pl == doctest::Approx(0.3));
        CHECK(fit.params.alpha_pl == doctest::Approx(0.01)); // grid minimum
    }
    SUBCASE("increasing series warns and fits poorly") {
        std::vector<std::pair<double, double>> rising;
        for (int n = 1; n <= 30; ++n) rising.emplace_back(n, 0.1 + 0.01 * n);
        auto fit = fit_power_law(rising);
        CHECK(fit.non_decaying);
        CHECK(fit.fit_r2 < 0.5);
    }
    SUBCASE("too few points") {
        std::vector<std::pair<double, double>> three{{1, 0.9}, {2, 0.5}, {3, 0.4}};
        CHECK_THROWS_WITH_AS(fit_power_law(three), doctest::Contains("at least 4"), DataError);
    }
}

TEST_CASE("r2_lc cases") {
    std::vector<double> human{0.8, 0.5, 0.3};
    CHECK(r2_lc(human, human) == doctest::Approx(1.0));

    double mean = (0.8 + 0.5 + 0.3) / 3.0;
    std::vector<double> flat_agent{mean, mean, mean};
    CHECK(r2_lc(flat_agent, human) == doctest::Approx(0.0));

    std::vector<double> agent{0.7, 0.5, 0.4};
    double sst = 0.0;
    for (double h : human) sst += (h - mean) * (h - mean);
    CHECK(r2_lc(agent, human) == doctest::Approx(1.0 - 0.02 / sst).epsilon(1e-12));
    CHECK(r2_lc(agent, human) == doctest::Approx(0.8421).epsilon(1e-3));

    // far-off agents go negative, unclipped
    std::vector<double> wild{5.0, -3.0, 9.0};
    CHECK(r2_lc(wild, human) < 0.0);

    CHECK_THROWS_AS(r2_lc({0.5, 0.5}, {0.3, 0.3}), UndefinedMetricError);
    CHECK_THROWS_AS(r2_lc({0.5}, {0.3, 0.4}), DataError);
}

TEST_CASE("binned error series") {
    SUBCASE("single student, error then correct") {
        std::vector<SeriesRow> rows{
            {"s1", 0, 0, true}, {"s1", 1, 0, false}, {"s1", 2, 0, false}};
        auto series = binned_error_series(rows, std::nullopt, 1, 4);
        REQUIRE(series.size() == 3);
        CHECK(series[0].n == doctest::Approx(1.0));
        CHECK(series[0].rate == doctest::Approx(1.0));
        CHECK(series[1].rate == doctest::Approx(0.0));
        CHECK(series[2].rate == doctest::Approx(0.0));
    }
    SUBCASE("width-2 bins are pairwise means of width-1 bins at equal counts") {
        Rng rng(5);
        std::vector<SeriesRow> rows;
        for (int s = 0; s < 7; ++s)
            for (int t = 0; t < 12; ++t)
                rows.push_back({"s" + std::to_string(s), t, 0, rng.bernoulli(0.4)});
        auto w1 = binned_error_series(rows, std::nullopt, 1, 4);
        auto w2 = binned_error_series(rows, std::nullopt, 2, 4);
        REQUIRE(w1.size() == 12);
        REQUIRE(w2.size() == 6);
        for (size_t i = 0; i < w2.size(); ++i) {
            CHECK(w2[i].rate ==
                  doctest::Approx((w1[2 * i].rate + w1[2 * i + 1].rate) / 2.0).epsilon(1e-12));
            CHECK(w2[i].n == doctest::Approx((w1[2 * i].n + w1[2 * i + 1].n) / 2.0));
        }
    }
    SUBCASE("per-knowledge-point counters are independent") {
        std::vector<SeriesRow> rows{
            {"s1", 0, 0, true}, {"s1", 1, 1, true}, {"s1", 2, 0, false}, {"s1", 3, 1, false}};
        auto kp0 = binned_error_series(rows, 0, 1, 4);
        REQUIRE(kp0.size() == 2);
        CHECK(kp0[0].rate == 1.0);
        CHECK(kp0[1].rate == 0.0);
    }
    SUBCASE("empty selection and bad knowledge point") {
        std::vector<SeriesRow> rows{{"s1", 0, 0, true}};
        CHECK(binned_error_series(rows, 3, 1, 4).empty());
        CHECK_THROWS_AS(binned_error_series(rows, 9, 1, 4), DataError);
    }
}

TEST_CASE("alignment_score") {
    CHECK(alignment_score({1.0, 1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(alignment_score({1.0, 0.0}) == doctest::Approx(0.5));
    std::vector<double> vals{0.2, -0.4, 0.9, 0.1, 0.6};
    double sum = 0.0;
    for (double v : vals) sum += v;
    CHECK(alignment_score(vals) == doctest::Approx(sum / 5.0).epsilon(1e-15));
    CHECK_THROWS_AS(alignment_score({}), UndefinedMetricError);
}
