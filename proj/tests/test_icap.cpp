#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>
#include <json.hpp>

#include "cogevo/icap.hpp"
#include "cogevo/rng.hpp"

using namespace cogevo;

namespace {

PerceptronWeights zero_weights() {
    PerceptronWeights pw;
    pw.w.assign(4, std::array<double, kFeatureDim>{});
    return pw;
}

// Reference softmax: plain exp-then-normalize.
std::array<double, 4> softmax_oracle(const std::array<double, 4>& logits) {
    std::array<double, 4> out{};
    double sum = 0.0;
    for (size_t i = 0; i < 4; ++i) {
        out[i] = std::exp(logits[i]);
        sum += out[i];
    }
    for (auto& x : out) x /= sum;
    return out;
}

} // namespace

TEST_CASE("encode_features: empty reading input") {
    InteractionInput input;
    input.interaction_kind = InteractionKind::Reading;
    auto f = encode_features(input);
    CHECK(f.values[0] == 1.0);
    CHECK(f.values[1] == 0.0);
    CHECK(f.values[kLatencyIdx] == 0.0);
    for (size_t i = kBowOffset; i < kFeatureDim; ++i) CHECK(f.values[i] == 0.0);
}

TEST_CASE("encode_features is deterministic") {
    InteractionInput input;
    input.interaction_kind = InteractionKind::SelfExplanation;
    input.latency_ms = 3200;
    input.reflection_text = "I solved it by factoring  the Polynomial twice";
    auto a = encode_features(input);
    auto b = encode_features(input);
    CHECK(a.values == b.values);
}

TEST_CASE("encode_features: latency feature is ln(1 + s)") {
    InteractionInput input;
    input.interaction_kind = InteractionKind::SelfExplanation;
    input.latency_ms = 1000;
    auto f = encode_features(input);
    CHECK(f.values[kLatencyIdx] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("icap_distribution: uniform under zero logits") {
    auto y = icap_distribution(FeatureVector{}, zero_weights());
    for (double p : y.probs) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("icap_distribution: dominant logit") {
    auto pw = zero_weights();
    pw.b = {10.0, 0.0, 0.0, 0.0};
    auto y = icap_distribution(FeatureVector{}, pw);
    CHECK(y.probs[Passive] > 0.99);
}

TEST_CASE("icap_distribution matches the exp/normalize oracle") {
    auto pw = zero_weights();
    pw.b = {1.0, 2.0, 3.0, 4.0};
    auto y = icap_distribution(FeatureVector{}, pw);
    auto oracle = softmax_oracle(pw.b);
    for (size_t i = 0; i < 4; ++i) CHECK(y.probs[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
}

TEST_CASE("softmax properties on random logits") {
    Rng rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        auto pw = zero_weights();
        // logit gaps stay below ~30 so no component saturates to exactly 1.0
        for (auto& b : pw.b) b = rng.uniform(-14.0, 14.0);
        auto y = icap_distribution(FeatureVector{}, pw);
        double sum = y.probs[0] + y.probs[1] + y.probs[2] + y.probs[3];
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        for (double p : y.probs) {
            CHECK(p > 0.0);
            CHECK(p < 1.0);
        }
        // shift invariance
        auto shifted = pw;
        double c = rng.uniform(-50.0, 50.0);
        for (auto& b : shifted.b) b += c;
        auto y2 = icap_distribution(FeatureVector{}, shifted);
        for (size_t i = 0; i < 4; ++i) CHECK(std::abs(y.probs[i] - y2.probs[i]) <= 1e-9);
    }
}

TEST_CASE("evolution_rate: softplus values") {
    double v[4] = {0.5, 1.0, 1.5, 2.0};
    IcapDistribution constructive{{0.0, 0.0, 1.0, 0.0}};
    // softplus(1.5) = ln(1 + e^1.5), constructive gain 1.5
    CHECK(evolution_rate(constructive, v) ==
          doctest::Approx(std::log1p(std::exp(1.5))).epsilon(1e-12));
    CHECK(evolution_rate(constructive, v) == doctest::Approx(1.7014).epsilon(1e-4));

    double zeros[4] = {0.0, 0.0, 0.0, 0.0};
    CHECK(evolution_rate(IcapDistribution{}, zeros) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    double deep_neg[4] = {-20.0, -20.0, -20.0, -20.0};
    double w = evolution_rate(IcapDistribution{}, deep_neg);
    CHECK(w > 0.0);
    CHECK(w < 1e-8);
}

TEST_CASE("evolution_rate orders the ICAP one-hots") {
    double v[4] = {0.5, 1.0, 1.5, 2.0};
    double last = 0.0;
    for (int level = 0; level < 4; ++level) {
        IcapDistribution y{{0.0, 0.0, 0.0, 0.0}};
        y.probs[static_cast<size_t>(level)] = 1.0;
        double w = evolution_rate(y, v);
        CHECK(w > last);
        last = w;
    }
}

TEST_CASE("evolution_rate increases in components with positive gain") {
    double v[4] = {0.5, 1.0, 1.5, 2.0};
    IcapDistribution lo{{0.7, 0.1, 0.1, 0.1}};
    IcapDistribution hi{{0.1, 0.1, 0.1, 0.7}};
    CHECK(evolution_rate(hi, v) > evolution_rate(lo, v));
}

TEST_CASE("perceptron weights load from JSON and reject malformed files") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "cogevo_tests";
    fs::create_directories(dir);
    auto path = (dir / "weights.json").string();

    nlohmann::json j;
    j["w"] = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        std::vector<double> row(kFeatureDim, 0.0);
        row[static_cast<size_t>(r)] = 2.0 + r;
        j["w"].push_back(row);
    }
    j["b"] = {0.1, 0.2, 0.3, 0.4};
    std::ofstream(path) << j.dump();

    auto pw = PerceptronWeights::from_json_file(path);
    CHECK(pw.w[2][2] == doctest::Approx(4.0));
    CHECK(pw.b[3] == doctest::Approx(0.4));

    std::ofstream(path) << R"({"w": [[1,2],[3,4]], "b": [0,0,0,0]})";
    CHECK_THROWS_AS(PerceptronWeights::from_json_file(path), ConfigError);
    CHECK_THROWS_AS(PerceptronWeights::from_json_file((dir / "absent.json").string()),
                    ConfigError);
}
