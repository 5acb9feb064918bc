#include "cogevo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace cogevo {

double auc(const std::vector<double>& preds, const std::vector<bool>& labels) {
    if (preds.size() != labels.size())
        throw InvariantError("auc: preds/labels size mismatch");
    int64_t pos = std::count(labels.begin(), labels.end(), true);
    int64_t neg = static_cast<int64_t>(labels.size()) - pos;
    if (pos == 0 || neg == 0)
        throw UndefinedMetricError("auc undefined: labels contain a single class");

    std::vector<size_t> order(preds.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return preds[a] < preds[b]; });

    // Walk tie groups; a positive beats every negative strictly below it and
    // half-counts negatives in its own group. Integer arithmetic throughout,
    // so this matches an all-pairs count exactly.
    int64_t twice_wins = 0; // 2*concordant + tied
    int64_t neg_below = 0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        int64_t grp_pos = 0, grp_neg = 0;
        while (j < order.size() && preds[order[j]] == preds[order[i]]) {
            if (labels[order[j]]) ++grp_pos; else ++grp_neg;
            ++j;
        }
        twice_wins += grp_pos * (2 * neg_below + grp_neg);
        neg_below += grp_neg;
        i = j;
    }
    return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pos) *
                                              static_cast<double>(neg));
}

double rmse(const std::vector<double>& preds, const std::vector<bool>& labels) {
    if (preds.empty()) throw UndefinedMetricError("rmse undefined: empty input");
    if (preds.size() != labels.size())
        throw InvariantError("rmse: preds/labels size mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < preds.size(); ++i) {
        double diff = preds[i] - (labels[i] ? 1.0 : 0.0);
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(preds.size()));
}

MistakePrecision mistake_precision(const std::vector<MistakeObs>& obs) {
    MistakePrecision mp;
    int64_t strict_hits = 0, co_hits = 0;
    for (const auto& o : obs) {
        if (!o.agent_incorrect) continue;
        ++mp.n_agent_errors;
        if (o.truth_incorrect) {
            ++mp.n_co_errors;
            if (o.tag_match) {
                ++strict_hits;
                ++co_hits;
            }
        }
    }
    if (mp.n_agent_errors == 0)
        throw UndefinedMetricError("mistake precision undefined: agent never incorrect");
    mp.strict = static_cast<double>(strict_hits) / static_cast<double>(mp.n_agent_errors);
    mp.co_error = mp.n_co_errors > 0
                      ? static_cast<double>(co_hits) / static_cast<double>(mp.n_co_errors)
                      : 0.0;
    return mp;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 4)
        throw DataError("power-law fit needs at least 4 points, got " +
                        std::to_string(series.size()));
    for (const auto& [n, _] : series)
        if (n < 1.0) throw DataError("power-law fit: opportunity indices must be >= 1");

    const size_t m = series.size();
    double y_mean = 0.0;
    for (const auto& [_, y] : series) y_mean += y;
    y_mean /= static_cast<double>(m);
    double sst = 0.0;
    for (const auto& [_, y] : series) sst += (y - y_mean) * (y - y_mean);

    PowerLawFit fit;
    // numerically flat: variance at rounding-noise level
    if (sst <= 1e-20 * static_cast<double>(m)) {
        fit.params = {0.0, 0.01, clamp01(y_mean)};
        fit.fit_r2 = 1.0;
        fit.degenerate = true;
        return fit;
    }

    // Downward-trend check via the sign of the least-squares slope on n.
    double nx = 0.0, nxx = 0.0, nxy = 0.0;
    for (const auto& [n, y] : series) {
        nx += n;
        nxx += n * n;
        nxy += n * y;
    }
    double slope = (static_cast<double>(m) * nxy - nx * (y_mean * static_cast<double>(m))) /
                   (static_cast<double>(m) * nxx - nx * nx);
    fit.non_decaying = slope >= 0.0;

    double best_sse = std::numeric_limits<double>::infinity();
    PowerLawParams best{0.0, 0.01, clamp01(y_mean)};

    for (int gi = 1; gi <= 300; ++gi) {
        double alpha = gi * 0.01;
        // Basis {n^-alpha, 1}; normal equations for (A, eps).
        double sxx = 0.0, sx = 0.0, sxy = 0.0, sy = 0.0;
        for (const auto& [n, y] : series) {
            double x = std::pow(n, -alpha);
            sxx += x * x;
            sx += x;
            sxy += x * y;
            sy += y;
        }
        double det = sxx * static_cast<double>(m) - sx * sx;
        double A, eps;
        if (std::abs(det) < 1e-14) {
            A = 0.0;
            eps = y_mean;
        } else {
            A = (sxy * static_cast<double>(m) - sx * sy) / det;
            eps = (sxx * sy - sx * sxy) / det;
        }
        // Active-set re-solve when a constraint binds.
        if (A < 0.0) {
            A = 0.0;
            eps = y_mean;
        }
        if (eps < 0.0 || eps > 1.0) {
            eps = clamp01(eps);
            A = sxx > 0.0 ? std::max(0.0, (sxy - eps * sx) / sxx) : 0.0;
        }
        double sse = 0.0;
        for (const auto& [n, y] : series) {
            double r = y - (A * std::pow(n, -alpha) + eps);
            sse += r * r;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best = {A, alpha, eps};
        }
    }

    fit.params = best;
    fit.fit_r2 = 1.0 - best_sse / sst;
    return fit;
}

double r2_lc(const std::vector<double>& agent_series, const std::vector<double>& human_series) {
    if (agent_series.size() != human_series.size())
        throw DataError("r2_lc: series lengths differ");
    if (human_series.size() < 2) throw DataError("r2_lc: need at least 2 points");
    double h_mean = std::accumulate(human_series.begin(), human_series.end(), 0.0) /
                    static_cast<double>(human_series.size());
    double sst = 0.0, sse = 0.0;
    for (size_t i = 0; i < human_series.size(); ++i) {
        sst += (human_series[i] - h_mean) * (human_series[i] - h_mean);
        sse += (human_series[i] - agent_series[i]) * (human_series[i] - agent_series[i]);
    }
    if (sst == 0.0)
        throw UndefinedMetricError("r2_lc undefined: human series is constant");
    return 1.0 - sse / sst;
}

std::vector<BinPoint> binned_error_series(std::vector<SeriesRow> rows,
                                          std::optional<int> knowledge_point, int bin_width,
                                          int concept_dim) {
    if (bin_width < 1) throw DataError("bin_width must be >= 1");
    if (knowledge_point && (*knowledge_point < 0 || *knowledge_point >= concept_dim))
        throw DataError("unknown knowledge point " + std::to_string(*knowledge_point));

    std::stable_sort(rows.begin(), rows.end(), [](const SeriesRow& a, const SeriesRow& b) {
        if (a.student != b.student) return a.student < b.student;
        return a.t < b.t;
    });

    struct Acc {
        int64_t errors = 0;
        int64_t count = 0;
        double n_sum = 0.0;
    };
    std::map<int64_t, Acc> bins;
    std::map<std::pair<std::string, int>, int64_t> opportunity;

    for (const auto& row : rows) {
        int64_t n = ++opportunity[{row.student, row.knowledge_point}];
        if (knowledge_point && row.knowledge_point != *knowledge_point) continue;
        auto& acc = bins[(n - 1) / bin_width];
        acc.count += 1;
        acc.errors += row.error ? 1 : 0;
        acc.n_sum += static_cast<double>(n);
    }

    std::vector<BinPoint> out;
    out.reserve(bins.size());
    for (const auto& [_, acc] : bins) {
        BinPoint p;
        p.n = acc.n_sum / static_cast<double>(acc.count);
        p.rate = static_cast<double>(acc.errors) / static_cast<double>(acc.count);
        p.count = acc.count;
        out.push_back(p);
    }
    return out;
}

double alignment_score(const std::vector<double>& deltas) {
    if (deltas.empty()) throw UndefinedMetricError("alignment undefined: empty log");
    return std::accumulate(deltas.begin(), deltas.end(), 0.0) /
           static_cast<double>(deltas.size());
}

} // namespace cogevo
