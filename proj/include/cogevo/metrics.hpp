#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cogevo/datagen.hpp"

namespace cogevo {

// Mann-Whitney AUC via sort-and-rank, tie groups counted exactly.
// Throws UndefinedMetricError on single-class labels.
double auc(const std::vector<double>& preds, const std::vector<bool>& labels);

// sqrt(mean((p - y)^2)) with y in {0,1}.
double rmse(const std::vector<double>& preds, const std::vector<bool>& labels);

// One joined (agent, truth) step for mistake-precision counting.
struct MistakeObs {
    bool agent_incorrect = false;
    bool truth_incorrect = false;
    bool tag_match = false; // both tags present and equal
};

struct MistakePrecision {
    double strict = 0.0;        // denominator: all agent-incorrect steps
    double co_error = 0.0;      // denominator: steps where both erred
    int64_t n_agent_errors = 0;
    int64_t n_co_errors = 0;
};

MistakePrecision mistake_precision(const std::vector<MistakeObs>& obs);

struct PowerLawFit {
    PowerLawParams params;
    double fit_r2 = 0.0;
    bool degenerate = false;    // flat series, SST == 0
    bool non_decaying = false;  // series trend is not downward
};

// Grid search alpha in {0.01..3.00 step 0.01}; closed-form (A, eps) least
// squares per alpha with A >= 0, eps in [0,1] enforced by active-set re-solve.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& series);

// Eq-style agreement of two aligned series:
// 1 - sum((h - a)^2) / sum((h - mean(h))^2). May be negative; never clipped.
double r2_lc(const std::vector<double>& agent_series, const std::vector<double>& human_series);

// Input row for learning-curve binning.
struct SeriesRow {
    std::string student;
    int64_t t = 0;
    int knowledge_point = 0;
    bool error = false;
};

struct BinPoint {
    double n = 0.0;  // mean opportunity index of the bin
    double rate = 0.0;
    int64_t count = 0;
};

// Opportunities are counted per (student, knowledge point) in t order; rates
// pooled across students per bin. knowledge_point empty = pool every point.
std::vector<BinPoint> binned_error_series(std::vector<SeriesRow> rows,
                                          std::optional<int> knowledge_point, int bin_width,
                                          int concept_dim);

// Arithmetic mean of per-step delta_align values.
double alignment_score(const std::vector<double>& deltas);

} // namespace cogevo
