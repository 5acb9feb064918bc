#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogevo/datagen.hpp"
#include "cogevo/harness.hpp"
#include "cogevo/metrics.hpp"

namespace cogevo {

// A metric value or the reason it is undefined, plus its sample count.
struct MetricValue {
    std::optional<double> value;
    std::string note; // set when undefined
    int64_t n = 0;
};

struct MetricReport {
    MetricValue auc;
    MetricValue rmse;
    MetricValue mistake_precision;          // strict denominator (headline)
    MetricValue mistake_precision_co_error; // both-erred denominator
    MetricValue r2_lc;
    MetricValue align;
    MetricValue fit_r2; // power-law fit of the agent series
    PowerLawParams power_fit;
    bool power_degenerate = false;
    bool power_non_decaying = false;

    nlohmann::json to_json() const;
    std::string csv_header() const;
    std::string csv_row() const;
};

struct CurvePoint {
    double n = 0.0;
    double human_rate = 0.0;
    double agent_rate = 0.0;
    double fitted = 0.0;
};

struct EvaluationResult {
    MetricReport report;
    std::vector<CurvePoint> curve;
};

// Full metric protocol over an agent log and its ground truth. Steps are
// joined on (student, t) and must reference the same items.
EvaluationResult evaluate_run(const std::vector<InteractionStep>& log, const Dataset& truth,
                              const ItemBank& bank, int bin_width = 1);

// Self-evaluation: a dataset scored against itself (preds = outcomes).
EvaluationResult evaluate_dataset_as_log(const Dataset& truth, const ItemBank& bank,
                                         int bin_width = 1);

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& curve);
void write_curve_svg(const std::string& path, const std::vector<CurvePoint>& curve);

} // namespace cogevo
