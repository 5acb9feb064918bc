#include "cogevo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace cogevo {

using nlohmann::json;

namespace {

json metric_to_json(const MetricValue& m) {
    json j;
    j["value"] = m.value ? json(*m.value) : json(nullptr);
    j["n"] = m.n;
    if (!m.note.empty()) j["note"] = m.note;
    return j;
}

std::string metric_to_csv(const MetricValue& m) {
    if (!m.value) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *m.value);
    return buf;
}

template <typename Fn>
MetricValue guarded(int64_t n, Fn&& fn) {
    MetricValue m;
    m.n = n;
    try {
        m.value = fn();
    } catch (const UndefinedMetricError& e) {
        m.note = e.what();
    }
    return m;
}

struct JoinedRows {
    std::vector<double> preds;
    std::vector<bool> labels; // truth correctness
    std::vector<MistakeObs> mistakes;
    std::vector<double> deltas;
    std::vector<SeriesRow> agent_rows;
    std::vector<SeriesRow> truth_rows;
};

JoinedRows join_log_truth(const std::vector<InteractionStep>& log, const Dataset& truth,
                          const ItemBank& bank) {
    std::map<std::pair<std::string, int64_t>, const DatasetRecord*> truth_by_key;
    for (const auto& rec : truth.records) truth_by_key[{rec.student, rec.t}] = &rec;

    JoinedRows rows;
    rows.preds.reserve(log.size());
    for (const auto& s : log) {
        auto it = truth_by_key.find({s.student, s.t});
        if (it == truth_by_key.end())
            throw DataError("no truth record for (" + s.student + ", t=" +
                            std::to_string(s.t) + ")");
        const DatasetRecord& tr = *it->second;
        if (tr.item != s.item_id)
            throw DataError("key mismatch at (" + s.student + ", t=" + std::to_string(s.t) +
                            "): log item " + s.item_id + " vs truth item " + tr.item);

        rows.preds.push_back(s.p_hat);
        rows.labels.push_back(tr.correct);
        rows.deltas.push_back(s.delta_align);

        MistakeObs mo;
        mo.agent_incorrect = !s.response.is_correct;
        mo.truth_incorrect = !tr.correct;
        mo.tag_match = s.response.misconception_tag && tr.misconception &&
                       *s.response.misconception_tag == *tr.misconception;
        rows.mistakes.push_back(mo);

        int kp = bank.by_id(s.item_id).top_concept();
        rows.agent_rows.push_back({s.student, s.t, kp, !s.response.is_correct});
        rows.truth_rows.push_back({tr.student, tr.t, kp, !tr.correct});
    }
    return rows;
}

EvaluationResult evaluate_joined(const JoinedRows& rows, int bin_width, int concept_dim) {
    EvaluationResult result;
    auto& rep = result.report;
    int64_t n = static_cast<int64_t>(rows.preds.size());

    rep.auc = guarded(n, [&] { return auc(rows.preds, rows.labels); });
    rep.rmse = guarded(n, [&] { return rmse(rows.preds, rows.labels); });
    rep.align = guarded(n, [&] { return alignment_score(rows.deltas); });

    try {
        auto mp = mistake_precision(rows.mistakes);
        rep.mistake_precision = {mp.strict, "", mp.n_agent_errors};
        rep.mistake_precision_co_error = {mp.co_error, "", mp.n_co_errors};
    } catch (const UndefinedMetricError& e) {
        rep.mistake_precision = {std::nullopt, e.what(), 0};
        rep.mistake_precision_co_error = {std::nullopt, e.what(), 0};
    }

    auto agent_series = binned_error_series(rows.agent_rows, std::nullopt, bin_width, concept_dim);
    auto truth_series = binned_error_series(rows.truth_rows, std::nullopt, bin_width, concept_dim);

    // Align the two series on the bin opportunity index.
    std::map<double, std::pair<std::optional<double>, std::optional<double>>> merged;
    for (const auto& p : truth_series) merged[p.n].first = p.rate;
    for (const auto& p : agent_series) merged[p.n].second = p.rate;
    std::vector<double> human, agent;
    for (const auto& [nv, pair] : merged) {
        if (pair.first && pair.second) {
            human.push_back(*pair.first);
            agent.push_back(*pair.second);
        }
    }

    rep.r2_lc = guarded(static_cast<int64_t>(human.size()), [&] {
        if (human.size() < 2) throw UndefinedMetricError("r2_lc undefined: fewer than 2 bins");
        return r2_lc(agent, human);
    });

    std::vector<std::pair<double, double>> fit_series;
    for (const auto& p : agent_series) fit_series.emplace_back(p.n, p.rate);
    rep.fit_r2 = guarded(static_cast<int64_t>(fit_series.size()), [&]() -> double {
        if (fit_series.size() < 4)
            throw UndefinedMetricError("power-law fit undefined: fewer than 4 bins");
        auto fit = fit_power_law(fit_series);
        rep.power_fit = fit.params;
        rep.power_degenerate = fit.degenerate;
        rep.power_non_decaying = fit.non_decaying;
        return fit.fit_r2;
    });

    // Curve rows for plotting: joint bins only, with the fitted law evaluated
    // at each bin position.
    std::map<double, double> agent_by_n;
    for (const auto& p : agent_series) agent_by_n[p.n] = p.rate;
    for (const auto& p : truth_series) {
        auto it = agent_by_n.find(p.n);
        if (it == agent_by_n.end()) continue;
        CurvePoint cp;
        cp.n = p.n;
        cp.human_rate = p.rate;
        cp.agent_rate = it->second;
        cp.fitted = rep.fit_r2.value ? rep.power_fit.error_rate(p.n) : 0.0;
        result.curve.push_back(cp);
    }
    return result;
}

} // namespace

EvaluationResult evaluate_run(const std::vector<InteractionStep>& log, const Dataset& truth,
                              const ItemBank& bank, int bin_width) {
    if (log.empty()) throw DataError("evaluate: empty agent log");
    auto rows = join_log_truth(log, truth, bank);
    return evaluate_joined(rows, bin_width, bank.concept_dim);
}

EvaluationResult evaluate_dataset_as_log(const Dataset& truth, const ItemBank& bank,
                                         int bin_width) {
    if (truth.records.empty()) throw DataError("evaluate: empty dataset");
    JoinedRows rows;
    for (const auto& rec : truth.records) {
        rows.preds.push_back(rec.correct ? 1.0 : 0.0);
        rows.labels.push_back(rec.correct);
        rows.deltas.push_back(1.0); // no alignment signal in a raw dataset
        MistakeObs mo;
        mo.agent_incorrect = !rec.correct;
        mo.truth_incorrect = !rec.correct;
        mo.tag_match = rec.misconception.has_value();
        rows.mistakes.push_back(mo);
        int kp = bank.by_id(rec.item).top_concept();
        rows.agent_rows.push_back({rec.student, rec.t, kp, !rec.correct});
        rows.truth_rows.push_back({rec.student, rec.t, kp, !rec.correct});
    }
    auto result = evaluate_joined(rows, bin_width, bank.concept_dim);
    result.report.align = {std::nullopt, "alignment undefined: dataset has no delta_align", 0};
    return result;
}

json MetricReport::to_json() const {
    json j;
    j["auc"] = metric_to_json(auc);
    j["rmse"] = metric_to_json(rmse);
    j["mistake_precision"] = metric_to_json(mistake_precision);
    j["mistake_precision_co_error"] = metric_to_json(mistake_precision_co_error);
    j["r2_lc"] = metric_to_json(r2_lc);
    j["align"] = metric_to_json(align);
    j["power_fit"] = {{"A", power_fit.a_pl},
                      {"alpha", power_fit.alpha_pl},
                      {"eps", power_fit.eps_pl},
                      {"fit_r2", fit_r2.value ? json(*fit_r2.value) : json(nullptr)},
                      {"degenerate", power_degenerate},
                      {"non_decaying", power_non_decaying}};
    return j;
}

std::string MetricReport::csv_header() const {
    return "auc,rmse,mistake_precision,mistake_precision_co_error,r2_lc,align,"
           "fit_A,fit_alpha,fit_eps,fit_r2";
}

std::string MetricReport::csv_row() const {
    std::ostringstream out;
    out << metric_to_csv(auc) << ',' << metric_to_csv(rmse) << ','
        << metric_to_csv(mistake_precision) << ',' << metric_to_csv(mistake_precision_co_error)
        << ',' << metric_to_csv(r2_lc) << ',' << metric_to_csv(align) << ',';
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,", power_fit.a_pl, power_fit.alpha_pl,
                  power_fit.eps_pl);
    out << buf << metric_to_csv(fit_r2);
    return out.str();
}

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& curve) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write curve CSV to " + path);
    out << "n,human_rate,agent_rate,fitted\n";
    char buf[128];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof(buf), "%.4f,%.6f,%.6f,%.6f\n", p.n, p.human_rate, p.agent_rate,
                      p.fitted);
        out << buf;
    }
}

void write_curve_svg(const std::string& path, const std::vector<CurvePoint>& curve) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write SVG to " + path);
    const int w = 720, h = 440, ml = 60, mr = 20, mt = 30, mb = 50;
    double n_max = 1.0;
    for (const auto& p : curve) n_max = std::max(n_max, p.n);

    auto x_of = [&](double n) { return ml + (n - 1.0) / std::max(1.0, n_max - 1.0) * (w - ml - mr); };
    auto y_of = [&](double rate) { return mt + (1.0 - clamp01(rate)) * (h - mt - mb); };
    auto polyline = [&](auto get, const char* color, const char* dash) {
        out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
        if (dash) out << " stroke-dasharray=\"" << dash << "\"";
        out << " points=\"";
        char buf[48];
        for (const auto& p : curve) {
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", x_of(p.n), y_of(get(p)));
            out << buf;
        }
        out << "\"/>\n";
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "  <line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << (w / 2) << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">practice opportunity n</text>\n"
        << "  <text x=\"16\" y=\"" << (h / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << (h / 2)
        << ")\">error rate</text>\n";
    if (!curve.empty()) {
        polyline([](const CurvePoint& p) { return p.human_rate; }, "#222222", nullptr);
        polyline([](const CurvePoint& p) { return p.agent_rate; }, "#1f6fd0", nullptr);
        polyline([](const CurvePoint& p) { return p.fitted; }, "#d06f1f", "6,4");
    }
    out << "  <text x=\"" << w - mr - 200 << "\" y=\"" << mt
        << "\" font-size=\"12\" fill=\"#222222\">human</text>\n"
        << "  <text x=\"" << w - mr - 140 << "\" y=\"" << mt
        << "\" font-size=\"12\" fill=\"#1f6fd0\">agent</text>\n"
        << "  <text x=\"" << w - mr - 80 << "\" y=\"" << mt
        << "\" font-size=\"12\" fill=\"#d06f1f\">fitted</text>\n"
        << "</svg>\n";
}

} // namespace cogevo
