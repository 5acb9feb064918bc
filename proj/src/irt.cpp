#include "cogevo/irt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cogevo {

double icc(const Item& item, double theta) {
    return 1.0 / (1.0 + std::exp(-item.irt_a * (theta - item.irt_b)));
}

namespace {

double simpson(double lo, double hi, int n, const std::function<double(double)>& f) {
    double h = (hi - lo) / n;
    double sum = f(lo) + f(hi);
    for (int k = 1; k < n; ++k) sum += f(lo + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

} // namespace

double structural_similarity(const Item& i, const Item& j, double theta_t,
                             const HyperParams& hp) {
    const int n = 64; // total subinterval budget, even
    const double lo = theta_t - hp.delta_theta;
    const double hi = theta_t + hp.delta_theta;
    auto f = [&](double theta) { return std::abs(icc(i, theta) - icc(j, theta)); };

    // |P_i - P_j| has a kink where the curves cross: a_i(t - b_i) = a_j(t - b_j).
    // Splitting there keeps composite Simpson at full order on each side.
    double integral;
    double cross = 0.0;
    bool has_cross = false;
    if (i.irt_a != j.irt_a) {
        cross = (i.irt_a * i.irt_b - j.irt_a * j.irt_b) / (i.irt_a - j.irt_a);
        has_cross = cross > lo && cross < hi;
    }
    if (has_cross) {
        int n1 = static_cast<int>(std::lround(n * (cross - lo) / (hi - lo) / 2.0)) * 2;
        n1 = std::clamp(n1, 2, n - 2);
        integral = simpson(lo, cross, n1, f) + simpson(cross, hi, n - n1, f);
    } else {
        integral = simpson(lo, hi, n, f);
    }
    double mad = integral / (2.0 * hp.delta_theta);
    return std::exp(-hp.k_struct * mad);
}

double semantic_similarity(const InteractionInput& q, const MemoryRecord& m,
                           const TextEmbedder& embedder) {
    const std::string& a = q.item ? q.item->stem_text : std::string();
    const std::string& b = m.input.item ? m.input.item->stem_text : std::string();
    auto va = embedder.embed(a);
    auto vb = embedder.embed(b);
    if (va.size() != vb.size())
        throw InvariantError("embedder returned vectors of different lengths");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t k = 0; k < va.size(); ++k) {
        dot += va[k] * vb[k];
        na += va[k] * va[k];
        nb += vb[k] * vb[k];
    }
    double cos = (na > 0.0 && nb > 0.0) ? dot / (std::sqrt(na) * std::sqrt(nb)) : 0.0;
    return (1.0 + cos) / 2.0;
}

double hybrid_score(const InteractionInput& q, const MemoryRecord& m, double theta_t,
                    const HyperParams& hp, const TextEmbedder& embedder) {
    double sem = hp.alpha_sem > 0.0 ? semantic_similarity(q, m, embedder) : 0.0;
    double str = hp.beta_struct > 0.0 && q.item && m.input.item
                     ? structural_similarity(*q.item, *m.input.item, theta_t, hp)
                     : 0.0;
    return hp.alpha_sem * sem + hp.beta_struct * str;
}

RetrievalOutcome retrieve(const MemoryBank& bank, const InteractionInput& q, double theta_t,
                          double omega_L, const HyperParams& hp, const TextEmbedder& embedder,
                          double emotion_reactivity) {
    double best_score = 0.0;
    const MemoryRecord* best = nullptr;
    for (const auto& rec : bank.records) {
        double s = hybrid_score(q, rec, theta_t, hp, embedder);
        if (!best || s >= best_score) { // >= so the most recent wins ties
            best_score = s;
            best = &rec;
        }
    }
    // Assimilation needs a schema that worked: a high-scoring memory of a
    // failure routes to accommodation with the old mistake kept at hand.
    if (best && best_score > hp.tau_retrieval && best->response.is_correct) {
        return Assimilation{*best, best_score};
    }
    Conflict c;
    c.best_score = best ? best_score : 0.0;
    c.new_state.label =
        omega_L >= hp.omega_conflict ? CognitiveLabel::Confused : CognitiveLabel::Exploring;
    c.new_state.confidence = c.best_score;
    c.new_state.arousal = std::min(1.0, emotion_reactivity * omega_L / 2.0);
    if (best && best_score > hp.tau_retrieval) {
        c.recalled_failure = best->response;
        c.recalled_reflection = best->input.reflection_text;
    }
    return c;
}

void store(MemoryBank& bank, MemoryRecord rec) {
    if (rec.timestamp <= bank.last_timestamp())
        throw InvariantError("memory bank timestamps must be strictly increasing");
    bank.records.push_back(std::move(rec));
    if (bank.capacity > 0) {
        while (bank.records.size() > bank.capacity) bank.records.pop_front();
    }
}

} // namespace cogevo
