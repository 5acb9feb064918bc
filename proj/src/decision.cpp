#include "cogevo/decision.hpp"

#include <cmath>

#include "cogevo/irt.hpp"
#include "cogevo/rng.hpp"

namespace cogevo {

double mastery_confidence(const KnowledgeStructure& k_next, const Item& item,
                          const CognitiveState& state) {
    double p = icc(item, ability_from_knowledge(k_next));
    return clamp01(p * (0.5 + 0.5 * state.confidence) + 0.25 * (state.confidence - 0.5));
}

namespace {

// Item-relevant concept with lowest mastery, restricted to concepts that map
// to a distractor (the bank's concept->tag mapping); ties to the lower index.
int weakest_concept(const KnowledgeStructure& k, const Item& item) {
    int weakest = -1;
    double lowest = 2.0;
    for (const auto& [c, w] : item.concept_weights) {
        if (w <= 0.0) continue;
        bool mapped = false;
        for (const auto& opt : item.options)
            if (opt.concept_index && *opt.concept_index == c) mapped = true;
        if (!mapped) continue;
        double m = k.mastery[static_cast<size_t>(c)];
        if (m < lowest || (m == lowest && c < weakest)) {
            lowest = m;
            weakest = c;
        }
    }
    return weakest;
}

} // namespace

Response decide(const KnowledgeStructure& k_next, const Item& item, double p_hat,
                uint64_t seed) {
    if (item.options.size() < 2) throw DataError("decide: item " + item.id + " has < 2 options");
    Rng rng(seed);
    Response r;
    r.is_correct = rng.bernoulli(p_hat);
    if (r.is_correct) {
        r.chosen_option = item.correct_option;
        r.elaboration = "applied the practiced approach to " + item.id;
        return r;
    }

    int weak = weakest_concept(k_next, item);
    int pick = -1;
    for (size_t i = 0; i < item.options.size(); ++i) {
        if (static_cast<int>(i) == item.correct_option) continue;
        if (pick < 0) pick = static_cast<int>(i); // fallback: first distractor
        if (item.options[i].concept_index && *item.options[i].concept_index == weak) {
            pick = static_cast<int>(i);
            break; // lowest option index among matches
        }
    }
    r.chosen_option = pick;
    r.misconception_tag = item.options[static_cast<size_t>(pick)].misconception_tag;
    r.elaboration = "unsure; went with what seemed plausible for " + item.id;
    return r;
}

std::array<double, 3> behavior_embedding(const Response& r, double p_hat) {
    double correct = r.is_correct ? 1.0 : 0.0;
    return {p_hat, correct, 1.0 - p_hat * correct};
}

std::array<double, 3> state_embedding(const CognitiveState& c) {
    return {c.confidence, 1.0 - c.arousal, 1.0 - c.confidence};
}

ConfidenceReport alignment(const Response& r, double p_hat, const CognitiveState& c_next,
                           const HyperParams& hp) {
    auto bv = behavior_embedding(r, p_hat);
    auto sv = state_embedding(c_next);
    double dot = 0.0, nb = 0.0, ns = 0.0;
    for (size_t i = 0; i < 3; ++i) {
        dot += bv[i] * sv[i];
        nb += bv[i] * bv[i];
        ns += sv[i] * sv[i];
    }
    ConfidenceReport rep;
    rep.p_hat = p_hat;
    rep.delta_align = (nb > 0.0 && ns > 0.0) ? dot / (std::sqrt(nb) * std::sqrt(ns)) : 0.0;
    rep.flagged_low_confidence = rep.delta_align < hp.tau_align;
    return rep;
}

} // namespace cogevo
