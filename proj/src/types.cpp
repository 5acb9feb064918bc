#include "cogevo/types.hpp"

#include <numeric>

namespace cogevo {

const char* to_string(CognitiveLabel label) {
    switch (label) {
        case CognitiveLabel::Stable: return "stable";
        case CognitiveLabel::Exploring: return "exploring";
        case CognitiveLabel::Confused: return "confused";
        case CognitiveLabel::Flow: return "flow";
        case CognitiveLabel::Frustrated: return "frustrated";
    }
    return "unknown";
}

CognitiveLabel label_from_string(const std::string& s) {
    if (s == "stable") return CognitiveLabel::Stable;
    if (s == "exploring") return CognitiveLabel::Exploring;
    if (s == "confused") return CognitiveLabel::Confused;
    if (s == "flow") return CognitiveLabel::Flow;
    if (s == "frustrated") return CognitiveLabel::Frustrated;
    throw DataError("unknown cognitive state label '" + s + "'");
}

const char* to_string(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::Reading: return "reading";
        case InteractionKind::Questioning: return "questioning";
        case InteractionKind::SelfExplanation: return "self-explanation";
        case InteractionKind::Answering: return "answering";
    }
    return "unknown";
}

int Item::top_concept() const {
    if (concept_weights.empty()) throw InvariantError("item " + id + " has no concept weights");
    auto best = concept_weights.front();
    for (const auto& cw : concept_weights) {
        if (cw.second > best.second) best = cw;
    }
    return best.first;
}

void Item::validate(int concept_dim) const {
    if (options.size() < 2) throw DataError("item " + id + ": needs at least 2 options");
    if (correct_option < 0 || correct_option >= static_cast<int>(options.size()))
        throw DataError("item " + id + ": correct_option out of range");
    if (!(irt_a > 0.0)) throw DataError("item " + id + ": irt_a must be > 0");
    double sum = 0.0;
    for (const auto& [c, w] : concept_weights) {
        if (c < 0 || c >= concept_dim) throw DataError("item " + id + ": concept index out of range");
        if (w < 0.0) throw DataError("item " + id + ": negative concept weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DataError("item " + id + ": concept weights must sum to 1");
    for (size_t i = 0; i < options.size(); ++i) {
        bool is_correct = static_cast<int>(i) == correct_option;
        if (is_correct && options[i].misconception_tag)
            throw DataError("item " + id + ": correct option carries a misconception tag");
        if (!is_correct && !options[i].misconception_tag)
            throw DataError("item " + id + ": distractor " + std::to_string(i) + " lacks a misconception tag");
    }
}

void HyperParams::validate() const {
    if (std::abs(alpha_sem + beta_struct - 1.0) > 1e-9)
        throw ConfigError("hyper.alpha_sem + hyper.beta_struct must equal 1");
    if (alpha_sem < 0.0 || alpha_sem > 1.0) throw ConfigError("hyper.alpha_sem must be in [0,1]");
    if (tau_retrieval < 0.0 || tau_retrieval > 1.0) throw ConfigError("hyper.tau_retrieval must be in [0,1]");
    if (!(delta_theta > 0.0)) throw ConfigError("hyper.delta_theta must be > 0");
    if (!(k_struct > 0.0)) throw ConfigError("hyper.k_struct must be > 0");
    if (lambda_pop < 1) throw ConfigError("hyper.lambda must be >= 1");
    if (!(sigma_base > 0.0)) throw ConfigError("hyper.sigma_base must be > 0");
    if (gamma < 0.0) throw ConfigError("hyper.gamma must be >= 0");
    if (zpd_lo < 0.0) throw ConfigError("hyper.zpd_lo must be >= 0");
    if (!(zpd_hi > zpd_lo)) throw ConfigError("hyper.zpd_hi must be > hyper.zpd_lo");
    if (!(eta_step > 0.0) || eta_step > 1.0) throw ConfigError("hyper.eta_step must be in (0,1]");
    if (tournament_size < 1) throw ConfigError("hyper.tournament_size must be >= 1");
    if (tau_align < -1.0 || tau_align > 1.0) throw ConfigError("hyper.tau_align must be in [-1,1]");
}

KnowledgeStructure clamp_knowledge(const KnowledgeStructure& k) {
    KnowledgeStructure out;
    out.mastery.reserve(k.mastery.size());
    for (double m : k.mastery) out.mastery.push_back(clamp01(m));
    return out;
}

double ability_from_knowledge(const KnowledgeStructure& k) {
    if (k.mastery.empty()) throw InvariantError("ability_from_knowledge: empty knowledge vector");
    double mean = std::accumulate(k.mastery.begin(), k.mastery.end(), 0.0) /
                  static_cast<double>(k.mastery.size());
    return -3.0 + 6.0 * mean;
}

} // namespace cogevo
