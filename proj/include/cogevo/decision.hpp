#pragma once

#include <array>
#include <optional>
#include <string>

#include "cogevo/types.hpp"

namespace cogevo {

// External behavior at one step. misconception_tag present iff incorrect.
struct Response {
    int chosen_option = 0;
    bool is_correct = false;
    std::optional<std::string> misconception_tag;
    std::string elaboration;
};

struct ConfidenceReport {
    double p_hat = 0.0;
    bool flagged_low_confidence = false;
    double delta_align = 0.0;
};

// p_hat = clamp01(icc(item, theta(k_next)) * (0.5 + 0.5*conf) + 0.25*(conf - 0.5)).
// IRT proxy for the self-predicted correctness probability.
double mastery_confidence(const KnowledgeStructure& k_next, const Item& item,
                          const CognitiveState& state);

// Correctness is Bernoulli(p_hat) from the seeded stream; the erring choice is
// the distractor tagged with the weakest item-relevant concept (deterministic).
Response decide(const KnowledgeStructure& k_next, const Item& item, double p_hat, uint64_t seed);

std::array<double, 3> behavior_embedding(const Response& r, double p_hat);
std::array<double, 3> state_embedding(const CognitiveState& c);

// delta_align = cosine of the two 3-vectors; 0 when either norm is 0.
ConfidenceReport alignment(const Response& r, double p_hat, const CognitiveState& c_next,
                           const HyperParams& hp);

} // namespace cogevo
