#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cogevo/errors.hpp"

namespace cogevo {

// Static learner profile. baseline_ability lives on the IRT ability scale.
struct Persona {
    std::string id;
    double baseline_ability = 0.0;   // in [-3, 3]
    double emotion_reactivity = 1.0; // >= 0, scales arousal responses
    std::map<std::string, std::string> static_traits;
};

// Per-concept mastery vector in [0,1]^d. The evolving long-term schema.
struct KnowledgeStructure {
    std::vector<double> mastery;

    size_t dim() const { return mastery.size(); }
};

enum class CognitiveLabel { Stable, Exploring, Confused, Flow, Frustrated };

const char* to_string(CognitiveLabel label);
CognitiveLabel label_from_string(const std::string& s);

// Transient state: confidence and arousal both in [0,1].
struct CognitiveState {
    CognitiveLabel label = CognitiveLabel::Stable;
    double confidence = 0.5;
    double arousal = 0.0;
};

struct Option {
    std::string text;
    std::optional<std::string> misconception_tag; // absent for the correct option
    std::optional<int> concept_index;                   // concept behind the misconception
};

enum class InteractionKind { Reading, Questioning, SelfExplanation, Answering };

const char* to_string(InteractionKind kind);

// A question with 2PL parameters and sparse concept weights summing to 1.
struct Item {
    std::string id;
    std::string stem_text;
    std::vector<Option> options;
    int correct_option = 0;
    double irt_a = 1.0; // discrimination, > 0
    double irt_b = 0.0; // difficulty
    std::vector<std::pair<int, double>> concept_weights;

    // Highest-weight concept; defines the knowledge point the item drills.
    int top_concept() const;
    void validate(int concept_dim) const;
};

struct InteractionInput {
    const Item* item = nullptr;
    InteractionKind interaction_kind = InteractionKind::Reading;
    int64_t latency_ms = 0;
    std::string reflection_text;
    std::optional<bool> observed_correct; // present only when replaying logged data
};

// All tunable constants of the update loop. Defaults are the reference
// configuration; everything is overridable from the config file.
struct HyperParams {
    double v[4] = {0.5, 1.0, 1.5, 2.0}; // ICAP gain coefficients (P, A, C, I)
    double alpha_sem = 0.5;             // semantic weight in the hybrid score
    double beta_struct = 0.5;           // structural weight; alpha + beta = 1
    double tau_retrieval = 0.75;        // assimilation threshold
    double delta_theta = 1.0;           // half-width of the ICC comparison window
    double k_struct = 3.0;              // decay rate in exp(-k * MAD)
    int lambda_pop = 8;                 // offspring per conflict
    double sigma_base = 0.15;           // base mutation intensity
    double gamma = 1.0;                 // ZPD penalty weight
    double zpd_lo = 0.02;               // dim-normalized radii around K_t
    double zpd_hi = 0.5;
    double eta_step = 0.5;              // step-size normalizer, in (0,1]
    int tournament_size = 3;
    double tau_align = 0.5;             // low-confidence flag threshold
    double omega_conflict = 1.3132616875182228; // softplus(1): Confused/Exploring split
    bool uncapped_step = false;         // drop the min(1, .) cap on the step size

    void validate() const;
};

struct AgentState {
    Persona persona;
    CognitiveState cognitive;
    KnowledgeStructure knowledge;
    double theta = 0.0; // cached ability_from_knowledge(knowledge)
};

inline double clamp01(double x) {
    return std::min(1.0, std::max(0.0, x));
}

KnowledgeStructure clamp_knowledge(const KnowledgeStructure& k);

// theta = -3 + 6 * mean(mastery); couples ability to the knowledge vector
// so "near the current ability" is well-defined without a second estimator.
double ability_from_knowledge(const KnowledgeStructure& k);

} // namespace cogevo
