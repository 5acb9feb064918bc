#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cogevo/types.hpp"

namespace cogevo {

enum class RationaleTag { FormulaDoubt, NewTypeGuess, SlipGuess, Random };

const char* to_string(RationaleTag tag);
RationaleTag rationale_from_string(const std::string& s);

// One offspring knowledge state; origin_index orders the population for
// deterministic tie-breaking.
struct Hypothesis {
    KnowledgeStructure knowledge;
    RationaleTag rationale_tag = RationaleTag::Random;
    int origin_index = 0;
};

// Euclidean band around K_t; distances are dim-normalized (divided by sqrt(d)).
struct ZpdRegion {
    double r_lo = 0.02;
    double r_hi = 0.5;
};

class HypothesisGenerator {
public:
    virtual ~HypothesisGenerator() = default;
    // Must return exactly lambda hypotheses, deterministically per seed.
    virtual std::vector<Hypothesis> generate(const KnowledgeStructure& k,
                                             const InteractionInput& input,
                                             double sigma, int lambda,
                                             uint64_t seed) const = 0;
};

// Default operator: Gaussian perturbations masked to the item's nonzero
// concept weights; off-concept components stay exactly at K_t.
class GaussianHypothesisGenerator : public HypothesisGenerator {
public:
    std::vector<Hypothesis> generate(const KnowledgeStructure& k, const InteractionInput& input,
                                     double sigma, int lambda, uint64_t seed) const override;
};

// HTTP adapter: POST {"knowledge": [...], "item_stem": ..., "sigma": ..., "lambda": n}
// -> {"hypotheses": [{"knowledge": [...], "tag": ...}]} at <base_url>/mutate.
// Excluded from acceptance runs.
class RemoteHypothesisGenerator : public HypothesisGenerator {
public:
    explicit RemoteHypothesisGenerator(std::string base_url);
    std::vector<Hypothesis> generate(const KnowledgeStructure& k, const InteractionInput& input,
                                     double sigma, int lambda, uint64_t seed) const override;

private:
    std::string host_;
    int port_;
};

std::unique_ptr<HypothesisGenerator> make_generator(const std::string& kind,
                                                    const std::string& url);

// sigma_eff = sigma_base * (1 + arousal); emotion widens the search.
std::vector<Hypothesis> generate_hypotheses(const KnowledgeStructure& k,
                                            const InteractionInput& input,
                                            const CognitiveState& state, const HyperParams& hp,
                                            uint64_t seed,
                                            const HypothesisGenerator& gen);

// 1 - |icc(item, theta(h)) - y|; y is the observed outcome, 0.5 when absent.
double consistency(const Hypothesis& h, const InteractionInput& input);

// Hinge outside [r_lo, r_hi]: penalizes both leaps and stagnation.
double zpd_penalty(const Hypothesis& h, const KnowledgeStructure& k, const ZpdRegion& zpd);

double fitness(const Hypothesis& h, const InteractionInput& input, const KnowledgeStructure& k,
               const HyperParams& hp, const ZpdRegion& zpd);

// Tournament selection; degenerates to a full argmax scan when
// tournament_size >= population size. Fitness ties go to the lowest origin_index.
const Hypothesis& select(const std::vector<Hypothesis>& pop, const std::vector<double>& fitnesses,
                         const HyperParams& hp, uint64_t seed);

// K_{t+1} = clamp(K_t + s * (h* - K_t)), s = min(1, eta * omega_L)
// (or raw eta * omega_L when uncapped_step is set).
KnowledgeStructure evolve(const KnowledgeStructure& k, const Hypothesis& winner, double omega_L,
                          const HyperParams& hp);

} // namespace cogevo
