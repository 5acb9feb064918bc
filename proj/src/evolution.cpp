#include "cogevo/evolution.hpp"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "cogevo/irt.hpp"
#include "cogevo/rng.hpp"

namespace cogevo {

const char* to_string(RationaleTag tag) {
    switch (tag) {
        case RationaleTag::FormulaDoubt: return "formula-doubt";
        case RationaleTag::NewTypeGuess: return "new-type-guess";
        case RationaleTag::SlipGuess: return "slip-guess";
        case RationaleTag::Random: return "random";
    }
    return "random";
}

RationaleTag rationale_from_string(const std::string& s) {
    if (s == "formula-doubt") return RationaleTag::FormulaDoubt;
    if (s == "new-type-guess") return RationaleTag::NewTypeGuess;
    if (s == "slip-guess") return RationaleTag::SlipGuess;
    return RationaleTag::Random;
}

std::vector<Hypothesis> GaussianHypothesisGenerator::generate(const KnowledgeStructure& k,
                                                              const InteractionInput& input,
                                                              double sigma, int lambda,
                                                              uint64_t seed) const {
    if (lambda < 1) throw InvariantError("lambda must be >= 1");
    if (!input.item) throw InvariantError("hypothesis generation needs an item");
    Rng rng(seed);
    std::vector<Hypothesis> out;
    out.reserve(static_cast<size_t>(lambda));
    for (int j = 0; j < lambda; ++j) {
        Hypothesis h;
        h.knowledge = k;
        for (const auto& [c, w] : input.item->concept_weights) {
            if (w <= 0.0) continue;
            h.knowledge.mastery[static_cast<size_t>(c)] += sigma * rng.normal();
        }
        h.knowledge = clamp_knowledge(h.knowledge);
        h.rationale_tag = static_cast<RationaleTag>(rng.below(4));
        h.origin_index = j;
        out.push_back(std::move(h));
    }
    return out;
}

RemoteHypothesisGenerator::RemoteHypothesisGenerator(std::string base_url) {
    std::string s = base_url;
    if (s.rfind("http://", 0) == 0) s = s.substr(7);
    auto colon = s.rfind(':');
    if (colon == std::string::npos)
        throw ConfigError("generator_url must be host:port, got '" + base_url + "'");
    host_ = s.substr(0, colon);
    port_ = std::stoi(s.substr(colon + 1));
}

std::vector<Hypothesis> RemoteHypothesisGenerator::generate(const KnowledgeStructure& k,
                                                            const InteractionInput& input,
                                                            double sigma, int lambda,
                                                            uint64_t /*seed*/) const {
    httplib::Client client(host_, port_);
    nlohmann::json req = {
        {"knowledge", k.mastery},
        {"item_stem", input.item ? input.item->stem_text : ""},
        {"sigma", sigma},
        {"lambda", lambda},
    };
    auto res = client.Post("/mutate", req.dump(), "application/json");
    if (!res || res->status != 200)
        throw DataError("remote hypothesis generator at " + host_ + ":" +
                        std::to_string(port_) + " failed");
    auto body = nlohmann::json::parse(res->body);
    const auto& hyps = body.at("hypotheses");
    if (static_cast<int>(hyps.size()) != lambda)
        throw DataError("remote generator returned " + std::to_string(hyps.size()) +
                        " hypotheses, expected " + std::to_string(lambda));
    std::vector<Hypothesis> out;
    out.reserve(hyps.size());
    int j = 0;
    for (const auto& hj : hyps) {
        Hypothesis h;
        h.knowledge.mastery = hj.at("knowledge").get<std::vector<double>>();
        if (h.knowledge.dim() != k.dim())
            throw DataError("remote hypothesis has wrong knowledge dimension");
        h.knowledge = clamp_knowledge(h.knowledge);
        h.rationale_tag = rationale_from_string(hj.value("tag", "random"));
        h.origin_index = j++;
        out.push_back(std::move(h));
    }
    return out;
}

std::unique_ptr<HypothesisGenerator> make_generator(const std::string& kind,
                                                    const std::string& url) {
    if (kind == "gaussian") return std::make_unique<GaussianHypothesisGenerator>();
    if (kind == "remote") {
        if (url.empty()) throw ConfigError("generator_url required for remote generator");
        return std::make_unique<RemoteHypothesisGenerator>(url);
    }
    throw ConfigError("unknown generator kind '" + kind + "' (expected gaussian|remote)");
}

std::vector<Hypothesis> generate_hypotheses(const KnowledgeStructure& k,
                                            const InteractionInput& input,
                                            const CognitiveState& state, const HyperParams& hp,
                                            uint64_t seed, const HypothesisGenerator& gen) {
    double sigma_eff = hp.sigma_base * (1.0 + state.arousal);
    return gen.generate(k, input, sigma_eff, hp.lambda_pop, seed);
}

double consistency(const Hypothesis& h, const InteractionInput& input) {
    if (!input.item) throw InvariantError("consistency needs an item");
    double y = input.observed_correct ? (*input.observed_correct ? 1.0 : 0.0) : 0.5;
    double p = icc(*input.item, ability_from_knowledge(h.knowledge));
    return 1.0 - std::abs(p - y);
}

double zpd_penalty(const Hypothesis& h, const KnowledgeStructure& k, const ZpdRegion& zpd) {
    if (h.knowledge.dim() != k.dim())
        throw InvariantError("zpd_penalty: dimension mismatch");
    double sq = 0.0;
    for (size_t i = 0; i < k.dim(); ++i) {
        double diff = h.knowledge.mastery[i] - k.mastery[i];
        sq += diff * diff;
    }
    double d = std::sqrt(sq) / std::sqrt(static_cast<double>(k.dim()));
    return std::max(0.0, d - zpd.r_hi) + std::max(0.0, zpd.r_lo - d);
}

double fitness(const Hypothesis& h, const InteractionInput& input, const KnowledgeStructure& k,
               const HyperParams& hp, const ZpdRegion& zpd) {
    return consistency(h, input) - hp.gamma * zpd_penalty(h, k, zpd);
}

const Hypothesis& select(const std::vector<Hypothesis>& pop, const std::vector<double>& fitnesses,
                         const HyperParams& hp, uint64_t seed) {
    if (pop.empty()) throw InvariantError("select: empty population");
    if (pop.size() != fitnesses.size())
        throw InvariantError("select: population/fitness size mismatch");

    auto better = [&](size_t a, size_t b) {
        if (fitnesses[a] != fitnesses[b]) return fitnesses[a] > fitnesses[b];
        return pop[a].origin_index < pop[b].origin_index;
    };

    size_t best;
    if (static_cast<size_t>(hp.tournament_size) >= pop.size()) {
        best = 0;
        for (size_t i = 1; i < pop.size(); ++i)
            if (better(i, best)) best = i;
    } else {
        Rng rng(seed);
        best = rng.below(pop.size());
        for (int round = 1; round < hp.tournament_size; ++round) {
            size_t cand = rng.below(pop.size());
            if (better(cand, best)) best = cand;
        }
    }
    return pop[best];
}

KnowledgeStructure evolve(const KnowledgeStructure& k, const Hypothesis& winner, double omega_L,
                          const HyperParams& hp) {
    if (winner.knowledge.dim() != k.dim())
        throw InvariantError("evolve: dimension mismatch");
    double s = hp.eta_step * omega_L;
    if (!hp.uncapped_step) s = std::min(1.0, s);
    KnowledgeStructure next;
    next.mastery.reserve(k.dim());
    // (1-s)*K + s*h is algebraically the same interpolation but exact at the
    // endpoints: a saturated step lands on the winner bit-for-bit.
    for (size_t i = 0; i < k.dim(); ++i) {
        next.mastery.push_back((1.0 - s) * k.mastery[i] + s * winner.knowledge.mastery[i]);
    }
    return clamp_knowledge(next);
}

} // namespace cogevo
