#pragma once

#include <cstdint>
#include <set>
#include <string>

#include <json.hpp>

#include "cogevo/types.hpp"

namespace cogevo {

enum class Ablation { NoICAP, NoMetaRet, NoEvoUpdate };

const char* to_string(Ablation a);
Ablation ablation_from_string(const std::string& s);

// Full run description. Everything that affects simulation output is in here;
// `jobs` is the one execution-only field and is excluded from log headers.
struct SimulationConfig {
    int concept_dim = 16;
    int n_students = 100;
    int n_opportunities = 100;
    uint64_t master_seed = 1;
    std::string item_bank_ref;
    std::string truth_ref;     // empty: generative mode (no observed outcomes)
    std::string generator_kind = "gaussian";
    std::string generator_url;
    std::string embedder_kind = "hashed";
    std::string embedder_url;
    std::string weights_path;  // empty: built-in default perceptron weights
    std::set<Ablation> ablation;
    HyperParams hyper;
    int snapshot_every = 1;    // knowledge snapshot cadence; 0 = never
    int memory_capacity = 0;   // 0 = unbounded
    double init_mastery_lo = 0.45;
    double init_mastery_hi = 0.65;
    int jobs = 0;              // 0 = hardware concurrency

    bool ablated(Ablation a) const { return ablation.count(a) > 0; }
    void validate() const;

    // Resolved config as JSON (defaults filled in); execution-only fields
    // stripped so reruns with different --jobs stay byte-identical.
    nlohmann::json resolved_json() const;

    static SimulationConfig from_json(const nlohmann::json& j);
    static SimulationConfig from_file(const std::string& path);
};

} // namespace cogevo
