#include "cogevo/config.hpp"

#include <fstream>

namespace cogevo {

using nlohmann::json;

const char* to_string(Ablation a) {
    switch (a) {
        case Ablation::NoICAP: return "no-icap";
        case Ablation::NoMetaRet: return "no-meta-ret";
        case Ablation::NoEvoUpdate: return "no-evo-update";
    }
    return "";
}

Ablation ablation_from_string(const std::string& s) {
    if (s == "no-icap") return Ablation::NoICAP;
    if (s == "no-meta-ret") return Ablation::NoMetaRet;
    if (s == "no-evo-update") return Ablation::NoEvoUpdate;
    throw ConfigError("unknown ablation '" + s + "' (expected no-icap|no-meta-ret|no-evo-update)");
}

void SimulationConfig::validate() const {
    if (concept_dim < 1) throw ConfigError("concept_dim must be >= 1");
    if (n_students < 1) throw ConfigError("n_students must be >= 1");
    if (n_opportunities < 1) throw ConfigError("n_opportunities must be >= 1");
    if (item_bank_ref.empty()) throw ConfigError("item_bank is required");
    if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
    if (memory_capacity < 0) throw ConfigError("memory_capacity must be >= 0");
    if (!(init_mastery_lo >= 0.0 && init_mastery_hi <= 1.0 && init_mastery_lo <= init_mastery_hi))
        throw ConfigError("init_mastery bounds must satisfy 0 <= lo <= hi <= 1");
    if (generator_kind != "gaussian" && generator_kind != "remote")
        throw ConfigError("generator must be gaussian|remote");
    if (embedder_kind != "hashed" && embedder_kind != "remote")
        throw ConfigError("embedder must be hashed|remote");
    hyper.validate();
}

json SimulationConfig::resolved_json() const {
    json a = json::array();
    for (auto ab : ablation) a.push_back(to_string(ab));
    json h = {{"v", {hyper.v[0], hyper.v[1], hyper.v[2], hyper.v[3]}},
              {"alpha_sem", hyper.alpha_sem},
              {"beta_struct", hyper.beta_struct},
              {"tau_retrieval", hyper.tau_retrieval},
              {"delta_theta", hyper.delta_theta},
              {"k_struct", hyper.k_struct},
              {"lambda", hyper.lambda_pop},
              {"sigma_base", hyper.sigma_base},
              {"gamma", hyper.gamma},
              {"zpd_lo", hyper.zpd_lo},
              {"zpd_hi", hyper.zpd_hi},
              {"eta_step", hyper.eta_step},
              {"tournament_size", hyper.tournament_size},
              {"tau_align", hyper.tau_align},
              {"omega_conflict", hyper.omega_conflict},
              {"uncapped_step", hyper.uncapped_step}};
    return json{{"concept_dim", concept_dim},
                {"n_students", n_students},
                {"n_opportunities", n_opportunities},
                {"master_seed", master_seed},
                {"item_bank", item_bank_ref},
                {"truth", truth_ref},
                {"generator", generator_kind},
                {"generator_url", generator_url},
                {"embedder", embedder_kind},
                {"embedder_url", embedder_url},
                {"weights", weights_path},
                {"ablation", a},
                {"hyper", h},
                {"snapshot_every", snapshot_every},
                {"memory_capacity", memory_capacity},
                {"init_mastery_lo", init_mastery_lo},
                {"init_mastery_hi", init_mastery_hi}};
}

namespace {

// Strict unknown-key rejection with field paths, so a typo in a config file
// fails loudly instead of silently falling back to a default.
void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key))
            throw ConfigError("unknown config key \"" + prefix + key + "\"");
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, const T& def, const std::string& prefix) {
    if (!j.contains(key)) return def;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field \"" + prefix + key + "\" has the wrong type");
    }
}

} // namespace

SimulationConfig SimulationConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    check_keys(j,
               {"concept_dim", "n_students", "n_opportunities", "master_seed", "item_bank",
                "truth", "generator", "generator_url", "embedder", "embedder_url", "weights",
                "ablation", "hyper", "snapshot_every", "memory_capacity", "init_mastery_lo",
                "init_mastery_hi", "jobs"},
               "");

    SimulationConfig cfg;
    cfg.concept_dim = get_or(j, "concept_dim", cfg.concept_dim, "");
    cfg.n_students = get_or(j, "n_students", cfg.n_students, "");
    cfg.n_opportunities = get_or(j, "n_opportunities", cfg.n_opportunities, "");
    cfg.master_seed = get_or(j, "master_seed", cfg.master_seed, "");
    cfg.item_bank_ref = get_or(j, "item_bank", cfg.item_bank_ref, "");
    cfg.truth_ref = get_or(j, "truth", cfg.truth_ref, "");
    cfg.generator_kind = get_or(j, "generator", cfg.generator_kind, "");
    cfg.generator_url = get_or(j, "generator_url", cfg.generator_url, "");
    cfg.embedder_kind = get_or(j, "embedder", cfg.embedder_kind, "");
    cfg.embedder_url = get_or(j, "embedder_url", cfg.embedder_url, "");
    cfg.weights_path = get_or(j, "weights", cfg.weights_path, "");
    cfg.snapshot_every = get_or(j, "snapshot_every", cfg.snapshot_every, "");
    cfg.memory_capacity = get_or(j, "memory_capacity", cfg.memory_capacity, "");
    cfg.init_mastery_lo = get_or(j, "init_mastery_lo", cfg.init_mastery_lo, "");
    cfg.init_mastery_hi = get_or(j, "init_mastery_hi", cfg.init_mastery_hi, "");
    cfg.jobs = get_or(j, "jobs", cfg.jobs, "");

    if (j.contains("ablation")) {
        for (const auto& aj : j.at("ablation"))
            cfg.ablation.insert(ablation_from_string(aj.get<std::string>()));
    }

    if (j.contains("hyper")) {
        const json& h = j.at("hyper");
        check_keys(h,
                   {"v", "alpha_sem", "beta_struct", "tau_retrieval", "delta_theta", "k_struct",
                    "lambda", "sigma_base", "gamma", "zpd_lo", "zpd_hi", "eta_step",
                    "tournament_size", "tau_align", "omega_conflict", "uncapped_step"},
                   "hyper.");
        auto& hp = cfg.hyper;
        if (h.contains("v")) {
            auto v = h.at("v").get<std::vector<double>>();
            if (v.size() != 4) throw ConfigError("config field \"hyper.v\" must have 4 entries");
            for (size_t i = 0; i < 4; ++i) hp.v[i] = v[i];
        }
        hp.alpha_sem = get_or(h, "alpha_sem", hp.alpha_sem, "hyper.");
        hp.beta_struct = get_or(h, "beta_struct", hp.beta_struct, "hyper.");
        hp.tau_retrieval = get_or(h, "tau_retrieval", hp.tau_retrieval, "hyper.");
        hp.delta_theta = get_or(h, "delta_theta", hp.delta_theta, "hyper.");
        hp.k_struct = get_or(h, "k_struct", hp.k_struct, "hyper.");
        hp.lambda_pop = get_or(h, "lambda", hp.lambda_pop, "hyper.");
        hp.sigma_base = get_or(h, "sigma_base", hp.sigma_base, "hyper.");
        hp.gamma = get_or(h, "gamma", hp.gamma, "hyper.");
        hp.zpd_lo = get_or(h, "zpd_lo", hp.zpd_lo, "hyper.");
        hp.zpd_hi = get_or(h, "zpd_hi", hp.zpd_hi, "hyper.");
        hp.eta_step = get_or(h, "eta_step", hp.eta_step, "hyper.");
        hp.tournament_size = get_or(h, "tournament_size", hp.tournament_size, "hyper.");
        hp.tau_align = get_or(h, "tau_align", hp.tau_align, "hyper.");
        hp.omega_conflict = get_or(h, "omega_conflict", hp.omega_conflict, "hyper.");
        hp.uncapped_step = get_or(h, "uncapped_step", hp.uncapped_step, "hyper.");
    }

    cfg.validate();
    return cfg;
}

SimulationConfig SimulationConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return from_json(j);
}

} // namespace cogevo
