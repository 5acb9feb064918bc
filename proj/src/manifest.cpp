#include "cogevo/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cogevo/errors.hpp"
#include "cogevo/rng.hpp"

namespace cogevo {

using nlohmann::json;

std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for hashing: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(buf.str())));
    return hex;
}

json RunManifest::to_json() const {
    json inputs;
    inputs["item_bank"] = {{"path", item_bank_path}, {"fnv1a64", item_bank_hash}};
    if (!truth_path.empty()) inputs["truth"] = {{"path", truth_path}, {"fnv1a64", truth_hash}};
    json outputs;
    if (!log_path.empty()) outputs["log"] = {{"path", log_path}, {"fnv1a64", log_hash}};
    return json{{"tool_version", kToolVersion},
                {"config", config},
                {"inputs", inputs},
                {"outputs", outputs}};
}

void RunManifest::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest to " + path);
    out << to_json().dump(2) << "\n";
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("manifest " + path + ": " + e.what());
    }
    RunManifest m;
    m.config = j.value("config", json::object());
    const auto& inputs = j.at("inputs");
    m.item_bank_path = inputs.at("item_bank").at("path").get<std::string>();
    m.item_bank_hash = inputs.at("item_bank").at("fnv1a64").get<std::string>();
    if (inputs.contains("truth")) {
        m.truth_path = inputs.at("truth").at("path").get<std::string>();
        m.truth_hash = inputs.at("truth").at("fnv1a64").get<std::string>();
    }
    if (j.contains("outputs") && j.at("outputs").contains("log")) {
        m.log_path = j.at("outputs").at("log").at("path").get<std::string>();
        m.log_hash = j.at("outputs").at("log").at("fnv1a64").get<std::string>();
    }
    return m;
}

void verify_manifest(const RunManifest& m) {
    auto check = [](const std::string& what, const std::string& path,
                    const std::string& expected) {
        if (path.empty()) return;
        std::string actual = file_fingerprint(path);
        if (actual != expected)
            throw DataError(what + " hash mismatch for " + path + ": manifest has " + expected +
                            ", file is " + actual);
    };
    check("item bank", m.item_bank_path, m.item_bank_hash);
    check("truth", m.truth_path, m.truth_hash);
    check("log", m.log_path, m.log_hash);
}

} // namespace cogevo
