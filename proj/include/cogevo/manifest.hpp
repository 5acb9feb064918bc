#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace cogevo {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a over the file bytes, as a fixed-width hex string.
std::string file_fingerprint(const std::string& path);

// Provenance for one simulate run: resolved config, input hashes, outputs.
// Written before the simulation starts; outputs recorded afterwards.
struct RunManifest {
    nlohmann::json config;
    std::string item_bank_path, item_bank_hash;
    std::string truth_path, truth_hash; // empty in generative mode
    std::string log_path, log_hash;     // filled in after the run

    nlohmann::json to_json() const;
    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

// Re-hashes the files a manifest names and throws DataError on any mismatch.
void verify_manifest(const RunManifest& m);

} // namespace cogevo
