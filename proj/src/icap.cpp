#include "cogevo/icap.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "cogevo/rng.hpp"

namespace cogevo {

const char* icap_letter(int level) {
    static const char* letters[4] = {"P", "A", "C", "I"};
    if (level < 0 || level > 3) throw InvariantError("icap level out of range");
    return letters[level];
}

int icap_level_from_letter(const std::string& s) {
    if (s == "P") return Passive;
    if (s == "A") return Active;
    if (s == "C") return Constructive;
    if (s == "I") return Interactive;
    throw DataError("unknown ICAP label '" + s + "'");
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

FeatureVector encode_features(const InteractionInput& input) {
    FeatureVector f;
    f.values[static_cast<size_t>(input.interaction_kind)] = 1.0;
    f.values[kLatencyIdx] = std::log1p(static_cast<double>(input.latency_ms) / 1000.0);

    auto tokens = tokenize(input.reflection_text);
    if (!tokens.empty()) {
        f.values[kReflLenIdx] = std::log1p(static_cast<double>(tokens.size()));
        std::set<std::string> distinct(tokens.begin(), tokens.end());
        f.values[kReflTtrIdx] =
            static_cast<double>(distinct.size()) / static_cast<double>(tokens.size());

        for (const auto& tok : tokens) {
            f.values[kBowOffset + fnv1a64(tok) % kBowDim] += 1.0;
        }
        double norm = 0.0;
        for (size_t i = kBowOffset; i < kFeatureDim; ++i) norm += f.values[i] * f.values[i];
        norm = std::sqrt(norm);
        for (size_t i = kBowOffset; i < kFeatureDim; ++i) f.values[i] /= norm;
    }
    return f;
}

PerceptronWeights PerceptronWeights::defaults() {
    PerceptronWeights pw;
    pw.w.assign(4, std::array<double, kFeatureDim>{});
    // Interaction kind drives the level; reflection length nudges the deep ones.
    pw.w[Passive][static_cast<size_t>(InteractionKind::Reading)] = 3.0;
    pw.w[Active][static_cast<size_t>(InteractionKind::Questioning)] = 3.0;
    pw.w[Constructive][static_cast<size_t>(InteractionKind::SelfExplanation)] = 3.0;
    pw.w[Interactive][static_cast<size_t>(InteractionKind::Answering)] = 3.0;
    pw.w[Constructive][kReflLenIdx] = 1.0;
    pw.w[Interactive][kReflLenIdx] = 1.0;
    return pw;
}

PerceptronWeights PerceptronWeights::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open weights file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("weights file " + path + ": " + e.what());
    }
    PerceptronWeights pw;
    pw.w.assign(4, std::array<double, kFeatureDim>{});
    const auto& wj = j.at("w");
    if (wj.size() != 4) throw ConfigError("weights: \"w\" must have 4 rows");
    for (size_t r = 0; r < 4; ++r) {
        if (wj[r].size() != kFeatureDim)
            throw ConfigError("weights: row " + std::to_string(r) + " must have " +
                              std::to_string(kFeatureDim) + " entries");
        for (size_t c = 0; c < kFeatureDim; ++c) pw.w[r][c] = wj[r][c].get<double>();
    }
    const auto& bj = j.at("b");
    if (bj.size() != 4) throw ConfigError("weights: \"b\" must have 4 entries");
    for (size_t r = 0; r < 4; ++r) pw.b[r] = bj[r].get<double>();
    for (const auto& row : pw.w)
        for (double x : row)
            if (!std::isfinite(x)) throw ConfigError("weights: non-finite entry in \"w\"");
    for (double x : pw.b)
        if (!std::isfinite(x)) throw ConfigError("weights: non-finite entry in \"b\"");
    return pw;
}

IcapDistribution icap_distribution(const FeatureVector& f, const PerceptronWeights& weights) {
    if (weights.w.size() != 4) throw InvariantError("perceptron weights must have 4 rows");
    std::array<double, 4> logits{};
    for (size_t r = 0; r < 4; ++r) {
        double z = weights.b[r];
        for (size_t c = 0; c < kFeatureDim; ++c) z += weights.w[r][c] * f.values[c];
        logits[r] = z;
    }
    double max_logit = std::max(std::max(logits[0], logits[1]), std::max(logits[2], logits[3]));
    IcapDistribution out;
    double sum = 0.0;
    for (size_t r = 0; r < 4; ++r) {
        out.probs[r] = std::exp(logits[r] - max_logit);
        sum += out.probs[r];
    }
    for (size_t r = 0; r < 4; ++r) out.probs[r] /= sum;
    return out;
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double evolution_rate(const IcapDistribution& y, const double v[4]) {
    double z = 0.0;
    for (size_t i = 0; i < 4; ++i) z += v[i] * y.probs[i];
    return softplus(z);
}

} // namespace cogevo
