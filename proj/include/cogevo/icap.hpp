#pragma once

#include <array>
#include <string>
#include <vector>

#include "cogevo/types.hpp"

namespace cogevo {

// Feature layout: 4 interaction-kind one-hot, 1 log latency,
// 2 reflection stats (log length, type-token ratio), 32 hashed bag-of-words.
inline constexpr size_t kFeatureDim = 39;
inline constexpr size_t kLatencyIdx = 4;
inline constexpr size_t kReflLenIdx = 5;
inline constexpr size_t kReflTtrIdx = 6;
inline constexpr size_t kBowOffset = 7;
inline constexpr size_t kBowDim = 32;

struct FeatureVector {
    std::array<double, kFeatureDim> values{};
};

enum IcapLevel { Passive = 0, Active = 1, Constructive = 2, Interactive = 3 };

const char* icap_letter(int level); // "P" "A" "C" "I"
int icap_level_from_letter(const std::string& s);

struct IcapDistribution {
    std::array<double, 4> probs{0.25, 0.25, 0.25, 0.25};
};

struct PerceptronWeights {
    std::vector<std::array<double, kFeatureDim>> w; // 4 rows
    std::array<double, 4> b{};

    static PerceptronWeights defaults();
    static PerceptronWeights from_json_file(const std::string& path);
};

// Lowercase whitespace tokenization shared by the feature encoder and the
// hashed-bag embedder.
std::vector<std::string> tokenize(const std::string& text);

FeatureVector encode_features(const InteractionInput& input);

IcapDistribution icap_distribution(const FeatureVector& f, const PerceptronWeights& weights);

double softplus(double x);

// omega_L = softplus(sum_i v_i * y_i); the step-size driver of the update loop.
double evolution_rate(const IcapDistribution& y, const double v[4]);

} // namespace cogevo
