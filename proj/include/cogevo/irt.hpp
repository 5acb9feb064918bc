#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <variant>

#include "cogevo/decision.hpp"
#include "cogevo/embedder.hpp"
#include "cogevo/icap.hpp"
#include "cogevo/types.hpp"

namespace cogevo {

// Quadruple (input, response, cognitive state, ICAP level) plus a step index.
struct MemoryRecord {
    InteractionInput input;
    Response response;
    CognitiveState state;
    IcapDistribution level;
    int64_t timestamp = 0;
};

// Ordered bank owned by one student. capacity 0 = unbounded; oldest evicted first.
struct MemoryBank {
    std::deque<MemoryRecord> records;
    size_t capacity = 0;

    int64_t last_timestamp() const {
        return records.empty() ? -1 : records.back().timestamp;
    }
};

struct Assimilation {
    MemoryRecord best;
    double score = 0.0;
};

struct Conflict {
    CognitiveState new_state; // label Confused or Exploring
    double best_score = 0.0;  // 0 when the bank was empty
    // Set when a memory scored above tau but records a failure: the old
    // schema is retrievable yet demonstrably wrong, so the step accommodates
    // instead, and the remembered mistake stays available to the decision.
    std::optional<Response> recalled_failure;
    std::string recalled_reflection; // what the learner said back then
};

using RetrievalOutcome = std::variant<Assimilation, Conflict>;

// 2PL logistic: 1 / (1 + exp(-a * (theta - b))).
double icc(const Item& item, double theta);

// exp(-k * MAD) with MAD the mean absolute ICC gap over [theta-delta, theta+delta],
// composite Simpson with 64 subintervals. 1.0 exactly for identical curves.
double structural_similarity(const Item& i, const Item& j, double theta_t,
                             const HyperParams& hp);

// (1 + cos)/2 over embedded stems; 0.5 when either embedding is zero.
double semantic_similarity(const InteractionInput& q, const MemoryRecord& m,
                           const TextEmbedder& embedder);

double hybrid_score(const InteractionInput& q, const MemoryRecord& m, double theta_t,
                    const HyperParams& hp, const TextEmbedder& embedder);

// Linear scan; ties broken toward the most recent record. Assimilation iff the
// best score strictly exceeds tau_retrieval, otherwise a Conflict state whose
// label follows omega_L against the configured split point.
RetrievalOutcome retrieve(const MemoryBank& bank, const InteractionInput& q, double theta_t,
                          double omega_L, const HyperParams& hp, const TextEmbedder& embedder,
                          double emotion_reactivity = 1.0);

// Appends; rejects non-monotone timestamps; evicts oldest past capacity.
void store(MemoryBank& bank, MemoryRecord rec);

} // namespace cogevo
