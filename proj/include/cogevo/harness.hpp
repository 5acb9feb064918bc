#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogevo/config.hpp"
#include "cogevo/datagen.hpp"
#include "cogevo/decision.hpp"
#include "cogevo/embedder.hpp"
#include "cogevo/evolution.hpp"
#include "cogevo/icap.hpp"
#include "cogevo/irt.hpp"

namespace cogevo {

// One logged loop iteration.
struct InteractionStep {
    std::string student;
    int64_t t = 0;
    std::string item_id;
    IcapDistribution icap;
    double omega = 0.0;
    bool assimilated = false;
    double retrieval_score = 0.0;
    CognitiveLabel post_label = CognitiveLabel::Stable;
    std::optional<int> winner_origin;
    double p_hat = 0.0;
    Response response;
    double delta_align = 0.0;
    bool flagged = false;
    std::optional<std::vector<double>> knowledge; // snapshot, per cadence
};

struct StudentLog {
    std::string id;
    std::vector<InteractionStep> steps;
};

struct CohortResult {
    std::vector<StudentLog> students; // sorted by id
};

// Per-step replay payload; observed is the logged outcome (absent in
// generative mode).
struct ReplayStep {
    const Item* item = nullptr;
    InteractionKind kind = InteractionKind::Reading;
    int64_t latency_ms = 0;
    std::string reflection;
    std::optional<bool> observed;
};

InteractionKind kind_for_icap(int level);

// Shared immutable context for all students of one run.
struct RunContext {
    const SimulationConfig* cfg = nullptr;
    const ItemBank* bank = nullptr;
    const TextEmbedder* embedder = nullptr;
    const HypothesisGenerator* generator = nullptr;
    PerceptronWeights weights;
};

// The full perception -> retrieval -> evolution -> decision loop.
InteractionStep step(AgentState& agent, MemoryBank& bank, const InteractionInput& input,
                     const RunContext& ctx, uint64_t step_seed);

std::vector<InteractionStep> run_student(const RunContext& ctx, const std::string& student_id,
                                         const std::vector<ReplayStep>& sequence);

// Replay sequences grouped per student id, in dataset order.
std::vector<std::pair<std::string, std::vector<ReplayStep>>> build_replay(
    const Dataset& truth, const ItemBank& bank, const SimulationConfig& cfg);

// Generative schedule: seeded item draws, no observed outcomes.
std::vector<std::pair<std::string, std::vector<ReplayStep>>> build_generative(
    const ItemBank& bank, const SimulationConfig& cfg);

// Runs every student (in parallel when cfg.jobs != 1) and merges the logs
// keyed by student id, so scheduling never changes the result.
CohortResult run_cohort(const RunContext& ctx,
                        const std::vector<std::pair<std::string, std::vector<ReplayStep>>>& work);

nlohmann::json step_to_json(const InteractionStep& s);
InteractionStep step_from_json(const nlohmann::json& j);

void write_log(const std::string& path, const SimulationConfig& cfg, const CohortResult& result);

struct RunLog {
    nlohmann::json header;
    std::vector<InteractionStep> steps;
};

RunLog read_log(const std::string& path);

} // namespace cogevo
