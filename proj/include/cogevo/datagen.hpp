#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cogevo/types.hpp"

namespace cogevo {

// E(n) = A * n^{-alpha} + eps, the error-rate law the cohorts follow.
struct PowerLawParams {
    double a_pl = 0.8;     // initial error rate, in (0,1]
    double alpha_pl = 0.5; // decay exponent, > 0
    double eps_pl = 0.05;  // asymptote, >= 0; a_pl + eps_pl <= 1

    double error_rate(double n) const;
    void validate() const;
};

struct ItemBank {
    int concept_dim = 0;
    std::vector<Item> items;

    const Item& by_id(const std::string& id) const;
    bool has(const std::string& id) const;
    // Items whose top concept is kp.
    std::vector<const Item*> knowledge_point_pool(int kp) const;
    void validate() const;

    void save(const std::string& path) const;
    static ItemBank load(const std::string& path);

private:
    mutable std::map<std::string, size_t> index_;
    void build_index() const;
};

// Human-readable token for a concept index; shared by stems and tags.
std::string concept_topic(int concept_index);

ItemBank gen_item_bank(int n_items, int concept_dim, uint64_t seed);

// One line of the dataset JSONL (schema fields exactly as serialized).
struct DatasetRecord {
    std::string student;
    int64_t t = 0;
    std::string item;
    int chosen = 0;
    bool correct = false;
    std::optional<std::string> misconception;
    std::string icap; // "P" | "A" | "C" | "I"
    std::string reflection;
    int64_t latency_ms = 0;
};

struct Dataset {
    int concept_dim = 0;
    std::string item_bank_ref;
    std::vector<DatasetRecord> records;
    std::vector<std::string> warnings; // populated by lenient ingestion
};

struct CohortSpec {
    int n_students = 100;
    int n_opportunities = 100;
    // Per-student power-law parameters: A ~ U[a_lo, a_hi], eps ~ U[eps_lo, eps_hi],
    // alpha = alpha_lo + alpha_span * engagement_depth.
    double a_lo = 0.75, a_hi = 0.9;
    double alpha_lo = 0.35, alpha_span = 0.3;
    double eps_lo = 0.02, eps_hi = 0.06;
    // Strength of the weak-concept shift on per-item error rates.
    double concept_coupling = 1.5;
    // Probability that an error carries the weakest-concept tag.
    double tag_fidelity = 0.9;
    // Probability that re-meeting a previously-failed item reproduces the
    // old mistake verbatim instead of a fresh outcome draw.
    double error_persistence = 0.35;
};

// Synthetic cohort: each student drills one knowledge point; errors follow the
// student's power law, modulated by per-concept strengths and step engagement.
Dataset gen_ground_truth(const CohortSpec& spec, const ItemBank& bank, uint64_t seed);

void write_dataset(const std::string& path, const Dataset& ds);

// Parses a dataset JSONL. strict: malformed lines abort with their line number;
// lenient: they are skipped and reported in Dataset::warnings.
Dataset ingest_log(const std::string& path, bool strict = true);

// Groups records into per-student, per-knowledge-point opportunity series.
struct TrajectoryStep {
    int opportunity = 0; // 1-based within (student, knowledge point)
    bool error = false;
    std::optional<std::string> misconception;
    std::string icap;
    std::string reflection;
};

struct GroundTruthTrajectory {
    std::string student_id;
    std::map<int, std::vector<TrajectoryStep>> by_knowledge_point;
};

std::vector<GroundTruthTrajectory> to_trajectories(const Dataset& ds, const ItemBank& bank);

} // namespace cogevo
