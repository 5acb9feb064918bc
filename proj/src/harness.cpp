#include "cogevo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include "cogevo/rng.hpp"

namespace cogevo {

using nlohmann::json;

InteractionKind kind_for_icap(int level) {
    switch (level) {
        case Passive: return InteractionKind::Reading;
        case Active: return InteractionKind::Questioning;
        case Constructive: return InteractionKind::SelfExplanation;
        default: return InteractionKind::Answering;
    }
}

namespace {

constexpr uint64_t kInitStream = 0x696E6974ull;    // initial knowledge
constexpr uint64_t kHypoStream = 0x6879706Full;    // hypothesis generation
constexpr uint64_t kSelectStream = 0x73656C65ull;  // tournament sampling
constexpr uint64_t kDecideStream = 0x64656369ull;  // response draw

AgentState make_initial_agent(const RunContext& ctx, const std::string& student_id) {
    const auto& cfg = *ctx.cfg;
    Rng rng(derive_seed(cfg.master_seed, student_id, kInitStream));
    AgentState agent;
    agent.persona.id = student_id;
    agent.persona.baseline_ability = rng.uniform(-1.0, 1.0);
    agent.persona.emotion_reactivity = 1.0;
    agent.cognitive = {CognitiveLabel::Exploring, 0.5, 0.5};
    agent.knowledge.mastery.resize(static_cast<size_t>(cfg.concept_dim));
    // Persona ability shifts the starting mastery band slightly.
    double shift = agent.persona.baseline_ability * 0.02;
    for (auto& m : agent.knowledge.mastery)
        m = clamp01(rng.uniform(cfg.init_mastery_lo, cfg.init_mastery_hi) + shift);
    agent.theta = ability_from_knowledge(agent.knowledge);
    return agent;
}

} // namespace

InteractionStep step(AgentState& agent, MemoryBank& bank, const InteractionInput& input,
                     const RunContext& ctx, uint64_t step_seed) {
    const auto& cfg = *ctx.cfg;
    const auto& hp = cfg.hyper;
    if (!input.item) throw InvariantError("step: input has no item");

    InteractionStep log;
    log.student = agent.persona.id;
    log.item_id = input.item->id;

    // Perception.
    if (cfg.ablated(Ablation::NoICAP)) {
        log.icap = IcapDistribution{}; // uniform
        log.omega = softplus(1.0);
    } else {
        log.icap = icap_distribution(encode_features(input), ctx.weights);
        log.omega = evolution_rate(log.icap, hp.v);
    }

    // Retrieval, or a forced conflict under no-meta-ret.
    RetrievalOutcome outcome;
    if (cfg.ablated(Ablation::NoMetaRet)) {
        Conflict c;
        c.best_score = 0.0;
        c.new_state.label = log.omega >= hp.omega_conflict ? CognitiveLabel::Confused
                                                           : CognitiveLabel::Exploring;
        c.new_state.confidence = 0.0;
        c.new_state.arousal =
            std::min(1.0, agent.persona.emotion_reactivity * log.omega / 2.0);
        outcome = c;
    } else {
        outcome = retrieve(bank, input, agent.theta, log.omega, hp, *ctx.embedder,
                           agent.persona.emotion_reactivity);
    }

    // Update.
    KnowledgeStructure k_next;
    CognitiveState c_next;
    if (const auto* assim = std::get_if<Assimilation>(&outcome)) {
        log.assimilated = true;
        log.retrieval_score = assim->score;
        k_next = agent.knowledge; // old schema explains the input; K unchanged
        c_next.label = CognitiveLabel::Stable;
        c_next.confidence = assim->score;
        c_next.arousal = agent.cognitive.arousal * 0.5;
    } else {
        const auto& conflict = std::get<Conflict>(outcome);
        log.assimilated = false;
        log.retrieval_score = conflict.best_score;
        if (cfg.ablated(Ablation::NoEvoUpdate)) {
            k_next = agent.knowledge;
            c_next = conflict.new_state;
        } else {
            auto pop = generate_hypotheses(agent.knowledge, input, conflict.new_state, hp,
                                           splitmix64(step_seed ^ kHypoStream), *ctx.generator);
            ZpdRegion zpd{hp.zpd_lo, hp.zpd_hi};
            std::vector<double> fits;
            fits.reserve(pop.size());
            for (const auto& h : pop) fits.push_back(fitness(h, input, agent.knowledge, hp, zpd));
            const Hypothesis& winner =
                select(pop, fits, hp, splitmix64(step_seed ^ kSelectStream));
            log.winner_origin = winner.origin_index;
            k_next = evolve(agent.knowledge, winner, log.omega, hp);

            double wc = consistency(winner, input);
            c_next.label = wc > 0.8 ? CognitiveLabel::Flow : CognitiveLabel::Exploring;
            c_next.confidence = wc;
            c_next.arousal = conflict.new_state.arousal * 0.5;
        }
    }
    log.post_label = c_next.label;

    // Decision and verification.
    log.p_hat = mastery_confidence(k_next, *input.item, c_next);
    log.response = decide(k_next, *input.item, log.p_hat, splitmix64(step_seed ^ kDecideStream));
    if (!log.response.is_correct) {
        // A retrievable memory of failing a similar problem reproduces the
        // remembered mistake. The learner's own reflection names the flawed
        // topic when it exists; the remembered choice is the fallback.
        const auto* conflict = std::get_if<Conflict>(&outcome);
        if (conflict && conflict->recalled_failure) {
            int pick = -1;
            auto reflection_tokens = tokenize(conflict->recalled_reflection);
            for (size_t oi = 0; oi < input.item->options.size() && pick < 0; ++oi) {
                const auto& opt = input.item->options[oi];
                if (!opt.misconception_tag) continue;
                std::string topic =
                    opt.misconception_tag->substr(0, opt.misconception_tag->find('-'));
                for (const auto& tok : reflection_tokens) {
                    if (tok == topic) {
                        pick = static_cast<int>(oi);
                        break;
                    }
                }
            }
            if (pick < 0 && conflict->recalled_failure->misconception_tag) {
                const auto& tag = *conflict->recalled_failure->misconception_tag;
                for (size_t oi = 0; oi < input.item->options.size(); ++oi) {
                    const auto& opt = input.item->options[oi];
                    if (opt.misconception_tag && *opt.misconception_tag == tag) {
                        pick = static_cast<int>(oi);
                        break;
                    }
                }
            }
            if (pick >= 0) {
                log.response.chosen_option = pick;
                log.response.misconception_tag =
                    input.item->options[static_cast<size_t>(pick)].misconception_tag;
            }
        }
    }
    auto report = alignment(log.response, log.p_hat, c_next, hp);
    log.delta_align = report.delta_align;
    log.flagged = report.flagged_low_confidence;

    MemoryRecord rec;
    rec.input = input;
    rec.response = log.response;
    rec.state = c_next;
    rec.level = log.icap;
    rec.timestamp = bank.last_timestamp() + 1;
    store(bank, std::move(rec));

    agent.cognitive = c_next;
    agent.knowledge = std::move(k_next);
    agent.theta = ability_from_knowledge(agent.knowledge);

    if (cfg.snapshot_every > 0) log.knowledge = agent.knowledge.mastery;
    return log;
}

std::vector<InteractionStep> run_student(const RunContext& ctx, const std::string& student_id,
                                         const std::vector<ReplayStep>& sequence) {
    if (sequence.empty()) throw DataError("student " + student_id + ": empty item sequence");
    const auto& cfg = *ctx.cfg;

    AgentState agent = make_initial_agent(ctx, student_id);
    MemoryBank bank;
    bank.capacity = static_cast<size_t>(cfg.memory_capacity);

    std::vector<InteractionStep> steps;
    steps.reserve(sequence.size());
    for (size_t t = 0; t < sequence.size(); ++t) {
        const auto& rs = sequence[t];
        InteractionInput input;
        input.item = rs.item;
        input.interaction_kind = rs.kind;
        input.latency_ms = rs.latency_ms;
        input.reflection_text = rs.reflection;
        input.observed_correct = rs.observed;

        auto log = step(agent, bank, input, ctx, derive_seed(cfg.master_seed, student_id, t));
        log.t = static_cast<int64_t>(t);
        if (cfg.snapshot_every > 1 && (t % static_cast<size_t>(cfg.snapshot_every)) != 0)
            log.knowledge.reset();
        steps.push_back(std::move(log));
    }
    return steps;
}

std::vector<std::pair<std::string, std::vector<ReplayStep>>> build_replay(
    const Dataset& truth, const ItemBank& bank, const SimulationConfig& cfg) {
    std::map<std::string, std::vector<ReplayStep>> by_student;
    for (const auto& rec : truth.records) {
        if (!bank.has(rec.item))
            throw DataError("truth references item '" + rec.item + "' missing from the bank");
        ReplayStep rs;
        rs.item = &bank.by_id(rec.item);
        rs.kind = kind_for_icap(icap_level_from_letter(rec.icap));
        rs.latency_ms = rec.latency_ms;
        rs.reflection = rec.reflection;
        rs.observed = rec.correct;
        by_student[rec.student].push_back(std::move(rs));
    }

    std::vector<std::pair<std::string, std::vector<ReplayStep>>> work;
    for (auto& [id, seq] : by_student) {
        if (static_cast<int>(work.size()) >= cfg.n_students) break;
        if (static_cast<int>(seq.size()) > cfg.n_opportunities)
            seq.resize(static_cast<size_t>(cfg.n_opportunities));
        work.emplace_back(id, std::move(seq));
    }
    if (work.empty()) throw DataError("truth dataset contains no students");
    return work;
}

std::vector<std::pair<std::string, std::vector<ReplayStep>>> build_generative(
    const ItemBank& bank, const SimulationConfig& cfg) {
    std::vector<std::pair<std::string, std::vector<ReplayStep>>> work;
    for (int s = 0; s < cfg.n_students; ++s) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "s%04d", s);
        std::string id = buf;
        Rng rng(derive_seed(cfg.master_seed, id, 0x67656Eull));
        int kp = s % bank.concept_dim;
        auto pool = bank.knowledge_point_pool(kp);
        if (pool.empty()) throw DataError("no items for knowledge point " + std::to_string(kp));
        std::vector<ReplayStep> seq;
        seq.reserve(static_cast<size_t>(cfg.n_opportunities));
        for (int t = 0; t < cfg.n_opportunities; ++t) {
            ReplayStep rs;
            rs.item = pool[rng.below(pool.size())];
            int level = static_cast<int>(rng.below(4));
            rs.kind = kind_for_icap(level);
            rs.latency_ms = 500 + static_cast<int64_t>(rng.below(4000));
            seq.push_back(std::move(rs));
        }
        work.emplace_back(id, std::move(seq));
    }
    return work;
}

CohortResult run_cohort(
    const RunContext& ctx,
    const std::vector<std::pair<std::string, std::vector<ReplayStep>>>& work) {
    int jobs = ctx.cfg->jobs;
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    jobs = std::min<int>(jobs, static_cast<int>(work.size()));

    std::vector<StudentLog> logs(work.size());
    std::exception_ptr first_error;
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= work.size() || failed.load()) return;
            try {
                logs[i].id = work[i].first;
                logs[i].steps = run_student(ctx, work[i].first, work[i].second);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(jobs));
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);

    CohortResult result;
    result.students = std::move(logs);
    std::sort(result.students.begin(), result.students.end(),
              [](const StudentLog& a, const StudentLog& b) { return a.id < b.id; });
    return result;
}

json step_to_json(const InteractionStep& s) {
    json retrieval = {{"kind", s.assimilated ? "assimilation" : "conflict"},
                      {"score", s.retrieval_score}};
    json j = {{"student", s.student},
              {"t", s.t},
              {"item", s.item_id},
              {"icap", {s.icap.probs[0], s.icap.probs[1], s.icap.probs[2], s.icap.probs[3]}},
              {"omega", s.omega},
              {"retrieval", retrieval},
              {"state", to_string(s.post_label)},
              {"winner_origin", s.winner_origin ? json(*s.winner_origin) : json(nullptr)},
              {"p_hat", s.p_hat},
              {"chosen", s.response.chosen_option},
              {"correct", s.response.is_correct},
              {"misconception", s.response.misconception_tag
                                    ? json(*s.response.misconception_tag)
                                    : json(nullptr)},
              {"delta_align", s.delta_align},
              {"flagged", s.flagged},
              {"knowledge", s.knowledge ? json(*s.knowledge) : json(nullptr)}};
    return j;
}

InteractionStep step_from_json(const json& j) {
    InteractionStep s;
    s.student = j.at("student").get<std::string>();
    s.t = j.at("t").get<int64_t>();
    s.item_id = j.at("item").get<std::string>();
    auto icap = j.at("icap").get<std::vector<double>>();
    if (icap.size() != 4) throw DataError("log step: icap must have 4 entries");
    for (size_t i = 0; i < 4; ++i) s.icap.probs[i] = icap[i];
    s.omega = j.at("omega").get<double>();
    s.assimilated = j.at("retrieval").at("kind").get<std::string>() == "assimilation";
    s.retrieval_score = j.at("retrieval").at("score").get<double>();
    s.post_label = label_from_string(j.at("state").get<std::string>());
    if (!j.at("winner_origin").is_null()) s.winner_origin = j.at("winner_origin").get<int>();
    s.p_hat = j.at("p_hat").get<double>();
    s.response.chosen_option = j.at("chosen").get<int>();
    s.response.is_correct = j.at("correct").get<bool>();
    if (!j.at("misconception").is_null())
        s.response.misconception_tag = j.at("misconception").get<std::string>();
    s.delta_align = j.at("delta_align").get<double>();
    s.flagged = j.at("flagged").get<bool>();
    if (!j.at("knowledge").is_null()) s.knowledge = j.at("knowledge").get<std::vector<double>>();
    return s;
}

void write_log(const std::string& path, const SimulationConfig& cfg, const CohortResult& result) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write log to " + path);
    json header = {{"schema", 1}, {"kind", "cogevo-run-log"}, {"config", cfg.resolved_json()}};
    out << header.dump() << "\n";
    for (const auto& student : result.students)
        for (const auto& s : student.steps) out << step_to_json(s).dump() << "\n";
}

RunLog read_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open log: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": missing header line");
    RunLog log;
    try {
        log.header = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(path + " line 1: " + e.what());
    }
    if (log.header.value("kind", std::string()) != "cogevo-run-log")
        throw DataError(path + ": not a run log (kind mismatch)");
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            log.steps.push_back(step_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw DataError(path + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return log;
}

} // namespace cogevo
