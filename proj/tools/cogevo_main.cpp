#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cogevo/config.hpp"
#include "cogevo/datagen.hpp"
#include "cogevo/evaluation.hpp"
#include "cogevo/harness.hpp"
#include "cogevo/manifest.hpp"
#include "cogevo/metrics.hpp"

namespace fs = std::filesystem;
using namespace cogevo;

namespace {

struct GenDataArgs {
    int items = 1600;
    int students = 100;
    int opportunities = 100;
    int concept_dim = 16;
    uint64_t seed = 1;
    std::string out = ".";
};

int cmd_gen_data(const GenDataArgs& args) {
    fs::create_directories(args.out);
    auto bank = gen_item_bank(args.items, args.concept_dim, args.seed);
    std::string bank_path = (fs::path(args.out) / "item_bank.json").string();
    bank.save(bank_path);

    CohortSpec spec;
    spec.n_students = args.students;
    spec.n_opportunities = args.opportunities;
    auto truth = gen_ground_truth(spec, bank, args.seed);
    truth.item_bank_ref = bank_path;
    std::string truth_path = (fs::path(args.out) / "truth.jsonl").string();
    write_dataset(truth_path, truth);

    std::printf("wrote %s (%d items) and %s (%zu records)\n", bank_path.c_str(), args.items,
                truth_path.c_str(), truth.records.size());
    return 0;
}

struct SimulateArgs {
    std::string config_path;
    std::string out = ".";
    std::vector<std::string> ablate;
    int jobs = -1;
    int64_t seed = -1;
};

int cmd_simulate(const SimulateArgs& args) {
    std::string config_path = args.config_path;
    if (config_path.empty()) {
        const char* env = std::getenv("COGEVO_CONFIG");
        if (env) config_path = env;
    }
    if (config_path.empty())
        throw ConfigError("no config given (pass --config or set COGEVO_CONFIG)");

    auto cfg = SimulationConfig::from_file(config_path);
    for (const auto& a : args.ablate) cfg.ablation.insert(ablation_from_string(a));
    if (args.jobs >= 0) cfg.jobs = args.jobs;
    if (args.seed >= 0) cfg.master_seed = static_cast<uint64_t>(args.seed);
    cfg.validate();

    fs::create_directories(args.out);
    auto bank = ItemBank::load(cfg.item_bank_ref);
    if (bank.concept_dim != cfg.concept_dim)
        throw ConfigError("config concept_dim (" + std::to_string(cfg.concept_dim) +
                          ") does not match the item bank (" +
                          std::to_string(bank.concept_dim) + ")");

    RunManifest manifest;
    manifest.config = cfg.resolved_json();
    manifest.item_bank_path = cfg.item_bank_ref;
    manifest.item_bank_hash = file_fingerprint(cfg.item_bank_ref);

    std::vector<std::pair<std::string, std::vector<ReplayStep>>> work;
    Dataset truth;
    if (!cfg.truth_ref.empty()) {
        truth = ingest_log(cfg.truth_ref, /*strict=*/true);
        manifest.truth_path = cfg.truth_ref;
        manifest.truth_hash = file_fingerprint(cfg.truth_ref);
        work = build_replay(truth, bank, cfg);
    } else {
        work = build_generative(bank, cfg);
    }

    std::string manifest_path = (fs::path(args.out) / "manifest.json").string();
    manifest.save(manifest_path); // provenance on disk before the run starts

    RunContext ctx;
    ctx.cfg = &cfg;
    ctx.bank = &bank;
    auto embedder = make_embedder(cfg.embedder_kind, cfg.embedder_url);
    ctx.embedder = embedder.get();
    auto generator = make_generator(cfg.generator_kind, cfg.generator_url);
    ctx.generator = generator.get();
    ctx.weights = cfg.weights_path.empty() ? PerceptronWeights::defaults()
                                           : PerceptronWeights::from_json_file(cfg.weights_path);

    auto result = run_cohort(ctx, work);

    std::string log_path = (fs::path(args.out) / "log.jsonl").string();
    write_log(log_path, cfg, result);
    manifest.log_path = log_path;
    manifest.log_hash = file_fingerprint(log_path);
    manifest.save(manifest_path);

    size_t n_steps = 0;
    for (const auto& s : result.students) n_steps += s.steps.size();
    std::printf("simulated %zu students, %zu steps -> %s\n", result.students.size(), n_steps,
                log_path.c_str());
    return 0;
}

struct EvaluateArgs {
    std::string log_path;
    std::string truth_path;
    std::string bank_path;
    std::string out = ".";
    int bin_width = 5;
    bool svg = false;
};

int cmd_evaluate(const EvaluateArgs& args) {
    // Accept either a run log or a raw dataset as the "log" side.
    std::ifstream probe(args.log_path);
    if (!probe) throw DataError("cannot open log: " + args.log_path);
    std::string first_line;
    std::getline(probe, first_line);
    probe.close();
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(first_line);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(args.log_path + " line 1: " + e.what());
    }
    std::string kind = header.value("kind", std::string());

    std::string bank_path = args.bank_path;
    if (bank_path.empty() && kind == "cogevo-run-log")
        bank_path = header.at("config").value("item_bank", std::string());

    auto truth = ingest_log(args.truth_path, /*strict=*/true);
    if (bank_path.empty()) bank_path = truth.item_bank_ref;
    if (bank_path.empty())
        throw ConfigError("no item bank: pass --bank or use inputs that reference one");
    auto bank = ItemBank::load(bank_path);

    EvaluationResult result;
    if (kind == "cogevo-run-log") {
        // Verify provenance when the run left a manifest next to the log.
        auto manifest_path = fs::path(args.log_path).parent_path() / "manifest.json";
        if (fs::exists(manifest_path)) verify_manifest(RunManifest::load(manifest_path.string()));
        auto log = read_log(args.log_path);
        result = evaluate_run(log.steps, truth, bank, args.bin_width);
    } else if (kind == "cogevo-dataset") {
        auto self = ingest_log(args.log_path, /*strict=*/true);
        result = evaluate_dataset_as_log(self, bank, args.bin_width);
    } else {
        throw DataError(args.log_path + ": unrecognized file kind '" + kind + "'");
    }

    fs::create_directories(args.out);
    std::string report_json = (fs::path(args.out) / "report.json").string();
    {
        std::ofstream out(report_json);
        if (!out) throw DataError("cannot write " + report_json);
        out << result.report.to_json().dump(2) << "\n";
    }
    std::string report_csv = (fs::path(args.out) / "report.csv").string();
    {
        std::ofstream out(report_csv);
        if (!out) throw DataError("cannot write " + report_csv);
        out << result.report.csv_header() << "\n" << result.report.csv_row() << "\n";
    }
    write_curve_csv((fs::path(args.out) / "curve.csv").string(), result.curve);
    if (args.svg) write_curve_svg((fs::path(args.out) / "curve.svg").string(), result.curve);

    std::printf("%s\n", result.report.to_json().dump(2).c_str());
    return 0;
}

struct FitCurveArgs {
    std::string series_path;
};

int cmd_fit_curve(const FitCurveArgs& args) {
    std::ifstream in(args.series_path);
    if (!in) throw DataError("cannot open series: " + args.series_path);
    std::vector<std::pair<double, double>> series;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
        try {
            series.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception&) {
            if (line_no == 1) continue; // header row
            throw DataError(args.series_path + " line " + std::to_string(line_no) +
                            ": expected \"n,rate\"");
        }
    }
    if (series.size() < 4)
        throw DataError("power-law fit needs at least 4 points, got " +
                        std::to_string(series.size()));

    auto fit = fit_power_law(series);
    std::printf("A=%.4f alpha=%.4f eps=%.4f fit_r2=%.6f\n", fit.params.a_pl,
                fit.params.alpha_pl, fit.params.eps_pl, fit.fit_r2);
    if (fit.degenerate) std::printf("warning: flat series, fit is degenerate\n");
    if (fit.non_decaying) std::printf("warning: series is non-decaying\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cogevo: a deterministic simulator of evolving student agents"};
    app.require_subcommand(1);

    GenDataArgs gen;
    auto* sc_gen = app.add_subcommand("gen-data", "generate an item bank and a ground-truth cohort");
    sc_gen->add_option("--items", gen.items, "number of items")->check(CLI::PositiveNumber);
    sc_gen->add_option("--students", gen.students, "number of students")->check(CLI::PositiveNumber);
    sc_gen->add_option("--opportunities", gen.opportunities, "opportunities per student")
        ->check(CLI::PositiveNumber);
    sc_gen->add_option("--concept-dim", gen.concept_dim, "concept space dimension")
        ->check(CLI::PositiveNumber);
    sc_gen->add_option("--seed", gen.seed, "master seed");
    sc_gen->add_option("--out", gen.out, "output directory");

    SimulateArgs sim;
    auto* sc_sim = app.add_subcommand("simulate", "run a cohort simulation");
    sc_sim->add_option("--config", sim.config_path, "config JSON (or COGEVO_CONFIG)");
    sc_sim->add_option("--out", sim.out, "output directory");
    sc_sim->add_option("--ablate", sim.ablate, "no-icap|no-meta-ret|no-evo-update (repeatable)");
    sc_sim->add_option("--jobs", sim.jobs, "worker threads (0 = hardware)");
    sc_sim->add_option("--seed", sim.seed, "override config master_seed");

    EvaluateArgs ev;
    auto* sc_ev = app.add_subcommand("evaluate", "score a run log against ground truth");
    sc_ev->add_option("--log", ev.log_path, "run log (or a dataset, for self-evaluation)")
        ->required();
    sc_ev->add_option("--truth", ev.truth_path, "ground-truth dataset JSONL")->required();
    sc_ev->add_option("--bank", ev.bank_path, "item bank JSON (default: from the log header)");
    sc_ev->add_option("--out", ev.out, "output directory");
    sc_ev->add_option("--bin-width", ev.bin_width, "learning-curve bin width")
        ->check(CLI::PositiveNumber);
    sc_ev->add_flag("--svg", ev.svg, "also emit a curve SVG");

    FitCurveArgs fc;
    auto* sc_fc = app.add_subcommand("fit-curve", "fit E(n) = A*n^-alpha + eps to a CSV series");
    sc_fc->add_option("--series", fc.series_path, "CSV with n,rate rows")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1; // usage errors -> 1, --help -> 0
    }

    try {
        if (sc_gen->parsed()) return cmd_gen_data(gen);
        if (sc_sim->parsed()) return cmd_simulate(sim);
        if (sc_ev->parsed()) return cmd_evaluate(ev);
        if (sc_fc->parsed()) return cmd_fit_curve(fc);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 0;
}
