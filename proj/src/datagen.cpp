#include "cogevo/datagen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "cogevo/icap.hpp"
#include "cogevo/rng.hpp"

namespace cogevo {

using nlohmann::json;

double PowerLawParams::error_rate(double n) const {
    return clamp01(a_pl * std::pow(n, -alpha_pl) + eps_pl);
}

void PowerLawParams::validate() const {
    if (a_pl < 0.0 || a_pl > 1.0) throw DataError("power law: A must be in [0,1]");
    if (!(alpha_pl > 0.0)) throw DataError("power law: alpha must be > 0");
    if (eps_pl < 0.0) throw DataError("power law: eps must be >= 0");
    if (a_pl + eps_pl > 1.0 + 1e-9) throw DataError("power law: A + eps must be <= 1");
}

void ItemBank::build_index() const {
    if (!index_.empty() || items.empty()) return;
    for (size_t i = 0; i < items.size(); ++i) index_[items[i].id] = i;
}

bool ItemBank::has(const std::string& id) const {
    build_index();
    return index_.count(id) > 0;
}

const Item& ItemBank::by_id(const std::string& id) const {
    build_index();
    auto it = index_.find(id);
    if (it == index_.end()) throw DataError("unknown item id '" + id + "'");
    return items[it->second];
}

std::vector<const Item*> ItemBank::knowledge_point_pool(int kp) const {
    std::vector<const Item*> pool;
    for (const auto& item : items)
        if (item.top_concept() == kp) pool.push_back(&item);
    return pool;
}

void ItemBank::validate() const {
    if (concept_dim < 1) throw DataError("item bank: concept_dim must be >= 1");
    if (items.empty()) throw DataError("item bank: no items");
    for (const auto& item : items) item.validate(concept_dim);
}

namespace {

const char* kTopics[32] = {
    "fractions",   "decimals",   "ratios",      "integers",   "exponents",  "radicals",
    "polynomials", "equations",  "inequalities", "functions",  "graphs",     "angles",
    "triangles",   "circles",    "areas",       "volumes",    "percentages", "proportions",
    "sequences",   "probability", "statistics",  "vectors",    "slopes",     "logarithms",
    "intercepts",  "factoring",  "congruence",  "symmetry",   "perimeter",  "rounding",
    "estimation",  "primes"};

const char* kTagVariants[3] = {"sign-error", "formula-misapplication", "partial-grasp"};

// Stem vocabulary. Items share their knowledge-point topic token but draw
// verb/noun fillers per item, so only same-topic stems embed close and exact
// repeats embed identically.
const char* kVerbs[16] = {"simplify", "reduce",  "expand",   "balance", "compare", "combine",
                          "estimate", "resolve", "evaluate", "rewrite", "derive",  "check",
                          "factor",   "isolate", "transform", "verify"};
const char* kNouns[16] = {"expression", "quantity", "term",     "statement", "model",
                          "identity",   "relation", "equation", "pattern",   "quotient",
                          "product",    "sum",      "figure",   "table",     "diagram",
                          "rule"};

json item_to_json(const Item& item) {
    json opts = json::array();
    for (const auto& o : item.options) {
        json oj;
        oj["text"] = o.text;
        oj["misconception"] = o.misconception_tag ? json(*o.misconception_tag) : json(nullptr);
        oj["concept"] = o.concept_index ? json(*o.concept_index) : json(nullptr);
        opts.push_back(oj);
    }
    json weights = json::array();
    for (const auto& [c, w] : item.concept_weights) weights.push_back({{"concept", c}, {"weight", w}});
    return json{{"id", item.id},
                {"stem", item.stem_text},
                {"options", opts},
                {"correct", item.correct_option},
                {"a", item.irt_a},
                {"b", item.irt_b},
                {"weights", weights}};
}

Item item_from_json(const json& j) {
    Item item;
    item.id = j.at("id").get<std::string>();
    item.stem_text = j.at("stem").get<std::string>();
    item.correct_option = j.at("correct").get<int>();
    item.irt_a = j.at("a").get<double>();
    item.irt_b = j.at("b").get<double>();
    for (const auto& oj : j.at("options")) {
        Option o;
        o.text = oj.at("text").get<std::string>();
        if (!oj.at("misconception").is_null())
            o.misconception_tag = oj.at("misconception").get<std::string>();
        if (!oj.at("concept").is_null()) o.concept_index = oj.at("concept").get<int>();
        item.options.push_back(std::move(o));
    }
    for (const auto& wj : j.at("weights"))
        item.concept_weights.emplace_back(wj.at("concept").get<int>(), wj.at("weight").get<double>());
    return item;
}

} // namespace

std::string concept_topic(int concept_index) {
    if (concept_index >= 0 && concept_index < 32) return kTopics[concept_index];
    return "topic" + std::to_string(concept_index);
}

void ItemBank::save(const std::string& path) const {
    json j;
    j["schema"] = 1;
    j["kind"] = "cogevo-item-bank";
    j["concept_dim"] = concept_dim;
    json arr = json::array();
    for (const auto& item : items) arr.push_back(item_to_json(item));
    j["items"] = arr;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write item bank to " + path);
    out << j.dump(2) << "\n";
}

ItemBank ItemBank::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open item bank: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("item bank " + path + ": " + e.what());
    }
    if (j.value("schema", 0) != 1) throw DataError("item bank " + path + ": unknown schema version");
    ItemBank bank;
    bank.concept_dim = j.at("concept_dim").get<int>();
    for (const auto& ij : j.at("items")) bank.items.push_back(item_from_json(ij));
    bank.validate();
    return bank;
}

ItemBank gen_item_bank(int n_items, int concept_dim, uint64_t seed) {
    if (n_items < 1) throw DataError("gen_item_bank: n_items must be >= 1");
    if (concept_dim < 1) throw DataError("gen_item_bank: concept_dim must be >= 1");
    Rng rng(splitmix64(seed ^ 0xBA2Cull));
    ItemBank bank;
    bank.concept_dim = concept_dim;

    for (int idx = 0; idx < n_items; ++idx) {
        Item item;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "i%04d", idx);
        item.id = buf;
        item.irt_a = rng.uniform(0.8, 2.0);
        item.irt_b = rng.normal_trunc(0.0, 1.0, -3.0, 3.0);

        int primary = idx % concept_dim;
        std::vector<int> concepts{primary};
        while (static_cast<int>(concepts.size()) < std::min(5, concept_dim)) {
            int c = static_cast<int>(rng.below(static_cast<uint64_t>(concept_dim)));
            if (std::find(concepts.begin(), concepts.end(), c) == concepts.end())
                concepts.push_back(c);
        }
        static const double weight_by_rank[5] = {0.35, 0.25, 0.16, 0.14, 0.10};
        if (concepts.size() == 5) {
            for (size_t r = 0; r < 5; ++r)
                item.concept_weights.emplace_back(concepts[r], weight_by_rank[r]);
        } else {
            // tiny concept spaces: spread evenly with the primary on top
            double rest = 0.5 / static_cast<double>(std::max<size_t>(1, concepts.size() - 1));
            item.concept_weights.emplace_back(concepts[0],
                                              concepts.size() == 1 ? 1.0 : 0.5);
            for (size_t r = 1; r < concepts.size(); ++r)
                item.concept_weights.emplace_back(concepts[r], rest);
        }

        // Doubled topic token marks the knowledge point; the rest is
        // item-specific so distinct stems stay semantically apart.
        std::string stem = item.id + " " + concept_topic(primary) + " " +
                           kVerbs[rng.below(16)] + " " + kNouns[rng.below(16)] + " " +
                           concept_topic(primary);
        for (size_t r = 1; r < concepts.size(); ++r) stem += " " + concept_topic(concepts[r]);
        item.stem_text = stem;

        item.correct_option = static_cast<int>(rng.below(4));
        size_t concept_rank = 0;
        for (int opt = 0; opt < 4; ++opt) {
            Option o;
            if (opt == item.correct_option) {
                o.text = "the " + concept_topic(primary) + " result";
            } else {
                int c = concepts[concept_rank % concepts.size()];
                const char* variant = kTagVariants[concept_rank % 3];
                o.concept_index = c;
                o.misconception_tag = concept_topic(c) + "-" + variant;
                o.text = "result assuming a " + *o.misconception_tag;
                ++concept_rank;
            }
            item.options.push_back(std::move(o));
        }
        bank.items.push_back(std::move(item));
    }
    bank.validate();
    return bank;
}

namespace {

// Mean engagement depth of a profile on the P<A<C<I scale, in [0,1].
double engagement_depth(const std::array<double, 4>& profile) {
    return profile[1] / 3.0 + 2.0 * profile[2] / 3.0 + profile[3];
}

std::array<double, 4> dirichlet4(Rng& rng, double conc) {
    std::array<double, 4> g{};
    double sum = 0.0;
    for (auto& x : g) {
        x = rng.gamma(conc);
        sum += x;
    }
    for (auto& x : g) x /= sum;
    return g;
}

// Reflections name what went wrong: the misconception topic on errors, the
// knowledge point on successes. Passive steps leave no trace.
std::string make_reflection(Rng& rng, int level, int kp, const Item& item,
                            const std::optional<std::string>& misconception) {
    static const char* fillers[] = {"i",     "worked", "through", "the",   "steps",
                                    "and",   "checked", "each",    "part",  "again",
                                    "before", "settling", "on",     "an",    "answer"};
    int len;
    switch (level) {
        case 0: return "";
        case 1: len = 4; break;
        case 2: len = 10; break;
        default: len = 15; break;
    }
    std::string text;
    if (misconception) {
        std::string topic = misconception->substr(0, misconception->find('-'));
        text = "i think i mixed up the " + topic + " rule";
    } else {
        text = "the " + concept_topic(kp) + " approach worked";
    }
    for (int i = 0; i < len; ++i) text += std::string(" ") + fillers[rng.below(15)];
    if (level >= 2 && !item.concept_weights.empty())
        text += " relating it to " + concept_topic(item.concept_weights.back().first);
    return text;
}

} // namespace

Dataset gen_ground_truth(const CohortSpec& spec, const ItemBank& bank, uint64_t seed) {
    if (spec.n_students < 1 || spec.n_opportunities < 1)
        throw DataError("cohort spec: counts must be >= 1");
    bank.validate();

    // Step-level engagement shifts on the error rate: deeper engagement,
    // fewer slips. Mean-zero over levels, scaled by E(n)(1-E(n)) below so the
    // pooled rate stays exactly on the generating law.
    const double level_error_shift[4] = {0.5, 0.2, -0.2, -0.5};
    const int64_t level_latency_ms[4] = {800, 1500, 3000, 4500};

    Dataset ds;
    ds.concept_dim = bank.concept_dim;

    for (int s = 0; s < spec.n_students; ++s) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "s%04d", s);
        std::string student_id = buf;
        Rng rng(derive_seed(seed, student_id, 0xDA7Aull));

        int kp = s % bank.concept_dim;
        auto pool = bank.knowledge_point_pool(kp);
        if (pool.empty()) throw DataError("item bank has no items for knowledge point " +
                                          std::to_string(kp));

        auto profile = dirichlet4(rng, 0.8);
        double depth = engagement_depth(profile);

        PowerLawParams pl;
        pl.a_pl = rng.uniform(spec.a_lo, spec.a_hi);
        pl.alpha_pl = spec.alpha_lo + spec.alpha_span * depth;
        pl.eps_pl = rng.uniform(spec.eps_lo, spec.eps_hi);
        pl.validate();

        std::vector<double> strength(static_cast<size_t>(bank.concept_dim));
        for (auto& x : strength) x = rng.uniform01();

        // Misconceptions persist: re-meeting an item the student got wrong
        // tends to reproduce the same mistake rather than a fresh draw.
        std::map<std::string, std::pair<int, std::optional<std::string>>> past_errors;

        for (int n = 1; n <= spec.n_opportunities; ++n) {
            const Item& item = *pool[rng.below(pool.size())];

            // Sample the step's engagement level from the student profile.
            double u = rng.uniform01(), acc = 0.0;
            int level = 3;
            for (int l = 0; l < 4; ++l) {
                acc += profile[static_cast<size_t>(l)];
                if (u < acc) { level = l; break; }
            }

            // Errors concentrate on items that hit the student's weak concepts
            // and on shallow-engagement steps. Both shifts are mean-zero and
            // damped by E(1-E), so they never clip and never bias the curve.
            double weak_load = 0.0;
            for (const auto& [c, w] : item.concept_weights)
                weak_load += w * (1.0 - strength[static_cast<size_t>(c)]);
            double e_n = pl.error_rate(n);
            double damp = e_n * (1.0 - e_n);
            double p_err = clamp01(
                e_n + (spec.concept_coupling * (weak_load - 0.5) + 0.8 * level_error_shift[level]) * damp);
            bool error = rng.bernoulli(p_err);

            DatasetRecord rec;
            rec.student = student_id;
            rec.t = n - 1;
            rec.item = item.id;
            rec.icap = icap_letter(level);
            rec.latency_ms = static_cast<int64_t>(
                std::llround(static_cast<double>(level_latency_ms[level]) *
                             std::exp(0.25 * rng.normal())));

            auto prior = past_errors.find(item.id);
            if (prior != past_errors.end() && rng.bernoulli(spec.error_persistence)) {
                // stale schema: the old mistake comes back verbatim, once
                rec.correct = false;
                rec.chosen = prior->second.first;
                rec.misconception = prior->second.second;
                past_errors.erase(prior);
            } else if (!error) {
                rec.correct = true;
                rec.chosen = item.correct_option;
                past_errors.erase(item.id);
            } else {
                rec.correct = false;
                // A student's mistake on an item is stable: reuse the previous
                // tag when there is one, otherwise blame the weakest concept.
                int pick = -1;
                if (prior != past_errors.end() && rng.bernoulli(0.9)) {
                    pick = prior->second.first;
                } else {
                    int weakest_opt = -1;
                    double lowest = 2.0;
                    std::vector<int> distractors;
                    for (size_t oi = 0; oi < item.options.size(); ++oi) {
                        if (static_cast<int>(oi) == item.correct_option) continue;
                        distractors.push_back(static_cast<int>(oi));
                        const auto& opt = item.options[oi];
                        if (opt.concept_index) {
                            double st = strength[static_cast<size_t>(*opt.concept_index)];
                            if (st < lowest) {
                                lowest = st;
                                weakest_opt = static_cast<int>(oi);
                            }
                        }
                    }
                    if (weakest_opt >= 0 && rng.bernoulli(spec.tag_fidelity)) {
                        pick = weakest_opt;
                    } else {
                        pick = distractors[rng.below(distractors.size())];
                    }
                }
                rec.chosen = pick;
                rec.misconception = item.options[static_cast<size_t>(pick)].misconception_tag;
                past_errors[item.id] = {pick, rec.misconception};
            }
            rec.reflection =
                make_reflection(rng, level, kp, item,
                                rec.correct ? std::nullopt : rec.misconception);
            ds.records.push_back(std::move(rec));
        }
    }
    return ds;
}

namespace {

json record_to_json(const DatasetRecord& r) {
    return json{{"student", r.student},
                {"t", r.t},
                {"item", r.item},
                {"chosen", r.chosen},
                {"correct", r.correct},
                {"misconception", r.misconception ? json(*r.misconception) : json(nullptr)},
                {"icap", r.icap},
                {"reflection", r.reflection},
                {"latency_ms", r.latency_ms}};
}

} // namespace

void write_dataset(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write dataset to " + path);
    json header = {{"schema", 1},
                   {"kind", "cogevo-dataset"},
                   {"concept_dim", ds.concept_dim},
                   {"item_bank", ds.item_bank_ref}};
    out << header.dump() << "\n";
    for (const auto& r : ds.records) out << record_to_json(r).dump() << "\n";
}

Dataset ingest_log(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": missing schema header line");
    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(path + " line 1: header is not valid JSON: " + e.what());
    }
    if (!header.contains("schema")) throw DataError(path + " line 1: header lacks \"schema\"");
    if (header["schema"].get<int>() != 1)
        throw DataError(path + ": unknown schema version " + header["schema"].dump());

    Dataset ds;
    ds.concept_dim = header.value("concept_dim", 0);
    ds.item_bank_ref = header.value("item_bank", std::string());

    static const char* required[] = {"student", "t",    "item",       "chosen",    "correct",
                                     "misconception", "icap", "reflection", "latency_ms"};
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fail = [&](const std::string& why) {
            std::string msg = path + " line " + std::to_string(line_no) + ": " + why;
            if (strict) throw DataError(msg);
            ds.warnings.push_back(msg);
        };
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            fail("not valid JSON");
            continue;
        }
        bool ok = true;
        for (const char* field : required) {
            if (!j.contains(field)) {
                fail(std::string("missing required field \"") + field + "\"");
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        try {
            DatasetRecord r;
            r.student = j["student"].get<std::string>();
            r.t = j["t"].get<int64_t>();
            r.item = j["item"].get<std::string>();
            r.chosen = j["chosen"].get<int>();
            r.correct = j["correct"].get<bool>();
            if (!j["misconception"].is_null())
                r.misconception = j["misconception"].get<std::string>();
            r.icap = j["icap"].get<std::string>();
            icap_level_from_letter(r.icap); // validates
            r.reflection = j["reflection"].get<std::string>();
            r.latency_ms = j["latency_ms"].get<int64_t>();
            ds.records.push_back(std::move(r));
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }
    return ds;
}

std::vector<GroundTruthTrajectory> to_trajectories(const Dataset& ds, const ItemBank& bank) {
    std::map<std::string, GroundTruthTrajectory> by_student;
    for (const auto& r : ds.records) {
        auto& traj = by_student[r.student];
        traj.student_id = r.student;
        int kp = bank.by_id(r.item).top_concept();
        auto& series = traj.by_knowledge_point[kp];
        TrajectoryStep step;
        step.opportunity = static_cast<int>(series.size()) + 1;
        step.error = !r.correct;
        step.misconception = r.misconception;
        step.icap = r.icap;
        step.reflection = r.reflection;
        series.push_back(std::move(step));
    }
    std::vector<GroundTruthTrajectory> out;
    out.reserve(by_student.size());
    for (auto& [id, traj] : by_student) out.push_back(std::move(traj));
    return out;
}

} // namespace cogevo
