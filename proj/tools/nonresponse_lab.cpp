// nonresponse-lab: simulate black-box proficiency studies under configurable
// missingness, estimate error rates with exact intervals, audit nonresponse,
// and test examiner characteristics for association with nonresponse.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "nrlab/nrlab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nrlab;

namespace {

// Whole-file atomic write: temp file in the target directory, then rename.
void write_file_atomic(const fs::path& path, const std::string& body) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << body;
    }
    fs::rename(tmp, path);
}

std::string rate_cell(const RateEstimate& r, double RateEstimate::*field) {
    return r.defined ? format_full(r.*field) : std::string();
}

std::string rate_csv_row(const std::string& name, const RateEstimate& r) {
    std::ostringstream row;
    row << name << ',' << r.numerator << ',' << r.denominator << ','
        << rate_cell(r, &RateEstimate::point) << ',' << rate_cell(r, &RateEstimate::ci_low)
        << ',' << rate_cell(r, &RateEstimate::ci_high) << '\n';
    return row.str();
}

json rate_json(const RateEstimate& r) {
    json j;
    j["numerator"] = r.numerator;
    j["denominator"] = r.denominator;
    j["level"] = r.level;
    if (r.defined) {
        j["point"] = r.point;
        j["ci_low"] = r.ci_low;
        j["ci_high"] = r.ci_high;
        j["percent"] = format_percent1(r.point);
    } else {
        j["undefined"] = true;
    }
    return j;
}

json manifest_json(const RunManifest& m) {
    return json{{"command", m.command},
                {"config_digest", m.config_digest},
                {"base_seed", m.base_seed},
                {"tool_version", m.tool_version},
                {"started_at", m.started_at},
                {"finished_at", m.finished_at}};
}

struct ExperimentConfig {
    PopulationSpec spec;
    MissingnessConfig mechanism;
    std::uint64_t seed = 0;
    std::string resolved;  // canonical dump for the manifest digest
};

ExperimentConfig parse_experiment_config(const std::string& path,
                                         std::optional<std::uint64_t> seed_flag) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config JSON: " + std::string(e.what()));
    }

    ExperimentConfig cfg;
    try {
        if (root.contains("spec")) {
            const json& spec = root.at("spec");
            if (spec.contains("n_examiners")) cfg.spec.n_examiners = spec.at("n_examiners");
            if (spec.contains("items")) cfg.spec.items_per_examiner = spec.at("items");
            if (spec.contains("groups")) {
                cfg.spec.groups.clear();
                for (const auto& g : spec.at("groups")) {
                    if (!g.is_array() || g.size() != 3) {
                        throw ConfigError("config field spec.groups: each group is [size, p_low, p_high]");
                    }
                    cfg.spec.groups.push_back({g[0].get<long long>(), g[1].get<double>(),
                                               g[2].get<double>()});
                }
            }
        }
        if (root.contains("mechanism")) {
            const json& mech = root.at("mechanism");
            std::string kind = mech.value("kind", "nmar_two_group");
            if (kind == "mcar") {
                cfg.mechanism.kind = MechanismKind::Mcar;
                cfg.mechanism.rate = mech.value("rate", 0.0);
            } else if (kind == "nmar_two_group") {
                cfg.mechanism.kind = MechanismKind::NmarTwoGroup;
            } else {
                throw ConfigError("config field mechanism.kind: unknown '" + kind + "'");
            }
            cfg.mechanism.pi = mech.value("pi", 0.0);
            cfg.mechanism.target_overall = mech.value("target_overall", 0.179);
            cfg.mechanism.group_b_target = mech.value("group_b_target", 0.4);
            cfg.mechanism.clamp_theta = mech.value("clamp_theta", true);
            cfg.mechanism.exact_weights = mech.value("exact_weights", false);
        }
        cfg.seed = root.value("seed", 0ull);
    } catch (const json::exception& e) {
        throw ConfigError("config JSON: " + std::string(e.what()));
    }

    // Seed precedence: --seed flag, then environment, then config.
    if (const char* env = std::getenv("NONRESPONSE_LAB_SEED"); env && !seed_flag) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("NONRESPONSE_LAB_SEED is not an integer");
        }
    }
    if (seed_flag) cfg.seed = *seed_flag;

    cfg.spec.check();
    cfg.mechanism.check();

    json resolved;
    resolved["spec"]["n_examiners"] = cfg.spec.n_examiners;
    resolved["spec"]["items"] = cfg.spec.items_per_examiner;
    for (const auto& g : cfg.spec.groups) {
        resolved["spec"]["groups"].push_back({g.size, g.p_low, g.p_high});
    }
    resolved["mechanism"]["kind"] =
        cfg.mechanism.kind == MechanismKind::Mcar ? "mcar" : "nmar_two_group";
    resolved["mechanism"]["rate"] = cfg.mechanism.rate;
    resolved["mechanism"]["pi"] = cfg.mechanism.pi;
    resolved["mechanism"]["target_overall"] = cfg.mechanism.target_overall;
    resolved["mechanism"]["group_b_target"] = cfg.mechanism.group_b_target;
    resolved["mechanism"]["clamp_theta"] = cfg.mechanism.clamp_theta;
    resolved["mechanism"]["exact_weights"] = cfg.mechanism.exact_weights;
    resolved["seed"] = cfg.seed;
    cfg.resolved = resolved.dump();
    return cfg;
}

// "a:step:b" inclusive; zero step means the singleton {a}.
SweepGrid parse_grid(const std::string& text) {
    SweepGrid grid;
    double start = 0, step = 0, stop = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &step, &stop) != 3) {
        throw ConfigError("--grid expects start:step:stop");
    }
    if (step == 0.0) {
        grid.values = {start};
    } else {
        // Index-based stepping keeps endpoints exact (0:0.01:1 ends on 1.0).
        for (long long i = 0;; ++i) {
            double v = start + static_cast<double>(i) * step;
            if (v > stop + 1e-12) break;
            grid.values.push_back(v > 1.0 ? 1.0 : v);
        }
    }
    grid.check();
    return grid;
}

ScoringPolicy policy_from_flags(const std::string& inconclusive, const std::string& unsuitable,
                                const std::string& no_value) {
    ScoringPolicy policy;
    if (inconclusive == "correct") {
        policy.inconclusive = InconclusiveTreatment::Correct;
    } else if (inconclusive == "error") {
        policy.inconclusive = InconclusiveTreatment::Error;
    } else if (inconclusive == "excluded") {
        policy.inconclusive = InconclusiveTreatment::Excluded;
    } else {
        throw ConfigError("--inconclusive must be correct|error|excluded");
    }
    auto assessment = [](const std::string& v, const char* flag) {
        if (v == "observed") return AssessmentTreatment::ObservedNonError;
        if (v == "missing") return AssessmentTreatment::Missing;
        throw ConfigError(std::string(flag) + " must be observed|missing");
    };
    policy.unsuitable = assessment(unsuitable, "--unsuitable");
    policy.no_value = assessment(no_value, "--no-value");
    return policy;
}

AnsweredPolicy answered_from_flag(const std::string& answered) {
    if (answered == "any") return AnsweredPolicy::AnyRecordedDecision;
    if (answered == "decision") return AnsweredPolicy::ComparisonDecisionRequired;
    throw ConfigError("--answered must be any|decision");
}

void emit(const std::optional<std::string>& out_base, const std::string& suffix,
          const std::string& body) {
    if (out_base) {
        write_file_atomic(*out_base + suffix, body);
    } else {
        std::cout << body;
    }
}

// ---------------------------------------------------------------------------

int cmd_rates(const std::string& records_path, double level, const ScoringPolicy& policy,
              const std::optional<std::string>& out_base) {
    auto records = read_records_file(records_path);
    RunManifest manifest = make_manifest("rates", records_path, 0);
    AccuracySummary s = summarize(records, policy, level);
    FpHistogram hist = fp_histogram(records, policy);

    std::ostringstream csv;
    csv << "measure,numerator,denominator,point,ci_low,ci_high\n";
    csv << rate_csv_row("false_positive", s.false_positive);
    csv << rate_csv_row("false_negative", s.false_negative);
    csv << rate_csv_row("sensitivity", s.sensitivity);
    csv << rate_csv_row("specificity", s.specificity);

    manifest.finished_at = utc_timestamp();
    json report;
    report["false_positive"] = rate_json(s.false_positive);
    report["false_negative"] = rate_json(s.false_negative);
    report["sensitivity"] = rate_json(s.sensitivity);
    report["specificity"] = rate_json(s.specificity);
    if (s.false_positive.defined) {
        report["false_positive"]["percent_ci"] = "(" + format_percent1(s.false_positive.ci_low) +
                                                 ", " + format_percent1(s.false_positive.ci_high) +
                                                 ")";
    }
    report["scored_counts"] = {{"false_positive", s.counts.false_positive},
                               {"false_negative", s.counts.false_negative},
                               {"true_positive", s.counts.true_positive},
                               {"true_negative", s.counts.true_negative},
                               {"correct_by_policy_same", s.counts.correct_by_policy_same},
                               {"correct_by_policy_different", s.counts.correct_by_policy_different},
                               {"not_scored", s.counts.not_scored}};
    report["fp_histogram"] = {{"zero", hist.zero},
                              {"one", hist.one},
                              {"two_plus", hist.two_plus},
                              {"total_fp", hist.total_fp},
                              {"erring_examiners", hist.erring_examiners}};
    report["manifest"] = manifest_json(manifest);

    emit(out_base, ".csv", csv.str());
    emit(out_base, ".json", report.dump(2) + "\n");
    return kExitOk;
}

int cmd_nonresponse(const std::string& design_path, const std::string& records_path,
                    std::optional<long long> enrolled, const std::string& answered_flag,
                    double threshold, const std::optional<std::string>& out_base) {
    StudyDesign design = read_design_file(design_path);
    if (enrolled) design.set_enrolled(*enrolled);
    auto records = read_records_file(records_path);
    AnsweredPolicy answered = answered_from_flag(answered_flag);
    RunManifest manifest = make_manifest("nonresponse", design_path + "|" + records_path, 0);

    std::ostringstream csv;
    csv << "scope,enrolled,active_responders,unit_rate,assigned_items,answered_items,item_rate\n";
    json report;
    const char* names[] = {"all", "different_source", "same_source"};
    Scope scopes[] = {Scope::All, Scope::DifferentSourceOnly, Scope::SameSourceOnly};
    for (int i = 0; i < 3; ++i) {
        auto led = ledger(design, records, scopes[i], answered);
        csv << names[i] << ',' << led.enrolled << ',' << led.active_responders << ','
            << (led.unit_rate_defined ? format_full(led.unit_rate) : "") << ','
            << led.assigned_items << ',' << led.answered_items << ','
            << (led.item_rate_defined ? format_full(led.item_rate) : "") << '\n';
        json scope_json;
        scope_json["enrolled"] = led.enrolled;
        scope_json["active_responders"] = led.active_responders;
        if (led.unit_rate_defined) {
            scope_json["unit_rate"] = led.unit_rate;
            scope_json["unit_percent"] = format_percent1(led.unit_rate);
        }
        scope_json["assigned_items"] = led.assigned_items;
        scope_json["answered_items"] = led.answered_items;
        if (led.item_rate_defined) {
            scope_json["item_rate"] = led.item_rate;
            scope_json["item_percent"] = format_percent1(led.item_rate);
        } else {
            scope_json["item_rate_note"] = "insufficient design data";
        }
        report[names[i]] = scope_json;
    }

    auto flags = high_nonresponse_flags(design, records, threshold, answered);
    long long flagged = 0;
    json flag_json;
    for (const auto& [examiner, is_high] : flags.flags) {
        flag_json[examiner] = is_high;
        if (is_high) flagged++;
    }
    report["high_nonresponse"] = {{"threshold", threshold},
                                  {"flagged", flagged},
                                  {"flags", flag_json},
                                  {"zero_assignment", flags.zero_assignment}};
    manifest.finished_at = utc_timestamp();
    report["manifest"] = manifest_json(manifest);

    emit(out_base, ".csv", csv.str());
    emit(out_base, ".json", report.dump(2) + "\n");
    return kExitOk;
}

void emit_manifest_sidecar(const std::optional<std::string>& out_base, RunManifest manifest) {
    if (!out_base) return;
    manifest.finished_at = utc_timestamp();
    write_file_atomic(*out_base + ".manifest.json", manifest_json(manifest).dump(2) + "\n");
}

int cmd_permtest(const std::string& attributes_path, const std::string& design_path,
                 const std::string& records_path, double threshold,
                 const std::string& answered_flag, long long n_perm, std::uint64_t seed,
                 std::vector<std::string> characteristics,
                 const std::optional<std::string>& out_base) {
    auto attributes = read_attributes_file(attributes_path);
    StudyDesign design = read_design_file(design_path);
    auto records = read_records_file(records_path);
    auto flags = high_nonresponse_flags(design, records, threshold,
                                        answered_from_flag(answered_flag));
    RunManifest manifest = make_manifest(
        "permtest", attributes_path + "|" + design_path + "|" + records_path, seed);

    if (characteristics.empty()) {
        std::set<std::string> names;
        for (const auto& a : attributes) {
            for (const auto& [name, value] : a.flags) names.insert(name);
        }
        characteristics.assign(names.begin(), names.end());
    }
    auto rows = run_battery(flags.flags, attributes, characteristics, n_perm, seed);

    std::ostringstream csv;
    csv << "characteristic,N,K,n,k,exact_p,mc_p,mc_low,mc_high\n";
    for (const auto& row : rows) {
        csv << row.characteristic << ',' << row.contingency.n_total << ','
            << row.contingency.n_characteristic << ',' << row.contingency.n_flagged << ','
            << row.contingency.k_overlap << ',' << format_full(row.exact_p) << ','
            << format_full(row.mc.p_hat) << ',' << format_full(row.mc.mc_low) << ','
            << format_full(row.mc.mc_high) << '\n';
        if (row.excluded > 0) {
            std::cerr << "note: " << row.excluded << " examiner(s) excluded from '"
                      << row.characteristic << "' (missing attribute value)\n";
        }
    }
    emit(out_base, ".csv", csv.str());
    emit_manifest_sidecar(out_base, manifest);
    return kExitOk;
}

int cmd_cv_audit(const std::string& cvs_path, const std::optional<std::string>& out_base) {
    std::ifstream in(cvs_path);
    if (!in) throw DataError("cannot open cv file '" + cvs_path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("cv CSV: empty input");
    detail::expect_header(detail::split_csv_line(line),
                          {"expert_id", "afte_member", "employment"}, "cv CSV");
    std::vector<CvRecord> cvs;
    long long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 3) {
            throw DataError("line " + std::to_string(lineno) + ": expected 3 cells");
        }
        CvRecord rec;
        rec.expert_id = cells[0];
        if (cells[1] == "1") {
            rec.afte_member = true;
        } else if (cells[1] == "0") {
            rec.afte_member = false;
        } else if (!cells[1].empty()) {
            throw DataError("line " + std::to_string(lineno) + ": afte_member must be 1, 0 or empty");
        }
        if (cells[2] == "public") {
            rec.employment = Employment::Public;
        } else if (cells[2] == "private") {
            rec.employment = Employment::Private;
        } else if (cells[2] == "unstated") {
            rec.employment = Employment::Unstated;
        } else {
            throw DataError("line " + std::to_string(lineno) + ": employment must be public|private|unstated");
        }
        cvs.push_back(std::move(rec));
    }

    auto profiles = resolve(cvs);
    auto summary = criteria_summary(profiles);
    auto hist = resume_histogram(profiles);

    std::ostringstream csv;
    csv << "criterion,count,percent\n";
    csv << "afte_member," << summary.n_afte << ',' << format_percent1(summary.pct_afte / 100.0)
        << '\n';
    csv << "public_employer," << summary.n_public << ','
        << format_percent1(summary.pct_public / 100.0) << '\n';
    csv << "both," << summary.n_both << ',' << format_percent1(summary.pct_both / 100.0) << '\n';

    std::ostringstream hist_csv;
    hist_csv << "n_resumes,experts\n";
    for (const auto& [copies, experts] : hist.counts) {
        hist_csv << copies << ',' << experts << '\n';
    }
    hist_csv << "total," << hist.total_experts << '\n';
    hist_csv << "total_resumes," << hist.total_resumes << '\n';

    emit(out_base, ".csv", csv.str());
    emit(out_base, "_histogram.csv", hist_csv.str());
    emit_manifest_sidecar(out_base, make_manifest("cv-audit", cvs_path, 0));
    return kExitOk;
}

int cmd_difficulty(const std::string& records_path, const std::optional<std::string>& out_base) {
    auto records = read_records_file(records_path);
    auto profile = difficulty_profile(records);
    std::ostringstream csv;
    csv << "difficulty,answered,unanswered\n";
    for (auto level : kAllDifficulties) {
        auto idx = static_cast<std::size_t>(level);
        csv << to_string(level) << ',' << profile.answered[idx] << ','
            << profile.unanswered[idx] << '\n';
    }
    csv << "total_rated_without_decision,," << profile.total_unanswered() << '\n';
    emit(out_base, ".csv", csv.str());
    emit_manifest_sidecar(out_base, make_manifest("difficulty", records_path, 0));
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
                 const std::string& out_dir) {
    ExperimentConfig cfg = parse_experiment_config(config_path, seed_flag);
    RunManifest manifest = make_manifest("simulate", cfg.resolved, cfg.seed);
    SimulatedDataset ds = generate(cfg.spec, cfg.mechanism, cfg.seed);
    MaskedRecords split = mask(ds);
    StudyDesign design = design_for(ds);

    fs::create_directories(out_dir);
    std::ostringstream observed, full, design_csv;
    write_records_csv(observed, split.observed);
    write_records_csv(full, split.full);
    write_design_csv(design_csv, design);

    json params;
    params["pi"] = ds.pi;
    params["seed"] = ds.seed;
    params["p"] = ds.p;
    params["theta"] = ds.theta;
    params["realized_missing"] = ds.realized_missing();
    manifest.finished_at = utc_timestamp();
    params["manifest"] = manifest_json(manifest);

    fs::path dir(out_dir);
    write_file_atomic(dir / "observed.csv", observed.str());
    write_file_atomic(dir / "full.csv", full.str());
    write_file_atomic(dir / "design.csv", design_csv.str());
    write_file_atomic(dir / "params.json", params.dump(2) + "\n");
    write_file_atomic(dir / "manifest.json", manifest_json(manifest).dump(2) + "\n");
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
              const std::optional<std::string>& grid_flag, unsigned threads,
              const std::string& out_dir) {
    ExperimentConfig cfg = parse_experiment_config(config_path, seed_flag);
    SweepGrid grid = grid_flag ? parse_grid(*grid_flag) : SweepGrid::uniform101();
    std::string grid_digest_input = cfg.resolved + "|grid=";
    for (double v : grid.values) grid_digest_input += format_full(v) + ";";
    RunManifest manifest = make_manifest("sweep", grid_digest_input, cfg.seed);

    auto results = run_sweep(cfg.spec, cfg.mechanism, grid, cfg.seed, threads);

    std::ostringstream csv;
    csv << "pi,dataset,point,ci_low,ci_high,numerator,denominator,realized_missing,seed\n";
    for (const auto& cell : results) {
        if (cell.failed) {
            std::cerr << "note: cell pi=" << cell.pi << " failed: " << cell.error << '\n';
            csv << format_full(cell.pi) << ",failed,,,,,,," << cell.seed << '\n';
            continue;
        }
        auto row = [&](const char* name, const RateEstimate& r) {
            csv << format_full(cell.pi) << ',' << name << ',' << rate_cell(r, &RateEstimate::point)
                << ',' << rate_cell(r, &RateEstimate::ci_low) << ','
                << rate_cell(r, &RateEstimate::ci_high) << ',' << r.numerator << ','
                << r.denominator << ',' << format_full(cell.realized_missing) << ','
                << cell.seed << '\n';
        };
        row("observed", cell.observed);
        row("full", cell.full);
    }

    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    write_file_atomic(dir / "sweep.csv", csv.str());
    manifest.finished_at = utc_timestamp();
    write_file_atomic(dir / "manifest.json", manifest_json(manifest).dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Black-box proficiency study simulator and nonresponse analyzer"};
    app.require_subcommand(1);

    std::string records_path, design_path, attributes_path, cvs_path, config_path;
    std::string out_dir;
    std::optional<std::string> out_base;
    double level = 0.95;
    std::string inconclusive = "correct", unsuitable = "observed", no_value = "observed";
    std::optional<long long> enrolled;
    std::string answered = "any";
    double threshold = 0.5;
    long long n_perm = 100000;
    std::uint64_t seed_value = 0;
    bool seed_given = false;
    std::optional<std::string> grid_flag;
    unsigned threads = 1;
    std::vector<std::string> characteristics;

    auto* rates = app.add_subcommand("rates", "Accuracy measures with exact intervals");
    rates->add_option("--records", records_path, "records CSV")->required();
    rates->add_option("--level", level, "confidence level");
    rates->add_option("--inconclusive", inconclusive, "correct|error|excluded");
    rates->add_option("--unsuitable", unsuitable, "observed|missing");
    rates->add_option("--no-value", no_value, "observed|missing");
    rates->add_option("--out", out_base, "output base path (writes .csv/.json)");

    auto* nonresponse = app.add_subcommand("nonresponse", "Unit/item nonresponse ledger");
    nonresponse->add_option("--design", design_path, "design CSV")->required();
    nonresponse->add_option("--records", records_path, "records CSV")->required();
    nonresponse->add_option("--enrolled", enrolled, "enrolled participants (>= assigned examiners)");
    nonresponse->add_option("--answered", answered, "any|decision");
    nonresponse->add_option("--threshold", threshold, "high-nonresponse threshold");
    nonresponse->add_option("--out", out_base, "output base path");

    auto* permtest = app.add_subcommand("permtest", "Characteristic vs nonresponse association");
    permtest->add_option("--attributes", attributes_path, "attributes CSV")->required();
    permtest->add_option("--design", design_path, "design CSV")->required();
    permtest->add_option("--records", records_path, "records CSV")->required();
    permtest->add_option("--threshold", threshold, "high-nonresponse threshold");
    permtest->add_option("--answered", answered, "any|decision");
    permtest->add_option("--n-perm", n_perm, "Monte-Carlo permutations");
    permtest->add_option("--seed", seed_value, "RNG seed")->each([&](const std::string&) {
        seed_given = true;
    });
    permtest->add_option("--characteristics", characteristics, "subset of characteristics");
    permtest->add_option("--out", out_base, "output base path");

    auto* cv_audit = app.add_subcommand("cv-audit", "Expert CV duplicate resolution and criteria");
    cv_audit->add_option("--cvs", cvs_path, "cv CSV")->required();
    cv_audit->add_option("--out", out_base, "output base path");

    auto* difficulty = app.add_subcommand("difficulty", "Difficulty profile of rated items");
    difficulty->add_option("--records", records_path, "records CSV")->required();
    difficulty->add_option("--out", out_base, "output base path");

    auto* simulate = app.add_subcommand("simulate", "Generate one dataset under a mechanism");
    simulate->add_option("--config", config_path, "experiment config JSON")->required();
    simulate->add_option("--seed", seed_value, "override config seed")->each([&](const std::string&) {
        seed_given = true;
    });
    simulate->add_option("--out", out_dir, "output directory")->required();

    auto* sweep = app.add_subcommand("sweep", "Run the pi-grid experiment");
    sweep->add_option("--config", config_path, "experiment config JSON")->required();
    sweep->add_option("--seed", seed_value, "override config seed")->each([&](const std::string&) {
        seed_given = true;
    });
    sweep->add_option("--grid", grid_flag, "start:step:stop (default 0:0.01:1)");
    sweep->add_option("--threads", threads, "worker threads");
    sweep->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "NRLAB_ERROR code=config message=\"" << e.what() << "\"\n";
        return kExitConfig;
    }

    std::optional<std::uint64_t> seed_flag;
    if (seed_given) seed_flag = seed_value;

    try {
        if (rates->parsed()) {
            return cmd_rates(records_path, level,
                             policy_from_flags(inconclusive, unsuitable, no_value), out_base);
        }
        if (nonresponse->parsed()) {
            return cmd_nonresponse(design_path, records_path, enrolled, answered, threshold,
                                   out_base);
        }
        if (permtest->parsed()) {
            std::uint64_t seed = seed_flag.value_or(0);
            if (const char* env = std::getenv("NONRESPONSE_LAB_SEED"); env && !seed_flag) {
                seed = std::stoull(env);
            }
            return cmd_permtest(attributes_path, design_path, records_path, threshold, answered,
                                n_perm, seed, characteristics, out_base);
        }
        if (cv_audit->parsed()) return cmd_cv_audit(cvs_path, out_base);
        if (difficulty->parsed()) return cmd_difficulty(records_path, out_base);
        if (simulate->parsed()) return cmd_simulate(config_path, seed_flag, out_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, seed_flag, grid_flag, threads, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "NRLAB_ERROR code=config message=\"" << e.what() << "\"\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "NRLAB_ERROR code=data message=\"" << e.what() << "\"\n";
        return kExitData;
    } catch (const NumericError& e) {
        std::cerr << "NRLAB_ERROR code=numeric message=\"" << e.what() << "\"\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "NRLAB_ERROR code=data message=\"" << e.what() << "\"\n";
        return kExitData;
    }
    return kExitOk;
}
