#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dri/common.hpp"
#include "dri/empirical.hpp"
#include "dri/experiments.hpp"
#include "dri/io.hpp"

namespace dri {

// Exit codes shared by every subcommand:
//   0 success | 2 usage error | 3 input validation error | 4 computation error
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitComputation = 4;

namespace detail {

/// Compact deterministic rendering for doubles inside the canonical command
/// string: fixed 6 decimals with trailing zeros (and a bare point) stripped.
inline std::string format_compact(double v) {
    std::string s = format_fixed(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

template <typename T>
inline std::string join_list(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_same_v<T, double>) out += format_compact(xs[i]);
        else out += std::to_string(xs[i]);
    }
    return out;
}

/// FNV-1a 64-bit hash; default master seed for `compute` runs, derived from
/// the input file stem so each case gets a stable, distinct seed.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Config fragment of the canonical command, identical across subcommands.
inline std::string command_config_suffix(const DriConfig& cfg, std::uint64_t seed,
                                         bool include_tau = true) {
    std::string out = " --kind " + std::string(to_string(cfg.correlation_kind));
    if (include_tau) out += " --tau " + format_compact(cfg.tau);
    out += " --lambda " + format_compact(cfg.lambda);
    out += " --method " + std::string(to_string(cfg.method));
    out += " --mode " + std::string(to_string(cfg.adjustment_mode));
    out += " --degenerate " + std::string(to_string(cfg.degenerate_policy));
    out += " --seed " + std::to_string(seed);
    return out;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << text;
    if (!out) throw ValidationError("failed writing output file: " + path);
}

inline void emit_document(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) std::cout << text;
    else write_text(out_path, text);
}

// --- JSON document readers (report subcommand) -----------------------------

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("not valid JSON: " + path + " (" + e.what() + ")");
    }
}

template <typename T>
inline T get_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(std::string("field '") + key + "' has the wrong type");
    }
}

inline std::vector<ScenarioResult> parse_scenarios(const nlohmann::json& arr) {
    std::vector<ScenarioResult> out;
    for (const nlohmann::json& j : arr) {
        ScenarioResult s;
        s.formula = method_from_string(get_field<std::string>(j, "formula"));
        s.tau = get_field<double>(j, "tau");
        const nlohmann::json& d = j.at("design");
        s.design.n = get_field<int>(d, "group_size");
        s.design.considerations = get_field<int>(d, "considerations");
        s.design.preferences = get_field<int>(d, "preferences");
        s.design.likert_max = get_field<int>(d, "likert_max");
        s.design.noise = get_field<double>(d, "noise");
        s.mean_dri = get_field<double>(j, "mean_dri");
        s.sd_dri = get_field<double>(j, "sd_dri");
        s.reps = get_field<int>(j, "reps");
        out.push_back(s);
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommand drivers
// ---------------------------------------------------------------------------

namespace detail {

struct CommonOptions {
    DriConfig config;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    std::string timestamp;
    std::string out_path;

    int resolved_threads() const {
        if (threads > 0) return threads;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
};

/// Attach the flags shared by the computing subcommands. Enum-valued flags
/// take the same spellings to_string produces; bad values are usage errors.
inline void add_common_options(CLI::App* cmd, CommonOptions& opt, std::string& kind,
                               std::string& method, std::string& mode, std::string& degenerate) {
    cmd->add_option("--kind", kind, "correlation: spearman-midrank or pearson")
        ->default_val("spearman-midrank");
    cmd->add_option("--tau", opt.config.tau, "penalty threshold")->default_val("0.2");
    cmd->add_option("--lambda", opt.config.lambda, "index scale constant")
        ->default_val(std::to_string(kDefaultLambda));
    cmd->add_option("--method", method, "index formula: standard or modified")
        ->default_val("modified");
    cmd->add_option("--mode", mode,
                    "penalty mode: as-printed, floor-referenced, or unit-referenced")
        ->default_val("floor-referenced");
    cmd->add_option("--degenerate", degenerate,
                    "undefined-correlation policy: exclude-pair or treat-as-zero")
        ->default_val("exclude-pair");
    cmd->add_option("--seed", opt.seed, "master seed (default: DRI_SEED env, then 0)")
        ->envname("DRI_SEED");
    cmd->add_option("--threads", opt.threads, "worker threads (default: hardware)");
    cmd->add_option("--timestamp", opt.timestamp,
                    "manifest timestamp (empty by default so identical runs emit identical bytes)");
}

inline void finalize_common(CLI::App* cmd, CommonOptions& opt, const std::string& kind,
                            const std::string& method, const std::string& mode,
                            const std::string& degenerate) {
    opt.config.correlation_kind = correlation_kind_from_string(kind);
    opt.config.method = method_from_string(method);
    opt.config.adjustment_mode = adjustment_mode_from_string(mode);
    opt.config.degenerate_policy = degenerate_policy_from_string(degenerate);
    opt.config.validate();
    opt.seed_given = cmd->count("--seed") > 0;
    if (opt.threads < 0) throw std::invalid_argument("--threads must be positive");
}

inline std::vector<DesignPoint> cross_designs(const std::vector<int>& sizes,
                                              const std::vector<int>& considerations,
                                              const std::vector<int>& preferences,
                                              const std::vector<int>& likerts) {
    std::vector<DesignPoint> designs;
    for (const int n : sizes)
        for (const int c : considerations)
            for (const int p : preferences)
                for (const int l : likerts) {
                    DesignPoint d;
                    d.n = n;
                    d.considerations = c;
                    d.preferences = p;
                    d.likert_max = l;
                    d.validate();
                    designs.push_back(d);
                }
    if (designs.empty()) throw std::invalid_argument("design grid is empty");
    return designs;
}

inline void check_noise_levels(const std::vector<double>& noises) {
    if (noises.empty()) throw std::invalid_argument("--noise must not be empty");
    for (const double nl : noises)
        if (!(nl >= 0.0 && nl <= 1.0))
            throw std::invalid_argument("--noise entries must be in [0, 1], got " +
                                        format_compact(nl));
}

inline int run_simulate(const CommonOptions& opt, const std::vector<int>& sizes,
                        const std::vector<int>& considerations,
                        const std::vector<int>& preferences, const std::vector<int>& likerts,
                        const std::vector<double>& noises, int reps) {
    if (reps < 1) throw std::invalid_argument("--reps must be positive");
    check_noise_levels(noises);
    const std::vector<DesignPoint> designs =
        cross_designs(sizes, considerations, preferences, likerts);
    const std::uint64_t seed = opt.seed_given ? opt.seed : 0;

    const ComponentAResult res = run_component_a(designs, noises, reps, opt.config, seed,
                                                 opt.resolved_threads());
    const std::vector<Figure1Row> figure1 = figure1_rows(res.scenarios);

    // The design-invariance summary needs full-noise cells for at least two
    // distinct designs; emit it only when the requested grid provides them.
    std::vector<InvarianceRow> invariance;
    bool any_full_noise = false;
    for (const ScenarioResult& s : res.scenarios) any_full_noise |= s.design.noise == 1.0;
    std::vector<std::array<int, 3>> distinct;
    for (const DesignPoint& d : designs) {
        const std::array<int, 3> key{d.considerations, d.preferences, d.likert_max};
        bool seen = false;
        for (const auto& k : distinct) seen = seen || k == key;
        if (!seen) distinct.push_back(key);
    }
    if (any_full_noise && distinct.size() >= 2)
        invariance = design_invariance_summary(res.scenarios);

    RunManifest manifest;
    manifest.config = opt.config;
    manifest.master_seed = seed;
    manifest.timestamp = opt.timestamp;
    manifest.command = "dri simulate --group-sizes " + join_list(sizes) + " --considerations " +
                       join_list(considerations) + " --preferences " + join_list(preferences) +
                       " --likert " + join_list(likerts) + " --noise " + join_list(noises) +
                       " --reps " + std::to_string(reps) +
                       command_config_suffix(opt.config, seed);

    emit_document(opt.out_path, write_simulate_json(manifest, res.scenarios, figure1, invariance,
                                                    res.floor_comparison));
    return kExitOk;
}

inline int run_sensitivity(const CommonOptions& opt, const std::vector<double>& taus,
                           const std::vector<int>& sizes, const std::vector<int>& considerations,
                           const std::vector<int>& preferences, const std::vector<int>& likerts,
                           const std::vector<double>& noises, int reps) {
    if (reps < 1) throw std::invalid_argument("--reps must be positive");
    check_noise_levels(noises);
    if (taus.empty()) throw std::invalid_argument("--taus must not be empty");
    for (const double t : taus)
        if (!(t > 0.0) || !(t <= 1.0))
            throw std::invalid_argument("--taus entries must be in (0, 1], got " +
                                        format_compact(t));
    const std::vector<DesignPoint> designs =
        cross_designs(sizes, considerations, preferences, likerts);
    const std::uint64_t seed = opt.seed_given ? opt.seed : 0;

    const ComponentBResult res =
        run_component_b(taus, designs, noises, reps, opt.config, seed, opt.resolved_threads());

    RunManifest manifest;
    manifest.config = opt.config;
    manifest.master_seed = seed;
    manifest.timestamp = opt.timestamp;
    manifest.command = "dri sensitivity --taus " + join_list(taus) + " --group-sizes " +
                       join_list(sizes) + " --considerations " + join_list(considerations) +
                       " --preferences " + join_list(preferences) + " --likert " +
                       join_list(likerts) + " --noise " + join_list(noises) + " --reps " +
                       std::to_string(reps) +
                       command_config_suffix(opt.config, seed, /*include_tau=*/false);

    emit_document(opt.out_path, write_sensitivity_json(manifest, res.scenarios, res.criteria));
    return kExitOk;
}

inline int run_compute(const CommonOptions& opt, const std::string& input, int likert_override,
                       int bootstrap_b, int splits) {
    const LoadedInput loaded = load_dataset(input, likert_override);
    if (!std::holds_alternative<CaseData>(loaded))
        throw ValidationError(input +
                              ": compute needs pre/post case data (a 'wave' column with both "
                              "'pre' and 'post' rows)");
    const CaseData& data = std::get<CaseData>(loaded);

    const std::uint64_t seed =
        opt.seed_given ? opt.seed : fnv1a64(std::filesystem::path(input).stem().string());

    CaseReport report = compute_case(data, opt.config, seed);
    const BootstrapPair boot =
        bootstrap_delta(data, opt.config, bootstrap_b, seed, opt.resolved_threads());
    report.significance_standard = boot.standard.stars;
    report.significance_modified = boot.modified.stars;
    const SplitStability stability = split_stability(data, opt.config, seed, splits);

    RunManifest manifest;
    manifest.config = opt.config;
    manifest.master_seed = seed;
    manifest.timestamp = opt.timestamp;
    manifest.command = "dri compute --input " + input +
                       (likert_override ? " --likert " + std::to_string(likert_override) : "") +
                       " --bootstrap " + std::to_string(bootstrap_b) + " --splits " +
                       std::to_string(splits) + command_config_suffix(opt.config, seed);

    emit_document(opt.out_path, write_case_json(manifest, report, boot, stability));
    return kExitOk;
}

inline int run_report(const std::string& input, const std::string& out_dir) {
    const nlohmann::json doc = load_json(input);
    const std::string kind = get_field<std::string>(doc, "kind");
    if (!doc.contains("manifest")) throw ValidationError(input + ": missing manifest");
    const nlohmann::json& manifest = doc.at("manifest");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory: " + out_dir);
    const auto out_file = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    std::string head = "artifact: " + kind + " | version: " +
                       get_field<std::string>(manifest, "artifact_version") +
                       " | master_seed: " +
                       std::to_string(get_field<std::uint64_t>(manifest, "master_seed")) + "\n" +
                       "command: " + get_field<std::string>(manifest, "command") + "\n\n";

    if (kind == "simulate") {
        const std::vector<ScenarioResult> scenarios =
            parse_scenarios(doc.contains("scenarios") ? doc.at("scenarios")
                                                      : nlohmann::json::array());
        std::vector<Figure1Row> figure1;
        for (const nlohmann::json& j : doc.contains("figure1") ? doc.at("figure1")
                                                               : nlohmann::json::array()) {
            Figure1Row r;
            r.formula = method_from_string(get_field<std::string>(j, "formula"));
            r.group_size = get_field<int>(j, "group_size");
            r.noise = get_field<double>(j, "noise");
            r.mean_dri = get_field<double>(j, "mean_dri");
            r.sd_dri = get_field<double>(j, "sd_dri");
            r.reps = get_field<int>(j, "reps");
            figure1.push_back(r);
        }
        std::vector<InvarianceRow> invariance;
        for (const nlohmann::json& j : doc.contains("invariance") ? doc.at("invariance")
                                                                  : nlohmann::json::array()) {
            InvarianceRow r;
            r.formula = method_from_string(get_field<std::string>(j, "formula"));
            r.group_size = get_field<int>(j, "group_size");
            r.designs = get_field<int>(j, "designs");
            r.min_floor = get_field<double>(j, "min_floor");
            r.max_floor = get_field<double>(j, "max_floor");
            r.range = get_field<double>(j, "range");
            invariance.push_back(r);
        }
        std::vector<FloorComparisonRow> floors;
        for (const nlohmann::json& j : doc.contains("floor_comparison")
                                           ? doc.at("floor_comparison")
                                           : nlohmann::json::array()) {
            FloorComparisonRow r;
            r.group_size = get_field<int>(j, "group_size");
            r.standard = get_field<double>(j, "standard");
            r.as_printed = get_field<double>(j, "as_printed");
            r.floor_referenced = get_field<double>(j, "floor_referenced");
            r.unit_referenced = get_field<double>(j, "unit_referenced");
            floors.push_back(r);
        }

        std::string body = head;
        body += "Mean index by noise level\n" + render_figure1_table(figure1) + "\n";
        if (!floors.empty())
            body += "Full-noise floors by penalty mode\n" + render_floor_comparison_table(floors) +
                    "\n";
        if (!invariance.empty())
            body += "Design invariance of the full-noise floor\n" +
                    render_invariance_table(invariance) + "\n";
        std::cout << body;

        write_text(out_file("scenarios.csv"), emit_scenarios_csv(scenarios));
        write_text(out_file("figure1.csv"), emit_figure1_csv(figure1));
        if (!invariance.empty())
            write_text(out_file("invariance.csv"), emit_invariance_csv(invariance));
        if (!floors.empty())
            write_text(out_file("floor_comparison.csv"), emit_floor_comparison_csv(floors));
        return kExitOk;
    }

    if (kind == "sensitivity") {
        const std::vector<ScenarioResult> scenarios =
            parse_scenarios(doc.contains("scenarios") ? doc.at("scenarios")
                                                      : nlohmann::json::array());
        std::vector<ThresholdCriteria> criteria;
        for (const nlohmann::json& j : doc.contains("criteria") ? doc.at("criteria")
                                                                : nlohmann::json::array()) {
            ThresholdCriteria c;
            c.tau = get_field<double>(j, "tau");
            c.discrimination = get_field<double>(j, "discrimination");
            c.noise_floor = get_field<double>(j, "noise_floor");
            c.fidelity_gap = get_field<double>(j, "fidelity_gap");
            c.floor_near_zero = get_field<bool>(j, "floor_near_zero");
            c.monotone = get_field<bool>(j, "monotone");
            criteria.push_back(c);
        }
        std::cout << head << "Threshold sensitivity\n" << render_criteria_table(criteria) << "\n";
        write_text(out_file("scenarios.csv"), emit_scenarios_csv(scenarios));
        write_text(out_file("criteria.csv"), emit_criteria_csv(criteria));
        return kExitOk;
    }

    if (kind == "case") {
        if (!doc.contains("report")) throw ValidationError(input + ": missing report");
        const nlohmann::json& j = doc.at("report");
        CaseReport r;
        r.name = get_field<std::string>(j, "name");
        r.n = get_field<int>(j, "n");
        r.dri_pre_standard = get_field<double>(j, "dri_pre_standard");
        r.dri_post_standard = get_field<double>(j, "dri_post_standard");
        r.delta_standard = get_field<double>(j, "delta_standard");
        r.dri_pre_modified = get_field<double>(j, "dri_pre_modified");
        r.dri_post_modified = get_field<double>(j, "dri_post_modified");
        r.delta_modified = get_field<double>(j, "delta_modified");
        r.delta_indexes_pre = get_field<double>(j, "delta_indexes_pre");
        r.delta_indexes_post = get_field<double>(j, "delta_indexes_post");
        r.significance_standard = get_field<std::string>(j, "significance_standard");
        r.significance_modified = get_field<std::string>(j, "significance_modified");

        std::string body = head + "Pre/post deliberation\n" + render_case_table(r);
        if (doc.contains("split_stability")) {
            const nlohmann::json& s = doc.at("split_stability");
            body += "\nSplit stability over " +
                    std::to_string(get_field<int>(s, "splits")) +
                    " random splits (sd of delta): standard " +
                    format_short(get_field<double>(s, "sd_delta_standard"), 3) + ", modified " +
                    format_short(get_field<double>(s, "sd_delta_modified"), 3) + "\n";
        }
        if (doc.contains("bootstrap")) {
            const nlohmann::json& b = doc.at("bootstrap");
            const auto line = [&](const char* key, const char* label) {
                const nlohmann::json& one = b.at(key);
                return std::string(label) + " delta " +
                       format_short(get_field<double>(one, "delta"), 2) + " [" +
                       format_short(get_field<double>(one, "ci_lo"), 2) + ", " +
                       format_short(get_field<double>(one, "ci_hi"), 2) + "], p = " +
                       format_short(get_field<double>(one, "p_value"), 3) + "\n";
            };
            body += "\nBootstrap (" +
                    std::to_string(get_field<int>(b.at("standard"), "resamples")) +
                    " resamples):\n" + line("standard", "  standard") +
                    line("modified", "  modified");
        }
        std::cout << body;
        write_text(out_file("case_report.csv"), emit_case_csv(r));
        return kExitOk;
    }

    throw ValidationError(input + ": unknown artifact kind '" + kind + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parse arguments and dispatch. Returns the process exit code; never throws.
inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Deliberative reason index: scoring, simulation, and reporting"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // -- simulate ------------------------------------------------------------
    CLI::App* sim = app.add_subcommand(
        "simulate", "Monte Carlo validation across instrument designs and noise levels");
    detail::CommonOptions sim_opt;
    std::string sim_kind, sim_method, sim_mode, sim_degenerate;
    std::vector<int> sim_sizes{30, 100}, sim_cons{15, 30, 50}, sim_prefs{4, 10}, sim_likerts{5, 7};
    std::vector<double> sim_noises{0.0, 0.25, 0.5, 0.75, 1.0};
    int sim_reps = 1000;
    sim->add_option("--group-sizes", sim_sizes, "group sizes")->delimiter(',');
    sim->add_option("--considerations", sim_cons, "consideration counts")->delimiter(',');
    sim->add_option("--preferences", sim_prefs, "preference counts")->delimiter(',');
    sim->add_option("--likert", sim_likerts, "Likert formats (5 and/or 7)")->delimiter(',');
    sim->add_option("--noise", sim_noises, "noise levels in [0,1]")->delimiter(',');
    sim->add_option("--reps", sim_reps, "replications per scenario")->default_val("1000");
    sim->add_option("--out", sim_opt.out_path, "output JSON path (default: stdout)");
    detail::add_common_options(sim, sim_opt, sim_kind, sim_method, sim_mode, sim_degenerate);

    // -- sensitivity ---------------------------------------------------------
    CLI::App* sen = app.add_subcommand(
        "sensitivity", "Threshold sensitivity protocol over a grid of tau values");
    detail::CommonOptions sen_opt;
    std::string sen_kind, sen_method, sen_mode, sen_degenerate;
    std::vector<double> sen_taus{0.1, 0.2, 0.3, 0.4};
    std::vector<int> sen_sizes{100}, sen_cons{15, 30, 50}, sen_prefs{4, 10}, sen_likerts{5};
    std::vector<double> sen_noises{0.0, 0.25, 0.5, 0.75, 1.0};
    int sen_reps = 300;
    sen->add_option("--taus", sen_taus, "penalty thresholds to audit")->delimiter(',');
    sen->add_option("--group-sizes", sen_sizes, "group sizes")->delimiter(',');
    sen->add_option("--considerations", sen_cons, "consideration counts")->delimiter(',');
    sen->add_option("--preferences", sen_prefs, "preference counts")->delimiter(',');
    sen->add_option("--likert", sen_likerts, "Likert formats (5 and/or 7)")->delimiter(',');
    sen->add_option("--noise", sen_noises, "noise levels in [0,1]")->delimiter(',');
    sen->add_option("--reps", sen_reps, "replications per scenario")->default_val("300");
    sen->add_option("--out", sen_opt.out_path, "output JSON path (default: stdout)");
    detail::add_common_options(sen, sen_opt, sen_kind, sen_method, sen_mode, sen_degenerate);

    // -- compute ---------------------------------------------------------------
    CLI::App* cmp = app.add_subcommand(
        "compute", "Score a pre/post case: indexes, bootstrap significance, split stability");
    detail::CommonOptions cmp_opt;
    std::string cmp_kind, cmp_method, cmp_mode, cmp_degenerate;
    std::string cmp_input;
    int cmp_likert = 0, cmp_bootstrap = 2000, cmp_splits = 20;
    cmp->add_option("--input", cmp_input, "case CSV (respondent_id, wave, cons_*, pref_*)")
        ->required();
    cmp->add_option("--likert", cmp_likert, "Likert format override (5 or 7; default: inferred)");
    cmp->add_option("--bootstrap", cmp_bootstrap, "bootstrap resamples (>= 100)")
        ->default_val("2000");
    cmp->add_option("--splits", cmp_splits, "random splits for the stability disclosure")
        ->default_val("20");
    cmp->add_option("--out", cmp_opt.out_path, "output JSON path (default: stdout)");
    detail::add_common_options(cmp, cmp_opt, cmp_kind, cmp_method, cmp_mode, cmp_degenerate);

    // -- report ----------------------------------------------------------------
    CLI::App* rep = app.add_subcommand(
        "report", "Render a result JSON into tables on stdout and CSV files");
    std::string rep_input, rep_out_dir = ".";
    rep->add_option("--input", rep_input, "result JSON produced by another subcommand")
        ->required();
    rep->add_option("--out-dir", rep_out_dir, "directory for CSV tables")->default_val(".");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return kExitUsage;
    }

    try {
        if (sim->parsed()) {
            detail::finalize_common(sim, sim_opt, sim_kind, sim_method, sim_mode, sim_degenerate);
            return detail::run_simulate(sim_opt, sim_sizes, sim_cons, sim_prefs, sim_likerts,
                                        sim_noises, sim_reps);
        }
        if (sen->parsed()) {
            detail::finalize_common(sen, sen_opt, sen_kind, sen_method, sen_mode, sen_degenerate);
            return detail::run_sensitivity(sen_opt, sen_taus, sen_sizes, sen_cons, sen_prefs,
                                           sen_likerts, sen_noises, sen_reps);
        }
        if (cmp->parsed()) {
            detail::finalize_common(cmp, cmp_opt, cmp_kind, cmp_method, cmp_mode, cmp_degenerate);
            return detail::run_compute(cmp_opt, cmp_input, cmp_likert, cmp_bootstrap, cmp_splits);
        }
        if (rep->parsed()) return detail::run_report(rep_input, rep_out_dir);
        std::cerr << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ComputationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitComputation;
    }
}

}  // namespace dri
