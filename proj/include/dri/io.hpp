#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dri/common.hpp"
#include "dri/empirical.hpp"
#include "dri/experiments.hpp"
#include "dri/index.hpp"

namespace dri {

// ---------------------------------------------------------------------------
// Numeric formatting
// ---------------------------------------------------------------------------

/// Fixed 6-decimal rendering used for every floating-point value we emit.
/// Normalizes -0 and rejects non-finite values (which would indicate an
/// upstream bug, not a formatting problem).
inline std::string format_fixed(double v) {
    if (!std::isfinite(v)) throw ComputationError("attempted to emit a non-finite value");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

/// Shorter fixed rendering for the human-readable tables (2 or 3 decimals,
/// matching the precision the comparison tables are printed at).
inline std::string format_short(double v, int decimals) {
    if (!std::isfinite(v)) throw ComputationError("attempted to emit a non-finite value");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    if (s == "-0.00" || s == "-0.000") s = s.substr(1);
    return s;
}

// ---------------------------------------------------------------------------
// JSON writer
// ---------------------------------------------------------------------------

/// Minimal ordered JSON writer. Keys appear exactly in emission order and all
/// doubles go through format_fixed, so a given result structure always
/// serializes to identical bytes — the foundation of the reproducibility
/// contract (same seed -> byte-identical output, any thread count).
class JsonWriter {
public:
    std::string take() && { return std::move(out_); }

    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& name) {
        comma_if_needed();
        indent();
        out_ += '"';
        escape(name);
        out_ += "\": ";
        pending_value_ = true;
    }

    void value(const std::string& s) {
        lead();
        out_ += '"';
        escape(s);
        out_ += '"';
        mark();
    }
    void value(const char* s) { value(std::string(s)); }
    void value(double v) {
        lead();
        out_ += format_fixed(v);
        mark();
    }
    void value(int v) {
        lead();
        out_ += std::to_string(v);
        mark();
    }
    void value(long v) {
        lead();
        out_ += std::to_string(v);
        mark();
    }
    void value(std::uint64_t v) {
        lead();
        out_ += std::to_string(v);
        mark();
    }
    void value(bool v) {
        lead();
        out_ += v ? "true" : "false";
        mark();
    }
    void value_null() {
        lead();
        out_ += "null";
        mark();
    }

    template <typename T>
    void field(const std::string& name, const T& v) {
        key(name);
        value(v);
    }

private:
    struct Level {
        bool has_items = false;
    };

    void open(char c) {
        lead();
        out_ += c;
        levels_.push_back({});
    }
    void close(char c) {
        const bool had = levels_.back().has_items;
        levels_.pop_back();
        if (had) {
            out_ += '\n';
            indent_raw();
        }
        out_ += c;
        mark();
    }
    void lead() {
        if (!pending_value_) {
            comma_if_needed();
            indent();
        }
        pending_value_ = false;
    }
    void comma_if_needed() {
        if (!levels_.empty()) {
            if (levels_.back().has_items) out_ += ',';
            out_ += '\n';
        }
    }
    void indent() { indent_raw(); }
    void indent_raw() { out_.append(levels_.size() * 2, ' '); }
    void mark() {
        if (!levels_.empty()) levels_.back().has_items = true;
    }
    void escape(const std::string& s) {
        for (const char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                case '\r': out_ += "\\r"; break;
                default: out_ += c;
            }
        }
    }

    std::string out_;
    std::vector<Level> levels_;
    bool pending_value_ = false;
};

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

/// Everything needed to re-derive an output: the canonicalized command, the
/// full config, the master seed, and the artifact version. The timestamp is
/// empty unless explicitly requested, because identical runs must produce
/// identical bytes.
struct RunManifest {
    std::string command;
    DriConfig config;
    std::uint64_t master_seed = 0;
    std::string artifact_version = kVersion;
    std::string timestamp;
};

namespace detail {

inline void write_manifest(JsonWriter& w, const RunManifest& m) {
    w.key("manifest");
    w.begin_object();
    w.field("command", m.command);
    w.key("config");
    w.begin_object();
    w.field("correlation_kind", to_string(m.config.correlation_kind));
    w.field("tau", m.config.tau);
    w.field("lambda", m.config.lambda);
    w.field("method", to_string(m.config.method));
    w.field("adjustment_mode", to_string(m.config.adjustment_mode));
    w.field("degenerate_policy", to_string(m.config.degenerate_policy));
    w.end_object();
    w.field("master_seed", m.master_seed);
    w.field("artifact_version", m.artifact_version);
    w.field("timestamp", m.timestamp);
    w.end_object();
}

inline void write_design(JsonWriter& w, const DesignPoint& d) {
    w.begin_object();
    w.field("group_size", d.n);
    w.field("considerations", d.considerations);
    w.field("preferences", d.preferences);
    w.field("likert_max", d.likert_max);
    w.field("noise", d.noise);
    w.end_object();
}

inline void write_scenarios(JsonWriter& w, std::span<const ScenarioResult> scenarios) {
    w.key("scenarios");
    w.begin_array();
    for (const ScenarioResult& s : scenarios) {
        w.begin_object();
        w.field("formula", to_string(s.formula));
        w.field("tau", s.tau);
        w.key("design");
        write_design(w, s.design);
        w.field("mean_dri", s.mean_dri);
        w.field("sd_dri", s.sd_dri);
        w.field("reps", s.reps);
        w.end_object();
    }
    w.end_array();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Figure-1 aggregation
// ---------------------------------------------------------------------------

/// One plot-ready cell: mean/sd of the index for a formula at a group size and
/// noise level, aggregated across instrument designs.
struct Figure1Row {
    Method formula = Method::standard;
    int group_size = 0;
    double noise = 0.0;
    double mean_dri = 0.0;
    double sd_dri = 0.0;  // pooled across designs and replications
    int reps = 0;         // total replications aggregated
};

/// Aggregate scenario rows into Figure-1 cells, validating that every
/// (group size, noise) combination is present for both formulas. Rows are
/// sorted by (formula, group_size, noise) with formula alphabetical.
inline std::vector<Figure1Row> figure1_rows(std::span<const ScenarioResult> scenarios) {
    struct Accum {
        double sum_means = 0.0;      // Σ mean_i over designs
        double sum_ss = 0.0;         // Σ [(reps_i − 1)·sd_i² + reps_i·mean_i²]
        long total_reps = 0;
        int cells = 0;
    };
    struct KeyedAccum {
        Method formula;
        int group_size;
        double noise;
        Accum acc;
    };
    std::vector<KeyedAccum> accums;
    std::vector<std::pair<int, double>> combos;  // distinct (size, noise)

    for (const ScenarioResult& s : scenarios) {
        KeyedAccum* slot = nullptr;
        for (KeyedAccum& a : accums)
            if (a.formula == s.formula && a.group_size == s.design.n && a.noise == s.design.noise)
                slot = &a;
        if (!slot) {
            accums.push_back({s.formula, s.design.n, s.design.noise, {}});
            slot = &accums.back();
        }
        slot->acc.sum_means += s.mean_dri;
        slot->acc.sum_ss += (static_cast<double>(s.reps) - 1.0) * s.sd_dri * s.sd_dri +
                            static_cast<double>(s.reps) * s.mean_dri * s.mean_dri;
        slot->acc.total_reps += s.reps;
        slot->acc.cells += 1;

        bool seen = false;
        for (const auto& [size, noise] : combos)
            seen = seen || (size == s.design.n && noise == s.design.noise);
        if (!seen) combos.emplace_back(s.design.n, s.design.noise);
    }

    // Both formulas must cover every (size, noise) combination.
    std::string missing;
    for (const auto& [size, noise] : combos)
        for (const Method formula : {Method::modified, Method::standard}) {
            bool found = false;
            for (const KeyedAccum& a : accums)
                found = found ||
                        (a.formula == formula && a.group_size == size && a.noise == noise);
            if (!found)
                missing += std::string(missing.empty() ? "" : ", ") + to_string(formula) + "/" +
                           std::to_string(size) + "/" + format_short(noise, 2);
        }
    if (!missing.empty())
        throw ValidationError("figure1 data incomplete; missing cells: " + missing);
    if (combos.empty()) throw ValidationError("figure1 data incomplete; no scenario rows given");

    std::vector<Figure1Row> rows;
    rows.reserve(accums.size());
    for (const KeyedAccum& a : accums) {
        Figure1Row row;
        row.formula = a.formula;
        row.group_size = a.group_size;
        row.noise = a.noise;
        const double n = static_cast<double>(a.acc.total_reps);
        row.mean_dri = a.acc.sum_means / static_cast<double>(a.acc.cells);
        // Pooled sample variance from per-design moments (exact, order-fixed).
        const double grand_mean_pooled = row.mean_dri;  // designs share reps
        const double ss = a.acc.sum_ss - n * grand_mean_pooled * grand_mean_pooled;
        row.sd_dri = (a.acc.total_reps > 1) ? std::sqrt(std::max(0.0, ss / (n - 1.0))) : 0.0;
        row.reps = static_cast<int>(a.acc.total_reps);
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const Figure1Row& a, const Figure1Row& b) {
        const std::string fa = to_string(a.formula), fb = to_string(b.formula);
        if (fa != fb) return fa < fb;
        if (a.group_size != b.group_size) return a.group_size < b.group_size;
        return a.noise < b.noise;
    });
    return rows;
}

/// Plot-ready CSV: formula,group_size,noise,mean_dri,sd_dri,reps.
inline std::string emit_figure1_csv(std::span<const Figure1Row> rows) {
    std::string out = "formula,group_size,noise,mean_dri,sd_dri,reps\n";
    for (const Figure1Row& r : rows) {
        out += to_string(r.formula);
        out += ',' + std::to_string(r.group_size);
        out += ',' + format_fixed(r.noise);
        out += ',' + format_fixed(r.mean_dri);
        out += ',' + format_fixed(r.sd_dri);
        out += ',' + std::to_string(r.reps) + '\n';
    }
    return out;
}

/// The cli_io figure-1 operation: aggregate and emit in one step.
inline std::string emit_figure1_data(std::span<const ScenarioResult> scenarios) {
    const std::vector<Figure1Row> rows = figure1_rows(scenarios);
    return emit_figure1_csv(rows);
}

// ---------------------------------------------------------------------------
// CSV table emitters
// ---------------------------------------------------------------------------

inline std::string emit_scenarios_csv(std::span<const ScenarioResult> scenarios) {
    std::string out =
        "formula,tau,group_size,considerations,preferences,likert_max,noise,mean_dri,sd_dri,reps\n";
    for (const ScenarioResult& s : scenarios) {
        out += to_string(s.formula);
        out += ',' + format_fixed(s.tau);
        out += ',' + std::to_string(s.design.n);
        out += ',' + std::to_string(s.design.considerations);
        out += ',' + std::to_string(s.design.preferences);
        out += ',' + std::to_string(s.design.likert_max);
        out += ',' + format_fixed(s.design.noise);
        out += ',' + format_fixed(s.mean_dri);
        out += ',' + format_fixed(s.sd_dri);
        out += ',' + std::to_string(s.reps) + '\n';
    }
    return out;
}

inline std::string emit_criteria_csv(std::span<const ThresholdCriteria> criteria) {
    std::string out = "tau,discrimination,noise_floor,fidelity_gap,floor_near_zero,monotone\n";
    for (const ThresholdCriteria& c : criteria) {
        out += format_fixed(c.tau);
        out += ',' + format_fixed(c.discrimination);
        out += ',' + format_fixed(c.noise_floor);
        out += ',' + format_fixed(c.fidelity_gap);
        out += c.floor_near_zero ? ",true" : ",false";
        out += c.monotone ? ",true\n" : ",false\n";
    }
    return out;
}

inline std::string emit_invariance_csv(std::span<const InvarianceRow> rows) {
    std::string out = "formula,group_size,designs,min_floor,max_floor,range\n";
    for (const InvarianceRow& r : rows) {
        out += to_string(r.formula);
        out += ',' + std::to_string(r.group_size);
        out += ',' + std::to_string(r.designs);
        out += ',' + format_fixed(r.min_floor);
        out += ',' + format_fixed(r.max_floor);
        out += ',' + format_fixed(r.range) + '\n';
    }
    return out;
}

/// Published floor reference values, keyed by group size; used only for the
/// side-by-side inspection columns.
inline std::optional<double> published_standard_floor(int group_size) {
    if (group_size == 30) return 0.394;
    if (group_size == 100) return 0.677;
    return std::nullopt;
}
inline std::optional<double> published_modified_floor(int group_size) {
    if (group_size == 30) return 0.132;
    if (group_size == 100) return -0.094;
    return std::nullopt;
}

inline std::string emit_floor_comparison_csv(std::span<const FloorComparisonRow> rows) {
    std::string out =
        "group_size,standard,as_printed,floor_referenced,unit_referenced,published_standard,"
        "published_modified\n";
    for (const FloorComparisonRow& r : rows) {
        out += std::to_string(r.group_size);
        out += ',' + format_fixed(r.standard);
        out += ',' + format_fixed(r.as_printed);
        out += ',' + format_fixed(r.floor_referenced);
        out += ',' + format_fixed(r.unit_referenced);
        const auto ps = published_standard_floor(r.group_size);
        const auto pm = published_modified_floor(r.group_size);
        out += ',';
        if (ps) out += format_fixed(*ps);
        out += ',';
        if (pm) out += format_fixed(*pm);
        out += '\n';
    }
    return out;
}

inline std::string emit_case_csv(const CaseReport& r) {
    std::string out =
        "name,n,dri_pre_standard,dri_post_standard,delta_standard,significance_standard,"
        "dri_pre_modified,dri_post_modified,delta_modified,significance_modified,"
        "delta_indexes_pre,delta_indexes_post\n";
    out += r.name;
    out += ',' + std::to_string(r.n);
    out += ',' + format_fixed(r.dri_pre_standard);
    out += ',' + format_fixed(r.dri_post_standard);
    out += ',' + format_fixed(r.delta_standard);
    out += ',' + r.significance_standard;
    out += ',' + format_fixed(r.dri_pre_modified);
    out += ',' + format_fixed(r.dri_post_modified);
    out += ',' + format_fixed(r.delta_modified);
    out += ',' + r.significance_modified;
    out += ',' + format_fixed(r.delta_indexes_pre);
    out += ',' + format_fixed(r.delta_indexes_post) + '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Dataset CSV load/emit
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

inline int parse_int_field(const std::string& s, std::size_t line_no, const std::string& what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw ValidationError("line " + std::to_string(line_no) + ": " + what +
                              " is not an integer: '" + s + "'");
    }
    if (pos != s.size())
        throw ValidationError("line " + std::to_string(line_no) + ": " + what +
                              " is not an integer: '" + s + "'");
    return v;
}

struct ParsedHeader {
    bool has_wave = false;
    std::size_t n_cons = 0;
    std::size_t n_pref = 0;
};

inline ParsedHeader parse_header(const std::vector<std::string>& fields) {
    ParsedHeader h;
    std::size_t i = 0;
    if (fields.empty() || fields[0] != "respondent_id")
        throw ValidationError("line 1: header must start with 'respondent_id'");
    ++i;
    if (i < fields.size() && fields[i] == "wave") {
        h.has_wave = true;
        ++i;
    }
    while (i < fields.size() && fields[i] == "cons_" + std::to_string(h.n_cons + 1)) {
        ++h.n_cons;
        ++i;
    }
    if (h.n_cons == 0)
        throw ValidationError("line 1: expected 'cons_1' after " +
                              std::string(h.has_wave ? "'wave'" : "'respondent_id'") + ", got '" +
                              (i < fields.size() ? fields[i] : "") + "'");
    while (i < fields.size() && fields[i] == "pref_" + std::to_string(h.n_pref + 1)) {
        ++h.n_pref;
        ++i;
    }
    if (h.n_pref == 0)
        throw ValidationError("line 1: expected 'pref_1' after 'cons_" + std::to_string(h.n_cons) +
                              "', got '" + (i < fields.size() ? fields[i] : "") + "'");
    if (i != fields.size())
        throw ValidationError("line 1: unexpected trailing header column '" + fields[i] + "'");
    return h;
}

struct RawRow {
    std::string id;
    std::string wave;  // empty when no wave column
    std::vector<int> ratings;
    std::vector<int> rankings;
    std::size_t line_no = 0;
};

inline ResponseDataset assemble_dataset(std::span<const RawRow> rows, const ParsedHeader& h,
                                        int likert_max) {
    ResponseDataset ds;
    ds.likert_max = likert_max;
    ds.ratings = IntMatrix(rows.size(), h.n_cons);
    ds.rankings = IntMatrix(rows.size(), h.n_pref);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < h.n_cons; ++c) ds.ratings.at(i, c) = rows[i].ratings[c];
        for (std::size_t p = 0; p < h.n_pref; ++p) ds.rankings.at(i, p) = rows[i].rankings[p];
    }
    return ds;
}

inline void check_rows(std::span<const RawRow> rows, const ParsedHeader& h, int likert_max) {
    std::vector<bool> seen(h.n_pref);
    for (const RawRow& row : rows) {
        for (std::size_t c = 0; c < h.n_cons; ++c) {
            const int v = row.ratings[c];
            if (v < 1 || v > likert_max)
                throw ValidationError("respondent '" + row.id + "' (line " +
                                      std::to_string(row.line_no) + "): rating cons_" +
                                      std::to_string(c + 1) + " out of range [1," +
                                      std::to_string(likert_max) + "]: " + std::to_string(v));
        }
        seen.assign(h.n_pref, false);
        for (std::size_t p = 0; p < h.n_pref; ++p) {
            const int v = row.rankings[p];
            if (v < 1 || v > static_cast<int>(h.n_pref) || seen[static_cast<std::size_t>(v - 1)])
                throw ValidationError("respondent '" + row.id + "' (line " +
                                      std::to_string(row.line_no) +
                                      "): ranking row is not a permutation of 1.." +
                                      std::to_string(h.n_pref));
            seen[static_cast<std::size_t>(v - 1)] = true;
        }
    }
}

}  // namespace detail

/// Either a single dataset or a pre/post case, depending on the file schema.
using LoadedInput = std::variant<ResponseDataset, CaseData>;

/// Load the wide-form CSV schema:
///   respondent_id, [wave,] cons_1..cons_C, pref_1..pref_P
/// pref columns hold ranks (1 = most preferred). When a wave column with
/// values {pre, post} is present the result is a CaseData named after the file
/// stem. likert_override of 5 or 7 pins the Likert format; 0 infers it from
/// the observed maximum rating (≤5 → 5, ≤7 → 7).
inline LoadedInput load_dataset(const std::string& path, int likert_override = 0) {
    if (likert_override != 0 && likert_override != 5 && likert_override != 7)
        throw std::invalid_argument("likert override must be 5 or 7, got " +
                                    std::to_string(likert_override));
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);

    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty()) throw ValidationError("line 1: empty file: " + path);

    const detail::ParsedHeader header = detail::parse_header(detail::split_csv_line(lines[0]));
    const std::size_t expected_fields =
        1 + (header.has_wave ? 1 : 0) + header.n_cons + header.n_pref;

    std::vector<detail::RawRow> rows;
    int max_rating = 1;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;  // tolerate blank lines
        const std::vector<std::string> fields = detail::split_csv_line(lines[li]);
        if (fields.size() != expected_fields)
            throw ValidationError("line " + std::to_string(li + 1) + ": expected " +
                                  std::to_string(expected_fields) + " fields, got " +
                                  std::to_string(fields.size()));
        detail::RawRow row;
        row.line_no = li + 1;
        std::size_t f = 0;
        row.id = fields[f++];
        if (header.has_wave) {
            row.wave = fields[f++];
            if (row.wave != "pre" && row.wave != "post")
                throw ValidationError("line " + std::to_string(li + 1) +
                                      ": wave must be 'pre' or 'post', got '" + row.wave + "'");
        }
        for (std::size_t c = 0; c < header.n_cons; ++c) {
            row.ratings.push_back(
                detail::parse_int_field(fields[f++], li + 1, "cons_" + std::to_string(c + 1)));
            max_rating = std::max(max_rating, row.ratings.back());
        }
        for (std::size_t p = 0; p < header.n_pref; ++p)
            row.rankings.push_back(
                detail::parse_int_field(fields[f++], li + 1, "pref_" + std::to_string(p + 1)));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError("no data rows in " + path);

    int likert_max = likert_override;
    if (likert_max == 0) {
        if (max_rating <= 5) likert_max = 5;
        else if (max_rating <= 7) likert_max = 7;
        else
            throw ValidationError("ratings exceed 7 (max observed " + std::to_string(max_rating) +
                                  "); not a supported Likert format");
    }
    detail::check_rows(rows, header, likert_max);

    const std::string name = std::filesystem::path(path).stem().string();

    if (!header.has_wave) {
        ResponseDataset ds = detail::assemble_dataset(rows, header, likert_max);
        ds.validate(name);
        return ds;
    }

    std::vector<detail::RawRow> pre_rows, post_rows;
    for (detail::RawRow& r : rows)
        (r.wave == "pre" ? pre_rows : post_rows).push_back(std::move(r));
    if (pre_rows.empty() || post_rows.empty())
        throw ValidationError(name + ": a wave column needs both 'pre' and 'post' rows");
    CaseData data;
    data.name = name;
    data.pre = detail::assemble_dataset(pre_rows, header, likert_max);
    data.post = detail::assemble_dataset(post_rows, header, likert_max);
    data.validate();
    return data;
}

/// Emit a dataset in the load_dataset schema (respondent ids are 1..n).
/// load_dataset(emit_dataset(ds)) reproduces ds exactly.
inline std::string emit_dataset(const ResponseDataset& ds) {
    std::string out = "respondent_id";
    for (std::size_t c = 1; c <= ds.considerations(); ++c) out += ",cons_" + std::to_string(c);
    for (std::size_t p = 1; p <= ds.preferences(); ++p) out += ",pref_" + std::to_string(p);
    out += '\n';
    for (std::size_t i = 0; i < ds.n(); ++i) {
        out += std::to_string(i + 1);
        for (std::size_t c = 0; c < ds.considerations(); ++c)
            out += ',' + std::to_string(ds.ratings.at(i, c));
        for (std::size_t p = 0; p < ds.preferences(); ++p)
            out += ',' + std::to_string(ds.rankings.at(i, p));
        out += '\n';
    }
    return out;
}

/// Emit a case in the two-wave schema (wave column with pre then post rows).
inline std::string emit_case(const CaseData& data) {
    std::string out = "respondent_id,wave";
    for (std::size_t c = 1; c <= data.pre.considerations(); ++c) out += ",cons_" + std::to_string(c);
    for (std::size_t p = 1; p <= data.pre.preferences(); ++p) out += ",pref_" + std::to_string(p);
    out += '\n';
    const auto rows_of = [&](const ResponseDataset& ds, const char* wave) {
        std::string block;
        for (std::size_t i = 0; i < ds.n(); ++i) {
            block += std::to_string(i + 1);
            block += ',';
            block += wave;
            for (std::size_t c = 0; c < ds.considerations(); ++c)
                block += ',' + std::to_string(ds.ratings.at(i, c));
            for (std::size_t p = 0; p < ds.preferences(); ++p)
                block += ',' + std::to_string(ds.rankings.at(i, p));
            block += '\n';
        }
        return block;
    };
    out += rows_of(data.pre, "pre");
    out += rows_of(data.post, "post");
    return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON documents
// ---------------------------------------------------------------------------

/// Component A document: scenarios, plot-ready figure rows, design-invariance
/// summary, and the per-mode floor comparison.
inline std::string write_simulate_json(const RunManifest& manifest,
                                       std::span<const ScenarioResult> scenarios,
                                       std::span<const Figure1Row> figure1,
                                       std::span<const InvarianceRow> invariance,
                                       std::span<const FloorComparisonRow> floors) {
    JsonWriter w;
    w.begin_object();
    w.field("kind", "simulate");
    detail::write_manifest(w, manifest);
    detail::write_scenarios(w, scenarios);
    w.key("figure1");
    w.begin_array();
    for (const Figure1Row& r : figure1) {
        w.begin_object();
        w.field("formula", to_string(r.formula));
        w.field("group_size", r.group_size);
        w.field("noise", r.noise);
        w.field("mean_dri", r.mean_dri);
        w.field("sd_dri", r.sd_dri);
        w.field("reps", r.reps);
        w.end_object();
    }
    w.end_array();
    w.key("invariance");
    w.begin_array();
    for (const InvarianceRow& r : invariance) {
        w.begin_object();
        w.field("formula", to_string(r.formula));
        w.field("group_size", r.group_size);
        w.field("designs", r.designs);
        w.field("min_floor", r.min_floor);
        w.field("max_floor", r.max_floor);
        w.field("range", r.range);
        w.end_object();
    }
    w.end_array();
    w.key("floor_comparison");
    w.begin_array();
    for (const FloorComparisonRow& r : floors) {
        w.begin_object();
        w.field("group_size", r.group_size);
        w.field("standard", r.standard);
        w.field("as_printed", r.as_printed);
        w.field("floor_referenced", r.floor_referenced);
        w.field("unit_referenced", r.unit_referenced);
        w.key("published_standard");
        if (const auto v = published_standard_floor(r.group_size)) w.value(*v);
        else w.value_null();
        w.key("published_modified");
        if (const auto v = published_modified_floor(r.group_size)) w.value(*v);
        else w.value_null();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    std::string out = std::move(w).take();
    out += '\n';
    return out;
}

/// Component B document: τ-block scenarios plus the per-τ criteria table.
inline std::string write_sensitivity_json(const RunManifest& manifest,
                                          std::span<const ScenarioResult> scenarios,
                                          std::span<const ThresholdCriteria> criteria) {
    JsonWriter w;
    w.begin_object();
    w.field("kind", "sensitivity");
    detail::write_manifest(w, manifest);
    detail::write_scenarios(w, scenarios);
    w.key("criteria");
    w.begin_array();
    for (const ThresholdCriteria& c : criteria) {
        w.begin_object();
        w.field("tau", c.tau);
        w.field("discrimination", c.discrimination);
        w.field("noise_floor", c.noise_floor);
        w.field("fidelity_gap", c.fidelity_gap);
        w.field("floor_near_zero", c.floor_near_zero);
        w.field("monotone", c.monotone);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    std::string out = std::move(w).take();
    out += '\n';
    return out;
}

/// Empirical case document: the report, both bootstrap summaries, and the
/// split-stability disclosure.
inline std::string write_case_json(const RunManifest& manifest, const CaseReport& report,
                                   const BootstrapPair& bootstrap, const SplitStability& stability) {
    JsonWriter w;
    w.begin_object();
    w.field("kind", "case");
    detail::write_manifest(w, manifest);
    w.key("report");
    w.begin_object();
    w.field("name", report.name);
    w.field("n", report.n);
    w.field("dri_pre_standard", report.dri_pre_standard);
    w.field("dri_post_standard", report.dri_post_standard);
    w.field("delta_standard", report.delta_standard);
    w.field("dri_pre_modified", report.dri_pre_modified);
    w.field("dri_post_modified", report.dri_post_modified);
    w.field("delta_modified", report.delta_modified);
    w.field("delta_indexes_pre", report.delta_indexes_pre);
    w.field("delta_indexes_post", report.delta_indexes_post);
    w.field("significance_standard", report.significance_standard);
    w.field("significance_modified", report.significance_modified);
    w.end_object();
    const auto write_boot = [&](const char* key, const BootstrapResult& b) {
        w.key(key);
        w.begin_object();
        w.field("delta", b.delta);
        w.field("ci_lo", b.ci_lo);
        w.field("ci_hi", b.ci_hi);
        w.field("p_value", b.p_value);
        w.field("stars", b.stars);
        w.field("resamples", b.resamples);
        w.end_object();
    };
    w.key("bootstrap");
    w.begin_object();
    write_boot("standard", bootstrap.standard);
    write_boot("modified", bootstrap.modified);
    w.end_object();
    w.key("split_stability");
    w.begin_object();
    w.field("splits", stability.splits);
    w.field("sd_pre_standard", stability.sd_pre_standard);
    w.field("sd_post_standard", stability.sd_post_standard);
    w.field("sd_delta_standard", stability.sd_delta_standard);
    w.field("sd_pre_modified", stability.sd_pre_modified);
    w.field("sd_post_modified", stability.sd_post_modified);
    w.field("sd_delta_modified", stability.sd_delta_modified);
    w.end_object();
    w.end_object();
    std::string out = std::move(w).take();
    out += '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Human-readable tables (paper-precision views)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}
inline std::string lpad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace detail

/// Threshold-criteria table at the comparison precision (3 decimals).
inline std::string render_criteria_table(std::span<const ThresholdCriteria> criteria) {
    std::string out = "tau    discrimination  noise_floor  fidelity_gap  near_zero  monotone\n";
    for (const ThresholdCriteria& c : criteria) {
        out += detail::pad(format_short(c.tau, 2), 7);
        out += detail::lpad(format_short(c.discrimination, 3), 14);
        out += detail::lpad(format_short(c.noise_floor, 3), 13);
        out += detail::lpad(format_short(c.fidelity_gap, 3), 14);
        out += detail::lpad(c.floor_near_zero ? "yes" : "no", 11);
        out += detail::lpad(c.monotone ? "yes" : "no", 10);
        out += '\n';
    }
    return out;
}

/// Mean-DRI-by-noise table, one row per (formula, group size), 3 decimals.
inline std::string render_figure1_table(std::span<const Figure1Row> rows) {
    std::vector<double> noises;
    for (const Figure1Row& r : rows) {
        bool seen = false;
        for (const double n : noises) seen = seen || n == r.noise;
        if (!seen) noises.push_back(r.noise);
    }
    std::sort(noises.begin(), noises.end());
    std::string out = "formula   n    ";
    for (const double n : noises) out += detail::lpad("noise=" + format_short(n, 2), 12);
    out += '\n';
    std::vector<std::pair<std::string, int>> groups;
    for (const Figure1Row& r : rows) {
        const std::pair<std::string, int> g{to_string(r.formula), r.group_size};
        bool seen = false;
        for (const auto& have : groups) seen = seen || have == g;
        if (!seen) groups.push_back(g);
    }
    for (const auto& [formula, size] : groups) {
        out += detail::pad(formula, 10) + detail::pad(std::to_string(size), 5);
        for (const double n : noises) {
            std::string cell = "-";
            for (const Figure1Row& r : rows)
                if (to_string(r.formula) == formula && r.group_size == size && r.noise == n)
                    cell = format_short(r.mean_dri, 3);
            out += detail::lpad(cell, 12);
        }
        out += '\n';
    }
    return out;
}

/// Floor comparison at 3 decimals, published values alongside.
inline std::string render_floor_comparison_table(std::span<const FloorComparisonRow> rows) {
    std::string out =
        "n    standard  as-printed  floor-ref  unit-ref  published-std  published-mod\n";
    for (const FloorComparisonRow& r : rows) {
        out += detail::pad(std::to_string(r.group_size), 5);
        out += detail::lpad(format_short(r.standard, 3), 8);
        out += detail::lpad(format_short(r.as_printed, 3), 12);
        out += detail::lpad(format_short(r.floor_referenced, 3), 11);
        out += detail::lpad(format_short(r.unit_referenced, 3), 10);
        const auto ps = published_standard_floor(r.group_size);
        const auto pm = published_modified_floor(r.group_size);
        out += detail::lpad(ps ? format_short(*ps, 3) : "-", 15);
        out += detail::lpad(pm ? format_short(*pm, 3) : "-", 15);
        out += '\n';
    }
    return out;
}

/// Invariance table at 3 decimals.
inline std::string render_invariance_table(std::span<const InvarianceRow> rows) {
    std::string out = "formula   n    designs  min_floor  max_floor  range\n";
    for (const InvarianceRow& r : rows) {
        out += detail::pad(to_string(r.formula), 10);
        out += detail::pad(std::to_string(r.group_size), 5);
        out += detail::lpad(std::to_string(r.designs), 7);
        out += detail::lpad(format_short(r.min_floor, 3), 11);
        out += detail::lpad(format_short(r.max_floor, 3), 11);
        out += detail::lpad(format_short(r.range, 3), 7);
        out += '\n';
    }
    return out;
}

/// Pre/post case table at the published 2-decimal precision, stars attached
/// to the deltas.
inline std::string render_case_table(const CaseReport& r) {
    std::string out =
        "case            n    formula   pre      post     delta        index_gap_pre  index_gap_post\n";
    const auto row = [&](const char* formula, double pre, double post, double delta,
                         const std::string& stars) {
        std::string line = detail::pad(r.name, 16) + detail::pad(std::to_string(r.n), 5);
        line += detail::pad(formula, 10);
        line += detail::pad(format_short(pre, 2), 9);
        line += detail::pad(format_short(post, 2), 9);
        line += detail::pad(format_short(delta, 2) + stars, 13);
        line += detail::lpad(format_short(r.delta_indexes_pre, 2), 13);
        line += detail::lpad(format_short(r.delta_indexes_post, 2), 16);
        return line + '\n';
    };
    out += row("standard", r.dri_pre_standard, r.dri_post_standard, r.delta_standard,
               r.significance_standard);
    out += row("modified", r.dri_pre_modified, r.dri_post_modified, r.delta_modified,
               r.significance_modified);
    return out;
}

}  // namespace dri
