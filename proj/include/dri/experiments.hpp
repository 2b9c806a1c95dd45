#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dri/datagen.hpp"
#include "dri/dataset.hpp"
#include "dri/grid.hpp"
#include "dri/index.hpp"
#include "dri/rng.hpp"

namespace dri {

/// Operationalization of Table-style "Floor ≈ 0?": |noise floor| ≤ 0.15.
inline constexpr double kFloorNearZeroThreshold = 0.15;

/// Mean and sd of the index over the replications of one scenario cell.
struct ScenarioResult {
    DesignPoint design;   // includes the cell's noise level
    double tau = kDefaultTau;  // threshold in effect (the standard formula ignores it)
    Method formula = Method::standard;
    double mean_dri = 0.0;
    double sd_dri = 0.0;  // sample sd (n−1); 0 when reps == 1
    int reps = 0;
};

/// Per-τ evaluation record for the threshold sensitivity protocol.
struct ThresholdCriteria {
    double tau = 0.0;
    double discrimination = 0.0;  // mean modified DRI(noise=0) − (noise=1)
    double noise_floor = 0.0;     // mean modified DRI at noise=1
    double fidelity_gap = 0.0;    // |modified − standard| mean at noise=0
    bool floor_near_zero = false; // |noise_floor| ≤ 0.15
    bool monotone = false;        // mean modified DRI non-increasing across noise levels
};

/// Mean noise=1 floors per group size under every adjustment mode (plus the
/// standard formula), for side-by-side inspection in run reports.
struct FloorComparisonRow {
    int group_size = 0;
    double standard = 0.0;
    double as_printed = 0.0;
    double floor_referenced = 0.0;
    double unit_referenced = 0.0;
};

/// Run fn(0..count-1), possibly across threads. Work items must be independent;
/// callers write results into pre-sized per-index slots so scheduling cannot
/// affect output. Worker exceptions are rethrown on the calling thread.
inline void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads > count) threads = count;
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace detail {

// Stream tags keep a replication's generation and split draws independent.
inline constexpr std::uint64_t kTagGenerate = 1;
inline constexpr std::uint64_t kTagSplit = 2;

/// Sub-seed for one replication of one design cell. Depends only on the
/// replication's coordinates — never on τ, formula, thread count, or execution
/// order — so every τ/formula variant scores the *same* datasets (paired
/// design) and parallel runs are byte-reproducible.
inline std::uint64_t replication_seed(std::uint64_t master, const DesignPoint& d, int rep,
                                      std::uint64_t tag) {
    return derive_seed(master, {static_cast<std::uint64_t>(d.n),
                                static_cast<std::uint64_t>(d.considerations),
                                static_cast<std::uint64_t>(d.preferences),
                                static_cast<std::uint64_t>(d.likert_max),
                                static_cast<std::uint64_t>(std::llround(d.noise * 1e6)),
                                static_cast<std::uint64_t>(rep), tag});
}

inline double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_sd(std::span<const double> v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (const double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// A (τ, adjustment mode) variant of the modified index to score in a cell.
struct ModifiedVariant {
    double tau = kDefaultTau;
    AdjustmentMode mode = AdjustmentMode::floor_referenced;
};

/// Per-replication index values for one design cell: standard plus every
/// requested modified variant, all scored on identical correlation grids.
struct CellScores {
    std::vector<double> standard;               // [reps]
    std::vector<std::vector<double>> modified;  // [variants][reps]
};

/// Monte Carlo engine: generate, split, grid, and score `reps` replications of
/// one design cell. The standard and every modified variant are computed on
/// the same grid per replication. Deterministic in (design, variants, config,
/// master_seed) regardless of `threads`.
inline CellScores score_cell(const DesignPoint& design, std::span<const ModifiedVariant> variants,
                             const DriConfig& config, std::uint64_t master_seed, int reps,
                             int threads = 1) {
    if (reps < 1) throw std::invalid_argument("score_cell: reps must be >= 1");
    design.validate();
    config.validate();
    for (const ModifiedVariant& v : variants)
        if (!(v.tau > 0.0 && v.tau <= 1.0))
            throw std::invalid_argument("score_cell: tau must be in (0, 1], got " +
                                        std::to_string(v.tau));

    CellScores scores;
    scores.standard.resize(static_cast<std::size_t>(reps));
    scores.modified.assign(variants.size(), std::vector<double>(static_cast<std::size_t>(reps)));

    parallel_for(reps, threads, [&](int rep) {
        const ResponseDataset ds =
            generate_group(design, detail::replication_seed(master_seed, design, rep, detail::kTagGenerate));
        const auto [half_a, half_b] =
            split_half(ds, detail::replication_seed(master_seed, design, rep, detail::kTagSplit));
        const CorrelationGrid grid =
            pair_grid(half_a.ratings, half_a.rankings, half_b.ratings, half_b.rankings,
                      config.correlation_kind, config.degenerate_policy);

        DriConfig cfg = config;
        cfg.method = Method::standard;
        scores.standard[static_cast<std::size_t>(rep)] = dri(grid, cfg).value;

        cfg.method = Method::modified;
        for (std::size_t v = 0; v < variants.size(); ++v) {
            cfg.tau = variants[v].tau;
            cfg.adjustment_mode = variants[v].mode;
            scores.modified[v][static_cast<std::size_t>(rep)] = dri(grid, cfg).value;
        }
    });
    return scores;
}

/// Component A output: scenario means for both formulas over the design×noise
/// grid, plus the per-mode floor comparison at noise=1.
struct ComponentAResult {
    std::vector<ScenarioResult> scenarios;
    std::vector<FloorComparisonRow> floor_comparison;  // one row per group size
};

/// The paper-replication design grid for one group size: C ∈ {15,30,50} ×
/// P ∈ {4,10} × likert ∈ {5,7}, twelve designs, noise left at 0.
inline std::vector<DesignPoint> full_design_grid(int group_size) {
    std::vector<DesignPoint> designs;
    for (const int c : {15, 30, 50})
        for (const int p : {4, 10})
            for (const int l : {5, 7})
                designs.push_back({group_size, c, p, l, 0.0});
    return designs;
}

/// The threshold-sensitivity design grid: C × P at likert 5, six designs.
inline std::vector<DesignPoint> sensitivity_design_grid(int group_size) {
    std::vector<DesignPoint> designs;
    for (const int c : {15, 30, 50})
        for (const int p : {4, 10}) designs.push_back({group_size, c, p, 5, 0.0});
    return designs;
}

/// Component A: formula validation across the design grid. Every
/// (design, noise) cell is scored for both formulas on identical datasets;
/// scenario rows come out in (design, noise, standard-then-modified) order.
/// When noise_levels includes 1.0, the floor comparison additionally scores
/// the modified index under all three adjustment modes at noise=1, aggregated
/// per group size across designs.
inline ComponentAResult run_component_a(std::span<const DesignPoint> designs,
                                        std::span<const double> noise_levels, int reps,
                                        const DriConfig& config, std::uint64_t master_seed,
                                        int threads = 1) {
    if (designs.empty()) throw std::invalid_argument("run_component_a: designs must be non-empty");
    if (noise_levels.empty())
        throw std::invalid_argument("run_component_a: noise_levels must be non-empty");

    ComponentAResult result;

    // group size -> accumulators for the noise=1 floor comparison
    struct FloorAccum {
        double standard = 0.0, as_printed = 0.0, floor_referenced = 0.0, unit_referenced = 0.0;
        long count = 0;
    };
    std::vector<std::pair<int, FloorAccum>> floor_accums;  // keyed by group size, insertion order

    for (const DesignPoint& base : designs) {
        for (const double noise : noise_levels) {
            DesignPoint design = base;
            design.noise = noise;

            const bool compare_modes = noise == 1.0;
            std::vector<ModifiedVariant> variants{{config.tau, config.adjustment_mode}};
            if (compare_modes) {
                variants.push_back({config.tau, AdjustmentMode::as_printed});
                variants.push_back({config.tau, AdjustmentMode::floor_referenced});
                variants.push_back({config.tau, AdjustmentMode::unit_referenced});
            }

            const CellScores scores = score_cell(design, variants, config, master_seed, reps, threads);

            const double std_mean = detail::mean_of(scores.standard);
            result.scenarios.push_back({design, config.tau, Method::standard, std_mean,
                                        detail::sample_sd(scores.standard, std_mean), reps});
            const double mod_mean = detail::mean_of(scores.modified[0]);
            result.scenarios.push_back({design, config.tau, Method::modified, mod_mean,
                                        detail::sample_sd(scores.modified[0], mod_mean), reps});

            if (compare_modes) {
                FloorAccum* accum = nullptr;
                for (auto& [size, acc] : floor_accums)
                    if (size == design.n) accum = &acc;
                if (!accum) {
                    floor_accums.emplace_back(design.n, FloorAccum{});
                    accum = &floor_accums.back().second;
                }
                for (int rep = 0; rep < reps; ++rep) {
                    accum->standard += scores.standard[static_cast<std::size_t>(rep)];
                    accum->as_printed += scores.modified[1][static_cast<std::size_t>(rep)];
                    accum->floor_referenced += scores.modified[2][static_cast<std::size_t>(rep)];
                    accum->unit_referenced += scores.modified[3][static_cast<std::size_t>(rep)];
                    ++accum->count;
                }
            }
        }
    }

    for (const auto& [size, acc] : floor_accums) {
        const double k = static_cast<double>(acc.count);
        result.floor_comparison.push_back({size, acc.standard / k, acc.as_printed / k,
                                           acc.floor_referenced / k, acc.unit_referenced / k});
    }
    return result;
}

/// Recompute per-τ criteria from scenario rows. Used both to build Component B
/// results and to audit stored ones; every field is a pure function of the
/// scenario aggregates, so the audit can demand exact equality.
inline std::vector<ThresholdCriteria> criteria_from_scenarios(std::span<const ScenarioResult> scenarios) {
    std::vector<double> taus;
    std::vector<double> noises;
    for (const ScenarioResult& s : scenarios) {
        bool seen_tau = false;
        for (const double t : taus) seen_tau = seen_tau || t == s.tau;
        if (!seen_tau) taus.push_back(s.tau);
        bool seen_noise = false;
        for (const double nl : noises) seen_noise = seen_noise || nl == s.design.noise;
        if (!seen_noise) noises.push_back(s.design.noise);
    }
    std::sort(taus.begin(), taus.end());
    std::sort(noises.begin(), noises.end());
    if (noises.empty() || noises.front() != 0.0 || noises.back() != 1.0)
        throw std::invalid_argument("criteria need scenarios at noise 0 and noise 1");

    // Mean over the scenario rows matching (tau, noise, formula), in row order.
    const auto cell_mean = [&](double tau, double noise, Method formula) {
        double sum = 0.0;
        int count = 0;
        for (const ScenarioResult& s : scenarios)
            if (s.tau == tau && s.design.noise == noise && s.formula == formula) {
                sum += s.mean_dri;
                ++count;
            }
        if (count == 0)
            throw std::invalid_argument("criteria: no scenario rows at tau=" + std::to_string(tau) +
                                        ", noise=" + std::to_string(noise));
        return sum / static_cast<double>(count);
    };

    std::vector<ThresholdCriteria> criteria;
    criteria.reserve(taus.size());
    for (const double tau : taus) {
        ThresholdCriteria c;
        c.tau = tau;
        const double mod0 = cell_mean(tau, 0.0, Method::modified);
        const double mod1 = cell_mean(tau, 1.0, Method::modified);
        const double std0 = cell_mean(tau, 0.0, Method::standard);
        c.discrimination = mod0 - mod1;
        c.noise_floor = mod1;
        c.fidelity_gap = std::abs(mod0 - std0);
        c.floor_near_zero = std::abs(c.noise_floor) <= kFloorNearZeroThreshold;
        c.monotone = true;
        double prev = mod0;
        for (std::size_t i = 1; i < noises.size(); ++i) {
            const double cur = cell_mean(tau, noises[i], Method::modified);
            if (cur > prev) c.monotone = false;
            prev = cur;
        }
        criteria.push_back(c);
    }
    return criteria;
}

/// Component B output: the τ×design×noise scenario rows and per-τ criteria.
struct ComponentBResult {
    std::vector<ScenarioResult> scenarios;
    std::vector<ThresholdCriteria> criteria;  // ordered by τ
};

/// Component B: threshold sensitivity. Replication sub-seeds exclude τ, so all
/// τ blocks score the same datasets and criteria differences are pure penalty
/// effects. Scenario rows are ordered (τ, design, noise, standard-then-modified);
/// the standard rows repeat identically across τ blocks by construction.
inline ComponentBResult run_component_b(std::span<const double> taus,
                                        std::span<const DesignPoint> designs,
                                        std::span<const double> noise_levels, int reps,
                                        const DriConfig& config, std::uint64_t master_seed,
                                        int threads = 1) {
    if (taus.empty()) throw std::invalid_argument("run_component_b: taus must be non-empty");
    if (designs.empty()) throw std::invalid_argument("run_component_b: designs must be non-empty");

    std::vector<ModifiedVariant> variants;
    variants.reserve(taus.size());
    for (const double t : taus) variants.push_back({t, config.adjustment_mode});

    // Score each (design, noise) cell once for all τ...
    std::vector<std::vector<ScenarioResult>> per_tau_rows(taus.size());
    for (const DesignPoint& base : designs) {
        for (const double noise : noise_levels) {
            DesignPoint design = base;
            design.noise = noise;
            const CellScores scores = score_cell(design, variants, config, master_seed, reps, threads);
            const double std_mean = detail::mean_of(scores.standard);
            const double std_sd = detail::sample_sd(scores.standard, std_mean);
            for (std::size_t t = 0; t < taus.size(); ++t) {
                per_tau_rows[t].push_back({design, taus[t], Method::standard, std_mean, std_sd, reps});
                const double mod_mean = detail::mean_of(scores.modified[t]);
                per_tau_rows[t].push_back({design, taus[t], Method::modified, mod_mean,
                                           detail::sample_sd(scores.modified[t], mod_mean), reps});
            }
        }
    }

    // ...then emit τ-major blocks.
    ComponentBResult result;
    for (std::size_t t = 0; t < taus.size(); ++t)
        result.scenarios.insert(result.scenarios.end(), per_tau_rows[t].begin(), per_tau_rows[t].end());
    result.criteria = criteria_from_scenarios(result.scenarios);
    return result;
}

/// True when stored criteria exactly match a recomputation from the scenario
/// rows (field-for-field, bitwise on doubles).
inline bool audit_criteria(std::span<const ScenarioResult> scenarios,
                           std::span<const ThresholdCriteria> criteria) {
    const std::vector<ThresholdCriteria> recomputed = criteria_from_scenarios(scenarios);
    if (recomputed.size() != criteria.size()) return false;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const ThresholdCriteria& a = criteria[i];
        const ThresholdCriteria& b = recomputed[i];
        if (a.tau != b.tau || a.discrimination != b.discrimination ||
            a.noise_floor != b.noise_floor || a.fidelity_gap != b.fidelity_gap ||
            a.floor_near_zero != b.floor_near_zero || a.monotone != b.monotone)
            return false;
    }
    return true;
}

/// Noise-floor spread at noise=1 grouped by (formula, group size).
struct InvarianceRow {
    Method formula = Method::standard;
    int group_size = 0;
    double min_floor = 0.0;
    double max_floor = 0.0;
    double range = 0.0;
    int designs = 0;
};

/// Summarize how stable the noise floor is across instrument designs (C, P,
/// Likert format) at fixed group size. Requires ≥ 2 distinct designs per group.
inline std::vector<InvarianceRow> design_invariance_summary(std::span<const ScenarioResult> scenarios) {
    std::vector<InvarianceRow> rows;
    std::vector<std::vector<std::array<int, 3>>> seen_designs;  // parallel to rows
    for (const ScenarioResult& s : scenarios) {
        if (s.design.noise != 1.0) continue;
        std::size_t idx = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].formula == s.formula && rows[i].group_size == s.design.n) idx = i;
        if (idx == rows.size()) {
            rows.push_back({s.formula, s.design.n, s.mean_dri, s.mean_dri, 0.0, 0});
            seen_designs.emplace_back();
        }
        InvarianceRow& row = rows[idx];
        row.min_floor = std::min(row.min_floor, s.mean_dri);
        row.max_floor = std::max(row.max_floor, s.mean_dri);
        const std::array<int, 3> key{s.design.considerations, s.design.preferences,
                                     s.design.likert_max};
        bool seen = false;
        for (const auto& k : seen_designs[idx]) seen = seen || k == key;
        if (!seen) {
            seen_designs[idx].push_back(key);
            ++row.designs;
        }
    }
    if (rows.empty())
        throw std::invalid_argument("design invariance summary needs noise=1 scenarios");
    for (InvarianceRow& r : rows) {
        if (r.designs < 2)
            throw std::invalid_argument("design invariance summary needs >= 2 designs per group "
                                        "size (group " + std::to_string(r.group_size) + " has " +
                                        std::to_string(r.designs) + ")");
        r.range = r.max_floor - r.min_floor;
    }
    std::sort(rows.begin(), rows.end(), [](const InvarianceRow& a, const InvarianceRow& b) {
        if (a.formula != b.formula) return a.formula == Method::standard;
        return a.group_size < b.group_size;
    });
    return rows;
}

}  // namespace dri
