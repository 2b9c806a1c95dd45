#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dri/dataset.hpp"
#include "dri/experiments.hpp"
#include "dri/grid.hpp"
#include "dri/index.hpp"
#include "dri/rng.hpp"

namespace dri {

/// A deliberative case: responses before and after deliberation. Waves must
/// share the instrument (C, P, Likert format); respondent counts may differ.
struct CaseData {
    std::string name;
    ResponseDataset pre;
    ResponseDataset post;

    void validate() const {
        pre.validate(name + ": pre wave");
        post.validate(name + ": post wave");
        if (pre.considerations() != post.considerations() ||
            pre.preferences() != post.preferences() || pre.likert_max != post.likert_max)
            throw ValidationError(name + ": pre and post waves must share C, P, and likert_max");
    }
};

/// Pre/post DRI under both formulas, their deltas, and the between-formula
/// gaps ("delta indexes"). Significance stars are attached per delta by the
/// bootstrap; empty until then.
struct CaseReport {
    std::string name;
    int n = 0;  // pre-wave respondent count
    double dri_pre_standard = 0.0;
    double dri_post_standard = 0.0;
    double delta_standard = 0.0;
    double dri_pre_modified = 0.0;
    double dri_post_modified = 0.0;
    double delta_modified = 0.0;
    double delta_indexes_pre = 0.0;   // modified − standard at pre
    double delta_indexes_post = 0.0;  // modified − standard at post
    std::string significance_standard;
    std::string significance_modified;
};

namespace detail {

inline constexpr std::uint64_t kTagBootstrap = 3;
inline constexpr std::uint64_t kTagStability = 4;

/// Split one wave in half and score it under both formulas on the same grid.
inline std::pair<double, double> score_wave(const ResponseDataset& wave, const DriConfig& config,
                                            std::uint64_t split_seed) {
    const auto [half_a, half_b] = split_half(wave, split_seed);
    const CorrelationGrid grid =
        pair_grid(half_a.ratings, half_a.rankings, half_b.ratings, half_b.rankings,
                  config.correlation_kind, config.degenerate_policy);
    DriConfig cfg = config;
    cfg.method = Method::standard;
    const double standard = dri(grid, cfg).value;
    cfg.method = Method::modified;
    return {standard, dri(grid, cfg).value};
}

inline void require_even_wave(const ResponseDataset& wave, const std::string& label) {
    if (wave.n() % 2 != 0 || wave.n() < 6)
        throw std::invalid_argument(label + " wave needs an even respondent count >= 6 for "
                                    "split-half, got " + std::to_string(wave.n()));
}

}  // namespace detail

/// Score a case: each wave is split-half with the *same* split seed (so
/// identical waves produce identical splits and exactly-zero deltas), and
/// standard/modified are computed on identical grids within a wave.
inline CaseReport compute_case(const CaseData& data, const DriConfig& config,
                               std::uint64_t split_seed) {
    data.validate();
    config.validate();
    detail::require_even_wave(data.pre, data.name + ": pre");
    detail::require_even_wave(data.post, data.name + ": post");

    const auto [pre_std, pre_mod] = detail::score_wave(data.pre, config, split_seed);
    const auto [post_std, post_mod] = detail::score_wave(data.post, config, split_seed);

    CaseReport report;
    report.name = data.name;
    report.n = static_cast<int>(data.pre.n());
    report.dri_pre_standard = pre_std;
    report.dri_post_standard = post_std;
    report.delta_standard = post_std - pre_std;
    report.dri_pre_modified = pre_mod;
    report.dri_post_modified = post_mod;
    report.delta_modified = post_mod - pre_mod;
    report.delta_indexes_pre = pre_mod - pre_std;
    report.delta_indexes_post = post_mod - post_std;
    return report;
}

/// Percentile-bootstrap summary of one delta.
struct BootstrapResult {
    double delta = 0.0;   // observed post − pre
    double ci_lo = 0.0;   // 2.5% percentile of the bootstrap distribution
    double ci_hi = 0.0;   // 97.5% percentile
    double p_value = 1.0; // two-sided, add-one estimator
    std::string stars;    // ^ (ns), *, **, ***
    int resamples = 0;
};

/// Both formulas' bootstrap results, computed on shared resamples.
struct BootstrapPair {
    BootstrapResult standard;
    BootstrapResult modified;
};

namespace detail {

inline double type7_quantile(std::vector<double> sorted, double q) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
}

inline BootstrapResult summarize_bootstrap(double observed_delta, std::vector<double> deltas) {
    BootstrapResult r;
    r.delta = observed_delta;
    r.resamples = static_cast<int>(deltas.size());

    long n_le = 0, n_ge = 0;
    for (const double d : deltas) {
        if (d <= 0.0) ++n_le;
        if (d >= 0.0) ++n_ge;
    }
    const double b = static_cast<double>(deltas.size());
    r.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(n_le, n_ge) + 1) / (b + 1.0));
    r.stars = r.p_value < 0.001 ? "***" : r.p_value < 0.01 ? "**" : r.p_value < 0.05 ? "*" : "^";

    std::sort(deltas.begin(), deltas.end());
    r.ci_lo = type7_quantile(deltas, 0.025);
    r.ci_hi = type7_quantile(std::move(deltas), 0.975);
    return r;
}

/// Resample a wave's respondents with replacement (same n), preserving rows.
inline ResponseDataset resample_rows(const ResponseDataset& ds, Rng& rng) {
    ResponseDataset out;
    out.likert_max = ds.likert_max;
    out.ratings = IntMatrix(ds.ratings.rows, ds.ratings.cols);
    out.rankings = IntMatrix(ds.rankings.rows, ds.rankings.cols);
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const auto src = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(ds.n()) - 1));
        for (std::size_t c = 0; c < ds.ratings.cols; ++c) out.ratings.at(i, c) = ds.ratings.at(src, c);
        for (std::size_t p = 0; p < ds.rankings.cols; ++p)
            out.rankings.at(i, p) = ds.rankings.at(src, p);
    }
    return out;
}

}  // namespace detail

/// Percentile bootstrap for the pre-to-post change: respondents are the
/// sampling units, resampled with replacement independently per wave; each
/// resample is re-split and re-scored under both formulas (shared resamples,
/// so the two formulas' results are paired). Two-sided p uses the add-one
/// estimator p = min(1, 2·min(#{Δ*≤0}, #{Δ*≥0} + 1 each)/(B+1)); stars:
/// ^ p ≥ 0.05, * < 0.05, ** < 0.01, *** < 0.001. Deterministic in
/// (case, config, B, seed) regardless of `threads`.
inline BootstrapPair bootstrap_delta(const CaseData& data, const DriConfig& config, int B,
                                     std::uint64_t seed, int threads = 1) {
    if (B < 100) throw std::invalid_argument("bootstrap needs B >= 100, got " + std::to_string(B));
    data.validate();
    config.validate();
    detail::require_even_wave(data.pre, data.name + ": pre");
    detail::require_even_wave(data.post, data.name + ": post");

    // Observed deltas use the seed itself as the split seed, matching the
    // compute_case call the CLI pairs this with.
    const auto [pre_std, pre_mod] = detail::score_wave(data.pre, config, seed);
    const auto [post_std, post_mod] = detail::score_wave(data.post, config, seed);

    std::vector<double> deltas_std(static_cast<std::size_t>(B));
    std::vector<double> deltas_mod(static_cast<std::size_t>(B));
    parallel_for(B, threads, [&](int b) {
        const std::uint64_t sub =
            derive_seed(seed, {static_cast<std::uint64_t>(b), detail::kTagBootstrap});
        Rng rng(sub);
        const ResponseDataset pre_rs = detail::resample_rows(data.pre, rng);
        const ResponseDataset post_rs = detail::resample_rows(data.post, rng);
        const std::uint64_t resplit = derive_seed(sub, {detail::kTagSplit});
        const auto [ps, pm] = detail::score_wave(pre_rs, config, resplit);
        const auto [qs, qm] = detail::score_wave(post_rs, config, resplit);
        deltas_std[static_cast<std::size_t>(b)] = qs - ps;
        deltas_mod[static_cast<std::size_t>(b)] = qm - pm;
    });

    return {detail::summarize_bootstrap(post_std - pre_std, std::move(deltas_std)),
            detail::summarize_bootstrap(post_mod - pre_mod, std::move(deltas_mod))};
}

/// Across-split variability of a case's scores: sd over k different split
/// seeds, disclosed so users see split-half variance the point numbers hide.
struct SplitStability {
    int splits = 0;
    double sd_pre_standard = 0.0;
    double sd_post_standard = 0.0;
    double sd_delta_standard = 0.0;
    double sd_pre_modified = 0.0;
    double sd_post_modified = 0.0;
    double sd_delta_modified = 0.0;
};

inline SplitStability split_stability(const CaseData& data, const DriConfig& config,
                                      std::uint64_t base_seed, int k = 20) {
    if (k < 2) throw std::invalid_argument("split stability needs k >= 2, got " + std::to_string(k));
    data.validate();
    detail::require_even_wave(data.pre, data.name + ": pre");
    detail::require_even_wave(data.post, data.name + ": post");

    std::vector<double> pre_s, post_s, pre_m, post_m;
    for (int i = 0; i < k; ++i) {
        const std::uint64_t split_seed =
            derive_seed(base_seed, {static_cast<std::uint64_t>(i), detail::kTagStability});
        const auto [ps, pm] = detail::score_wave(data.pre, config, split_seed);
        const auto [qs, qm] = detail::score_wave(data.post, config, split_seed);
        pre_s.push_back(ps);
        post_s.push_back(qs);
        pre_m.push_back(pm);
        post_m.push_back(qm);
    }
    const auto sd_of = [](std::span<const double> v) {
        const double m = detail::mean_of(v);
        return detail::sample_sd(v, m);
    };
    std::vector<double> delta_s(pre_s.size()), delta_m(pre_s.size());
    for (std::size_t i = 0; i < pre_s.size(); ++i) {
        delta_s[i] = post_s[i] - pre_s[i];
        delta_m[i] = post_m[i] - pre_m[i];
    }
    SplitStability out;
    out.splits = k;
    out.sd_pre_standard = sd_of(pre_s);
    out.sd_post_standard = sd_of(post_s);
    out.sd_delta_standard = sd_of(delta_s);
    out.sd_pre_modified = sd_of(pre_m);
    out.sd_post_modified = sd_of(post_m);
    out.sd_delta_modified = sd_of(delta_m);
    return out;
}

}  // namespace dri
