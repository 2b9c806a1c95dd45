#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dri/correlation.hpp"
#include "dri/grid.hpp"

namespace dri {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kDefaultLambda = 0.7071067811865476;  // 1/sqrt(2)
inline constexpr double kDefaultTau = 0.2;

enum class Method { standard, modified };

inline const char* to_string(Method m) { return m == Method::standard ? "standard" : "modified"; }

inline Method method_from_string(const std::string& s) {
    if (s == "standard") return Method::standard;
    if (s == "modified") return Method::modified;
    throw std::invalid_argument("unknown method: " + s);
}

/// How a low-signal pair's distance is adjusted by the penalty weight w:
///   as-printed       d* = d·w                 (shrinks distances; raises the index)
///   floor-referenced d* = w·d + (1−w)·λ       (blends toward the λ anchor, i.e.
///                                              per-pair consistency toward −1;
///                                              lowers the index)
///   unit-referenced  d* = w·d + (1−w)·1       (blends toward unit distance;
///                                              lowers the index more steeply)
/// Direction guarantees: as-printed ≥ standard always; the two blended modes
/// are ≤ standard whenever penalized distances stay below their anchor, i.e.
/// for τ ≤ λ/√2 (= 0.5 at the default λ) and τ ≤ 1/√2 respectively — every τ
/// in the supported sweep range satisfies both.
enum class AdjustmentMode { as_printed, floor_referenced, unit_referenced };

inline const char* to_string(AdjustmentMode m) {
    switch (m) {
        case AdjustmentMode::as_printed: return "as-printed";
        case AdjustmentMode::floor_referenced: return "floor-referenced";
        default: return "unit-referenced";
    }
}

inline AdjustmentMode adjustment_mode_from_string(const std::string& s) {
    if (s == "as-printed") return AdjustmentMode::as_printed;
    if (s == "floor-referenced") return AdjustmentMode::floor_referenced;
    if (s == "unit-referenced") return AdjustmentMode::unit_referenced;
    throw std::invalid_argument("unknown adjustment mode: " + s);
}

/// All parameters of an index computation.
struct DriConfig {
    CorrelationKind correlation_kind = CorrelationKind::spearman_midrank;
    double tau = kDefaultTau;        // low-signal threshold, in (0, 1]
    double lambda = kDefaultLambda;  // scale constant, > 0
    Method method = Method::modified;
    AdjustmentMode adjustment_mode = AdjustmentMode::floor_referenced;
    DegeneratePolicy degenerate_policy = DegeneratePolicy::exclude_pair;

    void validate() const {
        if (!(tau > 0.0 && tau <= 1.0))
            throw std::invalid_argument("tau must be in (0, 1], got " + std::to_string(tau));
        if (!(lambda > 0.0))
            throw std::invalid_argument("lambda must be positive, got " + std::to_string(lambda));
    }
};

/// Index value plus the diagnostics needed to audit it: the stored value
/// always equals (−2·mean_adjusted_distance + λ)/λ for the λ used.
struct DriResult {
    double value = 0.0;
    double mean_adjusted_distance = 0.0;
    int n_pairs_total = 0;
    int n_pairs_valid = 0;
    int n_pairs_penalized = 0;  // valid pairs with penalty weight < 1
    double mean_penalty = 1.0;  // mean weight over valid pairs (1 under standard)
};

/// Perpendicular distance from (r, q) to the identity line r = q.
inline double orthogonal_distance(double r, double q) { return std::abs(r - q) / kSqrt2; }

/// Low-signal penalty: rises linearly from 0 at the origin to 1 at
/// max(|r|,|q|) = τ, and stays 1 above; continuous at the threshold.
inline double penalty_weight(double r, double q, double tau) {
    const double m = std::max(std::abs(r), std::abs(q));
    return m <= tau ? m / tau : 1.0;
}

/// Apply the penalty weight to a distance under the chosen mode.
inline double adjusted_distance(double d, double weight, AdjustmentMode mode, double lambda) {
    switch (mode) {
        case AdjustmentMode::as_printed: return d * weight;
        case AdjustmentMode::floor_referenced: return weight * d + (1.0 - weight) * lambda;
        default: return weight * d + (1.0 - weight) * 1.0;  // unit-referenced
    }
}

/// The Deliberative Reason Index of a correlation grid:
///   DRI = (−2·d̄* + λ)/λ
/// where d̄* is the mean (adjusted) orthogonal distance over valid pairs.
/// Under method=standard, d* = d. Under method=modified, each pair's distance
/// passes through the penalty first. Accumulation is a fixed left-to-right pass
/// in row-major (c,p) order, so results are bit-reproducible for a given grid.
inline DriResult dri(const CorrelationGrid& grid, const DriConfig& config) {
    config.validate();

    double sum_dstar = 0.0;
    double sum_weight = 0.0;
    int n_valid = 0;
    int n_penalized = 0;

    for (const CorrelationPair& pair : grid.pairs) {
        if (!pair.valid) continue;
        const double d = orthogonal_distance(pair.r, pair.q);
        double w = 1.0;
        double dstar = d;
        if (config.method == Method::modified) {
            w = penalty_weight(pair.r, pair.q, config.tau);
            dstar = adjusted_distance(d, w, config.adjustment_mode, config.lambda);
            if (w < 1.0) ++n_penalized;
        }
        sum_dstar += dstar;
        sum_weight += w;
        ++n_valid;
    }

    if (n_valid == 0) throw ComputationError("no usable correlation pairs");

    DriResult result;
    result.n_pairs_total = static_cast<int>(grid.pairs.size());
    result.n_pairs_valid = n_valid;
    result.n_pairs_penalized = (config.method == Method::modified) ? n_penalized : 0;
    result.mean_adjusted_distance = sum_dstar / static_cast<double>(n_valid);
    result.mean_penalty = (config.method == Method::modified)
                              ? sum_weight / static_cast<double>(n_valid)
                              : 1.0;
    result.value = (-2.0 * result.mean_adjusted_distance + config.lambda) / config.lambda;
    return result;
}

}  // namespace dri
