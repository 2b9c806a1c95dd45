#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dri/ranking.hpp"

namespace dri {

enum class CorrelationKind { spearman_midrank, pearson };

inline const char* to_string(CorrelationKind k) {
    return k == CorrelationKind::spearman_midrank ? "spearman-midrank" : "pearson";
}

inline CorrelationKind correlation_kind_from_string(const std::string& s) {
    if (s == "spearman-midrank") return CorrelationKind::spearman_midrank;
    if (s == "pearson") return CorrelationKind::pearson;
    throw std::invalid_argument("unknown correlation kind: " + s);
}

/// Product-moment correlation, two-pass (means first, then centered sums).
/// Returns nullopt when either vector has zero variance — the correlation is
/// undefined there, and the caller's degenerate-pair policy decides what to do.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    // Rounding can push |r| epsilon past 1; clamp to the legal range.
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Correlation of two response vectors. spearman-midrank is the product-moment
/// correlation of midrank-transformed inputs; pearson works on raw values.
/// Undefined (nullopt) when either input has zero variance.
inline std::optional<double> correlate(std::span<const double> x, std::span<const double> y,
                                       CorrelationKind kind) {
    if (x.size() != y.size())
        throw std::invalid_argument("correlate: length mismatch (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()) + ")");
    if (x.size() < 3)
        throw std::invalid_argument("correlate: need at least 3 observations, got " +
                                    std::to_string(x.size()));
    if (kind == CorrelationKind::pearson) return pearson(x, y);
    const std::vector<double> rx = rank_with_midranks(x);
    const std::vector<double> ry = rank_with_midranks(y);
    return pearson(rx, ry);
}

}  // namespace dri
