#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dri/common.hpp"
#include "dri/correlation.hpp"

namespace dri {

/// How to treat a cell whose correlation is undefined (zero-variance column):
/// exclude-pair drops the cell from all aggregates; treat-as-zero records the
/// undefined correlation as 0 and keeps the cell.
enum class DegeneratePolicy { exclude_pair, treat_as_zero };

inline const char* to_string(DegeneratePolicy p) {
    return p == DegeneratePolicy::exclude_pair ? "exclude-pair" : "treat-as-zero";
}

inline DegeneratePolicy degenerate_policy_from_string(const std::string& s) {
    if (s == "exclude-pair") return DegeneratePolicy::exclude_pair;
    if (s == "treat-as-zero") return DegeneratePolicy::treat_as_zero;
    throw std::invalid_argument("unknown degenerate policy: " + s);
}

/// One consideration-preference cell: r from half/wave 1, q from half/wave 2.
/// When valid is false the pair is excluded from every aggregate and r/q carry
/// no meaning.
struct CorrelationPair {
    double r = 0.0;
    double q = 0.0;
    bool valid = false;
};

/// C×P grid of correlation pairs, row-major over (consideration, preference).
struct CorrelationGrid {
    int n_considerations = 0;  // C
    int n_preferences = 0;     // P
    std::vector<CorrelationPair> pairs;

    CorrelationGrid() = default;
    CorrelationGrid(int c, int p)
        : n_considerations(c), n_preferences(p),
          pairs(static_cast<std::size_t>(c) * static_cast<std::size_t>(p)) {}

    CorrelationPair& at(int c, int p) {
        return pairs[static_cast<std::size_t>(c) * static_cast<std::size_t>(n_preferences) +
                     static_cast<std::size_t>(p)];
    }
    const CorrelationPair& at(int c, int p) const {
        return pairs[static_cast<std::size_t>(c) * static_cast<std::size_t>(n_preferences) +
                     static_cast<std::size_t>(p)];
    }
};

namespace detail {

/// Column c of m as doubles, optionally midrank-transformed. Transforming each
/// column once up front keeps pair_grid O(n·(C+P) log n + C·P·n) and, because
/// the same pearson() then runs on the same transformed vectors, pair_grid is
/// bit-identical to calling correlate() per cell.
inline std::vector<double> column_as_double(const IntMatrix& m, std::size_t c) {
    std::vector<double> out(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) out[i] = static_cast<double>(m.at(i, c));
    return out;
}

inline std::vector<std::vector<double>> prepared_columns(const IntMatrix& m, CorrelationKind kind) {
    std::vector<std::vector<double>> cols(m.cols);
    for (std::size_t c = 0; c < m.cols; ++c) {
        std::vector<double> raw = column_as_double(m, c);
        cols[c] = (kind == CorrelationKind::spearman_midrank) ? rank_with_midranks(raw)
                                                              : std::move(raw);
    }
    return cols;
}

}  // namespace detail

/// Build the C×P correlation grid from two halves (or waves): cell (c,p) holds
/// r = correlate(ratings_a[:,c], prefs_a[:,p]) and q from the b half. An
/// undefined correlation marks the cell invalid under exclude-pair, or enters
/// as 0 under treat-as-zero.
inline CorrelationGrid pair_grid(const IntMatrix& ratings_a, const IntMatrix& prefs_a,
                                 const IntMatrix& ratings_b, const IntMatrix& prefs_b,
                                 CorrelationKind kind,
                                 DegeneratePolicy policy = DegeneratePolicy::exclude_pair) {
    if (ratings_a.rows < 3 || ratings_b.rows < 3)
        throw std::invalid_argument("pair_grid: each half needs at least 3 respondents (got " +
                                    std::to_string(ratings_a.rows) + " and " +
                                    std::to_string(ratings_b.rows) + ")");
    if (ratings_a.rows != prefs_a.rows || ratings_b.rows != prefs_b.rows)
        throw std::invalid_argument("pair_grid: ratings/preferences row counts disagree within a half");
    if (ratings_a.cols != ratings_b.cols || prefs_a.cols != prefs_b.cols)
        throw std::invalid_argument("pair_grid: column counts disagree across halves");

    const auto rat_a = detail::prepared_columns(ratings_a, kind);
    const auto prf_a = detail::prepared_columns(prefs_a, kind);
    const auto rat_b = detail::prepared_columns(ratings_b, kind);
    const auto prf_b = detail::prepared_columns(prefs_b, kind);

    CorrelationGrid grid(static_cast<int>(ratings_a.cols), static_cast<int>(prefs_a.cols));
    for (std::size_t c = 0; c < ratings_a.cols; ++c) {
        for (std::size_t p = 0; p < prefs_a.cols; ++p) {
            const std::optional<double> r = pearson(rat_a[c], prf_a[p]);
            const std::optional<double> q = pearson(rat_b[c], prf_b[p]);
            CorrelationPair& cell = grid.at(static_cast<int>(c), static_cast<int>(p));
            if (r && q) {
                cell = {*r, *q, true};
            } else if (policy == DegeneratePolicy::treat_as_zero) {
                cell = {r.value_or(0.0), q.value_or(0.0), true};
            } else {
                cell = {0.0, 0.0, false};
            }
        }
    }
    return grid;
}

}  // namespace dri
