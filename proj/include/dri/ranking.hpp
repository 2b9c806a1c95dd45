#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace dri {

/// Fractional ranks with midrank tie handling: tied values all receive the
/// arithmetic mean of the rank positions they span, so the rank sum is always
/// n(n+1)/2. This is the tie rule rank correlation needs for ordinal Likert
/// data, where ties are the norm rather than the exception.
///
/// [1,2,3] -> [1,2,3];  [5,5,5] -> [2,2,2];  [1,2,2,4] -> [1,2.5,2.5,4]
inline std::vector<double> rank_with_midranks(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("rank_with_midranks: empty input");

    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        // [i, j) is a run of equal values in sorted order.
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // Positions are 1-based: the run spans ranks i+1 .. j.
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = midrank;
        i = j;
    }
    return ranks;
}

}  // namespace dri
