#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dri/common.hpp"
#include "dri/rng.hpp"

namespace dri {

/// One group's raw responses: consideration ratings (Likert integers) and
/// preference rankings (each row a permutation of 1..P, 1 = most preferred).
struct ResponseDataset {
    IntMatrix ratings;   // n×C, entries in [1, likert_max]
    IntMatrix rankings;  // n×P, each row a permutation of 1..P
    int likert_max = 5;  // 5 or 7

    std::size_t n() const { return ratings.rows; }
    std::size_t considerations() const { return ratings.cols; }
    std::size_t preferences() const { return rankings.cols; }

    /// Enforce the structural invariants. `label` names the dataset (or wave)
    /// in error messages.
    void validate(const std::string& label = "dataset") const {
        if (likert_max != 5 && likert_max != 7)
            throw ValidationError(label + ": likert_max must be 5 or 7, got " +
                                  std::to_string(likert_max));
        if (ratings.rows != rankings.rows)
            throw ValidationError(label + ": ratings and rankings disagree on respondent count");
        if (ratings.rows < 6)
            throw ValidationError(label + ": need at least 6 respondents, got " +
                                  std::to_string(ratings.rows));
        for (std::size_t i = 0; i < ratings.rows; ++i)
            for (std::size_t c = 0; c < ratings.cols; ++c) {
                const int v = ratings.at(i, c);
                if (v < 1 || v > likert_max)
                    throw ValidationError(label + ": rating out of range [1," +
                                          std::to_string(likert_max) + "] at respondent " +
                                          std::to_string(i + 1) + ", cons_" + std::to_string(c + 1) +
                                          ": " + std::to_string(v));
            }
        const std::size_t p = rankings.cols;
        std::vector<bool> seen(p);
        for (std::size_t i = 0; i < rankings.rows; ++i) {
            seen.assign(p, false);
            for (std::size_t j = 0; j < p; ++j) {
                const int v = rankings.at(i, j);
                if (v < 1 || v > static_cast<int>(p) || seen[static_cast<std::size_t>(v - 1)])
                    throw ValidationError(label + ": ranking row for respondent " +
                                          std::to_string(i + 1) + " is not a permutation of 1.." +
                                          std::to_string(p));
                seen[static_cast<std::size_t>(v - 1)] = true;
            }
        }
    }

    bool operator==(const ResponseDataset& other) const = default;
};

/// One cell of the simulation design grid.
struct DesignPoint {
    int n = 30;          // group size
    int considerations = 15;  // C
    int preferences = 4;      // P
    int likert_max = 5;       // 5 or 7
    double noise = 0.0;       // proportion of uniform-random responses, in [0,1]

    void validate() const {
        if (n < 6 || n % 2 != 0)
            throw std::invalid_argument("design: group size must be even and >= 6, got " +
                                        std::to_string(n));
        if (considerations < 1)
            throw std::invalid_argument("design: considerations must be >= 1");
        if (preferences < 2)
            throw std::invalid_argument("design: preferences must be >= 2 (a single alternative "
                                        "has a constant rank column)");
        if (likert_max != 5 && likert_max != 7)
            throw std::invalid_argument("design: likert_max must be 5 or 7, got " +
                                        std::to_string(likert_max));
        if (!(noise >= 0.0 && noise <= 1.0))
            throw std::invalid_argument("design: noise must be in [0,1], got " +
                                        std::to_string(noise));
    }
};

/// Uniformly random partition into two equal halves; a respondent's ratings
/// and rankings travel together. Deterministic given the seed.
inline std::pair<ResponseDataset, ResponseDataset> split_half(const ResponseDataset& ds,
                                                              std::uint64_t seed) {
    const std::size_t n = ds.n();
    if (n % 2 != 0)
        throw std::invalid_argument("split_half: group size must be even, got " +
                                    std::to_string(n));
    if (n < 6)
        throw std::invalid_argument("split_half: need at least 6 respondents, got " +
                                    std::to_string(n));

    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    Rng rng(seed);
    rng.shuffle(order);

    const std::size_t h = n / 2;
    auto take = [&](std::size_t begin, std::size_t count) {
        ResponseDataset half;
        half.likert_max = ds.likert_max;
        half.ratings = IntMatrix(count, ds.ratings.cols);
        half.rankings = IntMatrix(count, ds.rankings.cols);
        for (std::size_t i = 0; i < count; ++i) {
            const auto src = static_cast<std::size_t>(order[begin + i]);
            for (std::size_t c = 0; c < ds.ratings.cols; ++c)
                half.ratings.at(i, c) = ds.ratings.at(src, c);
            for (std::size_t p = 0; p < ds.rankings.cols; ++p)
                half.rankings.at(i, p) = ds.rankings.at(src, p);
        }
        return half;
    };
    return {take(0, h), take(h, h)};
}

}  // namespace dri
