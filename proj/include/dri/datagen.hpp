#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dri/dataset.hpp"
#include "dri/rng.hpp"

namespace dri {

namespace detail {

/// Standard-normal quantiles z_{k/L} for the equal-probability Likert cuts.
/// Hard-coded so the generator carries no inverse-CDF dependency.
inline std::span<const double> likert_thresholds(int likert_max) {
    static constexpr std::array<double, 4> kCuts5 = {
        -0.8416212335729143, -0.2533471031357997, 0.2533471031357997, 0.8416212335729143};
    static constexpr std::array<double, 6> kCuts7 = {
        -1.0675705238781414, -0.5659488219328631, -0.1800123697927051,
        0.1800123697927051,  0.5659488219328631,  1.0675705238781414};
    if (likert_max == 5) return std::span<const double>(kCuts5);
    if (likert_max == 7) return std::span<const double>(kCuts7);
    throw std::invalid_argument("likert_max must be 5 or 7, got " + std::to_string(likert_max));
}

}  // namespace detail

/// Generate one synthetic deliberative group. Deterministic in (design, seed).
///
/// Latent model: one trait θᵢ ~ N(0,1) per respondent. Ratings: a latent score
/// x = a_c·θᵢ + ε (ε ~ N(0, 0.3²)) is cut into likert_max equal-probability
/// bins using the marginal sd √(a_c² + 0.3²); loadings a_c = sign·magnitude
/// with iid uniform signs and magnitude ~ U[0.5, 1]. Rankings: utilities
/// u_p = b_p·θᵢ + ε (same ε sd) are sorted descending (rank 1 = highest
/// utility). Preference loadings use *balanced* signs — ⌈P/2⌉ alternatives get
/// +1 and the rest −1, randomly assigned, magnitudes ~ U[0.5, 1] — because
/// rankings carry trait signal only through loading contrasts; balanced tiers
/// make every alternative's rank column strongly trait-linked, which is what
/// keeps the penalty fully dormant at noise = 0.
///
/// Noise mixture: each rating cell is independently replaced by a uniform draw
/// on {1..likert_max} with probability `noise`; each respondent's entire
/// ranking is replaced by a uniform random permutation with probability
/// `noise` (row-wise, so rankings stay valid permutations). At noise = 1 every
/// response is uniform random.
///
/// Draw order is fixed and part of the determinism contract: rating loadings
/// (sign coin then magnitude, per consideration), preference signs (shuffle)
/// then magnitudes, traits, rating scores (row-major), utilities (row-major),
/// rating noise overlay (coin, then replacement only when hit, row-major),
/// ranking noise overlay (coin, then permutation only when hit, per row).
inline ResponseDataset generate_group(const DesignPoint& design, std::uint64_t seed) {
    design.validate();
    const int n = design.n;
    const int C = design.considerations;
    const int P = design.preferences;
    const int L = design.likert_max;
    constexpr double kEpsSd = 0.3;

    Rng rng(seed);

    // Per-replication loadings.
    std::vector<double> a(static_cast<std::size_t>(C));
    for (double& ac : a) {
        const double sign = rng.uniform_unit() < 0.5 ? -1.0 : 1.0;
        ac = sign * (0.5 + 0.5 * rng.uniform_unit());
    }
    std::vector<double> b_sign(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p) b_sign[static_cast<std::size_t>(p)] = (p < (P + 1) / 2) ? 1.0 : -1.0;
    rng.shuffle(b_sign);
    std::vector<double> b(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p)
        b[static_cast<std::size_t>(p)] = b_sign[static_cast<std::size_t>(p)] * (0.5 + 0.5 * rng.uniform_unit());

    // Latent traits.
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (double& t : theta) t = rng.normal();

    ResponseDataset ds;
    ds.likert_max = L;
    ds.ratings = IntMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(C));
    ds.rankings = IntMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(P));

    // Structured ratings: equal-probability quantization of the latent score.
    const std::span<const double> cuts = detail::likert_thresholds(L);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < C; ++c) {
            const double ac = a[static_cast<std::size_t>(c)];
            const double x = ac * theta[static_cast<std::size_t>(i)] + kEpsSd * rng.normal();
            const double marginal_sd = std::sqrt(ac * ac + kEpsSd * kEpsSd);
            int rating = 1;
            for (const double z : cuts) rating += (x > marginal_sd * z) ? 1 : 0;
            ds.ratings.at(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = rating;
        }
    }

    // Structured rankings: descending utility order (rank 1 = most preferred).
    std::vector<double> u(static_cast<std::size_t>(P));
    std::vector<int> order(static_cast<std::size_t>(P));
    for (int i = 0; i < n; ++i) {
        for (int p = 0; p < P; ++p)
            u[static_cast<std::size_t>(p)] =
                b[static_cast<std::size_t>(p)] * theta[static_cast<std::size_t>(i)] + kEpsSd * rng.normal();
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            if (u[static_cast<std::size_t>(x)] != u[static_cast<std::size_t>(y)])
                return u[static_cast<std::size_t>(x)] > u[static_cast<std::size_t>(y)];
            return x < y;  // deterministic tie break (ties have measure zero)
        });
        for (int pos = 0; pos < P; ++pos)
            ds.rankings.at(static_cast<std::size_t>(i), static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])) =
                pos + 1;
    }

    // Noise overlay. The coin is always drawn; the replacement value only when
    // the coin hits, so noise=0 adds no draws and noise=1 replaces everything.
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < C; ++c)
            if (rng.uniform_unit() < design.noise)
                ds.ratings.at(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = rng.uniform_int(1, L);
    for (int i = 0; i < n; ++i)
        if (rng.uniform_unit() < design.noise) {
            const std::vector<int> perm = rng.permutation(P);
            for (int p = 0; p < P; ++p)
                ds.rankings.at(static_cast<std::size_t>(i), static_cast<std::size_t>(p)) = perm[static_cast<std::size_t>(p)];
        }

    return ds;
}

}  // namespace dri
