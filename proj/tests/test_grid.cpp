#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "dri/grid.hpp"
#include "dri/rng.hpp"

using dri::CorrelationGrid;
using dri::CorrelationKind;
using dri::DegeneratePolicy;
using dri::IntMatrix;

namespace {

// Small helper: fill a matrix from explicit row-major values.
IntMatrix matrix(std::size_t rows, std::size_t cols, std::vector<int> values) {
    IntMatrix m(rows, cols);
    m.data = std::move(values);
    return m;
}

IntMatrix random_matrix(std::size_t rows, std::size_t cols, int lo, int hi, dri::Rng& rng) {
    IntMatrix m(rows, cols);
    for (int& v : m.data) v = rng.uniform_int(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("grid has one cell per consideration-preference pair", "[grid]") {
    dri::Rng rng(3);
    const IntMatrix ra = random_matrix(5, 3, 1, 5, rng);
    const IntMatrix pa = random_matrix(5, 2, 1, 2, rng);
    const IntMatrix rb = random_matrix(5, 3, 1, 5, rng);
    const IntMatrix pb = random_matrix(5, 2, 1, 2, rng);
    const CorrelationGrid g =
        pair_grid(ra, pa, rb, pb, CorrelationKind::spearman_midrank);
    CHECK(g.n_considerations == 3);
    CHECK(g.n_preferences == 2);
    CHECK(g.pairs.size() == 6);
}

TEST_CASE("identical halves give r equal to q in every cell", "[grid]") {
    const IntMatrix ratings = matrix(4, 1, {1, 2, 3, 4});
    const IntMatrix prefs = matrix(4, 1, {2, 1, 4, 3});
    const CorrelationGrid g =
        pair_grid(ratings, prefs, ratings, prefs, CorrelationKind::spearman_midrank);
    REQUIRE(g.pairs.size() == 1);
    REQUIRE(g.at(0, 0).valid);
    CHECK(g.at(0, 0).r == g.at(0, 0).q);
}

TEST_CASE("degenerate cells follow the configured policy", "[grid]") {
    // First rating column is constant in half a -> r undefined there.
    const IntMatrix ra = matrix(4, 2, {3, 1, 3, 2, 3, 3, 3, 4});
    const IntMatrix pa = matrix(4, 1, {1, 2, 3, 4});
    const IntMatrix rb = matrix(4, 2, {1, 1, 2, 2, 3, 3, 4, 4});
    const IntMatrix pb = matrix(4, 1, {4, 3, 2, 1});

    const CorrelationGrid excluded = pair_grid(ra, pa, rb, pb, CorrelationKind::spearman_midrank,
                                               DegeneratePolicy::exclude_pair);
    CHECK_FALSE(excluded.at(0, 0).valid);
    CHECK(excluded.at(1, 0).valid);

    const CorrelationGrid zeroed = pair_grid(ra, pa, rb, pb, CorrelationKind::spearman_midrank,
                                             DegeneratePolicy::treat_as_zero);
    REQUIRE(zeroed.at(0, 0).valid);
    CHECK(zeroed.at(0, 0).r == 0.0);
    // q was well-defined (ranks 1..4 vs 4..1 -> exactly -1); only the
    // undefined side is zeroed
    CHECK(zeroed.at(0, 0).q == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("grid cells are bitwise equal to per-cell correlate calls", "[grid]") {
    dri::Rng rng(11);
    for (const CorrelationKind kind :
         {CorrelationKind::spearman_midrank, CorrelationKind::pearson}) {
        const IntMatrix ra = random_matrix(9, 4, 1, 5, rng);
        const IntMatrix pa = random_matrix(9, 3, 1, 3, rng);
        const IntMatrix rb = random_matrix(9, 4, 1, 5, rng);
        const IntMatrix pb = random_matrix(9, 3, 1, 3, rng);
        const CorrelationGrid g = pair_grid(ra, pa, rb, pb, kind);
        for (int c = 0; c < 4; ++c)
            for (int p = 0; p < 3; ++p) {
                std::vector<double> xc(9), yp(9), xc2(9), yp2(9);
                for (std::size_t i = 0; i < 9; ++i) {
                    xc[i] = ra.at(i, static_cast<std::size_t>(c));
                    yp[i] = pa.at(i, static_cast<std::size_t>(p));
                    xc2[i] = rb.at(i, static_cast<std::size_t>(c));
                    yp2[i] = pb.at(i, static_cast<std::size_t>(p));
                }
                const auto r = correlate(xc, yp, kind);
                const auto q = correlate(xc2, yp2, kind);
                REQUIRE(g.at(c, p).valid == (r.has_value() && q.has_value()));
                if (g.at(c, p).valid) {
                    CHECK(g.at(c, p).r == *r);
                    CHECK(g.at(c, p).q == *q);
                }
            }
    }
}

TEST_CASE("halves that are too small or inconsistent are rejected", "[grid]") {
    dri::Rng rng(5);
    const IntMatrix ra = random_matrix(2, 2, 1, 5, rng);  // only 2 respondents
    const IntMatrix pa = random_matrix(2, 2, 1, 2, rng);
    CHECK_THROWS_AS(pair_grid(ra, pa, ra, pa, CorrelationKind::pearson), std::invalid_argument);

    const IntMatrix r4 = random_matrix(4, 2, 1, 5, rng);
    const IntMatrix p4 = random_matrix(4, 2, 1, 2, rng);
    const IntMatrix p5 = random_matrix(5, 2, 1, 2, rng);
    CHECK_THROWS_AS(pair_grid(r4, p5, r4, p4, CorrelationKind::pearson), std::invalid_argument);

    const IntMatrix r4narrow = random_matrix(4, 1, 1, 5, rng);
    CHECK_THROWS_AS(pair_grid(r4, p4, r4narrow, p4, CorrelationKind::pearson),
                    std::invalid_argument);
}

TEST_CASE("degenerate policy strings round-trip", "[grid]") {
    using dri::degenerate_policy_from_string;
    CHECK(degenerate_policy_from_string("exclude-pair") == DegeneratePolicy::exclude_pair);
    CHECK(degenerate_policy_from_string("treat-as-zero") == DegeneratePolicy::treat_as_zero);
    CHECK_THROWS_AS(degenerate_policy_from_string("drop"), std::invalid_argument);
}
