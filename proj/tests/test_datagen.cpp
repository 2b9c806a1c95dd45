#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dri/correlation.hpp"
#include "dri/datagen.hpp"
#include "dri/dataset.hpp"

using dri::DesignPoint;
using dri::ResponseDataset;

TEST_CASE("generation is a pure function of design and seed", "[datagen]") {
    DesignPoint d;
    d.n = 30;
    d.considerations = 5;
    d.preferences = 4;
    d.noise = 0.5;
    const ResponseDataset a = dri::generate_group(d, 2024);
    const ResponseDataset b = dri::generate_group(d, 2024);
    CHECK(a == b);
    const ResponseDataset c = dri::generate_group(d, 2025);
    CHECK_FALSE(a == c);
}

TEST_CASE("generated data is always structurally valid", "[datagen]") {
    for (const int likert : {5, 7})
        for (const double noise : {0.0, 0.5, 1.0}) {
            DesignPoint d;
            d.n = 20;
            d.considerations = 4;
            d.preferences = 6;
            d.likert_max = likert;
            d.noise = noise;
            const ResponseDataset ds =
                dri::generate_group(d, 1000 + likert + static_cast<int>(noise * 10));
            CHECK_NOTHROW(ds.validate("generated"));
        }
}

TEST_CASE("threshold tables exist only for supported formats", "[datagen]") {
    CHECK(dri::detail::likert_thresholds(5).size() == 4);
    CHECK(dri::detail::likert_thresholds(7).size() == 6);
    CHECK_THROWS_AS(dri::detail::likert_thresholds(9), std::invalid_argument);
    // symmetric cut points
    const auto cuts5 = dri::detail::likert_thresholds(5);
    CHECK(cuts5[0] == Catch::Approx(-cuts5[3]).margin(1e-15));
    CHECK(cuts5[1] == Catch::Approx(-cuts5[2]).margin(1e-15));
}

TEST_CASE("full noise erases rating structure: uniform category counts", "[datagen]") {
    // Pool many cells at noise=1 and chi-square the category counts against
    // the uniform distribution. Fixed seed; critical values at alpha=0.001.
    for (const int likert : {5, 7}) {
        DesignPoint d;
        d.n = 100;
        d.considerations = 10;
        d.preferences = 4;
        d.likert_max = likert;
        d.noise = 1.0;
        std::vector<long> counts(static_cast<std::size_t>(likert), 0);
        long total = 0;
        for (int rep = 0; rep < 20; ++rep) {
            const ResponseDataset ds = dri::generate_group(d, 555000 + rep * 7 + likert);
            for (const int v : ds.ratings.data) {
                ++counts[static_cast<std::size_t>(v - 1)];
                ++total;
            }
        }
        const double expected = static_cast<double>(total) / likert;
        double chi2 = 0.0;
        for (const long c : counts) {
            const double diff = static_cast<double>(c) - expected;
            chi2 += diff * diff / expected;
        }
        // df=4 -> 18.4668, df=6 -> 22.4577 (chi-square 99.9th percentiles)
        const double critical = likert == 5 ? 18.4668 : 22.4577;
        INFO("likert " << likert << " chi2 " << chi2);
        CHECK(chi2 < critical);
    }
}

TEST_CASE("null split-half correlations have the permutation variance", "[datagen]") {
    // At full noise a half of size h gives Var(r) = 1/(h-1) under the
    // permutation null; the sample sd over many reps must sit within 15%.
    DesignPoint d;
    d.n = 30;
    d.considerations = 2;
    d.preferences = 2;
    d.noise = 1.0;
    std::vector<double> rs;
    for (int rep = 0; rep < 600; ++rep) {
        const ResponseDataset ds = dri::generate_group(d, 31337 + rep);
        const auto [a, b] = dri::split_half(ds, 77001 + rep);
        std::vector<double> x(a.n()), y(a.n());
        for (std::size_t i = 0; i < a.n(); ++i) {
            x[i] = a.ratings.at(i, 0);
            y[i] = a.rankings.at(i, 0);
        }
        const auto r = dri::correlate(x, y, dri::CorrelationKind::spearman_midrank);
        if (r) rs.push_back(*r);
    }
    REQUIRE(rs.size() > 500);
    double mean = 0.0;
    for (const double r : rs) mean += r;
    mean /= static_cast<double>(rs.size());
    double ss = 0.0;
    for (const double r : rs) ss += (r - mean) * (r - mean);
    const double sd = std::sqrt(ss / (static_cast<double>(rs.size()) - 1.0));
    const double expected = 1.0 / std::sqrt(15.0 - 1.0);
    INFO("sd " << sd << " expected " << expected);
    CHECK(sd > expected * 0.85);
    CHECK(sd < expected * 1.15);
    CHECK(std::abs(mean) < 0.05);  // centered on zero
}

TEST_CASE("noise degrades the trait signal monotonically", "[datagen]") {
    // Mean |r| between the first rating column and the first ranking column
    // must not increase with noise (0.02 slack per step for MC error), and
    // must drop substantially from noise 0 to 1.
    DesignPoint base;
    base.n = 30;
    base.considerations = 3;
    base.preferences = 4;
    std::vector<double> mean_abs_r;
    for (const double noise : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        DesignPoint d = base;
        d.noise = noise;
        double sum = 0.0;
        int count = 0;
        for (int rep = 0; rep < 500; ++rep) {
            const ResponseDataset ds = dri::generate_group(d, 9000 + rep);
            std::vector<double> x(ds.n()), y(ds.n());
            for (std::size_t i = 0; i < ds.n(); ++i) {
                x[i] = ds.ratings.at(i, 0);
                y[i] = ds.rankings.at(i, 0);
            }
            const auto r = dri::correlate(x, y, dri::CorrelationKind::spearman_midrank);
            if (r) {
                sum += std::abs(*r);
                ++count;
            }
        }
        mean_abs_r.push_back(sum / count);
    }
    for (std::size_t i = 1; i < mean_abs_r.size(); ++i)
        CHECK(mean_abs_r[i] <= mean_abs_r[i - 1] + 0.02);
    CHECK(mean_abs_r.front() - mean_abs_r.back() > 0.10);
}

TEST_CASE("clean data carries rank signal in almost every group", "[datagen]") {
    // The latent trait must show up in the correlation structure: at noise=0
    // nearly all groups have at least one strong consideration-preference
    // correlation.
    DesignPoint d;
    d.n = 30;
    d.considerations = 5;
    d.preferences = 4;
    d.noise = 0.0;
    int strong = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const ResponseDataset ds = dri::generate_group(d, 50000 + t);
        double best = 0.0;
        for (std::size_t c = 0; c < ds.considerations(); ++c)
            for (std::size_t p = 0; p < ds.preferences(); ++p) {
                std::vector<double> x(ds.n()), y(ds.n());
                for (std::size_t i = 0; i < ds.n(); ++i) {
                    x[i] = ds.ratings.at(i, c);
                    y[i] = ds.rankings.at(i, p);
                }
                const auto r = dri::correlate(x, y, dri::CorrelationKind::spearman_midrank);
                if (r) best = std::max(best, std::abs(*r));
            }
        if (best > 0.2) ++strong;
    }
    INFO("groups with a strong cell: " << strong << "/" << trials);
    CHECK(strong >= 190);
}
