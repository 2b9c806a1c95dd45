#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "dri/datagen.hpp"
#include "dri/empirical.hpp"

using dri::BootstrapPair;
using dri::CaseData;
using dri::CaseReport;
using dri::DesignPoint;
using dri::DriConfig;

namespace {

CaseData contrast_case(std::uint64_t seed, double pre_noise = 0.75, double post_noise = 0.0) {
    DesignPoint d;
    d.n = 30;
    d.considerations = 15;
    d.preferences = 4;
    CaseData data;
    data.name = "contrast";
    d.noise = pre_noise;
    data.pre = dri::generate_group(d, seed);
    d.noise = post_noise;
    data.post = dri::generate_group(d, seed + 1);
    return data;
}

CaseData identical_case(std::uint64_t seed) {
    DesignPoint d;
    d.n = 30;
    d.considerations = 15;
    d.preferences = 4;
    d.noise = 0.25;
    CaseData data;
    data.name = "identical";
    data.pre = dri::generate_group(d, seed);
    data.post = data.pre;
    return data;
}

}  // namespace

TEST_CASE("identical waves score identically: all deltas exactly zero", "[empirical]") {
    const CaseData data = identical_case(11);
    DriConfig cfg;
    const CaseReport r = dri::compute_case(data, cfg, 99);
    CHECK(r.n == 30);
    CHECK(r.delta_standard == 0.0);
    CHECK(r.delta_modified == 0.0);
    // both waves use the same split, so the wave-level values coincide too
    CHECK(r.dri_pre_standard == r.dri_post_standard);
    CHECK(r.dri_pre_modified == r.dri_post_modified);
    CHECK(r.delta_indexes_pre == r.delta_indexes_post);
}

TEST_CASE("floor-referenced penalty never raises the index", "[empirical]") {
    DriConfig cfg;  // default: modified, floor-referenced
    for (const std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const CaseData data = contrast_case(seed * 100);
        const CaseReport r = dri::compute_case(data, cfg, seed);
        CHECK(r.delta_indexes_pre <= 1e-12);
        CHECK(r.delta_indexes_post <= 1e-12);
    }
}

TEST_CASE("the noise-contrast case yields positive deltas", "[empirical]") {
    DriConfig cfg;
    const CaseData data = contrast_case(4000);
    const CaseReport r = dri::compute_case(data, cfg, 17);
    CHECK(r.delta_standard > 0.0);
    CHECK(r.delta_modified > 0.0);
    // the penalty hits the noisy pre wave harder than the clean post wave
    CHECK(r.dri_pre_modified <= r.dri_pre_standard + 1e-12);
}

TEST_CASE("report n comes from the pre wave", "[empirical]") {
    const CaseData data = contrast_case(123);
    DriConfig cfg;
    CHECK(dri::compute_case(data, cfg, 1).n == static_cast<int>(data.pre.n()));
}

TEST_CASE("waves must agree on instrument shape", "[empirical]") {
    CaseData data = contrast_case(22);
    DesignPoint other;
    other.n = 30;
    other.considerations = 10;  // different instrument
    other.preferences = 4;
    data.post = dri::generate_group(other, 5);
    CHECK_THROWS_AS(data.validate(), dri::ValidationError);
}

TEST_CASE("odd wave sizes cannot be split and say which wave", "[empirical]") {
    CaseData data = contrast_case(33);
    // drop the last pre row
    dri::ResponseDataset odd;
    odd.likert_max = data.pre.likert_max;
    odd.ratings = dri::IntMatrix(29, data.pre.considerations());
    odd.rankings = dri::IntMatrix(29, data.pre.preferences());
    for (std::size_t i = 0; i < 29; ++i) {
        for (std::size_t c = 0; c < data.pre.considerations(); ++c)
            odd.ratings.at(i, c) = data.pre.ratings.at(i, c);
        for (std::size_t p = 0; p < data.pre.preferences(); ++p)
            odd.rankings.at(i, p) = data.pre.rankings.at(i, p);
    }
    data.pre = odd;
    DriConfig cfg;
    try {
        dri::compute_case(data, cfg, 1);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("pre") != std::string::npos);
    }
}

TEST_CASE("bootstrap is deterministic and thread-count invariant", "[empirical]") {
    const CaseData data = contrast_case(71);
    DriConfig cfg;
    const BootstrapPair b1 = dri::bootstrap_delta(data, cfg, 150, 7, 1);
    const BootstrapPair b2 = dri::bootstrap_delta(data, cfg, 150, 7, 4);
    CHECK(b1.standard.delta == b2.standard.delta);
    CHECK(b1.standard.ci_lo == b2.standard.ci_lo);
    CHECK(b1.standard.ci_hi == b2.standard.ci_hi);
    CHECK(b1.standard.p_value == b2.standard.p_value);
    CHECK(b1.modified.ci_lo == b2.modified.ci_lo);
    CHECK(b1.modified.p_value == b2.modified.p_value);
    CHECK(b1.standard.stars == b2.standard.stars);
}

TEST_CASE("bootstrap matches compute_case on the observed deltas", "[empirical]") {
    const CaseData data = contrast_case(71);
    DriConfig cfg;
    const CaseReport r = dri::compute_case(data, cfg, 7);
    const BootstrapPair b = dri::bootstrap_delta(data, cfg, 120, 7, 2);
    CHECK(b.standard.delta == r.delta_standard);
    CHECK(b.modified.delta == r.delta_modified);
    CHECK(b.standard.resamples == 120);
}

TEST_CASE("identical waves are never significant", "[empirical]") {
    const CaseData data = identical_case(44);
    DriConfig cfg;
    const BootstrapPair b = dri::bootstrap_delta(data, cfg, 200, 3, 2);
    CHECK(b.standard.stars == "^");
    CHECK(b.modified.stars == "^");
    CHECK(b.standard.p_value >= 0.05);
}

TEST_CASE("bootstrap rejects an unusably small resample count", "[empirical]") {
    const CaseData data = contrast_case(5);
    DriConfig cfg;
    CHECK_THROWS_AS(dri::bootstrap_delta(data, cfg, 99, 1, 1), std::invalid_argument);
    CHECK_NOTHROW(dri::bootstrap_delta(data, cfg, 100, 1, 2));
}

TEST_CASE("ci bounds bracket the resampled deltas", "[empirical]") {
    const CaseData data = contrast_case(81);
    DriConfig cfg;
    const BootstrapPair b = dri::bootstrap_delta(data, cfg, 200, 2, 2);
    CHECK(b.standard.ci_lo <= b.standard.ci_hi);
    CHECK(b.modified.ci_lo <= b.modified.ci_hi);
    CHECK(b.standard.p_value > 0.0);
    CHECK(b.standard.p_value <= 1.0);
}

TEST_CASE("split stability reports spread over k random splits", "[empirical]") {
    const CaseData data = contrast_case(55);
    DriConfig cfg;
    const dri::SplitStability s = dri::split_stability(data, cfg, 9, 10);
    CHECK(s.splits == 10);
    CHECK(s.sd_pre_standard >= 0.0);
    CHECK(s.sd_delta_standard > 0.0);  // different splits really differ
    CHECK(s.sd_delta_modified > 0.0);
    const dri::SplitStability again = dri::split_stability(data, cfg, 9, 10);
    CHECK(s.sd_delta_standard == again.sd_delta_standard);  // deterministic
    CHECK_THROWS_AS(dri::split_stability(data, cfg, 9, 1), std::invalid_argument);
}
