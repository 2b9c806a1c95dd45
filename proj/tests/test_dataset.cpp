#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "dri/datagen.hpp"
#include "dri/dataset.hpp"

using dri::DesignPoint;
using dri::ResponseDataset;

namespace {

ResponseDataset small_valid_dataset() {
    DesignPoint d;
    d.n = 8;
    d.considerations = 3;
    d.preferences = 4;
    return dri::generate_group(d, 99);
}

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("generated datasets pass validation", "[dataset]") {
    const ResponseDataset ds = small_valid_dataset();
    CHECK_NOTHROW(ds.validate("fixture"));
    CHECK(ds.n() == 8);
    CHECK(ds.considerations() == 3);
    CHECK(ds.preferences() == 4);
}

TEST_CASE("validation failures name the offending respondent", "[dataset]") {
    ResponseDataset bad_rating = small_valid_dataset();
    bad_rating.ratings.at(4, 1) = 9;  // outside 1..5
    const std::string rating_msg =
        message_of([&] { bad_rating.validate("fixture"); });
    CHECK(rating_msg.find("5") != std::string::npos);  // respondent 5 (1-based)
    CHECK(rating_msg.find("cons_2") != std::string::npos);

    ResponseDataset bad_ranking = small_valid_dataset();
    bad_ranking.rankings.at(2, 0) = bad_ranking.rankings.at(2, 1);  // duplicate rank
    const std::string ranking_msg =
        message_of([&] { bad_ranking.validate("fixture"); });
    CHECK(ranking_msg.find("permutation") != std::string::npos);
    CHECK(ranking_msg.find("3") != std::string::npos);  // respondent 3 (1-based)
}

TEST_CASE("groups that are too small are rejected", "[dataset]") {
    ResponseDataset ds = small_valid_dataset();
    ds.ratings = dri::IntMatrix(4, 3);
    ds.rankings = dri::IntMatrix(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t c = 0; c < 3; ++c) ds.ratings.at(i, c) = 3;
        for (std::size_t p = 0; p < 4; ++p) ds.rankings.at(i, p) = static_cast<int>(p) + 1;
    }
    CHECK_THROWS_AS(ds.validate("tiny"), dri::ValidationError);
}

TEST_CASE("row-count mismatch between matrices is rejected", "[dataset]") {
    ResponseDataset ds = small_valid_dataset();
    ds.rankings = dri::IntMatrix(7, 4);
    CHECK_THROWS_AS(ds.validate("fixture"), dri::ValidationError);
}

TEST_CASE("design point bounds", "[dataset]") {
    DesignPoint d;
    CHECK_NOTHROW(d.validate());
    DesignPoint odd = d;
    odd.n = 31;
    CHECK_THROWS_AS(odd.validate(), std::invalid_argument);
    DesignPoint tiny = d;
    tiny.n = 4;
    CHECK_THROWS_AS(tiny.validate(), std::invalid_argument);
    DesignPoint one_pref = d;
    one_pref.preferences = 1;  // a 1-item ranking is constant
    CHECK_THROWS_AS(one_pref.validate(), std::invalid_argument);
    DesignPoint bad_likert = d;
    bad_likert.likert_max = 6;
    CHECK_THROWS_AS(bad_likert.validate(), std::invalid_argument);
    DesignPoint bad_noise = d;
    bad_noise.noise = 1.5;
    CHECK_THROWS_AS(bad_noise.validate(), std::invalid_argument);
    bad_noise.noise = -0.1;
    CHECK_THROWS_AS(bad_noise.validate(), std::invalid_argument);
}

TEST_CASE("split_half partitions the rows evenly", "[dataset]") {
    DesignPoint d;
    d.n = 30;
    d.considerations = 4;
    d.preferences = 4;
    const ResponseDataset ds = dri::generate_group(d, 7);
    const auto [a, b] = dri::split_half(ds, 123);
    CHECK(a.n() == 15);
    CHECK(b.n() == 15);
    CHECK(a.considerations() == ds.considerations());
    CHECK(b.preferences() == ds.preferences());

    // Every original row appears in exactly one half: compare sorted row
    // signatures of the union against the original.
    const auto signatures = [](const ResponseDataset& x) {
        std::vector<std::vector<int>> rows;
        for (std::size_t i = 0; i < x.n(); ++i) {
            std::vector<int> row;
            for (std::size_t c = 0; c < x.considerations(); ++c)
                row.push_back(x.ratings.at(i, c));
            for (std::size_t p = 0; p < x.preferences(); ++p)
                row.push_back(x.rankings.at(i, p));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    std::vector<std::vector<int>> combined = signatures(a);
    const auto b_rows = signatures(b);
    combined.insert(combined.end(), b_rows.begin(), b_rows.end());
    std::vector<std::vector<int>> original = signatures(ds);
    std::sort(combined.begin(), combined.end());
    std::sort(original.begin(), original.end());
    CHECK(combined == original);
}

TEST_CASE("split_half is deterministic in the seed", "[dataset]") {
    const ResponseDataset ds = small_valid_dataset();
    const auto [a1, b1] = dri::split_half(ds, 5);
    const auto [a2, b2] = dri::split_half(ds, 5);
    CHECK(a1 == a2);
    CHECK(b1 == b2);
    const auto [a3, b3] = dri::split_half(ds, 6);
    CHECK(a1.ratings.data != a3.ratings.data);  // different seed, different split
}

TEST_CASE("split_half rejects odd or undersized groups", "[dataset]") {
    DesignPoint d;
    d.n = 8;
    d.considerations = 2;
    d.preferences = 3;
    ResponseDataset ds = dri::generate_group(d, 1);
    // drop one row to make it odd
    ResponseDataset odd = ds;
    odd.ratings = dri::IntMatrix(7, 2);
    odd.rankings = dri::IntMatrix(7, 3);
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t c = 0; c < 2; ++c) odd.ratings.at(i, c) = ds.ratings.at(i, c);
        for (std::size_t p = 0; p < 3; ++p) odd.rankings.at(i, p) = ds.rankings.at(i, p);
    }
    CHECK_THROWS_AS(dri::split_half(odd, 1), std::invalid_argument);
}
