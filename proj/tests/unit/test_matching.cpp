#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "activeft/matching.hpp"
#include "test_util.hpp"

using namespace activeft;
using namespace activeft::matching;

namespace {

std::vector<float> angle2d(double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    return {float(std::cos(rad)), float(std::sin(rad))};
}

std::vector<double> angle2d_d(double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

}  // namespace

TEST_CASE("match: exact parameter copies of pool rows") {
    const FeaturePool pool = test_util::random_unit_pool(12, 8, 61);
    std::vector<std::vector<double>> rows;
    for (uint32_t idx : {2u, 5u, 9u}) {
        std::vector<double> r(8);
        for (uint32_t d = 0; d < 8; ++d) r[d] = double(pool.row(idx)[d]);
        rows.push_back(std::move(r));
    }
    const SelectionResult sel = match(pool, test_util::params_from_rows(rows));
    CHECK(sel.indices == std::vector<uint32_t>{2, 5, 9});
}

TEST_CASE("match: collision resolved by descending best similarity") {
    // Pool on the unit circle; both parameters prefer item 1, the stronger
    // match keeps it and the weaker rescans to item 2.
    const FeaturePool pool =
        test_util::pool_from_rows({angle2d(0.0), angle2d(40.0), angle2d(80.0)});
    const SelectionParams params =
        test_util::params_from_rows({angle2d_d(35.0), angle2d_d(50.0)});

    // Exhaustive similarity ranking confirms the fixture is what it claims.
    const double s_p0_item1 = std::cos((40.0 - 35.0) * std::numbers::pi / 180.0);
    const double s_p1_item1 = std::cos((50.0 - 40.0) * std::numbers::pi / 180.0);
    const double s_p1_item2 = std::cos((80.0 - 50.0) * std::numbers::pi / 180.0);
    CHECK(s_p0_item1 > s_p1_item1);
    CHECK(s_p1_item2 < s_p1_item1);

    const SelectionResult sel = match(pool, params);
    CHECK(sel.indices == std::vector<uint32_t>{1, 2});
}

TEST_CASE("match: B = N covers the whole pool") {
    const FeaturePool pool = test_util::random_unit_pool(7, 6, 62);
    // Parameters far from any particular row: every index must still appear.
    std::vector<std::vector<double>> rows;
    const FeaturePool randoms = test_util::random_unit_pool(7, 6, 63);
    for (uint32_t j = 0; j < 7; ++j) {
        std::vector<double> r(6);
        for (uint32_t d = 0; d < 6; ++d) r[d] = double(randoms.row(j)[d]);
        rows.push_back(std::move(r));
    }
    const SelectionResult sel = match(pool, test_util::params_from_rows(rows));
    CHECK(sel.indices == std::vector<uint32_t>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("match: indices distinct and complete whenever B <= N") {
    const FeaturePool pool = test_util::random_unit_pool(9, 4, 64);
    for (uint32_t b : {1u, 3u, 9u}) {
        const FeaturePool randoms = test_util::random_unit_pool(b, 4, 70 + b);
        std::vector<std::vector<double>> rows;
        for (uint32_t j = 0; j < b; ++j) {
            std::vector<double> r(4);
            for (uint32_t d = 0; d < 4; ++d) r[d] = double(randoms.row(j)[d]);
            rows.push_back(std::move(r));
        }
        const SelectionResult sel = match(pool, test_util::params_from_rows(rows));
        CHECK(sel.indices.size() == b);
        CHECK(std::adjacent_find(sel.indices.begin(), sel.indices.end()) == sel.indices.end());
        CHECK(std::is_sorted(sel.indices.begin(), sel.indices.end()));
        for (uint32_t idx : sel.indices) CHECK(idx < pool.n);
    }
}

TEST_CASE("match: permuting parameter rows leaves the index set unchanged") {
    const FeaturePool pool = test_util::random_unit_pool(15, 6, 65);
    const FeaturePool randoms = test_util::random_unit_pool(4, 6, 66);
    std::vector<std::vector<double>> rows;
    for (uint32_t j = 0; j < 4; ++j) {
        std::vector<double> r(6);
        for (uint32_t d = 0; d < 6; ++d) r[d] = double(randoms.row(j)[d]);
        rows.push_back(std::move(r));
    }
    const SelectionResult forward = match(pool, test_util::params_from_rows(rows));
    std::reverse(rows.begin(), rows.end());
    const SelectionResult reversed = match(pool, test_util::params_from_rows(rows));
    CHECK(forward.indices == reversed.indices);
}

TEST_CASE("match: dimension mismatch and oversized budget throw") {
    const FeaturePool pool = test_util::random_unit_pool(3, 4, 67);
    CHECK_THROWS_AS(match(pool, test_util::params_from_rows({test_util::basis_d(6, 0)})),
                    validation_error);
    const SelectionParams too_many = test_util::params_from_rows(
        {test_util::basis_d(4, 0), test_util::basis_d(4, 1), test_util::basis_d(4, 2),
         test_util::basis_d(4, 3)});
    CHECK_NOTHROW(match(pool, test_util::params_from_rows({test_util::basis_d(4, 0)})));
    CHECK_THROWS_AS(match(test_util::random_unit_pool(3, 4, 68), too_many), validation_error);
}
