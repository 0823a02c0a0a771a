#include <doctest.h>

#include <cmath>
#include <fstream>

#include "activeft/feature_store.hpp"
#include "test_util.hpp"

using namespace activeft;
using namespace activeft::feature_store;
using test_util::TempDir;

TEST_CASE("binary round-trip is bit-identical") {
    TempDir dir("fs_bin");
    const FeaturePool pool = test_util::random_unit_pool(10, 8, 42);
    save_pool(pool, dir.file("pool.fpl"), PoolFormat::binary);
    const FeaturePool back = load_pool(dir.file("pool.fpl"), PoolFormat::binary, false);
    CHECK(back.n == pool.n);
    CHECK(back.dim == pool.dim);
    CHECK(back.features == pool.features);
}

TEST_CASE("csv round-trip within 1e-6 per element") {
    TempDir dir("fs_csv");
    const FeaturePool pool = test_util::random_unit_pool(10, 8, 43);
    save_pool(pool, dir.file("pool.csv"), PoolFormat::csv);
    const FeaturePool back = load_pool(dir.file("pool.csv"), PoolFormat::csv, false);
    REQUIRE(back.features.size() == pool.features.size());
    float max_diff = 0.0f;
    for (size_t i = 0; i < pool.features.size(); ++i)
        max_diff = std::max(max_diff, std::abs(back.features[i] - pool.features[i]));
    CHECK(max_diff < 1e-6f);
}

TEST_CASE("binary header and payload are validated") {
    TempDir dir("fs_hdr");
    const FeaturePool pool = test_util::random_unit_pool(4, 3, 44);
    save_pool(pool, dir.file("pool.fpl"), PoolFormat::binary);

    SUBCASE("well-formed file with normalize on loads 4 unit rows") {
        const FeaturePool back = load_pool(dir.file("pool.fpl"), PoolFormat::binary, true);
        CHECK(back.n == 4);
        CHECK(back.dim == 3);
    }
    SUBCASE("bad magic") {
        std::fstream f(dir.file("pool.fpl"), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXX", 4);
        f.close();
        CHECK_THROWS_AS(load_pool(dir.file("pool.fpl"), PoolFormat::binary, true),
                        validation_error);
    }
    SUBCASE("truncated payload") {
        std::error_code ec;
        std::filesystem::resize_file(dir.file("pool.fpl"), 12 + 4 * 11, ec);
        REQUIRE(!ec);
        CHECK_THROWS_AS(load_pool(dir.file("pool.fpl"), PoolFormat::binary, true),
                        validation_error);
    }
    SUBCASE("missing file is an I/O error") {
        CHECK_THROWS_AS(load_pool(dir.file("nope.fpl"), PoolFormat::binary, true), io_error);
    }
}

TEST_CASE("zero row cannot be normalized") {
    TempDir dir("fs_zero");
    FeaturePool pool = test_util::random_unit_pool(3, 4, 45);
    for (uint32_t d = 0; d < 4; ++d) pool.row(1)[d] = 0.0f;
    save_pool(pool, dir.file("pool.fpl"), PoolFormat::binary);
    CHECK_THROWS_AS(load_pool(dir.file("pool.fpl"), PoolFormat::binary, true), validation_error);
}

TEST_CASE("non-unit rows are rejected when normalize is off") {
    TempDir dir("fs_nonunit");
    FeaturePool pool = test_util::random_unit_pool(3, 4, 46);
    pool.row(2)[0] *= 2.0f;
    save_pool(pool, dir.file("pool.fpl"), PoolFormat::binary);
    CHECK_THROWS_AS(load_pool(dir.file("pool.fpl"), PoolFormat::binary, false), validation_error);
}

TEST_CASE("NaN payload is rejected") {
    TempDir dir("fs_nan");
    FeaturePool pool = test_util::random_unit_pool(3, 4, 47);
    pool.row(0)[1] = std::nanf("");
    save_pool(pool, dir.file("pool.fpl"), PoolFormat::binary);
    CHECK_THROWS_AS(load_pool(dir.file("pool.fpl"), PoolFormat::binary, true), validation_error);
}

TEST_CASE("csv of already unit rows loads with normalize off") {
    TempDir dir("fs_csvunit");
    std::ofstream out(dir.file("pool.csv"));
    out << "1,0,0\n0,1,0\n0,0,1\n";
    out.close();
    const FeaturePool pool = load_pool(dir.file("pool.csv"), PoolFormat::csv, false);
    CHECK(pool.n == 3);
    CHECK(pool.dim == 3);
}

TEST_CASE("csv with ragged rows is rejected") {
    TempDir dir("fs_ragged");
    std::ofstream out(dir.file("pool.csv"));
    out << "1,0,0\n0,1\n";
    out.close();
    CHECK_THROWS_AS(load_pool(dir.file("pool.csv"), PoolFormat::csv, false), validation_error);
}

TEST_CASE("unwritable path raises io_error") {
    const FeaturePool pool = test_util::random_unit_pool(2, 3, 48);
    CHECK_THROWS_AS(save_pool(pool, "/nonexistent_dir_xyz/pool.fpl", PoolFormat::binary),
                    io_error);
}

TEST_CASE("normalization is idempotent within 1e-7") {
    FeaturePool pool = test_util::random_unit_pool(20, 16, 49);
    normalize_rows(pool);
    FeaturePool again = pool;
    normalize_rows(again);
    for (size_t i = 0; i < pool.features.size(); ++i)
        CHECK(std::abs(again.features[i] - pool.features[i]) <= 1e-7f);
}

TEST_CASE("synthetic pool: determinism and shape") {
    const SyntheticSpec spec{3, 10, 16, 0.05, 7};
    const FeaturePool a = make_synthetic_pool(spec);
    const FeaturePool b = make_synthetic_pool(spec);
    CHECK(a.n == 30);
    CHECK(a.dim == 16);
    CHECK(a.features == b.features);
    validate_pool(a);
}

TEST_CASE("synthetic pool: near-zero spread collapses each cluster") {
    const SyntheticSpec spec{1, 5, 4, 1e-6, 3};
    const FeaturePool pool = make_synthetic_pool(spec);
    for (uint32_t i = 0; i < pool.n; ++i)
        for (uint32_t j = i + 1; j < pool.n; ++j)
            CHECK(test_util::naive_dot_ff(pool.row(i), pool.row(j), pool.dim) > 0.9999);
}

TEST_CASE("synthetic pool: within-cluster similarity exceeds cross-cluster") {
    const SyntheticSpec spec{3, 10, 16, 0.05, 7};
    const FeaturePool pool = make_synthetic_pool(spec);
    // Direct computation on the generated pool, cluster-major layout.
    double within = 0.0, cross = 0.0;
    size_t n_within = 0, n_cross = 0;
    for (uint32_t i = 0; i < pool.n; ++i)
        for (uint32_t j = i + 1; j < pool.n; ++j) {
            const double s = test_util::naive_dot_ff(pool.row(i), pool.row(j), pool.dim);
            if (i / spec.points_per_cluster == j / spec.points_per_cluster) {
                within += s;
                ++n_within;
            } else {
                cross += s;
                ++n_cross;
            }
        }
    CHECK(within / double(n_within) > cross / double(n_cross));
}

TEST_CASE("synthetic spec validation") {
    CHECK_THROWS_AS(make_synthetic_pool(SyntheticSpec{0, 5, 4, 0.1, 1}), validation_error);
    CHECK_THROWS_AS(make_synthetic_pool(SyntheticSpec{1, 0, 4, 0.1, 1}), validation_error);
    CHECK_THROWS_AS(make_synthetic_pool(SyntheticSpec{1, 5, 4, 0.0, 1}), validation_error);
    CHECK_THROWS_AS(make_synthetic_pool(SyntheticSpec{1, 5, 1, 0.1, 1}), validation_error);
}
