#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "activeft/core_model.hpp"
#include "activeft/feature_store.hpp"
#include "test_util.hpp"

using namespace activeft;
using namespace activeft::core_model;

TEST_CASE("cosine_sim on basis vectors") {
    const auto e1 = test_util::basis_f(4, 0);
    const auto e2 = test_util::basis_f(4, 1);
    const auto neg_e1 = test_util::basis_f(4, 0, -1.0f);
    CHECK(cosine_sim(e1, e1) == doctest::Approx(1.0));
    CHECK(cosine_sim(e1, e2) == doctest::Approx(0.0));
    CHECK(cosine_sim(e1, neg_e1) == doctest::Approx(-1.0));
    CHECK(cosine_sim(e1, e2) == cosine_sim(e2, e1));
}

TEST_CASE("assign: single parameter takes everything") {
    const FeaturePool pool = test_util::random_unit_pool(17, 8, 1);
    const SelectionParams params = test_util::params_from_rows({test_util::basis_d(8, 0)});
    const Assignment a = assign(pool, params);
    for (uint32_t i = 0; i < pool.n; ++i) CHECK(a.c[i] == 0);
}

TEST_CASE("assign: exact matches map to themselves") {
    const FeaturePool pool =
        test_util::pool_from_rows({test_util::basis_f(4, 0), test_util::basis_f(4, 1)});
    const SelectionParams params =
        test_util::params_from_rows({test_util::basis_d(4, 0), test_util::basis_d(4, 1)});
    const Assignment a = assign(pool, params);
    CHECK(a.c == std::vector<uint32_t>{0, 1});
    CHECK(a.top1_sim[0] == doctest::Approx(1.0));
    CHECK(a.top1_sim[1] == doctest::Approx(1.0));
}

TEST_CASE("assign: two antipodal clusters, verified exhaustively") {
    feature_store::SyntheticSpec spec{1, 10, 8, 0.05, 5};
    const FeaturePool cluster_a = feature_store::make_synthetic_pool(spec);
    FeaturePool cluster_b = cluster_a;
    for (float& v : cluster_b.features) v = -v;
    const FeaturePool pool = test_util::concat_pools(cluster_a, cluster_b);

    // Centers: normalized means of each half.
    std::vector<std::vector<double>> centers(2, std::vector<double>(8, 0.0));
    for (uint32_t i = 0; i < pool.n; ++i)
        for (uint32_t d = 0; d < 8; ++d) centers[i / 10][d] += double(pool.row(i)[d]);
    const SelectionParams params = test_util::params_from_rows(centers);

    const Assignment a = assign(pool, params);
    for (uint32_t i = 0; i < pool.n; ++i) {
        CHECK(a.c[i] == i / 10);
        // Exhaustive pairwise check of the argmax property (1e-9 slack covers
        // the reduction-order difference between kernel variants).
        for (uint32_t j = 0; j < params.b; ++j)
            CHECK(a.top1_sim[i] >=
                  test_util::naive_dot_fd(pool.row(i), params.row(j), 8) - 1e-9);
    }
}

TEST_CASE("assign: ties break to the lowest parameter index") {
    const FeaturePool pool = test_util::pool_from_rows({test_util::basis_f(4, 0)});
    const SelectionParams params = test_util::params_from_rows(
        {test_util::basis_d(4, 1), test_util::basis_d(4, 2), test_util::basis_d(4, 0),
         test_util::basis_d(4, 0)});
    const Assignment a = assign(pool, params);
    CHECK(a.c[0] == 2);  // parameters 2 and 3 tie at similarity 1
}

TEST_CASE("assign: dimension mismatch throws") {
    const FeaturePool pool = test_util::random_unit_pool(3, 8, 2);
    const SelectionParams params = test_util::params_from_rows({test_util::basis_d(4, 0)});
    CHECK_THROWS_AS(assign(pool, params), validation_error);
}

TEST_CASE("assign is permutation-equivariant") {
    const FeaturePool pool = test_util::random_unit_pool(40, 8, 3);
    SelectionParams params;
    {
        const FeaturePool picks = test_util::random_unit_pool(5, 8, 4);
        std::vector<std::vector<double>> rows(5, std::vector<double>(8));
        for (uint32_t j = 0; j < 5; ++j)
            for (uint32_t d = 0; d < 8; ++d) rows[j][d] = double(picks.row(j)[d]);
        params = test_util::params_from_rows(rows);
    }
    const Assignment base = assign(pool, params);

    std::vector<uint32_t> perm(pool.n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(99));
    FeaturePool shuffled;
    shuffled.n = pool.n;
    shuffled.dim = pool.dim;
    shuffled.features.resize(pool.features.size());
    for (uint32_t i = 0; i < pool.n; ++i)
        std::copy_n(pool.row(perm[i]), pool.dim, shuffled.row(i));

    const Assignment moved = assign(shuffled, params);
    for (uint32_t i = 0; i < pool.n; ++i) {
        CHECK(moved.c[i] == base.c[perm[i]]);
        CHECK(moved.top1_sim[i] == base.top1_sim[perm[i]]);
    }
}

TEST_CASE("assumption diagnostic: pool equal to parameters") {
    const FeaturePool pool = test_util::random_unit_pool(6, 8, 5);
    std::vector<std::vector<double>> rows(6, std::vector<double>(8));
    for (uint32_t j = 0; j < 6; ++j)
        for (uint32_t d = 0; d < 8; ++d) rows[j][d] = double(pool.row(j)[d]);
    const SelectionParams params = test_util::params_from_rows(rows);

    const Temperature tau{0.07};
    const MixtureDiagnostics diag = assumption_diagnostic(pool, params, tau, 3);
    // Entry 0: every feature is itself a parameter, so top-1 sim is 1.
    CHECK(diag.topk_mean_exp_sim[0] ==
          doctest::Approx(std::exp(1.0 / tau.tau)).epsilon(1e-5));
    for (size_t k = 1; k < diag.topk_mean_exp_sim.size(); ++k)
        CHECK(diag.topk_mean_exp_sim[k] <= diag.topk_mean_exp_sim[k - 1]);
}

TEST_CASE("assumption diagnostic: k=1 equals mean exponential top-1 similarity") {
    const FeaturePool pool = test_util::random_unit_pool(25, 8, 6);
    const SelectionParams params =
        test_util::params_from_rows({test_util::basis_d(8, 0), test_util::basis_d(8, 1)});
    const Temperature tau{0.07};
    const MixtureDiagnostics diag = assumption_diagnostic(pool, params, tau, 1);
    REQUIRE(diag.topk_mean_exp_sim.size() == 1);

    const Assignment a = assign(pool, params);
    double expected = 0.0;
    for (uint32_t i = 0; i < pool.n; ++i) expected += std::exp(a.top1_sim[i] / tau.tau);
    expected /= double(pool.n);
    CHECK(diag.topk_mean_exp_sim[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("assumption diagnostic: separated clusters give a dominant top-1") {
    const feature_store::SyntheticSpec spec{3, 20, 16, 0.05, 7};
    const FeaturePool pool = feature_store::make_synthetic_pool(spec);
    std::vector<std::vector<double>> centers(3, std::vector<double>(16, 0.0));
    for (uint32_t i = 0; i < pool.n; ++i)
        for (uint32_t d = 0; d < 16; ++d) centers[i / 20][d] += double(pool.row(i)[d]);
    const SelectionParams params = test_util::params_from_rows(centers);

    const Temperature tau{0.07};
    const MixtureDiagnostics diag = assumption_diagnostic(pool, params, tau, 3);

    // Exhaustive recomputation of both entries.
    double e0 = 0.0, e1 = 0.0;
    for (uint32_t i = 0; i < pool.n; ++i) {
        std::vector<double> sims;
        for (uint32_t j = 0; j < 3; ++j)
            sims.push_back(test_util::naive_dot_fd(pool.row(i), params.row(j), 16));
        std::sort(sims.rbegin(), sims.rend());
        e0 += std::exp(sims[0] / tau.tau);
        e1 += std::exp(sims[1] / tau.tau);
    }
    e0 /= double(pool.n);
    e1 /= double(pool.n);
    CHECK(diag.topk_mean_exp_sim[0] == doctest::Approx(e0).epsilon(1e-9));
    CHECK(diag.topk_mean_exp_sim[1] == doctest::Approx(e1).epsilon(1e-9));
    CHECK(diag.topk_mean_exp_sim[0] / diag.topk_mean_exp_sim[1] > 10.0);
}

TEST_CASE("assumption diagnostic: k > B throws") {
    const FeaturePool pool = test_util::random_unit_pool(5, 8, 8);
    const SelectionParams params = test_util::params_from_rows({test_util::basis_d(8, 0)});
    CHECK_THROWS_AS(assumption_diagnostic(pool, params, Temperature{0.07}, 2), validation_error);
}

TEST_CASE("exp(top1) dominates every parameter exhaustively on small pools") {
    const FeaturePool pool = test_util::random_unit_pool(12, 6, 9);
    const FeaturePool picks = test_util::random_unit_pool(4, 6, 10);
    std::vector<std::vector<double>> rows(4, std::vector<double>(6));
    for (uint32_t j = 0; j < 4; ++j)
        for (uint32_t d = 0; d < 6; ++d) rows[j][d] = double(picks.row(j)[d]);
    const SelectionParams params = test_util::params_from_rows(rows);
    const double tau = 0.07;
    const Assignment a = assign(pool, params);
    for (uint32_t i = 0; i < pool.n; ++i)
        for (uint32_t j = 0; j < params.b; ++j)
            CHECK(std::exp(a.top1_sim[i] / tau) >=
                  std::exp(test_util::naive_dot_fd(pool.row(i), params.row(j), 6) / tau));
}
