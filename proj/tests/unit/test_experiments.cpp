#include <doctest.h>

#include "activeft/experiments.hpp"
#include "activeft/report.hpp"
#include "test_util.hpp"

using namespace activeft;
using namespace activeft::experiments;

namespace {

optimizer::OptimizerConfig quick_config() {
    optimizer::OptimizerConfig cfg;
    cfg.iterations = 60;
    return cfg;
}

}  // namespace

TEST_CASE("comparison: single method, single seed") {
    const feature_store::SyntheticSpec spec{2, 10, 8, 0.05, 31};
    const ComparisonTable table = run_comparison(spec, 4, {"random"}, {7}, quick_config());
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].method == "random");
    CHECK(table.rows[0].runs.size() == 1);
    CHECK(table.rows[0].std_emd == doctest::Approx(0.0));
}

TEST_CASE("comparison: identical invocations give identical tables") {
    const feature_store::SyntheticSpec spec{3, 10, 8, 0.05, 32};
    const std::vector<std::string> methods{"activeft", "random", "fds", "kmeans"};
    const std::vector<uint64_t> seeds{1, 2, 3};
    const ComparisonTable a = run_comparison(spec, 4, methods, seeds, quick_config());
    const ComparisonTable b = run_comparison(spec, 4, methods, seeds, quick_config());
    REQUIRE(a.rows.size() == 4);
    CHECK(report::comparison_json(a) == report::comparison_json(b));
}

TEST_CASE("comparison: activeft beats random on a clustered pool") {
    const feature_store::SyntheticSpec spec{3, 30, 16, 0.05, 33};
    std::vector<uint64_t> seeds;
    for (uint64_t s = 1; s <= 8; ++s) seeds.push_back(s);
    optimizer::OptimizerConfig cfg;
    cfg.iterations = 150;
    const ComparisonTable table = run_comparison(spec, 6, {"activeft", "random"}, seeds, cfg);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].mean_emd < table.rows[1].mean_emd);
}

TEST_CASE("ablation: regularizer axis shows the collapse signature") {
    // Single dominant cluster: without regularization the parameters bunch up.
    const feature_store::SyntheticSpec spec{1, 60, 16, 0.25, 34};
    std::vector<uint64_t> seeds{1, 2, 3, 4};
    optimizer::OptimizerConfig cfg;  // full default iteration count
    const AblationTable table =
        run_ablation(spec, 4, AblationAxis::regularizer, {"activeft", "none_s1"}, seeds, cfg);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[1].mean_min_pairwise < table.rows[0].mean_min_pairwise);
}

TEST_CASE("ablation: single temperature row") {
    const feature_store::SyntheticSpec spec{2, 10, 8, 0.05, 35};
    const AblationTable table =
        run_ablation(spec, 4, AblationAxis::temperature, {"0.07"}, {5}, quick_config());
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].value == "0.07");
    CHECK(table.rows[0].mean_emd > 0.0);
}

TEST_CASE("ablation: ci_update rows differ on a seeded instance") {
    const feature_store::SyntheticSpec spec{3, 15, 16, 0.08, 36};
    const AblationTable table =
        run_ablation(spec, 3, AblationAxis::ci_update, {"every_iteration", "frozen_at_init"},
                     {4}, quick_config());
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].mean_emd != table.rows[1].mean_emd);
}

TEST_CASE("ablation: determinism") {
    const feature_store::SyntheticSpec spec{2, 12, 8, 0.05, 37};
    const AblationTable a = run_ablation(spec, 3, AblationAxis::temperature, {"0.07", "0.2"},
                                         {1, 2}, quick_config());
    const AblationTable b = run_ablation(spec, 3, AblationAxis::temperature, {"0.07", "0.2"},
                                         {1, 2}, quick_config());
    CHECK(report::ablation_json(a) == report::ablation_json(b));
}

TEST_CASE("unknown method and axis are rejected") {
    const feature_store::SyntheticSpec spec{2, 5, 8, 0.05, 38};
    CHECK_THROWS_AS(run_comparison(spec, 2, {"bogus"}, {1}, quick_config()), validation_error);
    CHECK_THROWS_AS(axis_from_string("bogus"), validation_error);
    CHECK_THROWS_AS(
        run_ablation(spec, 2, AblationAxis::temperature, {"-1.0"}, {1}, quick_config()),
        validation_error);
}
