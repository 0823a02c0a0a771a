#pragma once

#include <string>
#include <vector>

#include "activeft/feature_store.hpp"
#include "activeft/metrics.hpp"
#include "activeft/optimizer.hpp"

namespace activeft::experiments {

// One (method, seed) cell of a comparison suite.
struct MethodRun {
    std::string method;
    uint64_t seed = 0;
    double emd = 0.0;
    std::optional<double> min_pairwise;
    double mean_nearest = 0.0;
};

struct MethodSummary {
    std::string method;
    double mean_emd = 0.0;
    double std_emd = 0.0;
    double mean_min_pairwise = 0.0;
    double mean_nearest = 0.0;
    std::vector<MethodRun> runs;
};

struct ComparisonTable {
    feature_store::SyntheticSpec pool_spec;
    uint32_t b = 0;
    std::vector<MethodSummary> rows;
};

// Runs every method over every seed on the same synthetic pool and
// aggregates mean/std EMD plus diversity statistics.  Methods are
// {"activeft", "random", "fds", "kmeans"}.
ComparisonTable run_comparison(const feature_store::SyntheticSpec& spec, uint32_t b,
                               const std::vector<std::string>& methods,
                               const std::vector<uint64_t>& seeds,
                               const optimizer::OptimizerConfig& config);

enum class AblationAxis { temperature, ci_update, regularizer };

AblationAxis axis_from_string(const std::string& s);
std::string to_string(AblationAxis axis);

struct AblationRow {
    std::string value;
    double mean_emd = 0.0;
    double std_emd = 0.0;
    double mean_min_pairwise = 0.0;
    // Mean top-1/top-2 exponential-similarity ratio of the final parameters,
    // evaluated at the row's own temperature.
    double mean_assumption_ratio = 0.0;
    std::vector<MethodRun> runs;
};

struct AblationTable {
    feature_store::SyntheticSpec pool_spec;
    uint32_t b = 0;
    AblationAxis axis = AblationAxis::temperature;
    std::vector<AblationRow> rows;
};

// Sweeps one optimizer-config axis over the given values, running the
// activeft selection per seed and aggregating EMD/diversity per value.
AblationTable run_ablation(const feature_store::SyntheticSpec& spec, uint32_t b,
                           AblationAxis axis, const std::vector<std::string>& values,
                           const std::vector<uint64_t>& seeds,
                           const optimizer::OptimizerConfig& base_config);

// Selection dispatch shared with the CLI: method is one of
// {"activeft", "random", "fds", "kmeans"}.
SelectionResult run_method(const FeaturePool& pool, const std::string& method, uint32_t b,
                           uint64_t seed, const optimizer::OptimizerConfig& config,
                           uint32_t kmeans_max_iters = 100,
                           optimizer::OptimizationTrace* trace_out = nullptr);

}  // namespace activeft::experiments
