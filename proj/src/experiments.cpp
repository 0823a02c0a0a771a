#include "activeft/experiments.hpp"

#include <cmath>
#include <cstdlib>

#include "activeft/baselines.hpp"
#include "activeft/core_model.hpp"
#include "activeft/matching.hpp"

namespace activeft::experiments {

namespace {

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

Aggregate aggregate(const std::vector<double>& xs) {
    Aggregate a;
    if (xs.empty()) return a;
    for (double x : xs) a.mean += x;
    a.mean /= double(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - a.mean) * (x - a.mean);
    a.stddev = std::sqrt(var / double(xs.size()));
    return a;
}

MethodRun evaluate_selection(const FeaturePool& pool, const SelectionResult& selection) {
    MethodRun run;
    run.method = selection.method;
    run.seed = selection.seed;
    const metrics::DiversityStats stats = metrics::diversity_stats(pool, selection);
    run.mean_nearest = stats.mean_nearest;
    run.emd = stats.mean_nearest;
    run.min_pairwise = stats.min_pairwise;
    return run;
}

}  // namespace

SelectionResult run_method(const FeaturePool& pool, const std::string& method, uint32_t b,
                           uint64_t seed, const optimizer::OptimizerConfig& config,
                           uint32_t kmeans_max_iters, optimizer::OptimizationTrace* trace_out) {
    if (method == "random") return baselines::select_random(pool, b, seed);
    if (method == "fds") return baselines::select_fds(pool, b, seed);
    if (method == "kmeans") return baselines::select_kmeans(pool, b, seed, kmeans_max_iters);
    if (method == "activeft") {
        optimizer::OptimizerConfig cfg = config;
        cfg.seed = seed;
        optimizer::OptimizationTrace trace = optimizer::optimize(pool, cfg, b);
        SelectionResult selection = matching::match(pool, trace.final_params);
        selection.method = "activeft";
        selection.seed = seed;
        if (trace_out != nullptr) *trace_out = std::move(trace);
        return selection;
    }
    throw validation_error("unknown method '" + method + "'");
}

ComparisonTable run_comparison(const feature_store::SyntheticSpec& spec, uint32_t b,
                               const std::vector<std::string>& methods,
                               const std::vector<uint64_t>& seeds,
                               const optimizer::OptimizerConfig& config) {
    if (methods.empty()) throw validation_error("comparison requires at least one method");
    if (seeds.empty()) throw validation_error("comparison requires at least one seed");
    const FeaturePool pool = feature_store::make_synthetic_pool(spec);

    ComparisonTable table;
    table.pool_spec = spec;
    table.b = b;
    for (const std::string& method : methods) {
        MethodSummary summary;
        summary.method = method;
        std::vector<double> emds, min_pairs, nearests;
        for (uint64_t seed : seeds) {
            const SelectionResult selection = run_method(pool, method, b, seed, config);
            MethodRun run = evaluate_selection(pool, selection);
            emds.push_back(run.emd);
            if (run.min_pairwise) min_pairs.push_back(*run.min_pairwise);
            nearests.push_back(run.mean_nearest);
            summary.runs.push_back(std::move(run));
        }
        const Aggregate emd_agg = aggregate(emds);
        summary.mean_emd = emd_agg.mean;
        summary.std_emd = emd_agg.stddev;
        summary.mean_min_pairwise = aggregate(min_pairs).mean;
        summary.mean_nearest = aggregate(nearests).mean;
        table.rows.push_back(std::move(summary));
    }
    return table;
}

AblationAxis axis_from_string(const std::string& s) {
    if (s == "temperature") return AblationAxis::temperature;
    if (s == "ci_update") return AblationAxis::ci_update;
    if (s == "regularizer") return AblationAxis::regularizer;
    throw validation_error("unknown ablation axis '" + s + "'");
}

std::string to_string(AblationAxis axis) {
    switch (axis) {
        case AblationAxis::temperature: return "temperature";
        case AblationAxis::ci_update: return "ci_update";
        case AblationAxis::regularizer: return "regularizer";
    }
    return "?";
}

AblationTable run_ablation(const feature_store::SyntheticSpec& spec, uint32_t b,
                           AblationAxis axis, const std::vector<std::string>& values,
                           const std::vector<uint64_t>& seeds,
                           const optimizer::OptimizerConfig& base_config) {
    if (values.empty()) throw validation_error("ablation requires at least one value");
    if (seeds.empty()) throw validation_error("ablation requires at least one seed");
    const FeaturePool pool = feature_store::make_synthetic_pool(spec);

    AblationTable table;
    table.pool_spec = spec;
    table.b = b;
    table.axis = axis;
    for (const std::string& value : values) {
        optimizer::OptimizerConfig cfg = base_config;
        switch (axis) {
            case AblationAxis::temperature: {
                char* end = nullptr;
                const double tau = std::strtod(value.c_str(), &end);
                if (end == value.c_str() || *end != '\0' || !(tau > 0.0))
                    throw validation_error("invalid temperature value '" + value + "'");
                cfg.tau = tau;
                break;
            }
            case AblationAxis::ci_update:
                cfg.ci_update = optimizer::ci_update_from_string(value);
                break;
            case AblationAxis::regularizer:
                cfg.regularizer = optimizer::regularizer_from_string(value);
                break;
        }

        AblationRow row;
        row.value = value;
        std::vector<double> emds, min_pairs, ratios;
        for (uint64_t seed : seeds) {
            optimizer::OptimizationTrace trace;
            const SelectionResult selection =
                run_method(pool, "activeft", b, seed, cfg, 100, &trace);
            MethodRun run = evaluate_selection(pool, selection);
            if (b >= 2) {
                const MixtureDiagnostics diag = core_model::assumption_diagnostic(
                    pool, trace.final_params, Temperature{cfg.tau}, 2);
                ratios.push_back(diag.topk_mean_exp_sim[0] / diag.topk_mean_exp_sim[1]);
            }
            emds.push_back(run.emd);
            if (run.min_pairwise) min_pairs.push_back(*run.min_pairwise);
            row.runs.push_back(std::move(run));
        }
        const Aggregate emd_agg = aggregate(emds);
        row.mean_emd = emd_agg.mean;
        row.std_emd = emd_agg.stddev;
        row.mean_min_pairwise = aggregate(min_pairs).mean;
        row.mean_assumption_ratio = aggregate(ratios).mean;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace activeft::experiments
