// Command-line front door: pool synthesis, subset selection, evaluation,
// mixture diagnostics, and experiment suites.
//
// Exit codes: 0 success, 1 I/O failure, 2 validation or usage error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "activeft/baselines.hpp"
#include "activeft/core_model.hpp"
#include "activeft/experiments.hpp"
#include "activeft/feature_store.hpp"
#include "activeft/matching.hpp"
#include "activeft/metrics.hpp"
#include "activeft/optimizer.hpp"
#include "activeft/report.hpp"
#include "activeft/types.hpp"

namespace {

using namespace activeft;
using nlohmann::json;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

feature_store::PoolFormat parse_format(const std::string& fmt,
                                       const std::filesystem::path& path) {
    if (fmt == "binary") return feature_store::PoolFormat::binary;
    if (fmt == "csv") return feature_store::PoolFormat::csv;
    return feature_store::format_from_path(path);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        const size_t comma = s.find(',', pos);
        const std::string item =
            s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct OptimizerFlags {
    std::string subsample = "all";
    std::string ci_update = "every_iteration";
    std::string regularizer = "activeft";
    optimizer::OptimizerConfig config;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tau", config.tau, "Temperature (default 0.07)");
        cmd->add_option("--lambda", config.lambda, "Regularization balance weight (default 1)");
        cmd->add_option("--lr", config.lr, "Adam learning rate (default 1e-3)");
        cmd->add_option("--iters", config.iterations, "Optimization iterations (default 300)");
        cmd->add_option("--subsample", subsample,
                        "Per-iteration pool subsample size, or 'all' (default all)");
        cmd->add_option("--ci-update", ci_update,
                        "Assignment update policy: every_iteration|frozen_at_init");
        cmd->add_option("--regularizer", regularizer,
                        "Diversity regularizer: activeft|none_s1|infonce_s2");
        cmd->add_option("--adam-beta1", config.adam_beta1, "Adam beta1 (default 0.9)");
        cmd->add_option("--adam-beta2", config.adam_beta2, "Adam beta2 (default 0.999)");
        cmd->add_option("--adam-eps", config.adam_eps, "Adam epsilon (default 1e-8)");
    }

    optimizer::OptimizerConfig resolve(uint64_t seed) const {
        optimizer::OptimizerConfig cfg = config;
        cfg.seed = seed;
        cfg.ci_update = optimizer::ci_update_from_string(ci_update);
        cfg.regularizer = optimizer::regularizer_from_string(regularizer);
        if (subsample == "all") {
            cfg.subsample_m.reset();
        } else {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(subsample.c_str(), &end, 10);
            if (end == subsample.c_str() || *end != '\0' || v < 1)
                throw validation_error("--subsample expects a positive integer or 'all'");
            cfg.subsample_m = uint32_t(v);
        }
        optimizer::validate_config(cfg);
        return cfg;
    }
};

uint32_t resolve_budget(const FeaturePool& pool, std::optional<uint32_t> b,
                        std::optional<double> ratio) {
    if (b.has_value() == ratio.has_value())
        throw validation_error("exactly one of --b and --ratio is required");
    if (b) {
        if (*b < 1) throw validation_error("--b must be >= 1");
        if (*b > pool.n)
            throw validation_error("budget " + std::to_string(*b) + " exceeds pool size " +
                                   std::to_string(pool.n));
        return *b;
    }
    if (!(*ratio > 0.0) || *ratio > 1.0)
        throw validation_error("--ratio must lie in (0, 1]");
    const uint32_t budget = std::max(1u, uint32_t(std::floor(*ratio * double(pool.n))));
    return budget;
}

int run(int argc, char** argv) {
    CLI::App app{"Representative-subset selection over unit-normalized feature pools"};
    app.require_subcommand(1);

    // --- synth ---------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic pool file");
    feature_store::SyntheticSpec spec;
    std::string synth_out, synth_format = "auto";
    synth->add_option("--clusters", spec.n_clusters, "Number of clusters")->required();
    synth->add_option("--per-cluster", spec.points_per_cluster, "Points per cluster")->required();
    synth->add_option("--dim", spec.dim, "Feature dimension")->required();
    synth->add_option("--spread", spec.spread, "Angular spread in radians")->required();
    synth->add_option("--seed", spec.seed, "RNG seed");
    synth->add_option("--out", synth_out, "Output pool path")->required();
    synth->add_option("--format", synth_format, "binary|csv|auto (default: by extension)");
    synth->callback([&] {
        const FeaturePool pool = feature_store::make_synthetic_pool(spec);
        feature_store::save_pool(pool, synth_out, parse_format(synth_format, synth_out));
    });

    // --- select --------------------------------------------------------
    auto* select = app.add_subcommand("select", "Select a representative subset of a pool");
    std::string sel_method, sel_pool, sel_out, sel_report, sel_pool_format = "auto";
    std::optional<uint32_t> sel_b;
    std::optional<double> sel_ratio;
    uint64_t sel_seed = 0;
    uint32_t sel_kmeans_iters = 100;
    bool sel_no_normalize = false, sel_timing = false;
    OptimizerFlags sel_opt;
    select->add_option("--method", sel_method, "activeft|random|fds|kmeans")->required();
    select->add_option("--pool", sel_pool, "Pool file")->required();
    select->add_option("--b", sel_b, "Budget as a count");
    select->add_option("--ratio", sel_ratio, "Budget as a pool fraction (floor, min 1)");
    select->add_option("--seed", sel_seed, "RNG seed");
    select->add_option("--out", sel_out, "Output indices file")->required();
    select->add_option("--report", sel_report, "Optional JSON report path");
    select->add_option("--pool-format", sel_pool_format, "binary|csv|auto");
    select->add_flag("--no-normalize", sel_no_normalize, "Reject non-unit rows instead of normalizing");
    select->add_option("--kmeans-max-iters", sel_kmeans_iters, "Lloyd iteration cap (default 100)");
    select->add_flag("--timing", sel_timing, "Include wall_time_ms in the report");
    sel_opt.attach(select);
    select->callback([&] {
        const auto start = Clock::now();
        const FeaturePool pool = feature_store::load_pool(
            sel_pool, parse_format(sel_pool_format, sel_pool), !sel_no_normalize);
        const uint32_t b = resolve_budget(pool, sel_b, sel_ratio);
        const optimizer::OptimizerConfig cfg = sel_opt.resolve(sel_seed);
        if (sel_method == "activeft" && b < 2 &&
            cfg.regularizer != optimizer::Regularizer::none_s1)
            throw validation_error(
                "budget 1 is degenerate for activeft: the diversity regularizer needs at "
                "least two parameters; pass --regularizer none_s1 or a larger budget");

        optimizer::OptimizationTrace trace;
        const bool is_activeft = sel_method == "activeft";
        SelectionResult selection = experiments::run_method(pool, sel_method, b, sel_seed, cfg,
                                                            sel_kmeans_iters,
                                                            is_activeft ? &trace : nullptr);
        selection.config_digest = report::config_digest(sel_method, b, cfg);
        report::write_indices(sel_out, selection.indices);

        if (!sel_report.empty()) {
            const metrics::DiversityStats stats = metrics::diversity_stats(pool, selection);
            metrics::DiagnosticsReport diagnostics;
            diagnostics.emd = stats.mean_nearest;
            diagnostics.mean_nearest = stats.mean_nearest;
            diagnostics.min_pairwise = stats.min_pairwise;
            if (is_activeft) {
                diagnostics.initial_loss = trace.initial_full_loss;
                diagnostics.final_loss = trace.final_full_loss;
            }
            json j = report::diagnostics_json(diagnostics);
            j["schema_version"] = report::kSchemaVersion;
            j["method"] = sel_method;
            j["seed"] = sel_seed;
            j["config"]["b"] = b;
            j["config"]["pool_n"] = pool.n;
            j["config"]["pool_dim"] = pool.dim;
            j["config"]["digest"] = selection.config_digest;
            if (is_activeft) j["config"]["optimizer"] = report::config_json(cfg);
            if (sel_method == "kmeans") j["config"]["kmeans_max_iters"] = sel_kmeans_iters;
            if (sel_timing) j["wall_time_ms"] = elapsed_ms(start);
            report::write_json(sel_report, j);
        }
    });

    // --- eval ----------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "Evaluate EMD and diversity of a selection");
    std::string eval_pool, eval_indices, eval_report, eval_pool_format = "auto";
    bool eval_oracle = false, eval_no_normalize = false, eval_timing = false;
    uint32_t eval_oracle_cap = 64;
    eval->add_option("--pool", eval_pool, "Pool file")->required();
    eval->add_option("--indices", eval_indices, "Selection indices file")->required();
    eval->add_option("--report", eval_report, "Output JSON report path")->required();
    eval->add_flag("--oracle", eval_oracle, "Cross-check against the exact transport LP");
    eval->add_option("--oracle-cap", eval_oracle_cap, "Max pool size for the oracle (default 64)");
    eval->add_option("--pool-format", eval_pool_format, "binary|csv|auto");
    eval->add_flag("--no-normalize", eval_no_normalize, "Reject non-unit rows instead of normalizing");
    eval->add_flag("--timing", eval_timing, "Include wall_time_ms in the report");
    eval->callback([&] {
        const auto start = Clock::now();
        const FeaturePool pool = feature_store::load_pool(
            eval_pool, parse_format(eval_pool_format, eval_pool), !eval_no_normalize);
        SelectionResult selection;
        selection.indices = report::read_indices(eval_indices);
        std::sort(selection.indices.begin(), selection.indices.end());

        const metrics::EmdResult emd = metrics::emd_closed_form(pool, selection);
        const metrics::DiversityStats stats = metrics::diversity_stats(pool, selection);
        metrics::DiagnosticsReport diagnostics;
        diagnostics.emd = emd.emd;
        diagnostics.mean_nearest = stats.mean_nearest;
        diagnostics.min_pairwise = stats.min_pairwise;
        json j = report::diagnostics_json(diagnostics);
        j["schema_version"] = report::kSchemaVersion;
        j["b"] = selection.indices.size();
        if (eval_oracle) {
            const double lp = metrics::emd_lp_oracle(pool, selection, eval_oracle_cap);
            j["oracle"]["emd"] = lp;
            j["oracle"]["abs_difference"] = std::abs(lp - emd.emd);
        }
        if (eval_timing) j["wall_time_ms"] = elapsed_ms(start);
        report::write_json(eval_report, j);
    });

    // --- diag ----------------------------------------------------------
    auto* diag = app.add_subcommand("diag", "Top-k exponential-similarity diagnostics");
    std::string diag_pool, diag_report, diag_pool_format = "auto";
    uint32_t diag_b = 0, diag_k = 20;
    uint64_t diag_seed = 0;
    bool diag_optimized = false, diag_no_normalize = false;
    OptimizerFlags diag_opt;  // --tau doubles as the diagnostic temperature
    diag->add_option("--pool", diag_pool, "Pool file")->required();
    diag->add_option("--b", diag_b, "Number of parameters")->required();
    diag->add_option("--seed", diag_seed, "RNG seed for the parameter init");
    diag->add_option("--k", diag_k, "Top-k depth (default 20)");
    diag->add_flag("--optimized", diag_optimized,
                   "Diagnose the parameters after optimization instead of at init");
    diag->add_option("--report", diag_report, "Output JSON report path")->required();
    diag->add_option("--pool-format", diag_pool_format, "binary|csv|auto");
    diag->add_flag("--no-normalize", diag_no_normalize, "Reject non-unit rows instead of normalizing");
    diag_opt.attach(diag);
    diag->callback([&] {
        const FeaturePool pool = feature_store::load_pool(
            diag_pool, parse_format(diag_pool_format, diag_pool), !diag_no_normalize);
        SelectionParams params;
        const optimizer::OptimizerConfig cfg = diag_opt.resolve(diag_seed);
        if (diag_optimized) {
            params = optimizer::optimize(pool, cfg, diag_b).final_params;
        } else {
            params = optimizer::init_params(pool, diag_b, diag_seed);
        }
        const MixtureDiagnostics stats =
            core_model::assumption_diagnostic(pool, params, Temperature{cfg.tau}, diag_k);
        json j;
        j["schema_version"] = report::kSchemaVersion;
        j["b"] = diag_b;
        j["k"] = diag_k;
        j["tau"] = cfg.tau;
        j["optimized"] = diag_optimized;
        j["topk_mean_exp_sim"] = stats.topk_mean_exp_sim;
        if (diag_k >= 2)
            j["ratio_first_second"] =
                stats.topk_mean_exp_sim[0] / stats.topk_mean_exp_sim[1];
        report::write_json(diag_report, j);
    });

    // --- experiment ----------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "Comparison and ablation suites");
    feature_store::SyntheticSpec exp_spec{3, 100, 16, 0.05, 0};
    std::string exp_mode, exp_methods = "activeft,random,fds,kmeans";
    std::string exp_axis, exp_values, exp_report;
    uint32_t exp_b = 0, exp_seeds = 1;
    uint64_t exp_seed_base = 1;
    OptimizerFlags exp_opt;
    exp->add_option("--mode", exp_mode, "comparison|ablation")->required();
    exp->add_option("--clusters", exp_spec.n_clusters, "Synthetic pool clusters");
    exp->add_option("--per-cluster", exp_spec.points_per_cluster, "Points per cluster");
    exp->add_option("--dim", exp_spec.dim, "Feature dimension");
    exp->add_option("--spread", exp_spec.spread, "Angular spread");
    exp->add_option("--pool-seed", exp_spec.seed, "Synthetic pool seed");
    exp->add_option("--b", exp_b, "Budget")->required();
    exp->add_option("--seeds", exp_seeds, "Number of selection seeds (default 1)");
    exp->add_option("--seed-base", exp_seed_base, "First selection seed (default 1)");
    exp->add_option("--methods", exp_methods, "Comma list for comparison mode");
    exp->add_option("--axis", exp_axis, "temperature|ci_update|regularizer (ablation mode)");
    exp->add_option("--values", exp_values, "Comma list of axis values (ablation mode)");
    exp->add_option("--report", exp_report, "Output JSON report path")->required();
    exp_opt.attach(exp);
    exp->callback([&] {
        std::vector<uint64_t> seeds;
        for (uint32_t s = 0; s < exp_seeds; ++s) seeds.push_back(exp_seed_base + s);
        const optimizer::OptimizerConfig cfg = exp_opt.resolve(0);
        if (exp_mode == "comparison") {
            const auto table = experiments::run_comparison(exp_spec, exp_b,
                                                           split_csv(exp_methods), seeds, cfg);
            report::write_json(exp_report, report::comparison_json(table));
        } else if (exp_mode == "ablation") {
            if (exp_axis.empty() || exp_values.empty())
                throw validation_error("ablation mode requires --axis and --values");
            const auto table =
                experiments::run_ablation(exp_spec, exp_b, experiments::axis_from_string(exp_axis),
                                          split_csv(exp_values), seeds, cfg);
            report::write_json(exp_report, report::ablation_json(table));
        } else {
            throw validation_error("unknown mode '" + exp_mode + "'");
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const validation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
