#pragma once

#include <optional>
#include <span>
#include <string>

#include "activeft/types.hpp"

namespace activeft::optimizer {

enum class CiUpdate { every_iteration, frozen_at_init };
enum class Regularizer { activeft, none_s1, infonce_s2 };

std::string to_string(CiUpdate u);
std::string to_string(Regularizer r);
CiUpdate ci_update_from_string(const std::string& s);
Regularizer regularizer_from_string(const std::string& s);

struct OptimizerConfig {
    double tau = 0.07;
    double lambda = 1.0;
    double lr = 1e-3;
    uint32_t iterations = 300;
    std::optional<uint32_t> subsample_m;  // nullopt: use the whole pool every iteration
    CiUpdate ci_update = CiUpdate::every_iteration;
    Regularizer regularizer = Regularizer::activeft;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    uint64_t seed = 0;
};

void validate_config(const OptimizerConfig& config);

// total = d_term + weight * r_term, where weight is lambda for the activeft
// regularizer and 1 for the others (the InfoNCE variant is a fixed formula).
struct LossBreakdown {
    double total = 0.0;
    double d_term = 0.0;
    double r_term = 0.0;
};

// A batch is either the whole pool (empty rows) or a subset of its rows.
struct BatchView {
    const FeaturePool* pool = nullptr;
    std::span<const uint32_t> rows;

    static BatchView full(const FeaturePool& p) { return {&p, {}}; }
    static BatchView subset(const FeaturePool& p, std::span<const uint32_t> r) { return {&p, r}; }

    size_t size() const { return rows.empty() ? pool->n : rows.size(); }
    uint32_t pool_index(size_t t) const { return rows.empty() ? uint32_t(t) : rows[t]; }
    const float* feature(size_t t) const { return pool->row(pool_index(t)); }
};

struct OptimizationTrace {
    std::vector<LossBreakdown> losses;  // batch loss at the start of each iteration
    SelectionParams final_params;
    // Whole-pool losses at the trace endpoints, with assignments recomputed.
    LossBreakdown initial_full_loss;
    LossBreakdown final_full_loss;
};

// B pool rows drawn uniformly without replacement, promoted to unit-norm
// double rows.
SelectionParams init_params(const FeaturePool& pool, uint32_t b, uint64_t seed);

// Loss of the parametric model on a batch, with the batch's nearest-parameter
// assignment held fixed.  assignment.c[t] refers to batch element t.
LossBreakdown compute_loss(const BatchView& batch, const SelectionParams& params,
                           const OptimizerConfig& config, const Assignment& assignment);

// Analytic gradient of compute_loss with respect to params (row-major
// b x dim).  Assignment indices are treated as constants.
std::vector<double> loss_gradient(const BatchView& batch, const SelectionParams& params,
                                  const OptimizerConfig& config, const Assignment& assignment);

// Full optimization loop: seeded init, per-iteration subsampling, assignment
// policy, Adam step, re-projection to the unit sphere.
OptimizationTrace optimize(const FeaturePool& pool, const OptimizerConfig& config, uint32_t b);

}  // namespace activeft::optimizer
