#include "activeft/optimizer.hpp"

#include <cmath>
#include <limits>

#include "activeft/core_model.hpp"
#include "activeft/kernels.hpp"
#include "activeft/parallel.hpp"
#include "activeft/rng.hpp"

namespace activeft::optimizer {

std::string to_string(CiUpdate u) {
    return u == CiUpdate::every_iteration ? "every_iteration" : "frozen_at_init";
}

std::string to_string(Regularizer r) {
    switch (r) {
        case Regularizer::activeft: return "activeft";
        case Regularizer::none_s1: return "none_s1";
        case Regularizer::infonce_s2: return "infonce_s2";
    }
    return "?";
}

CiUpdate ci_update_from_string(const std::string& s) {
    if (s == "every_iteration") return CiUpdate::every_iteration;
    if (s == "frozen_at_init") return CiUpdate::frozen_at_init;
    throw validation_error("unknown ci_update policy '" + s + "'");
}

Regularizer regularizer_from_string(const std::string& s) {
    if (s == "activeft") return Regularizer::activeft;
    if (s == "none_s1") return Regularizer::none_s1;
    if (s == "infonce_s2") return Regularizer::infonce_s2;
    throw validation_error("unknown regularizer '" + s + "'");
}

void validate_config(const OptimizerConfig& c) {
    if (!(c.tau > 0.0)) throw validation_error("tau must be positive");
    if (!(c.lr > 0.0)) throw validation_error("learning rate must be positive");
    if (c.iterations < 1) throw validation_error("iterations must be >= 1");
    if (!(c.adam_beta1 > 0.0 && c.adam_beta1 < 1.0))
        throw validation_error("adam_beta1 must lie in (0, 1)");
    if (!(c.adam_beta2 > 0.0 && c.adam_beta2 < 1.0))
        throw validation_error("adam_beta2 must lie in (0, 1)");
    if (!(c.adam_eps > 0.0)) throw validation_error("adam_eps must be positive");
    if (c.subsample_m && *c.subsample_m < 1)
        throw validation_error("subsample_m must be >= 1 when set");
}

namespace {

void check_inputs(const BatchView& batch, const SelectionParams& params,
                  const OptimizerConfig& config, const Assignment& assignment) {
    validate_config(config);
    if (batch.pool == nullptr || batch.size() == 0) throw validation_error("empty batch");
    if (batch.pool->dim != params.dim) throw validation_error("dimension mismatch");
    if (assignment.c.size() != batch.size())
        throw validation_error("assignment does not cover the batch");
    for (uint32_t c : assignment.c)
        if (c >= params.b) throw validation_error("assignment index out of range");
    if (params.b < 2 && config.regularizer != Regularizer::none_s1)
        throw validation_error(
            "degenerate budget: B=1 leaves no other parameters for the "
            "regularizer; use regularizer none_s1 or B >= 2");
}

// Pairwise parameter similarities divided by tau, diagonal excluded by the
// callers.  Row-major b x b.
std::vector<double> pairwise_sims(const SelectionParams& params, double tau) {
    const auto& k = kernels::ops();
    const uint32_t b = params.b;
    std::vector<double> s(size_t(b) * b, 0.0);
    for (uint32_t j = 0; j < b; ++j)
        for (uint32_t l = j + 1; l < b; ++l) {
            const double v = k.dot_dd(params.row(j), params.row(l), params.dim) / tau;
            s[size_t(j) * b + l] = v;
            s[size_t(l) * b + j] = v;
        }
    return s;
}

// Batch-by-parameter similarity matrix divided by tau (InfoNCE denominator).
std::vector<double> batch_param_sims(const BatchView& batch, const SelectionParams& params,
                                     double tau) {
    const auto& k = kernels::ops();
    const size_t m = batch.size();
    const uint32_t b = params.b;
    std::vector<double> s(m * b);
    parallel::for_blocks(m, [&](size_t, size_t lo, size_t hi) {
        for (size_t t = lo; t < hi; ++t) {
            const float* f = batch.feature(t);
            for (uint32_t j = 0; j < b; ++j)
                s[t * b + j] = k.dot_fd(f, params.row(j), params.dim) / tau;
        }
    });
    return s;
}

// log sum over k != j of exp(sims[j][k]), max-shifted.
double row_logsumexp_offdiag(const std::vector<double>& sims, uint32_t b, uint32_t j) {
    double mx = -std::numeric_limits<double>::infinity();
    for (uint32_t k = 0; k < b; ++k)
        if (k != j) mx = std::max(mx, sims[size_t(j) * b + k]);
    double sum = 0.0;
    for (uint32_t k = 0; k < b; ++k)
        if (k != j) sum += std::exp(sims[size_t(j) * b + k] - mx);
    return mx + std::log(sum);
}

// log sum over batch elements of exp(sims[t][j]) for column j.
double col_logsumexp(const std::vector<double>& sims, size_t m, uint32_t b, uint32_t j) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < m; ++t) mx = std::max(mx, sims[t * b + j]);
    double sum = 0.0;
    for (size_t t = 0; t < m; ++t) sum += std::exp(sims[t * b + j] - mx);
    return mx + std::log(sum);
}

double mean_top1_term(const BatchView& batch, const SelectionParams& params,
                      const Assignment& assignment, double tau) {
    const auto& k = kernels::ops();
    const size_t m = batch.size();
    double sum = 0.0;
    for (size_t t = 0; t < m; ++t)
        sum += k.dot_fd(batch.feature(t), params.row(assignment.c[t]), params.dim);
    return -sum / (double(m) * tau);
}

struct AdamState {
    std::vector<double> m1, m2;
    uint64_t t = 0;

    explicit AdamState(size_t n) : m1(n, 0.0), m2(n, 0.0) {}

    void step(std::vector<double>& x, const std::vector<double>& g, const OptimizerConfig& c) {
        ++t;
        const double bc1 = 1.0 - std::pow(c.adam_beta1, double(t));
        const double bc2 = 1.0 - std::pow(c.adam_beta2, double(t));
        for (size_t i = 0; i < x.size(); ++i) {
            m1[i] = c.adam_beta1 * m1[i] + (1.0 - c.adam_beta1) * g[i];
            m2[i] = c.adam_beta2 * m2[i] + (1.0 - c.adam_beta2) * g[i] * g[i];
            x[i] -= c.lr * (m1[i] / bc1) / (std::sqrt(m2[i] / bc2) + c.adam_eps);
        }
    }
};

void project_rows_to_sphere(SelectionParams& params) {
    const auto& k = kernels::ops();
    for (uint32_t j = 0; j < params.b; ++j) {
        double* r = params.row(j);
        const double norm = std::sqrt(k.dot_dd(r, r, params.dim));
        if (!(norm > 1e-12)) throw error("parameter row collapsed to zero norm");
        const double inv = 1.0 / norm;
        for (uint32_t d = 0; d < params.dim; ++d) r[d] *= inv;
    }
}

}  // namespace

SelectionParams init_params(const FeaturePool& pool, uint32_t b, uint64_t seed) {
    if (b < 1) throw validation_error("budget must be >= 1");
    if (b > pool.n)
        throw validation_error("budget " + std::to_string(b) + " exceeds pool size " +
                               std::to_string(pool.n));
    rng::Engine engine(seed);
    const std::vector<uint32_t> idx = rng::sample_without_replacement(pool.n, b, engine);

    SelectionParams params;
    params.b = b;
    params.dim = pool.dim;
    params.theta.resize(size_t(b) * pool.dim);
    for (uint32_t j = 0; j < b; ++j) {
        const float* src = pool.row(idx[j]);
        double* dst = params.row(j);
        for (uint32_t d = 0; d < pool.dim; ++d) dst[d] = double(src[d]);
    }
    project_rows_to_sphere(params);
    return params;
}

LossBreakdown compute_loss(const BatchView& batch, const SelectionParams& params,
                           const OptimizerConfig& config, const Assignment& assignment) {
    check_inputs(batch, params, config, assignment);
    const size_t m = batch.size();
    const uint32_t b = params.b;

    LossBreakdown loss;
    loss.d_term = mean_top1_term(batch, params, assignment, config.tau);

    switch (config.regularizer) {
        case Regularizer::none_s1:
            loss.r_term = 0.0;
            loss.total = loss.d_term;
            break;
        case Regularizer::activeft: {
            const std::vector<double> sims = pairwise_sims(params, config.tau);
            double sum = 0.0;
            for (uint32_t j = 0; j < b; ++j) sum += row_logsumexp_offdiag(sims, b, j);
            loss.r_term = sum / double(b);
            loss.total = loss.d_term + config.lambda * loss.r_term;
            break;
        }
        case Regularizer::infonce_s2: {
            const std::vector<double> sims = batch_param_sims(batch, params, config.tau);
            std::vector<double> log_z(b);
            for (uint32_t j = 0; j < b; ++j) log_z[j] = col_logsumexp(sims, m, b, j);
            double sum = 0.0;
            for (size_t t = 0; t < m; ++t) sum += log_z[assignment.c[t]];
            loss.r_term = sum / double(m);
            loss.total = loss.d_term + loss.r_term;
            break;
        }
    }
    return loss;
}

std::vector<double> loss_gradient(const BatchView& batch, const SelectionParams& params,
                                  const OptimizerConfig& config, const Assignment& assignment) {
    check_inputs(batch, params, config, assignment);
    const auto& k = kernels::ops();
    const size_t m = batch.size();
    const uint32_t b = params.b;
    const uint32_t dim = params.dim;
    std::vector<double> grad(size_t(b) * dim, 0.0);

    // D term: each parameter is pulled toward the features assigned to it.
    const double dcoef = -1.0 / (double(m) * config.tau);
    for (size_t t = 0; t < m; ++t)
        k.axpy_f(dcoef, batch.feature(t), grad.data() + size_t(assignment.c[t]) * dim, dim);

    switch (config.regularizer) {
        case Regularizer::none_s1:
            break;
        case Regularizer::activeft: {
            const std::vector<double> sims = pairwise_sims(params, config.tau);
            const double rcoef = config.lambda / (double(b) * config.tau);
            std::vector<double> lse(b);
            for (uint32_t j = 0; j < b; ++j) lse[j] = row_logsumexp_offdiag(sims, b, j);
            // Each theta_j appears in its own log-sum-exp (as anchor) and in
            // every other row's sum (as neighbor).
            for (uint32_t j = 0; j < b; ++j) {
                for (uint32_t l = 0; l < b; ++l) {
                    if (l == j) continue;
                    const double w = std::exp(sims[size_t(j) * b + l] - lse[j]);
                    k.axpy_d(rcoef * w, params.row(l), grad.data() + size_t(j) * dim, dim);
                    k.axpy_d(rcoef * w, params.row(j), grad.data() + size_t(l) * dim, dim);
                }
            }
            break;
        }
        case Regularizer::infonce_s2: {
            const std::vector<double> sims = batch_param_sims(batch, params, config.tau);
            std::vector<double> log_z(b);
            std::vector<uint32_t> count(b, 0);
            for (uint32_t j = 0; j < b; ++j) log_z[j] = col_logsumexp(sims, m, b, j);
            for (size_t t = 0; t < m; ++t) ++count[assignment.c[t]];
            for (uint32_t j = 0; j < b; ++j) {
                if (count[j] == 0) continue;
                const double c = double(count[j]) / (double(m) * config.tau);
                for (size_t t = 0; t < m; ++t) {
                    const double p = std::exp(sims[t * b + j] - log_z[j]);
                    k.axpy_f(c * p, batch.feature(t), grad.data() + size_t(j) * dim, dim);
                }
            }
            break;
        }
    }
    return grad;
}

OptimizationTrace optimize(const FeaturePool& pool, const OptimizerConfig& config, uint32_t b) {
    validate_config(config);
    if (b < 1) throw validation_error("budget must be >= 1");
    if (b > pool.n)
        throw validation_error("budget " + std::to_string(b) + " exceeds pool size " +
                               std::to_string(pool.n));
    if (b < 2 && config.regularizer != Regularizer::none_s1)
        throw validation_error(
            "degenerate budget: B=1 requires regularizer none_s1 (the pairwise "
            "regularizer has no other parameter to compare against)");
    if (config.subsample_m && *config.subsample_m > pool.n)
        throw validation_error("subsample_m exceeds pool size");

    SelectionParams params = init_params(pool, b, config.seed);

    OptimizationTrace trace;
    trace.initial_full_loss = compute_loss(BatchView::full(pool), params, config,
                                           core_model::assign(pool, params));
    trace.losses.reserve(config.iterations);

    // Frozen policy: the assignment computed once against the initial
    // parameters, restricted to each iteration's batch.
    Assignment frozen;
    if (config.ci_update == CiUpdate::frozen_at_init) frozen = core_model::assign(pool, params);

    rng::Engine subsample_rng(rng::splitmix64(config.seed ^ 0x9b1ce5a2f0d6c3e7ull));
    std::vector<uint32_t> index_pool;
    const bool subsampling = config.subsample_m && *config.subsample_m < pool.n;
    if (subsampling) {
        index_pool.resize(pool.n);
        for (uint32_t i = 0; i < pool.n; ++i) index_pool[i] = i;
    }

    AdamState adam(params.theta.size());
    for (uint32_t iter = 0; iter < config.iterations; ++iter) {
        BatchView batch = BatchView::full(pool);
        if (subsampling) {
            rng::partial_shuffle(index_pool, *config.subsample_m, subsample_rng);
            batch = BatchView::subset(
                pool, std::span<const uint32_t>(index_pool.data(), *config.subsample_m));
        }

        Assignment assignment;
        if (config.ci_update == CiUpdate::every_iteration) {
            assignment = batch.rows.empty() ? core_model::assign(pool, params)
                                            : core_model::assign_rows(pool, batch.rows, params);
        } else {
            const size_t m = batch.size();
            assignment.c.resize(m);
            assignment.top1_sim.resize(m);
            for (size_t t = 0; t < m; ++t) {
                assignment.c[t] = frozen.c[batch.pool_index(t)];
                assignment.top1_sim[t] = frozen.top1_sim[batch.pool_index(t)];
            }
        }

        trace.losses.push_back(compute_loss(batch, params, config, assignment));
        const std::vector<double> grad = loss_gradient(batch, params, config, assignment);
        adam.step(params.theta, grad, config);
        project_rows_to_sphere(params);
    }

    trace.final_full_loss = compute_loss(BatchView::full(pool), params, config,
                                         core_model::assign(pool, params));
    trace.final_params = std::move(params);
    return trace;
}

}  // namespace activeft::optimizer
