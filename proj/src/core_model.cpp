#include "activeft/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "activeft/kernels.hpp"
#include "activeft/parallel.hpp"

namespace activeft::core_model {

namespace {

void check_dims(const FeaturePool& pool, const SelectionParams& params) {
    if (pool.dim != params.dim)
        throw validation_error("dimension mismatch: pool dim " + std::to_string(pool.dim) +
                               " vs params dim " + std::to_string(params.dim));
    if (params.b < 1) throw validation_error("params must hold at least one row");
}

Assignment assign_impl(const FeaturePool& pool, const uint32_t* rows, size_t m,
                       const SelectionParams& params) {
    check_dims(pool, params);
    const auto& k = kernels::ops();
    Assignment out;
    out.c.resize(m);
    out.top1_sim.resize(m);
    parallel::for_blocks(m, [&](size_t, size_t lo, size_t hi) {
        for (size_t t = lo; t < hi; ++t) {
            const float* f = pool.row(rows ? rows[t] : uint32_t(t));
            uint32_t best = 0;
            double best_sim = k.dot_fd(f, params.row(0), pool.dim);
            for (uint32_t j = 1; j < params.b; ++j) {
                const double s = k.dot_fd(f, params.row(j), pool.dim);
                if (s > best_sim) {
                    best_sim = s;
                    best = j;
                }
            }
            out.c[t] = best;
            out.top1_sim[t] = best_sim;
        }
    });
    return out;
}

}  // namespace

double cosine_sim(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw validation_error("cosine_sim: dimension mismatch");
    return kernels::ops().dot_ff(a.data(), b.data(), a.size());
}

double cosine_sim(std::span<const float> a, std::span<const double> b) {
    if (a.size() != b.size()) throw validation_error("cosine_sim: dimension mismatch");
    return kernels::ops().dot_fd(a.data(), b.data(), a.size());
}

Assignment assign(const FeaturePool& pool, const SelectionParams& params) {
    return assign_impl(pool, nullptr, pool.n, params);
}

Assignment assign_rows(const FeaturePool& pool, std::span<const uint32_t> rows,
                       const SelectionParams& params) {
    return assign_impl(pool, rows.data(), rows.size(), params);
}

MixtureDiagnostics assumption_diagnostic(const FeaturePool& pool, const SelectionParams& params,
                                         Temperature tau, uint32_t topk) {
    check_dims(pool, params);
    if (!(tau.tau > 0.0)) throw validation_error("temperature must be positive");
    if (topk < 1 || topk > params.b)
        throw validation_error("diagnostic k must satisfy 1 <= k <= b (got k=" +
                               std::to_string(topk) + ", b=" + std::to_string(params.b) + ")");

    const auto& k = kernels::ops();
    const size_t nblocks = parallel::block_count(pool.n);
    std::vector<std::vector<double>> partial(nblocks, std::vector<double>(topk, 0.0));
    parallel::for_blocks(pool.n, [&](size_t b, size_t lo, size_t hi) {
        std::vector<double> sims(params.b);
        auto& acc = partial[b];
        for (size_t i = lo; i < hi; ++i) {
            const float* f = pool.row(uint32_t(i));
            for (uint32_t j = 0; j < params.b; ++j) sims[j] = k.dot_fd(f, params.row(j), pool.dim);
            std::partial_sort(sims.begin(), sims.begin() + topk, sims.end(), std::greater<>());
            for (uint32_t r = 0; r < topk; ++r) acc[r] += std::exp(sims[r] / tau.tau);
        }
    });

    MixtureDiagnostics diag;
    diag.topk_mean_exp_sim.assign(topk, 0.0);
    for (size_t b = 0; b < nblocks; ++b)
        for (uint32_t r = 0; r < topk; ++r) diag.topk_mean_exp_sim[r] += partial[b][r];
    for (uint32_t r = 0; r < topk; ++r) diag.topk_mean_exp_sim[r] /= double(pool.n);
    return diag;
}

}  // namespace activeft::core_model
