#include "activeft/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "activeft/kernels.hpp"
#include "activeft/matching.hpp"
#include "activeft/parallel.hpp"
#include "activeft/rng.hpp"

namespace activeft::baselines {

namespace {

void check_budget(const FeaturePool& pool, uint32_t b) {
    if (b < 1) throw validation_error("budget must be >= 1");
    if (b > pool.n)
        throw validation_error("budget " + std::to_string(b) + " exceeds pool size " +
                               std::to_string(pool.n));
}

}  // namespace

SelectionResult select_random(const FeaturePool& pool, uint32_t b, uint64_t seed) {
    check_budget(pool, b);
    rng::Engine engine(seed);
    SelectionResult result;
    result.indices = rng::sample_without_replacement(pool.n, b, engine);
    std::sort(result.indices.begin(), result.indices.end());
    result.method = "random";
    result.seed = seed;
    return result;
}

FdsTrace fds_trace(const FeaturePool& pool, uint32_t b, uint64_t seed) {
    check_budget(pool, b);
    const auto& k = kernels::ops();
    rng::Engine engine(seed);

    FdsTrace trace;
    trace.order.reserve(b);
    trace.radius.reserve(b);

    const uint32_t first = uint32_t(rng::next_below(engine, pool.n));
    trace.order.push_back(first);
    trace.radius.push_back(0.0);

    std::vector<double> min_dist(pool.n);
    std::vector<char> chosen(pool.n, 0);
    chosen[first] = 1;
    const float* center = pool.row(first);
    parallel::for_blocks(pool.n, [&](size_t, size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i)
            min_dist[i] = 1.0 - k.dot_ff(pool.row(uint32_t(i)), center, pool.dim);
    });

    struct BlockBest {
        double dist = -1.0;
        uint32_t index = 0;
        bool any = false;
    };
    std::vector<BlockBest> block_best(parallel::block_count(pool.n));

    for (uint32_t picked = 1; picked < b; ++picked) {
        parallel::for_blocks(pool.n, [&](size_t blk, size_t lo, size_t hi) {
            BlockBest best;
            for (size_t i = lo; i < hi; ++i) {
                if (chosen[i]) continue;
                if (!best.any || min_dist[i] > best.dist) {
                    best.dist = min_dist[i];
                    best.index = uint32_t(i);
                    best.any = true;
                }
            }
            block_best[blk] = best;
        });
        BlockBest winner;
        for (const BlockBest& cand : block_best) {
            if (!cand.any) continue;
            if (!winner.any || cand.dist > winner.dist) winner = cand;
        }

        chosen[winner.index] = 1;
        trace.order.push_back(winner.index);
        trace.radius.push_back(winner.dist);
        const float* next = pool.row(winner.index);
        parallel::for_blocks(pool.n, [&](size_t, size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                const double d = 1.0 - k.dot_ff(pool.row(uint32_t(i)), next, pool.dim);
                if (d < min_dist[i]) min_dist[i] = d;
            }
        });
    }
    return trace;
}

SelectionResult select_fds(const FeaturePool& pool, uint32_t b, uint64_t seed) {
    FdsTrace trace = fds_trace(pool, b, seed);
    SelectionResult result;
    result.indices = std::move(trace.order);
    std::sort(result.indices.begin(), result.indices.end());
    result.method = "fds";
    result.seed = seed;
    return result;
}

KMeansTrace kmeans_trace(const FeaturePool& pool, uint32_t b, uint64_t seed, uint32_t max_iters) {
    check_budget(pool, b);
    if (max_iters < 1) throw validation_error("max_iters must be >= 1");
    const auto& k = kernels::ops();
    const uint32_t dim = pool.dim;
    rng::Engine engine(seed);

    // Squared row norms; the features are unit vectors but the objective uses
    // the exact stored values.
    std::vector<double> row_norm2(pool.n);
    for (uint32_t i = 0; i < pool.n; ++i)
        row_norm2[i] = k.dot_ff(pool.row(i), pool.row(i), dim);

    // k-means++ seeding over pool rows.
    std::vector<double> centroids(size_t(b) * dim);
    std::vector<char> is_center(pool.n, 0);
    auto set_center = [&](uint32_t slot, uint32_t row) {
        const float* src = pool.row(row);
        double* dst = centroids.data() + size_t(slot) * dim;
        for (uint32_t d = 0; d < dim; ++d) dst[d] = double(src[d]);
        is_center[row] = 1;
    };

    const uint32_t first = uint32_t(rng::next_below(engine, pool.n));
    set_center(0, first);
    std::vector<double> d2(pool.n);
    for (uint32_t i = 0; i < pool.n; ++i) {
        const double s = k.dot_ff(pool.row(i), pool.row(first), dim);
        d2[i] = std::max(0.0, row_norm2[i] + row_norm2[first] - 2.0 * s);
    }
    for (uint32_t slot = 1; slot < b; ++slot) {
        double total = 0.0;
        for (uint32_t i = 0; i < pool.n; ++i) total += d2[i];
        uint32_t next = pool.n;
        if (total > 0.0) {
            const double r = rng::next_unit(engine) * total;
            double acc = 0.0;
            for (uint32_t i = 0; i < pool.n; ++i) {
                acc += d2[i];
                if (acc > r) {
                    next = i;
                    break;
                }
            }
            if (next == pool.n) {  // r landed on the accumulated rounding tail
                for (uint32_t i = pool.n; i-- > 0;)
                    if (d2[i] > 0.0) {
                        next = i;
                        break;
                    }
            }
        }
        if (next == pool.n) {
            // All remaining distances are zero (duplicate-heavy pool): fall
            // back to a uniform draw over rows not yet used as centers.
            uint32_t free_count = 0;
            for (uint32_t i = 0; i < pool.n; ++i) free_count += !is_center[i];
            uint64_t pick = rng::next_below(engine, free_count);
            for (uint32_t i = 0; i < pool.n; ++i) {
                if (is_center[i]) continue;
                if (pick == 0) {
                    next = i;
                    break;
                }
                --pick;
            }
        }
        set_center(slot, next);
        for (uint32_t i = 0; i < pool.n; ++i) {
            const double s = k.dot_ff(pool.row(i), pool.row(next), dim);
            const double d = std::max(0.0, row_norm2[i] + row_norm2[next] - 2.0 * s);
            if (d < d2[i]) d2[i] = d;
        }
    }

    KMeansTrace trace;
    std::vector<uint32_t> assignment(pool.n, 0);
    std::vector<uint32_t> prev_assignment;
    std::vector<double> centroid_norm2(b);
    std::vector<double> dist2(pool.n);

    const size_t nblocks = parallel::block_count(pool.n);
    std::vector<std::vector<double>> block_sums(nblocks);
    std::vector<std::vector<uint32_t>> block_counts(nblocks);

    for (uint32_t iter = 0; iter < max_iters; ++iter) {
        for (uint32_t j = 0; j < b; ++j) {
            const double* c = centroids.data() + size_t(j) * dim;
            centroid_norm2[j] = k.dot_dd(c, c, dim);
        }

        // Assignment pass.
        parallel::for_blocks(pool.n, [&](size_t, size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                const float* f = pool.row(uint32_t(i));
                uint32_t best = 0;
                double best_d = row_norm2[i] + centroid_norm2[0] -
                                2.0 * k.dot_fd(f, centroids.data(), dim);
                for (uint32_t j = 1; j < b; ++j) {
                    const double d = row_norm2[i] + centroid_norm2[j] -
                                     2.0 * k.dot_fd(f, centroids.data() + size_t(j) * dim, dim);
                    if (d < best_d) {
                        best_d = d;
                        best = j;
                    }
                }
                assignment[i] = best;
                dist2[i] = std::max(0.0, best_d);
            }
        });

        double objective = 0.0;
        for (uint32_t i = 0; i < pool.n; ++i) objective += dist2[i];
        trace.objective.push_back(objective);
        trace.iterations = iter + 1;

        if (iter > 0 && assignment == prev_assignment) {
            trace.converged = true;
            break;
        }
        prev_assignment = assignment;

        // Centroid update: per-block partial sums combined in block order.
        parallel::for_blocks(pool.n, [&](size_t blk, size_t lo, size_t hi) {
            auto& sums = block_sums[blk];
            auto& counts = block_counts[blk];
            sums.assign(size_t(b) * dim, 0.0);
            counts.assign(b, 0);
            for (size_t i = lo; i < hi; ++i) {
                const uint32_t j = assignment[i];
                k.axpy_f(1.0, pool.row(uint32_t(i)), sums.data() + size_t(j) * dim, dim);
                ++counts[j];
            }
        });
        std::vector<double> sums(size_t(b) * dim, 0.0);
        std::vector<uint32_t> counts(b, 0);
        for (size_t blk = 0; blk < nblocks; ++blk) {
            for (size_t x = 0; x < sums.size(); ++x) sums[x] += block_sums[blk][x];
            for (uint32_t j = 0; j < b; ++j) counts[j] += block_counts[blk][j];
        }
        for (uint32_t j = 0; j < b; ++j) {
            if (counts[j] == 0) continue;
            double* c = centroids.data() + size_t(j) * dim;
            const double inv = 1.0 / double(counts[j]);
            for (uint32_t d = 0; d < dim; ++d) c[d] = sums[size_t(j) * dim + d] * inv;
        }

        // Empty clusters: re-seed each to the point currently farthest from
        // its own centroid.
        std::vector<char> reseeded(pool.n, 0);
        for (uint32_t j = 0; j < b; ++j) {
            if (counts[j] != 0) continue;
            uint32_t far_row = pool.n;
            double far_d = -1.0;
            for (uint32_t i = 0; i < pool.n; ++i) {
                if (reseeded[i]) continue;
                const uint32_t a = assignment[i];
                const double* c = centroids.data() + size_t(a) * dim;
                const double d = row_norm2[i] + k.dot_dd(c, c, dim) -
                                 2.0 * k.dot_fd(pool.row(i), c, dim);
                if (d > far_d) {
                    far_d = d;
                    far_row = i;
                }
            }
            if (far_row == pool.n) break;
            reseeded[far_row] = 1;
            const float* src = pool.row(far_row);
            double* dst = centroids.data() + size_t(j) * dim;
            for (uint32_t d = 0; d < dim; ++d) dst[d] = double(src[d]);
        }
    }

    // Map centroids to their nearest pool rows via the greedy matcher on
    // unit-normalized centroids (the per-centroid nearest row is unchanged
    // by the normalization).
    SelectionParams as_params;
    as_params.b = b;
    as_params.dim = dim;
    as_params.theta = centroids;
    for (uint32_t j = 0; j < b; ++j) {
        double* r = as_params.row(j);
        const double norm = std::sqrt(k.dot_dd(r, r, dim));
        if (norm > 1e-12) {
            const double inv = 1.0 / norm;
            for (uint32_t d = 0; d < dim; ++d) r[d] *= inv;
        }
    }
    trace.selection = matching::match(pool, as_params);
    trace.selection.method = "kmeans";
    trace.selection.seed = seed;
    trace.centroids = std::move(centroids);
    trace.assignment = std::move(assignment);
    return trace;
}

SelectionResult select_kmeans(const FeaturePool& pool, uint32_t b, uint64_t seed,
                              uint32_t max_iters) {
    return kmeans_trace(pool, b, seed, max_iters).selection;
}

}  // namespace activeft::baselines
