#include "activeft/matching.hpp"

#include <algorithm>
#include <queue>

#include "activeft/kernels.hpp"
#include "activeft/parallel.hpp"

namespace activeft::matching {

namespace {

struct Candidate {
    double sim;
    uint32_t pool_index;
    uint32_t param_index;
};

// Priority: higher similarity, then lower pool index, then lower parameter index.
struct CandidateOrder {
    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.sim != b.sim) return a.sim < b.sim;
        if (a.pool_index != b.pool_index) return a.pool_index > b.pool_index;
        return a.param_index > b.param_index;
    }
};

Candidate best_unclaimed(const FeaturePool& pool, const SelectionParams& params, uint32_t j,
                         const std::vector<char>& claimed) {
    const auto& k = kernels::ops();
    Candidate best{-2.0, 0, j};
    bool found = false;
    for (uint32_t i = 0; i < pool.n; ++i) {
        if (claimed[i]) continue;
        const double s = k.dot_fd(pool.row(i), params.row(j), pool.dim);
        if (!found || s > best.sim) {
            best.sim = s;
            best.pool_index = i;
            found = true;
        }
    }
    return best;
}

}  // namespace

SelectionResult match(const FeaturePool& pool, const SelectionParams& params) {
    if (pool.dim != params.dim) throw validation_error("dimension mismatch");
    if (params.b < 1 || params.b > pool.n)
        throw validation_error("budget must satisfy 1 <= b <= n");

    const auto& k = kernels::ops();
    const uint32_t b = params.b;

    // Initial per-parameter best match over the whole pool.
    std::vector<Candidate> initial(b);
    parallel::for_blocks(
        b,
        [&](size_t, size_t lo, size_t hi) {
            for (size_t j = lo; j < hi; ++j) {
                Candidate best{k.dot_fd(pool.row(0), params.row(uint32_t(j)), pool.dim), 0,
                               uint32_t(j)};
                for (uint32_t i = 1; i < pool.n; ++i) {
                    const double s = k.dot_fd(pool.row(i), params.row(uint32_t(j)), pool.dim);
                    if (s > best.sim) {
                        best.sim = s;
                        best.pool_index = i;
                    }
                }
                initial[j] = best;
            }
        },
        64);

    std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> queue(
        CandidateOrder{}, std::move(initial));
    std::vector<char> claimed(pool.n, 0);
    std::vector<uint32_t> result;
    result.reserve(b);
    while (result.size() < b) {
        Candidate top = queue.top();
        queue.pop();
        if (claimed[top.pool_index]) {
            queue.push(best_unclaimed(pool, params, top.param_index, claimed));
            continue;
        }
        claimed[top.pool_index] = 1;
        result.push_back(top.pool_index);
    }
    std::sort(result.begin(), result.end());

    SelectionResult selection;
    selection.indices = std::move(result);
    return selection;
}

}  // namespace activeft::matching
