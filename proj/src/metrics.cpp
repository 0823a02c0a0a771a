#include "activeft/metrics.hpp"

#include <cmath>
#include <limits>

#include "activeft/kernels.hpp"
#include "activeft/parallel.hpp"

namespace activeft::metrics {

namespace {

void check_selection(const FeaturePool& pool, const SelectionResult& selection) {
    if (selection.indices.empty()) throw validation_error("selection is empty");
    std::vector<char> seen(pool.n, 0);
    for (uint32_t idx : selection.indices) {
        if (idx >= pool.n)
            throw validation_error("selection index " + std::to_string(idx) +
                                   " out of range for pool of size " + std::to_string(pool.n));
        if (seen[idx]) throw validation_error("duplicate selection index " + std::to_string(idx));
        seen[idx] = 1;
    }
}

inline double unit_distance(double sim) { return std::sqrt(std::max(0.0, 2.0 - 2.0 * sim)); }

// Distance between pool row i and selected pool row s.  The same row is at
// distance zero by identity; the unit-vector formula would otherwise report
// ~sqrt(2 * eps) for it, since float32 rows are unit only to rounding.
inline double selected_distance(uint32_t i, uint32_t s, double sim) {
    return i == s ? 0.0 : unit_distance(sim);
}

// Nearest selected slot per pool item (max cosine, lowest slot on ties).
std::vector<uint32_t> nearest_selected(const FeaturePool& pool, const SelectionResult& selection) {
    const auto& k = kernels::ops();
    const uint32_t b = uint32_t(selection.indices.size());
    std::vector<uint32_t> c(pool.n);
    parallel::for_blocks(pool.n, [&](size_t, size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            const float* f = pool.row(uint32_t(i));
            uint32_t best = 0;
            double best_sim = k.dot_ff(f, pool.row(selection.indices[0]), pool.dim);
            for (uint32_t j = 1; j < b; ++j) {
                const double s = k.dot_ff(f, pool.row(selection.indices[j]), pool.dim);
                if (s > best_sim) {
                    best_sim = s;
                    best = j;
                }
            }
            c[i] = best;
        }
    });
    return c;
}

// Min-cost flow by successive shortest paths with potentials.  Supplies and
// demands are integers (units of 1/N), costs are the pairwise distances.
class TransportSolver {
public:
    TransportSolver(uint32_t nodes) : head_(nodes, -1) {}

    void add_edge(uint32_t from, uint32_t to, int64_t cap, double cost) {
        edges_.push_back({to, head_[from], cap, cost});
        head_[from] = int(edges_.size()) - 1;
        edges_.push_back({from, head_[to], 0, -cost});
        head_[to] = int(edges_.size()) - 1;
    }

    // Sends the given flow from source to sink; returns the total cost.
    double solve(uint32_t source, uint32_t sink, int64_t flow_target) {
        const size_t n = head_.size();
        std::vector<double> potential(n, 0.0);
        double total_cost = 0.0;
        int64_t sent = 0;
        while (sent < flow_target) {
            // Dijkstra on reduced costs.
            std::vector<double> dist(n, std::numeric_limits<double>::infinity());
            std::vector<int> prev_edge(n, -1);
            std::vector<char> done(n, 0);
            dist[source] = 0.0;
            while (true) {
                uint32_t u = uint32_t(n);
                double best = std::numeric_limits<double>::infinity();
                for (uint32_t v = 0; v < n; ++v)
                    if (!done[v] && dist[v] < best) {
                        best = dist[v];
                        u = v;
                    }
                if (u == uint32_t(n)) break;
                done[u] = 1;
                for (int e = head_[u]; e >= 0; e = edges_[e].next) {
                    const Edge& ed = edges_[e];
                    if (ed.cap <= 0) continue;
                    const double rc = std::max(0.0, ed.cost + potential[u] - potential[ed.to]);
                    if (dist[u] + rc < dist[ed.to]) {
                        dist[ed.to] = dist[u] + rc;
                        prev_edge[ed.to] = e;
                    }
                }
            }
            if (prev_edge[sink] < 0) throw error("transport network is infeasible");
            for (uint32_t v = 0; v < n; ++v)
                if (dist[v] < std::numeric_limits<double>::infinity()) potential[v] += dist[v];

            int64_t bottleneck = flow_target - sent;
            for (int e = prev_edge[sink]; e >= 0;) {
                bottleneck = std::min(bottleneck, edges_[e].cap);
                const uint32_t from = edges_[e ^ 1].to;
                e = from == source ? -1 : prev_edge[from];
            }
            for (int e = prev_edge[sink]; e >= 0;) {
                edges_[e].cap -= bottleneck;
                edges_[e ^ 1].cap += bottleneck;
                total_cost += double(bottleneck) * edges_[e].cost;
                const uint32_t from = edges_[e ^ 1].to;
                e = from == source ? -1 : prev_edge[from];
            }
            sent += bottleneck;
        }
        return total_cost;
    }

private:
    struct Edge {
        uint32_t to;
        int next;
        int64_t cap;
        double cost;
    };
    std::vector<int> head_;
    std::vector<Edge> edges_;
};

}  // namespace

EmdResult emd_closed_form(const FeaturePool& pool, const SelectionResult& selection) {
    check_selection(pool, selection);
    const auto& k = kernels::ops();
    const std::vector<uint32_t> c = nearest_selected(pool, selection);

    const size_t nblocks = parallel::block_count(pool.n);
    std::vector<double> block_sum(nblocks, 0.0);
    parallel::for_blocks(pool.n, [&](size_t blk, size_t lo, size_t hi) {
        double sum = 0.0;
        for (size_t i = lo; i < hi; ++i) {
            const uint32_t sel_row = selection.indices[c[i]];
            const double s = k.dot_ff(pool.row(uint32_t(i)), pool.row(sel_row), pool.dim);
            sum += selected_distance(uint32_t(i), sel_row, s);
        }
        block_sum[blk] = sum;
    });
    double total = 0.0;
    for (double s : block_sum) total += s;

    EmdResult result;
    result.emd = total / double(pool.n);
    result.plan.entries.reserve(pool.n);
    const double mass = 1.0 / double(pool.n);
    for (uint32_t i = 0; i < pool.n; ++i) result.plan.entries.push_back({i, c[i], mass});
    return result;
}

double emd_lp_oracle(const FeaturePool& pool, const SelectionResult& selection, uint32_t max_n) {
    check_selection(pool, selection);
    if (pool.n > max_n)
        throw validation_error("oracle instance too large: n=" + std::to_string(pool.n) +
                               " exceeds cap " + std::to_string(max_n));
    const uint32_t n = pool.n;
    const uint32_t b = uint32_t(selection.indices.size());

    // Plain double loops, independent of the kernel dispatch path.
    auto dot = [&](const float* x, const float* y) {
        double acc = 0.0;
        for (uint32_t d = 0; d < pool.dim; ++d) acc += double(x[d]) * double(y[d]);
        return acc;
    };

    // Column demands |C_j| from the nearest-selected assignment.
    std::vector<int64_t> demand(b, 0);
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t best = 0;
        double best_sim = dot(pool.row(i), pool.row(selection.indices[0]));
        for (uint32_t j = 1; j < b; ++j) {
            const double s = dot(pool.row(i), pool.row(selection.indices[j]));
            if (s > best_sim) {
                best_sim = s;
                best = j;
            }
        }
        ++demand[best];
    }

    // Nodes: source, pool items, selected slots, sink.
    const uint32_t source = 0;
    const uint32_t sink = 1 + n + b;
    TransportSolver solver(n + b + 2);
    for (uint32_t i = 0; i < n; ++i) solver.add_edge(source, 1 + i, 1, 0.0);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < b; ++j) {
            const double s = dot(pool.row(i), pool.row(selection.indices[j]));
            solver.add_edge(1 + i, 1 + n + j, 1, selected_distance(i, selection.indices[j], s));
        }
    for (uint32_t j = 0; j < b; ++j) solver.add_edge(1 + n + j, sink, demand[j], 0.0);

    return solver.solve(source, sink, n) / double(n);
}

DiversityStats diversity_stats(const FeaturePool& pool, const SelectionResult& selection) {
    check_selection(pool, selection);
    const auto& k = kernels::ops();
    DiversityStats stats;
    stats.mean_nearest = emd_closed_form(pool, selection).emd;
    const uint32_t b = uint32_t(selection.indices.size());
    if (b >= 2) {
        double min_d = std::numeric_limits<double>::infinity();
        for (uint32_t a = 0; a < b; ++a)
            for (uint32_t c = a + 1; c < b; ++c) {
                const double s = k.dot_ff(pool.row(selection.indices[a]),
                                          pool.row(selection.indices[c]), pool.dim);
                min_d = std::min(min_d, unit_distance(s));
            }
        stats.min_pairwise = min_d;
    }
    return stats;
}

}  // namespace activeft::metrics
