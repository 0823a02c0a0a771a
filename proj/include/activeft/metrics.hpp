#pragma once

#include <optional>

#include "activeft/optimizer.hpp"
#include "activeft/types.hpp"

namespace activeft::metrics {

// Coupling between the uniform pool distribution and the assignment-weighted
// selected distribution.  Row marginals are 1/N; column marginal j is
// |C_j|/N where C_j is the set of pool items nearest to selected item j.
struct TransportPlan {
    struct Entry {
        uint32_t pool_index;
        uint32_t selected_slot;  // position within the ascending selection
        double mass;
    };
    std::vector<Entry> entries;
};

struct EmdResult {
    double emd = 0.0;
    TransportPlan plan;
};

// Mean Euclidean distance from each pool feature to its nearest selected
// feature, sqrt(2 - 2 sim) on unit vectors (a row matched to itself is at
// distance zero), with the induced transport plan.
EmdResult emd_closed_form(const FeaturePool& pool, const SelectionResult& selection);

// Exact transportation optimum over couplings with the same marginals,
// solved as an integral min-cost flow in units of 1/N.  Test oracle for
// small instances; refuses pools larger than max_n.
double emd_lp_oracle(const FeaturePool& pool, const SelectionResult& selection,
                     uint32_t max_n = 64);

struct DiversityStats {
    std::optional<double> min_pairwise;  // absent when fewer than 2 selected
    double mean_nearest = 0.0;           // equals the closed-form EMD
};

DiversityStats diversity_stats(const FeaturePool& pool, const SelectionResult& selection);

// Aggregated report emitted by the CLI: selection quality metrics plus
// optional optimization/assumption context.
struct DiagnosticsReport {
    double emd = 0.0;
    std::optional<double> min_pairwise;
    double mean_nearest = 0.0;
    std::optional<optimizer::LossBreakdown> initial_loss;
    std::optional<optimizer::LossBreakdown> final_loss;
    std::optional<MixtureDiagnostics> assumption_stats;
};

}  // namespace activeft::metrics
