#pragma once

#include "activeft/types.hpp"

namespace activeft::baselines {

// b distinct indices drawn uniformly without replacement.
SelectionResult select_random(const FeaturePool& pool, uint32_t b, uint64_t seed);

// Farthest-distance sampling (k-center greedy) under cosine distance
// 1 - sim: seeded uniform first center, then repeatedly the point maximizing
// the minimum distance to the chosen set, ties to the lowest index.
SelectionResult select_fds(const FeaturePool& pool, uint32_t b, uint64_t seed);

// Selection order and greedy maximin radii, for property checks.
// radius[0] is 0 (the seeded first pick); radius[t] is the chosen point's
// distance to the t previously selected centers.
struct FdsTrace {
    std::vector<uint32_t> order;
    std::vector<double> radius;
};
FdsTrace fds_trace(const FeaturePool& pool, uint32_t b, uint64_t seed);

// Lloyd's k-means with k = b on the normalized features (Euclidean metric),
// k-means++ seeding, empty clusters re-seeded to the point farthest from its
// centroid.  Final centroids map to their nearest pool items, deduplicated
// with the matching module's greedy policy.
SelectionResult select_kmeans(const FeaturePool& pool, uint32_t b, uint64_t seed,
                              uint32_t max_iters = 100);

struct KMeansTrace {
    SelectionResult selection;
    std::vector<double> objective;  // sum of squared distances after each assignment pass
    std::vector<double> centroids;  // b x dim, final
    std::vector<uint32_t> assignment;
    uint32_t iterations = 0;
    bool converged = false;
};
KMeansTrace kmeans_trace(const FeaturePool& pool, uint32_t b, uint64_t seed, uint32_t max_iters);

}  // namespace activeft::baselines
