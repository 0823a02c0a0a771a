#pragma once

#include <filesystem>

#include "activeft/types.hpp"

namespace activeft::feature_store {

enum class PoolFormat { binary, csv };

// Infers binary vs csv from the file extension (".csv" => csv).
PoolFormat format_from_path(const std::filesystem::path& path);

// Spec for seeded synthetic pools: cluster centers drawn uniformly on the
// sphere, points perturbed around them with the given angular spread.
struct SyntheticSpec {
    uint32_t n_clusters = 1;
    uint32_t points_per_cluster = 1;
    uint32_t dim = 2;
    double spread = 0.05;  // radians, > 0
    uint64_t seed = 0;
};

// Rows must already be unit-norm (within 1e-4) unless normalize is set, in
// which case they are L2-normalized first.  Zero rows and non-finite values
// are rejected either way.
FeaturePool load_pool(const std::filesystem::path& path, PoolFormat format, bool normalize);

void save_pool(const FeaturePool& pool, const std::filesystem::path& path, PoolFormat format);

// n_clusters * points_per_cluster rows, cluster-major, deterministic in the
// seed.  Point k of cluster c occupies row c * points_per_cluster + k.
FeaturePool make_synthetic_pool(const SyntheticSpec& spec);

// In-place L2 normalization of every row; throws on zero rows.
void normalize_rows(FeaturePool& pool);

// Enforces the pool invariants (shape, finiteness, unit rows).
void validate_pool(const FeaturePool& pool);

}  // namespace activeft::feature_store
