#pragma once

#include <span>

#include "activeft/types.hpp"

namespace activeft::core_model {

// Dot product of unit vectors; the caller guarantees normalization.
double cosine_sim(std::span<const float> a, std::span<const float> b);
double cosine_sim(std::span<const float> a, std::span<const double> b);

// Nearest parameter per pool row (Assignment invariants; lowest index wins on
// ties).  Deterministic and thread-count independent.
Assignment assign(const FeaturePool& pool, const SelectionParams& params);

// Same, restricted to the given pool rows; entry t corresponds to rows[t].
Assignment assign_rows(const FeaturePool& pool, std::span<const uint32_t> rows,
                       const SelectionParams& params);

// Entry k of the result is the pool mean of exp(sim to the (k+1)-th most
// similar parameter / tau); requires k <= params.b.  Quantifies how sharply
// the top-1 component dominates the mixture.
MixtureDiagnostics assumption_diagnostic(const FeaturePool& pool, const SelectionParams& params,
                                         Temperature tau, uint32_t k);

}  // namespace activeft::core_model
