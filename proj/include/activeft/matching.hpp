#pragma once

#include "activeft/types.hpp"

namespace activeft::matching {

// Maps every parameter row to its most similar pool feature and resolves
// collisions so the returned indices are distinct: pairs are processed in
// descending order of best similarity, each claiming its best unclaimed item
// and rescanning when the preferred item is already taken.  Ties break to the
// lower pool index, then the lower parameter index.  Requires b <= n.
SelectionResult match(const FeaturePool& pool, const SelectionParams& params);

}  // namespace activeft::matching
