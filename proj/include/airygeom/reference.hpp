#pragma once

#include <vector>

#include "airygeom/rational.hpp"

namespace airygeom::reference {

/// Serial reference evaluator for the same amplitudes as RecursionEngine,
/// kept deliberately naive so the two paths stay independent: index tuples
/// are never canonicalized, the sum over ordered bipartitions walks raw
/// position subsets, and the tensor coefficients are computed inline. Used
/// by tests as the brute-force oracle and by the benchmark as the baseline.
Rational amplitude(int g, const std::vector<unsigned>& d);

Rational intersection_number(int g, const std::vector<unsigned>& d);

}  // namespace airygeom::reference
