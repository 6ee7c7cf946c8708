#pragma once

#include "sltlrm/formula.hpp"

namespace sltlrm {

// Sub-formulas reachable by recursing through And/Or/Then roots, the
// input included; True/False excluded. Leaves under other operators
// contribute only themselves.
FormulaSet decompose(FormulaRef f);

// All formulas reachable from f (itself included) by applying the Then
// operator laws -- associativity and the four And/Or distribution laws --
// in either direction at any subterm, up to `depth` rewrite steps.
// Results are normalized and deduplicated.
FormulaSet rewrite_representations(FormulaRef f, int depth = 3);

// The candidate minimizing |decompose(c) \ learned|; ties broken by
// smaller decomposition, then by canonical string. With sample_check > 0
// the candidates are cross-checked for agreement on that many random
// traces and a disagreement throws.
FormulaRef smallest_representation(const std::vector<FormulaRef>& candidates,
                                   const FormulaSet& learned, int sample_check = 0,
                                   uint64_t sample_seed = 0);

}  // namespace sltlrm
