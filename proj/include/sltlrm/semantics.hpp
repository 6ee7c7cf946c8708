#pragma once

#include "sltlrm/formula.hpp"
#include "sltlrm/label.hpp"

namespace sltlrm {

// Finite-trace satisfaction. Next is strong: X f is false at the last
// position; Until needs a witness inside the trace; f ; g finds the
// earliest prefix satisfying f and evaluates g on the remaining suffix.
bool evaluate(FormulaRef f, TraceView trace);

// As above, but additionally reports whether a Next was evaluated at the
// end of the trace anywhere during evaluation. Such verdicts depend on
// the truncation point; property tests over progression filter them out.
bool evaluate(FormulaRef f, TraceView trace, bool& boundary_hit);

// One-step progression by a label; input and output are normalized.
// True and False are fixpoints.
FormulaRef progress(FormulaRef f, const Label& l);

}  // namespace sltlrm
