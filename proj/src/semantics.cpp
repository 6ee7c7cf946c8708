#include "sltlrm/semantics.hpp"

namespace sltlrm {

namespace {

bool eval_rec(FormulaRef f, TraceView t, bool& boundary) {
  switch (f->kind()) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Prop:
      return !t.empty() && t[0].contains(f->prop_name());
    case Kind::Not:
      return !eval_rec(f->child(0), t, boundary);
    case Kind::And:
      for (FormulaRef c : f->children())
        if (!eval_rec(c, t, boundary)) return false;
      return true;
    case Kind::Or:
      for (FormulaRef c : f->children())
        if (eval_rec(c, t, boundary)) return true;
      return false;
    case Kind::Next:
      if (t.size() <= 1) {
        boundary = true;
        return false;
      }
      return eval_rec(f->child(0), t.subspan(1), boundary);
    case Kind::Until: {
      // exists j < len with rhs at j and lhs at all i < j
      for (size_t j = 0; j < t.size(); ++j) {
        if (eval_rec(f->child(1), t.subspan(j), boundary)) return true;
        if (!eval_rec(f->child(0), t.subspan(j), boundary)) return false;
      }
      return false;
    }
    case Kind::Eventually:
      for (size_t j = 0; j < t.size(); ++j)
        if (eval_rec(f->child(0), t.subspan(j), boundary)) return true;
      return false;
    case Kind::Then: {
      FormulaRef first = f->child(0);
      // earliest prefix satisfying the first part, taken as a complete
      // finite trace; the empty prefix counts, so a trivially satisfied
      // first part completes in zero steps (true ; f is f)
      for (size_t j = 0; j <= t.size(); ++j) {
        if (eval_rec(first, t.subspan(0, j), boundary))
          return eval_rec(f->child(1), t.subspan(j), boundary);
      }
      return false;
    }
  }
  return false;
}

}  // namespace

bool evaluate(FormulaRef f, TraceView t, bool& boundary_hit) {
  boundary_hit = false;
  return eval_rec(f, t, boundary_hit);
}

bool evaluate(FormulaRef f, TraceView t) {
  bool ignored = false;
  return eval_rec(f, t, ignored);
}

FormulaRef progress(FormulaRef f, const Label& l) {
  switch (f->kind()) {
    case Kind::True:
      return top();
    case Kind::False:
      return bot();
    case Kind::Prop:
      return l.contains(f->prop_name()) ? top() : bot();
    case Kind::Not:
      return n_not(progress(f->child(0), l));
    case Kind::And: {
      std::vector<FormulaRef> kids;
      kids.reserve(f->arity());
      for (FormulaRef c : f->children()) kids.push_back(progress(c, l));
      return n_and(std::move(kids));
    }
    case Kind::Or: {
      std::vector<FormulaRef> kids;
      kids.reserve(f->arity());
      for (FormulaRef c : f->children()) kids.push_back(progress(c, l));
      return n_or(std::move(kids));
    }
    case Kind::Next:
      return f->child(0);
    case Kind::Until:
      // prog(g, l) | (prog(f, l) & f U g)
      return n_or({progress(f->child(1), l), n_and({progress(f->child(0), l), f})});
    case Kind::Eventually:
      // F g = true U g
      return n_or({progress(f->child(0), l), f});
    case Kind::Then: {
      // Commit at the earliest match. An empty-prefix match means the
      // second part is already active; a match on the one-label trace [l]
      // means it starts at the next step unchanged. Otherwise progress
      // the pending first part.
      if (evaluate(f->child(0), Trace{})) return progress(f->child(1), l);
      if (evaluate(f->child(0), Trace{l})) return f->child(1);
      return n_then(progress(f->child(0), l), f->child(1));
    }
  }
  return f;
}

}  // namespace sltlrm
