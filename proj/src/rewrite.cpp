#include "sltlrm/rewrite.hpp"

#include <random>

#include "sltlrm/semantics.hpp"

namespace sltlrm {

FormulaSet decompose(FormulaRef f) {
  FormulaSet out;
  std::vector<FormulaRef> stack{f};
  while (!stack.empty()) {
    FormulaRef g = stack.back();
    stack.pop_back();
    if (g->is_terminal()) continue;
    if (!out.insert(g).second) continue;
    if (g->kind() == Kind::And || g->kind() == Kind::Or || g->kind() == Kind::Then)
      for (FormulaRef c : g->children()) stack.push_back(c);
  }
  return out;
}

namespace {

// All ways to split `kids` into two non-empty groups, each group rebuilt
// as a normalized And/Or. Exhaustive up to 4 operands, singleton-vs-rest
// beyond that.
std::vector<std::pair<FormulaRef, FormulaRef>> binary_splits(Kind k,
                                                             const std::vector<FormulaRef>& kids) {
  auto group = [&](const std::vector<FormulaRef>& g) -> FormulaRef {
    if (g.size() == 1) return g[0];
    return k == Kind::And ? n_and(g) : n_or(g);
  };
  std::vector<std::pair<FormulaRef, FormulaRef>> out;
  size_t n = kids.size();
  if (n <= 4) {
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<FormulaRef> a, b;
      for (size_t i = 0; i < n; ++i) (mask >> i & 1 ? a : b).push_back(kids[i]);
      out.emplace_back(group(a), group(b));
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      std::vector<FormulaRef> rest;
      for (size_t j = 0; j < n; ++j)
        if (j != i) rest.push_back(kids[j]);
      out.emplace_back(kids[i], group(rest));
      out.emplace_back(group(rest), kids[i]);
    }
  }
  return out;
}

void root_rewrites(FormulaRef f, FormulaSet& out) {
  if (f->kind() == Kind::Then) {
    FormulaRef a = f->child(0);
    FormulaRef b = f->child(1);
    // associativity, both directions
    if (a->kind() == Kind::Then)
      out.insert(n_then(a->child(0), n_then(a->child(1), b)));
    if (b->kind() == Kind::Then)
      out.insert(n_then(n_then(a, b->child(0)), b->child(1)));
    // a ; (x & y)  ->  (a;x) & (a;y)   and the Or dual
    if (b->kind() == Kind::And || b->kind() == Kind::Or) {
      Kind k = b->kind();
      for (auto& [x, y] : binary_splits(k, b->children())) {
        std::vector<FormulaRef> parts{n_then(a, x), n_then(a, y)};
        out.insert(k == Kind::And ? n_and(parts) : n_or(parts));
      }
    }
    // (x & y) ; b  ->  (x;b) & (y;b)   and the Or dual
    if (a->kind() == Kind::And || a->kind() == Kind::Or) {
      Kind k = a->kind();
      for (auto& [x, y] : binary_splits(k, a->children())) {
        std::vector<FormulaRef> parts{n_then(x, b), n_then(y, b)};
        out.insert(k == Kind::And ? n_and(parts) : n_or(parts));
      }
    }
  }
  if (f->kind() == Kind::And || f->kind() == Kind::Or) {
    Kind k = f->kind();
    const auto& kids = f->children();
    // (a;x) op (a;y) -> a;(x op y)  /  (x;c) op (y;c) -> (x op y);c
    for (size_t i = 0; i < kids.size(); ++i) {
      if (kids[i]->kind() != Kind::Then) continue;
      for (size_t j = i + 1; j < kids.size(); ++j) {
        if (kids[j]->kind() != Kind::Then) continue;
        FormulaRef merged = nullptr;
        if (kids[i]->child(0) == kids[j]->child(0)) {
          std::vector<FormulaRef> inner{kids[i]->child(1), kids[j]->child(1)};
          merged = n_then(kids[i]->child(0), k == Kind::And ? n_and(inner) : n_or(inner));
        } else if (kids[i]->child(1) == kids[j]->child(1)) {
          std::vector<FormulaRef> inner{kids[i]->child(0), kids[j]->child(0)};
          merged = n_then(k == Kind::And ? n_and(inner) : n_or(inner), kids[i]->child(1));
        }
        if (!merged) continue;
        std::vector<FormulaRef> rest{merged};
        for (size_t t = 0; t < kids.size(); ++t)
          if (t != i && t != j) rest.push_back(kids[t]);
        out.insert(rest.size() == 1 ? rest[0] : (k == Kind::And ? n_and(rest) : n_or(rest)));
      }
    }
  }
}

FormulaSet one_step(FormulaRef f) {
  FormulaSet out;
  root_rewrites(f, out);
  // rewrite inside each child position and rebuild
  for (size_t i = 0; i < f->arity(); ++i) {
    for (FormulaRef c2 : one_step(f->child(i))) {
      std::vector<FormulaRef> kids(f->children());
      kids[i] = c2;
      switch (f->kind()) {
        case Kind::Not: out.insert(n_not(kids[0])); break;
        case Kind::And: out.insert(n_and(std::move(kids))); break;
        case Kind::Or: out.insert(n_or(std::move(kids))); break;
        case Kind::Next: out.insert(n_next(kids[0])); break;
        case Kind::Until: out.insert(n_until(kids[0], kids[1])); break;
        case Kind::Eventually: out.insert(n_eventually(kids[0])); break;
        case Kind::Then: out.insert(n_then(kids[0], kids[1])); break;
        default: break;
      }
    }
  }
  return out;
}

}  // namespace

FormulaSet rewrite_representations(FormulaRef f, int depth) {
  FormulaSet seen{f};
  std::vector<FormulaRef> frontier{f};
  for (int d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<FormulaRef> next;
    for (FormulaRef g : frontier)
      for (FormulaRef h : one_step(g))
        if (seen.insert(h).second) next.push_back(h);
    frontier = std::move(next);
  }
  return seen;
}

FormulaRef smallest_representation(const std::vector<FormulaRef>& candidates,
                                   const FormulaSet& learned, int sample_check,
                                   uint64_t sample_seed) {
  if (candidates.empty())
    throw std::invalid_argument("smallest_representation: empty candidate list");

  if (sample_check > 0 && candidates.size() > 1) {
    std::set<std::string> props;
    for (FormulaRef c : candidates) {
      auto p = propositions(c);
      props.insert(p.begin(), p.end());
    }
    std::vector<std::string> plist(props.begin(), props.end());
    std::mt19937_64 rng(sample_seed);
    for (int t = 0; t < sample_check; ++t) {
      Trace trace;
      size_t len = 1 + rng() % 8;
      for (size_t i = 0; i < len; ++i) {
        std::vector<std::string> lab;
        for (const auto& p : plist)
          if (rng() % 3 == 0) lab.push_back(p);
        trace.emplace_back(std::move(lab));
      }
      bool b0 = false, bi = false;
      bool v0 = evaluate(candidates[0], trace, b0);
      if (b0) continue;
      for (size_t i = 1; i < candidates.size(); ++i) {
        bool vi = evaluate(candidates[i], trace, bi);
        if (!bi && vi != v0)
          throw std::invalid_argument("smallest_representation: candidates disagree on trace, " +
                                      candidates[0]->str() + " vs " + candidates[i]->str());
      }
    }
  }

  FormulaRef best = nullptr;
  size_t best_unlearned = 0, best_size = 0;
  for (FormulaRef c : candidates) {
    FormulaSet dec = decompose(c);
    size_t size = dec.size();
    size_t unlearned = 0;
    for (FormulaRef g : dec)
      if (!learned.count(g)) ++unlearned;
    if (!best || unlearned < best_unlearned ||
        (unlearned == best_unlearned &&
         (size < best_size || (size == best_size && CanonLess{}(c, best))))) {
      best = c;
      best_unlearned = unlearned;
      best_size = size;
    }
  }
  return best;
}

}  // namespace sltlrm
