#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sltlrm {

// Immutable, interned SLTL formula node. Equal structure implies equal
// pointer, so FormulaRef comparison is structural identity and formulas
// are safe to share across threads.
class Formula;
using FormulaRef = const Formula*;

enum class Kind : uint8_t {
  True,
  False,
  Prop,
  Not,
  And,
  Or,
  Next,
  Until,
  Eventually,
  Then,
};

class Formula {
public:
  Kind kind() const { return kind_; }
  const std::string& prop_name() const { return name_; }
  const std::vector<FormulaRef>& children() const { return kids_; }
  FormulaRef child(size_t i) const { return kids_[i]; }
  size_t arity() const { return kids_.size(); }

  // Canonical concrete-syntax string; used as the stable serialization
  // and as map keys. parse(str(f)) reproduces f for normalized f.
  const std::string& str() const { return canon_; }

  bool is_terminal() const { return kind_ == Kind::True || kind_ == Kind::False; }

  size_t node_count() const;

private:
  friend class FormulaPoolImpl;
  Formula(Kind k, std::string name, std::vector<FormulaRef> kids);

  Kind kind_;
  std::string name_;               // Prop only
  std::vector<FormulaRef> kids_;
  std::string canon_;
  mutable FormulaRef normalized_ = nullptr;  // cache, set under pool lock
};

struct CanonLess {
  bool operator()(FormulaRef a, FormulaRef b) const { return a->str() < b->str(); }
};
using FormulaSet = std::set<FormulaRef, CanonLess>;

// Raw constructors: intern the exact structure given (no simplification).
// And/Or require >= 2 operands. Proposition names must match
// [A-Za-z_][A-Za-z0-9_]* and must not collide with the keywords
// true/false/U/X/F.
FormulaRef top();
FormulaRef bot();
FormulaRef prop(const std::string& name);
FormulaRef mk_not(FormulaRef f);
FormulaRef mk_and(std::vector<FormulaRef> kids);
FormulaRef mk_or(std::vector<FormulaRef> kids);
FormulaRef mk_next(FormulaRef f);
FormulaRef mk_until(FormulaRef lhs, FormulaRef rhs);
FormulaRef mk_eventually(FormulaRef f);
FormulaRef mk_then(FormulaRef first, FormulaRef second);

// Normalizing one-level combinators: operands must already be normalized;
// the result is normalized. These implement the rewrite rules
//   T&f->f, _|_&f->_|_, T|f->T, _|_|f->f, !T->_|_, !_|_->T, !!f->f,
//   f&f->f, f|f->f, T;f->f, _|_;f->_|_, plus AC flatten/sort/dedup.
FormulaRef n_not(FormulaRef f);
FormulaRef n_and(std::vector<FormulaRef> kids);
FormulaRef n_or(std::vector<FormulaRef> kids);
FormulaRef n_next(FormulaRef f);
FormulaRef n_until(FormulaRef lhs, FormulaRef rhs);
FormulaRef n_eventually(FormulaRef f);
FormulaRef n_then(FormulaRef first, FormulaRef second);

// Full recursive normalization (fixpoint of the rules above). Idempotent.
FormulaRef normalize(FormulaRef f);

bool is_normalized(FormulaRef f);

// Collect the distinct proposition names occurring in f.
std::set<std::string> propositions(FormulaRef f);

class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, int line, int column)
      : std::runtime_error(std::move(msg)), line(line), column(column) {}
  int line;
  int column;
};

// Concrete syntax, loosest to tightest:
//   ';' (then, left-assoc) < '|' < '&' < 'U' (right-assoc)
//   < '!' 'X' 'F' (unary) < true, false, identifiers, parentheses.
// Returns the normalized formula.
FormulaRef parse(const std::string& text);

}  // namespace sltlrm
