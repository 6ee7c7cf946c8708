#pragma once

#include <nlohmann/json.hpp>

#include "sltlrm/formula.hpp"
#include "sltlrm/label.hpp"

namespace sltlrm {

// A reward machine whose states are normalized SLTL formulas and whose
// transition function is formula progression over a fixed alphabet.
// Terminals are exactly the states in {true, false}; false is created
// lazily when progression reaches it. Built single-threaded via extend();
// immutable use afterwards is thread-safe.
class RewardMachine {
public:
  explicit RewardMachine(Alphabet alphabet, size_t state_cap = 10000);

  // Grows the machine to the closure of `target` under progression by
  // every alphabet label and first-component extraction from Then.
  // Returns exactly the states added; extending with a known state is a
  // no-op returning the empty set.
  FormulaSet extend(FormulaRef target);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<FormulaRef>& states() const { return states_; }
  FormulaRef initial() const { return initial_; }
  void set_initial(FormulaRef u);
  FormulaSet terminals() const;

  bool has_state(FormulaRef u) const { return index_.count(u) != 0; }
  int state_index(FormulaRef u) const;
  static bool is_terminal(FormulaRef u) { return u->is_terminal(); }

  // delta(u, l); errors on unknown state/label or terminal u.
  FormulaRef next_state(FormulaRef u, const Label& l) const;
  FormulaRef next_state_by_index(int state_idx, int label_idx) const;

  // 1 iff u is non-terminal and delta(u,l) == true, else 0. Terminal
  // states yield 0.
  double reward(FormulaRef u, const Label& l) const;
  double reward_by_index(int state_idx, int label_idx) const;

  std::string to_dot() const;
  nlohmann::ordered_json to_json() const;
  static RewardMachine from_json(const nlohmann::ordered_json& j, size_t state_cap = 10000);

private:
  void add_state(FormulaRef u);

  Alphabet alphabet_;
  size_t state_cap_;
  FormulaRef initial_;
  std::vector<FormulaRef> states_;                 // insertion order
  std::map<FormulaRef, int, CanonLess> index_;
  std::vector<std::vector<int>> transitions_;      // [state][label] -> state, -1 for terminals
};

// Potentials from value iteration over the machine:
//   Phi(u) = max_l [ R(u,l) + gamma * Phi(delta(u,l)) ],  Phi(terminal) = 0.
struct PotentialTable {
  std::vector<double> phi;  // indexed like rm.states()
  double gamma = 0.9;

  double at(const RewardMachine& rm, FormulaRef u) const { return phi[rm.state_index(u)]; }
};

PotentialTable compute_potential(const RewardMachine& rm, double gamma, double tol = 1e-8,
                                 int max_iters = 10000);

// R(u,l) + gamma * Phi(delta(u,l)) - Phi(u)
double shaped_reward(const RewardMachine& rm, const PotentialTable& pt, FormulaRef u,
                     const Label& l);
double shaped_reward_by_index(const RewardMachine& rm, const PotentialTable& pt, int state_idx,
                              int label_idx);

}  // namespace sltlrm
