#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sltlrm/grid.hpp"
#include "sltlrm/reward_machine.hpp"

namespace sltlrm {

// Dense tabular Q-function over (env state, action).
class QTable {
public:
  QTable() = default;
  QTable(int n_states, int n_actions, double def = 0.0)
      : n_states_(n_states), n_actions_(n_actions),
        v_(static_cast<size_t>(n_states) * n_actions, def) {}

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  double at(int s, int a) const { return v_[static_cast<size_t>(s) * n_actions_ + a]; }
  double& at(int s, int a) { return v_[static_cast<size_t>(s) * n_actions_ + a]; }

  double max_at(int s) const {
    double best = at(s, 0);
    for (int a = 1; a < n_actions_; ++a) best = std::max(best, at(s, a));
    return best;
  }
  int argmax_at(int s) const {  // first maximizer
    int best = 0;
    for (int a = 1; a < n_actions_; ++a)
      if (at(s, a) > at(s, best)) best = a;
    return best;
  }
  void copy_row(int s, const QTable& from) {
    for (int a = 0; a < n_actions_; ++a) at(s, a) = from.at(s, a);
  }

  bool operator==(const QTable&) const = default;

private:
  int n_states_ = 0;
  int n_actions_ = 0;
  std::vector<double> v_;
};

enum class ComposeMethod { average, max, left, right, none };

ComposeMethod compose_method_from_string(const std::string& s);
std::string to_string(ComposeMethod m);

// Which composition rule to use per operator when transferring Q-values.
struct CompositionMapping {
  ComposeMethod for_and = ComposeMethod::average;
  ComposeMethod for_or = ComposeMethod::max;
  ComposeMethod for_then = ComposeMethod::left;

  static CompositionMapping best() { return {}; }
  static CompositionMapping worst() {
    return {ComposeMethod::right, ComposeMethod::right, ComposeMethod::right};
  }
  static CompositionMapping uniform(ComposeMethod m) { return {m, m, m}; }
  static CompositionMapping scratch() { return uniform(ComposeMethod::none); }
};

struct LearnParams {
  double epsilon = 0.1;
  double gamma = 0.9;
  double alpha = 1.0;
  bool use_shaping = false;
  int episode_cap = 1000;
  uint64_t rng_seed = 0;
};

// average: pointwise mean; max: per-state, the row whose max is larger
// (q1 on ties); left/right: copies.
QTable compose(ComposeMethod method, const QTable& q1, const QTable& q2);

// Epsilon-greedy with uniform tie breaking among argmaxes.
int select_action(const QTable& q, int s, double epsilon, std::mt19937_64& rng);

// The lifelong store: memory RM, learned formulas, one Q-table per
// non-terminal RM state. A single Memory is single-threaded while
// learning; independent trials use independent Memory instances.
struct Memory {
  explicit Memory(Alphabet alphabet, size_t state_cap = 10000)
      : rm(std::move(alphabet), state_cap) {}

  RewardMachine rm;
  FormulaSet learned;
  std::map<FormulaRef, QTable, CanonLess> qtables;
  std::map<std::string, std::string> provenance;  // state -> how its table was initialized
};

// Q-value transfer of Sec. "acquisition": learned formulas return their
// stored table (as a copy); And/Or/Then nodes recurse after binarizing
// n-ary conjunctions/disjunctions left-associatively in canonical child
// order; anything else gets i.i.d. uniform values in [0, 1e-3).
QTable acquire_knowledge(const Memory& memory, FormulaRef target,
                         const CompositionMapping& mapping, std::mt19937_64& rng,
                         int n_states, int n_actions,
                         std::string* provenance = nullptr);

// Counterfactual QRM update: every non-terminal RM state u is updated
// toward R(u,l') + gamma * max_a' Q^{delta(u,l')}(s',a') from the single
// experience (s,a,s') with arrival label l'. Targets are computed from
// the pre-update tables.
void qrm_step(Memory& memory, int s, int a, int s2, int label_idx, const LearnParams& params,
              const PotentialTable* shaping);

struct EpisodeRow {
  std::string task;
  long episode = 0;
  long env_steps_cumulative = 0;
  int episode_steps = 0;
  bool success = false;
};

struct EvalRow {
  long env_steps_cumulative = 0;
  std::string task;
  int eval_steps = 0;  // episode cap when the greedy policy fails
};

struct Metrics {
  std::vector<EpisodeRow> episodes;
  std::vector<EvalRow> evals;
};

enum class StartMode { fixed, uniform_random };

struct RunOptions {
  long phase_budget = 0;
  long eval_every = 0;  // 0 disables periodic greedy evaluation
  StartMode start_mode = StartMode::fixed;
};

// Greedy rollout (no learning, no exploration, first-argmax ties) from
// the env start; returns steps to RM completion, or params.episode_cap
// on failure/truncation.
int greedy_eval(const Memory& memory, const LabeledGridEnv& env, FormulaRef task,
                const LearnParams& params, std::optional<int> start_state = std::nullopt);

// One lifelong phase: extend the RM with each target, initialize the new
// states' Q-tables from the memory, train QRM for phase_budget steps with
// episodes cycling through the targets, then mark all extended states
// learned. Deterministic for a fixed params.rng_seed.
Metrics lifelong_update(Memory& memory, const std::vector<FormulaRef>& targets,
                        const LabeledGridEnv& env, const LearnParams& params,
                        const CompositionMapping& mapping, const RunOptions& opts);

}  // namespace sltlrm
