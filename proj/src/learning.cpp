#include "sltlrm/learning.hpp"

#include <algorithm>
#include <cassert>

namespace sltlrm {

ComposeMethod compose_method_from_string(const std::string& s) {
  if (s == "average") return ComposeMethod::average;
  if (s == "max") return ComposeMethod::max;
  if (s == "left") return ComposeMethod::left;
  if (s == "right") return ComposeMethod::right;
  if (s == "none") return ComposeMethod::none;
  throw std::invalid_argument("unknown composition method: " + s);
}

std::string to_string(ComposeMethod m) {
  switch (m) {
    case ComposeMethod::average: return "average";
    case ComposeMethod::max: return "max";
    case ComposeMethod::left: return "left";
    case ComposeMethod::right: return "right";
    case ComposeMethod::none: return "none";
  }
  return "?";
}

QTable compose(ComposeMethod method, const QTable& q1, const QTable& q2) {
  if (q1.n_states() != q2.n_states() || q1.n_actions() != q2.n_actions())
    throw std::invalid_argument("compose: mismatched table shapes");
  switch (method) {
    case ComposeMethod::left:
      return q1;
    case ComposeMethod::right:
      return q2;
    case ComposeMethod::average: {
      QTable out(q1.n_states(), q1.n_actions());
      for (int s = 0; s < q1.n_states(); ++s)
        for (int a = 0; a < q1.n_actions(); ++a)
          out.at(s, a) = 0.5 * (q1.at(s, a) + q2.at(s, a));
      return out;
    }
    case ComposeMethod::max: {
      QTable out(q1.n_states(), q1.n_actions());
      for (int s = 0; s < q1.n_states(); ++s)
        out.copy_row(s, q1.max_at(s) >= q2.max_at(s) ? q1 : q2);
      return out;
    }
    case ComposeMethod::none:
      throw std::invalid_argument("compose: 'none' is not a composition rule");
  }
  throw std::logic_error("unreachable");
}

int select_action(const QTable& q, int s, double epsilon, std::mt19937_64& rng) {
  int n = q.n_actions();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (unif(rng) < epsilon) return static_cast<int>(rng() % n);
  double best = q.max_at(s);
  int ties[8];
  int n_ties = 0;
  for (int a = 0; a < n; ++a)
    if (q.at(s, a) == best) ties[n_ties++] = a;
  return ties[rng() % n_ties];
}

QTable acquire_knowledge(const Memory& memory, FormulaRef target,
                         const CompositionMapping& mapping, std::mt19937_64& rng,
                         int n_states, int n_actions, std::string* provenance) {
  auto random_table = [&] {
    QTable q(n_states, n_actions);
    std::uniform_real_distribution<double> unif(0.0, 1e-3);
    for (int s = 0; s < n_states; ++s)
      for (int a = 0; a < n_actions; ++a) q.at(s, a) = unif(rng);
    return q;
  };

  if (memory.learned.count(target)) {
    if (provenance) *provenance = "learned";
    return memory.qtables.at(target);
  }

  ComposeMethod method = ComposeMethod::none;
  FormulaRef lhs = nullptr;
  FormulaRef rhs = nullptr;
  if (target->kind() == Kind::Then) {
    method = mapping.for_then;
    lhs = target->child(0);
    rhs = target->child(1);
  } else if (target->kind() == Kind::And || target->kind() == Kind::Or) {
    method = target->kind() == Kind::And ? mapping.for_and : mapping.for_or;
    // left-assoc binarization of the n-ary node in canonical child order
    const auto& kids = target->children();
    rhs = kids.back();
    if (kids.size() == 2) {
      lhs = kids[0];
    } else {
      std::vector<FormulaRef> head(kids.begin(), kids.end() - 1);
      lhs = target->kind() == Kind::And ? n_and(head) : n_or(head);
    }
  }

  if (method == ComposeMethod::none || !lhs) {
    if (provenance) *provenance = "random";
    return random_table();
  }
  std::string p1, p2;
  QTable q1 = acquire_knowledge(memory, lhs, mapping, rng, n_states, n_actions, &p1);
  QTable q2 = acquire_knowledge(memory, rhs, mapping, rng, n_states, n_actions, &p2);
  if (provenance)
    *provenance = to_string(method) + "(" + lhs->str() + ": " + p1 + ", " + rhs->str() +
                  ": " + p2 + ")";
  return compose(method, q1, q2);
}

void qrm_step(Memory& memory, int s, int a, int s2, int label_idx, const LearnParams& params,
              const PotentialTable* shaping) {
  const RewardMachine& rm = memory.rm;
  const auto& states = rm.states();
  // read phase: targets from pre-update tables
  static thread_local std::vector<double> targets;
  targets.assign(states.size(), 0.0);
  static thread_local std::vector<QTable*> tables;
  tables.assign(states.size(), nullptr);
  for (size_t ui = 0; ui < states.size(); ++ui) {
    FormulaRef u = states[ui];
    if (u->is_terminal()) continue;
    FormulaRef u2 = rm.next_state_by_index(static_cast<int>(ui), label_idx);
    double r = shaping ? shaped_reward_by_index(rm, *shaping, static_cast<int>(ui), label_idx)
                       : rm.reward_by_index(static_cast<int>(ui), label_idx);
    double target = r;
    if (!u2->is_terminal()) target += params.gamma * memory.qtables.at(u2).max_at(s2);
    targets[ui] = target;
    tables[ui] = &memory.qtables.at(u);
  }
  // write phase
  for (size_t ui = 0; ui < states.size(); ++ui) {
    if (!tables[ui]) continue;
    double& q = tables[ui]->at(s, a);
    q += params.alpha * (targets[ui] - q);
  }
}

int greedy_eval(const Memory& memory, const LabeledGridEnv& env, FormulaRef task,
                const LearnParams& params, std::optional<int> start_state) {
  FormulaRef u = task;
  int s = start_state.value_or(env.start_index());
  for (int t = 0; t < params.episode_cap; ++t) {
    if (u->is_terminal()) return t;
    auto it = memory.qtables.find(u);
    if (it == memory.qtables.end()) return params.episode_cap;
    int a = it->second.argmax_at(s);
    s = env.step_index(s, static_cast<Action>(a));
    u = memory.rm.next_state_by_index(memory.rm.state_index(u), env.label_index(s));
    if (u == top()) return t + 1;
    if (u == bot()) return params.episode_cap;
  }
  return params.episode_cap;
}

Metrics lifelong_update(Memory& memory, const std::vector<FormulaRef>& targets,
                        const LabeledGridEnv& env, const LearnParams& params,
                        const CompositionMapping& mapping, const RunOptions& opts) {
  Metrics metrics;
  if (targets.empty()) return metrics;
  if (!(env.env_alphabet() == memory.rm.alphabet()))
    throw std::invalid_argument("environment alphabet does not match memory RM alphabet");

  std::mt19937_64 rng(params.rng_seed);
  int n_states = env.n_states();

  // Alg. 1 lines 1-7: extend and transfer
  FormulaSet all_new;
  for (FormulaRef target : targets) {
    FormulaSet u_new = memory.rm.extend(target);
    for (FormulaRef psi : u_new) {
      if (psi->is_terminal()) continue;
      all_new.insert(psi);
      std::string prov;
      memory.qtables[psi] =
          acquire_knowledge(memory, psi, mapping, rng, n_states, kNumActions, &prov);
      memory.provenance[psi->str()] = prov;
    }
  }

  std::optional<PotentialTable> pt;
  if (params.use_shaping) pt = compute_potential(memory.rm, params.gamma);

  std::uniform_int_distribution<int> start_dist(0, static_cast<int>(env.free_states().size()) - 1);
  auto pick_start = [&]() -> int {
    if (opts.start_mode == StartMode::uniform_random)
      return env.free_states()[start_dist(rng)];
    return env.start_index();
  };

  // QRM run: episodes cycle through targets in order
  long steps = 0;
  long episode = 0;
  size_t task_i = 0;
  while (steps < opts.phase_budget) {
    FormulaRef task = targets[task_i % targets.size()];
    ++task_i;
    FormulaRef u = task;
    memory.rm.set_initial(u);
    int s = pick_start();
    int ep_steps = 0;
    while (!u->is_terminal() && ep_steps < params.episode_cap && steps < opts.phase_budget) {
      int a = select_action(memory.qtables.at(u), s, params.epsilon, rng);
      int s2 = env.step_index(s, static_cast<Action>(a));
      int li = env.label_index(s2);
      qrm_step(memory, s, a, s2, li, params, pt ? &*pt : nullptr);
      u = memory.rm.next_state_by_index(memory.rm.state_index(u), li);
      s = s2;
      ++ep_steps;
      ++steps;
      if (opts.eval_every > 0 && steps % opts.eval_every == 0) {
        for (FormulaRef t : targets)
          metrics.evals.push_back({steps, t->str(), greedy_eval(memory, env, t, params)});
      }
    }
    metrics.episodes.push_back({task->str(), episode++, steps, ep_steps, u == top()});
  }

  // Alg. 1 line 9
  for (FormulaRef psi : all_new) memory.learned.insert(psi);
  return metrics;
}

}  // namespace sltlrm
