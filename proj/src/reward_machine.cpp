#include "sltlrm/reward_machine.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "sltlrm/semantics.hpp"

namespace sltlrm {

RewardMachine::RewardMachine(Alphabet alphabet, size_t state_cap)
    : alphabet_(std::move(alphabet)), state_cap_(state_cap), initial_(top()) {
  add_state(top());
}

void RewardMachine::add_state(FormulaRef u) {
  if (states_.size() >= state_cap_)
    throw std::runtime_error("reward machine state cap (" + std::to_string(state_cap_) +
                             ") exceeded while adding state " + u->str());
  index_.emplace(u, static_cast<int>(states_.size()));
  states_.push_back(u);
  transitions_.emplace_back(alphabet_.size(), -1);
}

FormulaSet RewardMachine::extend(FormulaRef target) {
  if (normalize(target) != target)
    throw std::invalid_argument("extend: target must be normalized: " + target->str());
  if (has_state(target)) return {};

  FormulaSet added;
  std::deque<FormulaRef> queue;
  auto discover = [&](FormulaRef u) {
    if (has_state(u)) return;
    add_state(u);
    added.insert(u);
    queue.push_back(u);
  };

  discover(target);
  while (!queue.empty()) {
    FormulaRef u = queue.front();
    queue.pop_front();
    if (u->is_terminal()) continue;
    if (u->kind() == Kind::Then) discover(u->child(0));
    int ui = state_index(u);
    for (size_t li = 0; li < alphabet_.size(); ++li) {
      FormulaRef v = progress(u, alphabet_.at(li));
      discover(v);
      transitions_[ui][li] = state_index(v);
    }
  }
  return added;
}

void RewardMachine::set_initial(FormulaRef u) {
  if (!has_state(u)) throw std::invalid_argument("set_initial: unknown state " + u->str());
  initial_ = u;
}

FormulaSet RewardMachine::terminals() const {
  FormulaSet out;
  for (FormulaRef u : states_)
    if (u->is_terminal()) out.insert(u);
  return out;
}

int RewardMachine::state_index(FormulaRef u) const {
  auto it = index_.find(u);
  if (it == index_.end()) throw std::invalid_argument("unknown RM state: " + u->str());
  return it->second;
}

FormulaRef RewardMachine::next_state(FormulaRef u, const Label& l) const {
  int li = alphabet_.index_of(l);
  if (li < 0) throw std::invalid_argument("label not in alphabet: " + l.str());
  return next_state_by_index(state_index(u), li);
}

FormulaRef RewardMachine::next_state_by_index(int state_idx, int label_idx) const {
  int t = transitions_[state_idx][label_idx];
  if (t < 0)
    throw std::invalid_argument("no transition from terminal state " +
                                states_[state_idx]->str());
  return states_[t];
}

double RewardMachine::reward(FormulaRef u, const Label& l) const {
  if (u->is_terminal()) {
    (void)state_index(u);  // still validate membership
    if (alphabet_.index_of(l) < 0)
      throw std::invalid_argument("label not in alphabet: " + l.str());
    return 0.0;
  }
  return next_state(u, l) == top() ? 1.0 : 0.0;
}

double RewardMachine::reward_by_index(int state_idx, int label_idx) const {
  if (states_[state_idx]->is_terminal()) return 0.0;
  return next_state_by_index(state_idx, label_idx) == top() ? 1.0 : 0.0;
}

PotentialTable compute_potential(const RewardMachine& rm, double gamma, double tol,
                                 int max_iters) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("compute_potential: gamma must be in (0,1]");
  size_t n = rm.states().size();
  size_t nl = rm.alphabet().size();
  PotentialTable pt;
  pt.gamma = gamma;
  pt.phi.assign(n, 0.0);
  for (int it = 0; it < max_iters; ++it) {
    double residual = 0.0;
    for (size_t ui = 0; ui < n; ++ui) {
      if (rm.states()[ui]->is_terminal()) continue;
      double best = 0.0;
      for (size_t li = 0; li < nl; ++li) {
        int vi = rm.state_index(rm.next_state_by_index(static_cast<int>(ui), static_cast<int>(li)));
        double val = rm.reward_by_index(static_cast<int>(ui), static_cast<int>(li)) +
                     gamma * pt.phi[vi];
        if (val > best) best = val;
      }
      residual = std::max(residual, std::abs(best - pt.phi[ui]));
      pt.phi[ui] = best;
    }
    if (residual < tol) return pt;
  }
  throw std::runtime_error("compute_potential: no convergence within iteration cap");
}

double shaped_reward(const RewardMachine& rm, const PotentialTable& pt, FormulaRef u,
                     const Label& l) {
  int li = rm.alphabet().index_of(l);
  if (li < 0) throw std::invalid_argument("label not in alphabet: " + l.str());
  return shaped_reward_by_index(rm, pt, rm.state_index(u), li);
}

double shaped_reward_by_index(const RewardMachine& rm, const PotentialTable& pt, int state_idx,
                              int label_idx) {
  int vi = rm.state_index(rm.next_state_by_index(state_idx, label_idx));
  return rm.reward_by_index(state_idx, label_idx) + pt.gamma * pt.phi[vi] - pt.phi[state_idx];
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string RewardMachine::to_dot() const {
  std::ostringstream os;
  os << "digraph reward_machine {\n  rankdir=LR;\n  node [shape=box];\n";
  for (size_t ui = 0; ui < states_.size(); ++ui) {
    FormulaRef u = states_[ui];
    os << "  n" << ui << " [label=\"" << dot_escape(u->str()) << "\"";
    if (u->is_terminal()) os << ", peripheries=2";
    if (u == initial_) os << ", style=filled, fillcolor=lightyellow";
    os << "];\n";
  }
  for (size_t ui = 0; ui < states_.size(); ++ui) {
    if (states_[ui]->is_terminal()) continue;
    // group labels by (target, reward): edge caption "(l1,...,ln | r)"
    std::map<std::pair<int, int>, std::vector<std::string>> groups;
    for (size_t li = 0; li < alphabet_.size(); ++li) {
      int vi = transitions_[ui][li];
      int r = static_cast<int>(reward_by_index(static_cast<int>(ui), static_cast<int>(li)));
      groups[{vi, r}].push_back(alphabet_.at(li).str());
    }
    for (const auto& [key, labels] : groups) {
      std::string caption = "(";
      for (size_t i = 0; i < labels.size(); ++i) {
        if (i) caption += ',';
        caption += labels[i];
      }
      caption += " | " + std::to_string(key.second) + ")";
      os << "  n" << ui << " -> n" << key.first << " [label=\"" << dot_escape(caption)
         << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

nlohmann::ordered_json RewardMachine::to_json() const {
  nlohmann::ordered_json j;
  j["alphabet"] = nlohmann::ordered_json::array();
  for (const Label& l : alphabet_.labels()) j["alphabet"].push_back(l.props());
  j["states"] = nlohmann::ordered_json::array();
  for (FormulaRef u : states_) j["states"].push_back(u->str());
  j["initial"] = initial_->str();
  j["terminals"] = nlohmann::ordered_json::array();
  for (FormulaRef u : terminals()) j["terminals"].push_back(u->str());
  j["transitions"] = nlohmann::ordered_json::array();
  for (size_t ui = 0; ui < states_.size(); ++ui) {
    if (states_[ui]->is_terminal()) continue;
    for (size_t li = 0; li < alphabet_.size(); ++li) {
      nlohmann::ordered_json t;
      t["from"] = states_[ui]->str();
      t["label"] = alphabet_.at(li).props();
      t["to"] = states_[transitions_[ui][li]]->str();
      t["reward"] = reward_by_index(static_cast<int>(ui), static_cast<int>(li));
      j["transitions"].push_back(t);
    }
  }
  return j;
}

RewardMachine RewardMachine::from_json(const nlohmann::ordered_json& j, size_t state_cap) {
  std::vector<Label> labels;
  for (const auto& l : j.at("alphabet"))
    labels.emplace_back(l.get<std::vector<std::string>>());
  RewardMachine rm(Alphabet(std::move(labels)), state_cap);
  for (const auto& s : j.at("states")) {
    FormulaRef u = parse(s.get<std::string>());
    if (!rm.has_state(u)) rm.add_state(u);
  }
  for (const auto& t : j.at("transitions")) {
    FormulaRef from = parse(t.at("from").get<std::string>());
    FormulaRef to = parse(t.at("to").get<std::string>());
    Label l(t.at("label").get<std::vector<std::string>>());
    int li = rm.alphabet_.index_of(l);
    if (li < 0) throw std::invalid_argument("transition label not in alphabet: " + l.str());
    rm.transitions_[rm.state_index(from)][li] = rm.state_index(to);
  }
  rm.set_initial(parse(j.at("initial").get<std::string>()));
  return rm;
}

}  // namespace sltlrm
