// End-to-end acceptance checks. Each numbered check prints one PASS/FAIL
// line; the exit code is nonzero only if a check fails unexpectedly
// (documented known limitations are reported but tolerated).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sltlrm/experiment.hpp"
#include "sltlrm/rewrite.hpp"
#include "sltlrm/semantics.hpp"
#include "test_util.hpp"

using namespace sltlrm;
using Clock = std::chrono::steady_clock;

namespace {

int unexpected_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            bool known_limitation = false) {
  std::string verdict = pass ? "PASS" : known_limitation ? "FAIL (known limitation)" : "FAIL";
  std::cout << "[" << id << "] " << name << ": " << verdict;
  if (!detail.empty()) std::cout << " - " << detail;
  std::cout << std::endl;
  if (!pass && !known_limitation) ++unexpected_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v), s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

double pooled_std(const std::vector<double>& a, const std::vector<double>& b) {
  double sa = stddev(a), sb = stddev(b);
  return std::sqrt(0.5 * (sa * sa + sb * sb));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(content);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;  // header
      continue;
    }
    if (!line.empty()) rows.push_back(split_csv(line));
  }
  return rows;
}

const OutFile* find_file(const std::vector<OutFile>& files, const std::string& name) {
  for (const auto& f : files)
    if (f.name == name) return &f;
  return nullptr;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_progression_soundness() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::vector<std::string> props{"a", "b", "c", "d"};
  const int quota = 10000;
  int checked = 0, failures = 0, generated = 0;
  while (checked < quota && generated < quota * 100) {
    ++generated;
    FormulaRef f = normalize(testutil::random_formula(rng, 4, props));
    Trace t = testutil::random_trace(rng, props, 1, 8);
    bool b1 = false, b2 = false;
    bool lhs = evaluate(f, t, b1);
    bool rhs = evaluate(progress(f, t[0]), TraceView(t).subspan(1), b2);
    if (b1 || b2) continue;  // verdict depends on the truncation point
    ++checked;
    if (lhs != rhs) ++failures;
  }
  double secs = seconds_since(t0);
  report(1, "progression soundness",
         checked == quota && failures == 0 && secs < 30.0,
         std::to_string(checked) + " cases, " + std::to_string(failures) + " failures, " +
             fmt(secs) + "s");
}

struct LawResult {
  int checked = 0;
  int failures = 0;
};

template <typename L, typename R>
LawResult run_law(uint64_t seed, int quota, L lhs_of, R rhs_of) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> props{"a", "b", "c"};
  LawResult res;
  int generated = 0;
  while (res.checked < quota && generated < quota * 100) {
    ++generated;
    FormulaRef p1 = testutil::random_formula(rng, 2, props);
    FormulaRef p2 = testutil::random_formula(rng, 2, props);
    FormulaRef p3 = testutil::random_formula(rng, 2, props);
    Trace t = testutil::random_trace(rng, props, 1, 8);
    bool b1 = false, b2 = false;
    bool l = evaluate(lhs_of(p1, p2, p3), t, b1);
    bool r = evaluate(rhs_of(p1, p2, p3), t, b2);
    if (b1 || b2) continue;
    ++res.checked;
    if (l != r) ++res.failures;
  }
  return res;
}

void criterion_2_operator_laws() {
  const int quota = 5000;
  LawResult assoc = run_law(
      201, quota,
      [](FormulaRef a, FormulaRef b, FormulaRef c) { return mk_then(mk_then(a, b), c); },
      [](FormulaRef a, FormulaRef b, FormulaRef c) { return mk_then(a, mk_then(b, c)); });
  LawResult and_left = run_law(
      202, quota,
      [](FormulaRef a, FormulaRef b, FormulaRef c) {
        return mk_and({mk_then(a, b), mk_then(a, c)});
      },
      [](FormulaRef a, FormulaRef b, FormulaRef c) { return mk_then(a, mk_and({b, c})); });
  LawResult or_left = run_law(
      203, quota,
      [](FormulaRef a, FormulaRef b, FormulaRef c) {
        return mk_or({mk_then(a, b), mk_then(a, c)});
      },
      [](FormulaRef a, FormulaRef b, FormulaRef c) { return mk_then(a, mk_or({b, c})); });
  LawResult and_right = run_law(
      204, quota,
      [](FormulaRef a, FormulaRef b, FormulaRef c) {
        return mk_and({mk_then(a, c), mk_then(b, c)});
      },
      [](FormulaRef a, FormulaRef b, FormulaRef c) { return mk_then(mk_and({a, b}), c); });
  LawResult or_right = run_law(
      205, quota,
      [](FormulaRef a, FormulaRef b, FormulaRef c) {
        return mk_or({mk_then(a, c), mk_then(b, c)});
      },
      [](FormulaRef a, FormulaRef b, FormulaRef c) { return mk_then(mk_or({a, b}), c); });

  bool sound_ok = assoc.checked == quota && assoc.failures == 0 &&
                  and_left.checked == quota && and_left.failures == 0 &&
                  or_left.checked == quota && or_left.failures == 0;
  bool right_identities = and_right.failures == 0 && or_right.failures == 0;

  std::ostringstream detail;
  detail << "associativity " << assoc.failures << "/" << assoc.checked
         << ", left-distribution over and " << and_left.failures << "/" << and_left.checked
         << ", over or " << or_left.failures << "/" << or_left.checked
         << "; right-distribution over and " << and_right.failures << "/" << and_right.checked
         << ", over or " << or_right.failures << "/" << or_right.checked
         << " (right-distribution laws are not identities under earliest-match 'then'"
            " semantics: the split form commits each first component at its own earliest"
            " match; counterexample (F a ; c) & (F b ; c) vs (F a & F b) ; c on trace"
            " {a},{b},{c})";
  report(2, "operator laws", sound_ok && right_identities, detail.str(),
         /*known_limitation=*/sound_ok && !right_identities);
}

void criterion_3_extension_golden() {
  RewardMachine rm(Alphabet::singletons({"c", "m", "o"}));
  FormulaRef t1 = parse("F c ; F o");
  FormulaRef t2 = parse("F m ; F o");
  bool ok = rm.extend(t1) == FormulaSet{t1, parse("F c"), parse("F o")};
  ok = ok && rm.extend(t2) == FormulaSet{t2, parse("F m")};
  ok = ok && rm.extend(t1).empty();
  for (FormulaRef u : rm.states()) {
    if (u->is_terminal()) continue;
    for (const Label& l : rm.alphabet().labels())
      ok = ok && rm.next_state(u, l) == progress(u, l);
  }
  report(3, "reward-machine extension golden sequence", ok,
         std::to_string(rm.states().size()) + " states after both extensions");
}

void criterion_4_shaping() {
  RewardMachine rm(Alphabet::singletons({"c", "m", "o"}));
  FormulaRef t1 = parse("F c ; F o");
  rm.extend(t1);
  PotentialTable pt = compute_potential(rm, 0.9);
  bool chain_ok = std::abs(pt.at(rm, parse("F o")) - 1.0) < 1e-9 &&
                  std::abs(pt.at(rm, t1) - 0.9) < 1e-9;

  // telescoping over random walks on a larger machine
  rm.extend(parse("(F c ; F o) & (F m ; F o)"));
  rm.extend(parse("!m U c"));
  pt = compute_potential(rm, 0.9);
  std::mt19937_64 rng(104);
  int walks = 0, violations = 0;
  while (walks < 1000) {
    FormulaRef u0 = rm.states()[rng() % rm.states().size()];
    if (u0->is_terminal()) continue;
    ++walks;
    FormulaRef u = u0;
    double shaped_sum = 0, plain_sum = 0, g = 1.0;
    int n = 0;
    while (!u->is_terminal() && n < 50) {
      Label l = rm.alphabet().at(rng() % rm.alphabet().size());
      shaped_sum += g * shaped_reward(rm, pt, u, l);
      plain_sum += g * rm.reward(u, l);
      u = rm.next_state(u, l);
      g *= 0.9;
      ++n;
    }
    double expected = plain_sum + g * pt.at(rm, u) - pt.at(rm, u0);
    if (std::abs(shaped_sum - expected) >= 1e-9) ++violations;
  }
  report(4, "shaping potentials and telescoping", chain_ok && violations == 0,
         "chain values within 1e-9, " + std::to_string(violations) +
             "/1000 telescoping violations");
}

void criterion_5_qrm_optimality() {
  const char* map_text =
      "g=g\n"
      "a=a\n"
      "b=b\n"
      "\n"
      "..........\n"
      "..#...#...\n"
      "..#.g.#...\n"
      "..#...#...\n"
      "..........\n"
      ".a........\n"
      "......#...\n"
      "......#.b.\n"
      "S.....#...\n"
      "..........\n";
  LabeledGridEnv env{load_map(map_text)};
  bool all_ok = true;
  std::ostringstream detail;
  for (const char* task_text : {"F g", "F a ; F b"}) {
    FormulaRef task = parse(task_text);
    Memory mem(env.env_alphabet());
    LearnParams p;  // epsilon 0.1, gamma 0.9, alpha 1
    p.rng_seed = 105;
    RunOptions opts;
    opts.phase_budget = 200000;
    opts.start_mode = StartMode::uniform_random;
    lifelong_update(mem, {task}, env, p, CompositionMapping::scratch(), opts);
    int mismatches = 0;
    for (int s : env.free_states()) {
      int oracle = testutil::product_bfs_steps(env, mem.rm, task, s);
      if (greedy_eval(mem, env, task, p, s) != oracle) ++mismatches;
    }
    all_ok = all_ok && mismatches == 0;
    detail << task_text << ": " << mismatches << "/" << env.free_states().size()
           << " starts off-oracle; ";
  }
  report(5, "trained greedy policy matches shortest-path oracle", all_ok, detail.str());
}

void criterion_6_composition_transfer() {
  auto t0 = Clock::now();
  ExperimentConfig c;
  c.domain = "office";
  c.mode = "compose-eval";
  c.trials = 5;
  c.seed = 106;
  auto files = run_experiment(c);
  double secs = seconds_since(t0);

  const std::map<std::string, std::string> designated{
      {"and", "average"}, {"or", "max"}, {"then", "left"}};
  bool all_ok = secs < 600.0;
  std::ostringstream detail;
  double min_margin = 1e18;
  for (const auto& [tname, op, ftext] : domain_preset("office").compose_targets) {
    (void)ftext;
    std::vector<double> arm_means, qrm_means;
    for (int trial = 0; trial < c.trials; ++trial) {
      for (const auto& [arm, sink] :
           {std::pair<std::string, std::vector<double>*>{designated.at(op), &arm_means},
            {"qrm", &qrm_means}}) {
        const OutFile* f = find_file(files, "compose_" + tname + "_" + arm + "_trial" +
                                                std::to_string(trial) + "_summary.csv");
        if (!f) {
          all_ok = false;
          continue;
        }
        auto rows = csv_rows(f->content);
        if (rows.size() != 1 || rows[0].size() < 6) {
          all_ok = false;
          continue;
        }
        sink->push_back(std::stod(rows[0][4]));  // avg_steps_to_complete
      }
    }
    double margin = mean(qrm_means) - mean(arm_means);
    double ps = pooled_std(arm_means, qrm_means);
    min_margin = std::min(min_margin, margin - ps);
    bool target_ok = margin > ps;
    all_ok = all_ok && target_ok;
    detail << tname << "(" << designated.at(op) << " " << fmt(mean(arm_means)) << " vs qrm "
           << fmt(mean(qrm_means)) << " +-" << fmt(ps) << (target_ok ? " ok" : " VIOLATED")
           << "); ";
  }
  detail << fmt(secs) << "s";
  report(6, "composition transfer beats scratch training per operator", all_ok, detail.str());
}

void criterion_7_representation_choice() {
  ExperimentConfig c;
  c.domain = "office";
  c.mode = "repr-eval";
  c.trials = 5;
  c.seed = 107;
  auto files = run_experiment(c);

  bool counts_ok = true;
  long unlearned_small = -1, unlearned_alt = -1;
  const OutFile* counts = find_file(files, "repr_counts_trial0.csv");
  if (!counts) {
    counts_ok = false;
  } else {
    for (const auto& row : csv_rows(counts->content)) {
      if (row.size() < 6) continue;
      if (row[1] == "smallest") {
        unlearned_small = std::stol(row[3]);
        counts_ok = counts_ok && row[5] == "1";  // picked by the selector
      } else {
        unlearned_alt = std::stol(row[3]);
        counts_ok = counts_ok && row[5] == "0";
      }
    }
    counts_ok = counts_ok && unlearned_small >= 0 && unlearned_alt >= 0 &&
                unlearned_small < unlearned_alt;
  }

  // mean greedy-evaluation curves: the smallest representation should
  // dominate after the first 10% of the budget
  long budget = c.effective_repr(domain_preset("office"));
  auto curve = [&](const std::string& repr) {
    std::map<long, std::vector<double>> by_step;
    for (int trial = 0; trial < c.trials; ++trial) {
      const OutFile* f =
          find_file(files, "repr_" + repr + "_trial" + std::to_string(trial) + ".csv");
      if (!f) continue;
      for (const auto& row : csv_rows(f->content)) {
        if (row.size() < 8 || row[7].empty()) continue;  // training row
        by_step[std::stol(row[4])].push_back(std::stod(row[7]));
      }
    }
    return by_step;
  };
  auto small = curve("smallest");
  auto alt = curve("alternative");
  int points = 0, dominated = 0, strict = 0;
  for (const auto& [step, vals] : small) {
    if (step <= budget / 10 || !alt.count(step)) continue;
    ++points;
    double ms = mean(vals), ma = mean(alt.at(step));
    if (ms <= ma) ++dominated;
    if (ms < ma) ++strict;
  }
  bool curves_ok = points > 0 && dominated == points && strict > 0;

  report(7, "smallest representation dominates the alternative", counts_ok && curves_ok,
         "unlearned counts " + std::to_string(unlearned_small) + " < " +
             std::to_string(unlearned_alt) + "; dominated " + std::to_string(dominated) +
             "/" + std::to_string(points) + " evaluation points (" + std::to_string(strict) +
             " strictly)");
}

ExperimentConfig lifelong_config() {
  ExperimentConfig c;
  c.domain = "office";
  c.mode = "lifelong";
  c.trials = 5;
  c.seed = 108;
  c.phase_budget = 10000;
  return c;
}

void criterion_8_lifelong(const std::vector<OutFile>& files) {
  ExperimentConfig c = lifelong_config();
  // (arm, phase) -> final window means across trials and tasks
  std::map<std::pair<std::string, int>, std::vector<double>> metric;
  for (const char* arm : {"lsrm-best", "lsrm-worst", "qrm"}) {
    for (int trial = 0; trial < c.trials; ++trial) {
      const OutFile* f = find_file(files, std::string("lifelong_") + arm + "_trial" +
                                              std::to_string(trial) + "_summary.csv");
      if (!f) continue;
      for (const auto& row : csv_rows(f->content)) {
        if (row.size() < 6) continue;
        metric[{arm, std::stoi(row[1])}].push_back(std::stod(row[5]));
      }
    }
  }
  bool ok = true;
  std::ostringstream detail;
  for (int phase = 1; phase <= 3; ++phase) {
    const auto& best = metric[{"lsrm-best", phase}];
    const auto& worst = metric[{"lsrm-worst", phase}];
    const auto& qrm = metric[{"qrm", phase}];
    if (best.empty() || worst.empty() || qrm.empty()) {
      ok = false;
      continue;
    }
    double mb = mean(best), mw = mean(worst), mq = mean(qrm);
    bool phase_ok;
    if (phase == 1) {
      phase_ok = std::abs(mb - mq) <= pooled_std(best, qrm);
      detail << "phase1 best " << fmt(mb) << " ~ qrm " << fmt(mq) << " (+-"
             << fmt(pooled_std(best, qrm)) << ")";
    } else {
      phase_ok = mb < mq && mw <= mq;
      detail << "; phase" << phase << " best " << fmt(mb) << " < qrm " << fmt(mq)
             << ", worst " << fmt(mw);
    }
    if (!phase_ok) detail << " VIOLATED";
    ok = ok && phase_ok;
  }
  report(8, "lifelong transfer beats scratch after the first phase", ok, detail.str());
}

void criterion_9_determinism(const std::vector<OutFile>& first) {
  auto second = run_experiment(lifelong_config());
  bool ok = first.size() == second.size();
  std::string diff;
  if (ok) {
    for (size_t i = 0; i < first.size(); ++i) {
      if (first[i].name != second[i].name || first[i].content != second[i].content) {
        ok = false;
        diff = first[i].name;
        break;
      }
    }
  }
  report(9, "repeated runs are byte-identical", ok,
         ok ? std::to_string(first.size()) + " files compared"
            : "first difference at " + diff);
}

}  // namespace

int main() {
  try {
    criterion_1_progression_soundness();
    criterion_2_operator_laws();
    criterion_3_extension_golden();
    criterion_4_shaping();
    criterion_5_qrm_optimality();
    criterion_6_composition_transfer();
    criterion_7_representation_choice();
    auto lifelong_files = run_experiment(lifelong_config());
    criterion_8_lifelong(lifelong_files);
    criterion_9_determinism(lifelong_files);
  } catch (const std::exception& e) {
    std::cerr << "acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
  if (unexpected_failures > 0) {
    std::cout << unexpected_failures << " unexpected failure(s)" << std::endl;
    return 1;
  }
  std::cout << "all checks passed (known limitations documented above)" << std::endl;
  return 0;
}
