#include "sltlrm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sltlrm/rewrite.hpp"

namespace sltlrm {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

#ifndef SLTLRM_MAPS_DIR
#define SLTLRM_MAPS_DIR "maps"
#endif

namespace {

DomainPreset make_office() {
  DomainPreset d;
  d.name = "office";
  d.map_file = std::string(SLTLRM_MAPS_DIR) + "/officeworld.map";
  d.episode_cap = 1000;
  d.sources = {
      {"src1", "(!star U c) ; (!star U o)"},
      {"src2", "(!star U m) ; (!star U o)"},
      {"src3", "(!star U B) ; (!star U o)"},
      {"src4", "(!star U B) ; (!star U C)"},
      {"src5", "(!star U o) ; (!star U B)"},
      {"src6", "(!star U m) ; (!star U D)"},
      {"src7", "(!star U m) ; (!star U A)"},
  };
  d.compose_targets = {
      {"and_1_2", "and", "((!star U c) ; (!star U o)) & ((!star U m) ; (!star U o))"},
      {"and_4_6", "and", "((!star U B) ; (!star U C)) & ((!star U m) ; (!star U D))"},
      {"or_4_5", "or", "((!star U B) ; (!star U C)) | ((!star U o) ; (!star U B))"},
      {"or_4_7", "or", "((!star U B) ; (!star U C)) | ((!star U m) ; (!star U A))"},
      {"then_4_5", "then", "((!star U B) ; (!star U C)) ; ((!star U o) ; (!star U B))"},
      {"then_4_6", "then", "((!star U B) ; (!star U C)) ; ((!star U m) ; (!star U D))"},
      {"then_5_6", "then", "((!star U o) ; (!star U B)) ; ((!star U m) ; (!star U D))"},
  };
  d.repr_sources = {
      {"src1", "(!star U c) ; (!star U o)"},
      {"src2", "(!star U m) ; (!star U o)"},
  };
  d.representations = {
      {"smallest", "((!star U c) ; (!star U o)) & ((!star U m) ; (!star U o))"},
      {"alternative", "((!star U c) & (!star U m)) ; (!star U o)"},
  };
  d.phases = {
      {{"coffee_to_A", "(!star U c) ; (!star U A)"},
       {"mail_to_B", "(!star U m) ; (!star U B)"}},
      {{"coffee_to_office", "(!star U c) ; (!star U o)"},
       {"mail_to_office", "(!star U m) ; (!star U o)"}},
      {{"coffee_and_mail_to_office",
        "((!star U c) ; (!star U o)) & ((!star U m) ; (!star U o))"},
       {"B_then_A", "(!star U B) ; (!star U A)"}},
  };
  d.paper_pretrain_budget = 50000;
  d.paper_target_budget = 10000;
  d.paper_phase_budget = 30000;
  d.paper_repr_budget = 30000;
  return d;
}

DomainPreset make_minecraft() {
  DomainPreset d;
  d.name = "minecraft";
  d.map_file = std::string(SLTLRM_MAPS_DIR) + "/minecraft.map";
  d.episode_cap = 600;
  d.sources = {
      {"plank", "F a ; F b"},
      {"stick", "F a ; F c"},
      {"cloth", "F d ; F e"},
      {"rope", "F d ; F b"},
      {"bridge", "(F a & F f) ; F e"},
      {"shears", "(F a & F f) ; F c"},
  };
  d.compose_targets = {
      {"and_1_3", "and", "(F a ; F b) & (F d ; F e)"},
      {"and_4_5", "and", "(F d ; F b) & ((F a & F f) ; F e)"},
      {"and_4_6", "and", "(F d ; F b) & ((F a & F f) ; F c)"},
      {"or_1_3", "or", "(F a ; F b) | (F d ; F e)"},
      {"or_2_3", "or", "(F a ; F c) | (F d ; F e)"},
      {"then_2_3", "then", "(F a ; F c) ; (F d ; F e)"},
      {"then_5_6", "then", "((F a & F f) ; F e) ; ((F a & F f) ; F c)"},
  };
  d.repr_sources = {
      {"plank", "F a ; F b"},
      {"workbench", "F c"},
      {"grass", "F d"},
  };
  d.representations = {
      {"smallest", "((F a ; F b) & F d) ; F c"},
      {"alternative1", "((F a ; F b) ; F c) & (F d ; F c)"},
      {"alternative2", "(F a ; (F b ; F c)) & (F d ; F c)"},
  };
  d.phases = {
      {{"plank", "F a ; F b"}, {"stick", "F a ; F c"}},
      {{"cloth", "F d ; F e"}, {"rope", "F d ; F b"}},
      {{"bridge", "(F a & F f) ; F e"}, {"bed", "((F a ; F b) & F d) ; F c"}},
      {{"axe", "((F a ; F c) & F f) ; F b"}, {"shears", "(F a & F f) ; F c"}},
      {{"gold", "(F a & F f) ; F e ; F g"}, {"gem", "((F a ; F c) & F f) ; F b ; F h"}},
  };
  d.paper_pretrain_budget = 300000;
  d.paper_target_budget = 400000;
  d.paper_phase_budget = 400000;
  d.paper_repr_budget = 400000;
  return d;
}

}  // namespace

const DomainPreset& domain_preset(const std::string& domain) {
  static const DomainPreset office = make_office();
  static const DomainPreset minecraft = make_minecraft();
  if (domain == "office") return office;
  if (domain == "minecraft") return minecraft;
  throw std::invalid_argument("unknown domain: " + domain + " (expected office|minecraft)");
}

long ExperimentConfig::effective_pretrain(const DomainPreset& d) const {
  if (pretrain_budget > 0) return pretrain_budget;
  return scale == "paper" ? d.paper_pretrain_budget : d.paper_pretrain_budget / 5;
}
long ExperimentConfig::effective_target(const DomainPreset& d) const {
  if (target_budget > 0) return target_budget;
  return scale == "paper" ? d.paper_target_budget : d.paper_target_budget / 5;
}
long ExperimentConfig::effective_phase(const DomainPreset& d) const {
  if (phase_budget > 0) return phase_budget;
  return scale == "paper" ? d.paper_phase_budget : d.paper_phase_budget / 3;
}
long ExperimentConfig::effective_repr(const DomainPreset& d) const {
  if (target_budget > 0) return target_budget;
  return scale == "paper" ? d.paper_repr_budget : d.paper_repr_budget / 5;
}
long ExperimentConfig::effective_eval_every() const {
  if (eval_every > 0) return eval_every;
  return scale == "paper" ? 2000 : 500;
}

CompositionMapping ExperimentConfig::mapping() const {
  if (mapping_preset == "best") return CompositionMapping::best();
  if (mapping_preset == "worst") return CompositionMapping::worst();
  if (mapping_preset == "custom") return custom_mapping;
  throw std::invalid_argument("unknown mapping preset: " + mapping_preset);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j = json::parse(in);
  ExperimentConfig c;
  auto get = [&](const char* key, auto& out) {
    if (j.contains(key)) out = j.at(key).template get<std::decay_t<decltype(out)>>();
  };
  get("domain", c.domain);
  get("mode", c.mode);
  get("trials", c.trials);
  get("seed", c.seed);
  get("scale", c.scale);
  get("out", c.out_dir);
  get("map", c.map_file);
  get("mapping", c.mapping_preset);
  get("pretrain_budget", c.pretrain_budget);
  get("target_budget", c.target_budget);
  get("phase_budget", c.phase_budget);
  get("eval_every", c.eval_every);
  get("window", c.window);
  get("parallel", c.parallel);
  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (p.contains("epsilon")) c.params.epsilon = p.at("epsilon").get<double>();
    if (p.contains("gamma")) c.params.gamma = p.at("gamma").get<double>();
    if (p.contains("alpha")) c.params.alpha = p.at("alpha").get<double>();
    if (p.contains("use_shaping")) c.params.use_shaping = p.at("use_shaping").get<bool>();
    if (p.contains("episode_cap")) c.episode_cap_override = p.at("episode_cap").get<int>();
  }
  if (j.contains("custom_mapping")) {
    const auto& m = j.at("custom_mapping");
    c.custom_mapping.for_and = compose_method_from_string(m.at("and").get<std::string>());
    c.custom_mapping.for_or = compose_method_from_string(m.at("or").get<std::string>());
    c.custom_mapping.for_then = compose_method_from_string(m.at("then").get<std::string>());
  }
  if (j.contains("tasks"))
    for (const auto& t : j.at("tasks"))
      c.tasks.push_back({t.at("name").get<std::string>(), t.at("formula").get<std::string>()});
  return c;
}

std::string metrics_to_csv(const Metrics& metrics, int trial, int phase, int window) {
  std::ostringstream os;
  os << "trial,phase,task,episode,env_steps_cumulative,episode_steps,success_flag,"
        "eval_steps,avg_steps_window\n";
  // interleave training episodes and eval rows by cumulative step count
  size_t ei = 0;
  std::vector<int> recent;
  recent.reserve(metrics.episodes.size());
  double running_sum = 0;
  for (size_t i = 0; i < metrics.episodes.size(); ++i) {
    const auto& ep = metrics.episodes[i];
    while (ei < metrics.evals.size() &&
           metrics.evals[ei].env_steps_cumulative <= ep.env_steps_cumulative) {
      const auto& ev = metrics.evals[ei++];
      os << trial << ',' << phase << ',' << ev.task << ",," << ev.env_steps_cumulative
         << ",,," << ev.eval_steps << ",\n";
    }
    recent.push_back(ep.episode_steps);
    running_sum += ep.episode_steps;
    if (static_cast<int>(recent.size()) > window) {
      running_sum -= recent[recent.size() - window - 1];
    }
    int n = std::min<int>(window, static_cast<int>(recent.size()));
    double avg = running_sum / n;
    os << trial << ',' << phase << ',' << ep.task << ',' << ep.episode << ','
       << ep.env_steps_cumulative << ',' << ep.episode_steps << ',' << (ep.success ? 1 : 0)
       << ",," << avg << "\n";
  }
  while (ei < metrics.evals.size()) {
    const auto& ev = metrics.evals[ei++];
    os << trial << ',' << phase << ',' << ev.task << ",," << ev.env_steps_cumulative
       << ",,," << ev.eval_steps << ",\n";
  }
  return os.str();
}

namespace {

// Average environment steps per successful completion of `task` over the
// whole run (all tasks when `task` is empty). Episodes that end in the
// failure terminal or at the episode cap contribute steps but no
// completion; with zero completions the value is the total steps spent,
// a censored lower bound.
double avg_steps_to_complete(const Metrics& m, const std::string& task = "") {
  double steps = 0;
  long completions = 0;
  for (const auto& ep : m.episodes) {
    if (!task.empty() && ep.task != task) continue;
    steps += ep.episode_steps;
    if (ep.success) ++completions;
  }
  return steps / std::max<long>(completions, 1);
}

json memory_to_json(const Memory& memory) {
  json j;
  j["rm"] = memory.rm.to_json();
  j["learned"] = json::array();
  for (FormulaRef f : memory.learned) j["learned"].push_back(f->str());
  j["qtables"] = json::object();
  for (const auto& [f, q] : memory.qtables) {
    json triples = json::array();
    for (int s = 0; s < q.n_states(); ++s)
      for (int a = 0; a < q.n_actions(); ++a)
        if (q.at(s, a) != 0.0) triples.push_back(json::array({s, a, q.at(s, a)}));
    j["qtables"][f->str()] = std::move(triples);
  }
  j["provenance"] = json::object();
  for (const auto& [k, v] : memory.provenance) j["provenance"][k] = v;
  return j;
}

struct TrialContext {
  const ExperimentConfig& config;
  const DomainPreset& preset;
  const LabeledGridEnv& env;
  int trial;
};

LearnParams trial_params(const TrialContext& ctx, uint64_t salt) {
  LearnParams p = ctx.config.params;
  p.episode_cap = ctx.config.episode_cap_override > 0 ? ctx.config.episode_cap_override
                                                      : ctx.preset.episode_cap;
  p.rng_seed = ctx.config.trial_seed(ctx.trial) * 7919ULL + salt;
  return p;
}

// Pretrains each source task in turn on a fresh memory shared across
// sources; returns the trained memory.
Memory pretrain_sources(const TrialContext& ctx, const std::vector<NamedTask>& sources,
                        long budget_per_source) {
  Memory memory(ctx.env.env_alphabet());
  uint64_t salt = 1;
  for (const auto& src : sources) {
    LearnParams p = trial_params(ctx, salt++);
    RunOptions opts;
    opts.phase_budget = budget_per_source;
    // uniform starts so the source tables cover the whole grid; composed
    // tasks resume sub-tasks from wherever the previous one finished
    opts.start_mode = StartMode::uniform_random;
    lifelong_update(memory, {parse(src.formula)}, ctx.env, p, CompositionMapping::best(), opts);
  }
  return memory;
}

std::vector<OutFile> run_compose_trial(const TrialContext& ctx) {
  std::vector<OutFile> out;
  long pretrain = ctx.config.effective_pretrain(ctx.preset);
  long budget = ctx.config.effective_target(ctx.preset);
  Memory base = pretrain_sources(ctx, ctx.preset.sources, pretrain);

  static const std::vector<std::string> arms = {"average", "max",  "left",
                                                "right",   "qrm",  "qrm-rs"};
  for (size_t tgt_i = 0; tgt_i < ctx.preset.compose_targets.size(); ++tgt_i) {
    const auto& [tname, op, ftext] = ctx.preset.compose_targets[tgt_i];
    FormulaRef target = parse(ftext);
    for (size_t arm_i = 0; arm_i < arms.size(); ++arm_i) {
      const auto& arm = arms[arm_i];
      bool scratch = arm == "qrm" || arm == "qrm-rs";
      Memory mem = scratch ? Memory(ctx.env.env_alphabet()) : base;
      LearnParams p = trial_params(ctx, 100 + tgt_i * 10 + arm_i);
      p.use_shaping = arm == "qrm-rs";
      CompositionMapping mapping = scratch
                                       ? CompositionMapping::scratch()
                                       : CompositionMapping::uniform(compose_method_from_string(arm));
      RunOptions opts;
      opts.phase_budget = budget;
      opts.eval_every = ctx.config.effective_eval_every();
      Metrics m = lifelong_update(mem, {target}, ctx.env, p, mapping, opts);
      std::ostringstream summary;
      summary << "trial,target,op,arm,avg_steps_to_complete,final_eval_steps\n"
              << ctx.trial << ',' << tname << ',' << op << ',' << arm << ','
              << avg_steps_to_complete(m) << ','
              << greedy_eval(mem, ctx.env, target, p) << "\n";
      out.push_back({"compose_" + tname + "_" + arm + "_trial" + std::to_string(ctx.trial) +
                         ".csv",
                     metrics_to_csv(m, ctx.trial, 1, ctx.config.window)});
      out.push_back({"compose_" + tname + "_" + arm + "_trial" + std::to_string(ctx.trial) +
                         "_summary.csv",
                     summary.str()});
    }
  }
  return out;
}

std::vector<OutFile> run_repr_trial(const TrialContext& ctx) {
  std::vector<OutFile> out;
  long pretrain = ctx.config.effective_pretrain(ctx.preset);
  long budget = ctx.config.effective_repr(ctx.preset);
  Memory base = pretrain_sources(ctx, ctx.preset.repr_sources, pretrain);

  std::vector<FormulaRef> reps;
  for (const auto& r : ctx.preset.representations) reps.push_back(parse(r.formula));
  FormulaRef smallest = smallest_representation(reps, base.learned);

  std::ostringstream counts;
  counts << "trial,representation,formula,unlearned,total,is_smallest\n";
  for (size_t i = 0; i < reps.size(); ++i) {
    FormulaSet dec = decompose(reps[i]);
    size_t unlearned = 0;
    for (FormulaRef g : dec)
      if (!base.learned.count(g)) ++unlearned;
    counts << ctx.trial << ',' << ctx.preset.representations[i].name << ",\""
           << reps[i]->str() << "\"," << unlearned << ',' << dec.size() << ','
           << (reps[i] == smallest ? 1 : 0) << "\n";
  }
  out.push_back({"repr_counts_trial" + std::to_string(ctx.trial) + ".csv", counts.str()});

  for (size_t i = 0; i < reps.size(); ++i) {
    Memory mem = base;
    LearnParams p = trial_params(ctx, 100 + i);
    RunOptions opts;
    opts.phase_budget = budget;
    opts.eval_every = ctx.config.effective_eval_every();
    opts.start_mode = StartMode::uniform_random;
    Metrics m = lifelong_update(mem, {reps[i]}, ctx.env, p, ctx.config.mapping(), opts);
    out.push_back({"repr_" + ctx.preset.representations[i].name + "_trial" +
                       std::to_string(ctx.trial) + ".csv",
                   metrics_to_csv(m, ctx.trial, 1, ctx.config.window)});
  }
  return out;
}

std::vector<OutFile> run_lifelong_trial(const TrialContext& ctx) {
  std::vector<OutFile> out;
  long phase_budget = ctx.config.effective_phase(ctx.preset);
  static const std::vector<std::string> arms = {"lsrm-best", "lsrm-worst", "qrm", "qrm-rs"};

  for (const auto& arm : arms) {
    bool lsrm = arm == "lsrm-best" || arm == "lsrm-worst";
    CompositionMapping mapping = arm == "lsrm-best" ? CompositionMapping::best()
                                                    : CompositionMapping::worst();
    std::ostringstream csv;
    std::ostringstream summary;
    summary << "trial,phase,task,arm,final_eval_steps,avg_steps_to_complete\n";
    bool first_csv = true;
    long step_offset = 0;
    Memory memory(ctx.env.env_alphabet());

    for (size_t phase = 0; phase < ctx.preset.phases.size(); ++phase) {
      const auto& phase_tasks = ctx.preset.phases[phase];
      if (lsrm) {
        std::vector<FormulaRef> targets;
        for (const auto& t : phase_tasks) targets.push_back(parse(t.formula));
        LearnParams p = trial_params(ctx, 1000 + phase);
        RunOptions opts;
        opts.phase_budget = phase_budget;
        opts.eval_every = ctx.config.effective_eval_every();
        opts.start_mode = StartMode::uniform_random;
        Metrics m = lifelong_update(memory, targets, ctx.env, p, mapping, opts);
        for (auto& ep : m.episodes) ep.env_steps_cumulative += step_offset;
        for (auto& ev : m.evals) ev.env_steps_cumulative += step_offset;
        std::string chunk = metrics_to_csv(m, ctx.trial, static_cast<int>(phase + 1),
                                           ctx.config.window);
        if (!first_csv) chunk = chunk.substr(chunk.find('\n') + 1);
        csv << chunk;
        first_csv = false;
        step_offset += phase_budget;
        for (size_t ti = 0; ti < targets.size(); ++ti)
          summary << ctx.trial << ',' << phase + 1 << ',' << phase_tasks[ti].name << ','
                  << arm << ',' << greedy_eval(memory, ctx.env, targets[ti], p) << ','
                  << avg_steps_to_complete(m, targets[ti]->str()) << "\n";
        if (ctx.trial == 0) {
          out.push_back({"snapshot_" + arm + "_phase" + std::to_string(phase + 1) + ".json",
                         memory_to_json(memory).dump(2) + "\n"});
          out.push_back({"snapshot_" + arm + "_phase" + std::to_string(phase + 1) + ".dot",
                         memory.rm.to_dot()});
        }
      } else {
        // scratch baselines: fresh memory per task, phase budget split
        long per_task = phase_budget / static_cast<long>(phase_tasks.size());
        for (size_t ti = 0; ti < phase_tasks.size(); ++ti) {
          FormulaRef target = parse(phase_tasks[ti].formula);
          Memory mem(ctx.env.env_alphabet());
          LearnParams p = trial_params(ctx, 2000 + phase * 10 + ti);
          p.use_shaping = arm == "qrm-rs";
          RunOptions opts;
          opts.phase_budget = per_task;
          opts.eval_every = ctx.config.effective_eval_every();
          opts.start_mode = StartMode::uniform_random;
          Metrics m =
              lifelong_update(mem, {target}, ctx.env, p, CompositionMapping::scratch(), opts);
          long offset = step_offset + static_cast<long>(ti) * per_task;
          for (auto& ep : m.episodes) ep.env_steps_cumulative += offset;
          for (auto& ev : m.evals) ev.env_steps_cumulative += offset;
          std::string chunk = metrics_to_csv(m, ctx.trial, static_cast<int>(phase + 1),
                                             ctx.config.window);
          if (!first_csv) chunk = chunk.substr(chunk.find('\n') + 1);
          csv << chunk;
          first_csv = false;
          summary << ctx.trial << ',' << phase + 1 << ',' << phase_tasks[ti].name << ','
                  << arm << ',' << greedy_eval(mem, ctx.env, target, p) << ','
                  << avg_steps_to_complete(m, target->str()) << "\n";
        }
        step_offset += phase_budget;
      }
    }
    out.push_back({"lifelong_" + arm + "_trial" + std::to_string(ctx.trial) + ".csv",
                   csv.str()});
    out.push_back({"lifelong_" + arm + "_trial" + std::to_string(ctx.trial) + "_summary.csv",
                   summary.str()});
  }
  return out;
}

std::vector<OutFile> run_single_trial(const TrialContext& ctx) {
  if (ctx.config.tasks.empty())
    throw std::invalid_argument("single mode needs a non-empty tasks list");
  std::vector<FormulaRef> targets;
  for (const auto& t : ctx.config.tasks) targets.push_back(parse(t.formula));
  Memory memory(ctx.env.env_alphabet());
  LearnParams p = trial_params(ctx, 7);
  RunOptions opts;
  opts.phase_budget = ctx.config.effective_phase(ctx.preset);
  opts.eval_every = ctx.config.effective_eval_every();
  Metrics m = lifelong_update(memory, targets, ctx.env, p, ctx.config.mapping(), opts);
  return {{"single_trial" + std::to_string(ctx.trial) + ".csv",
           metrics_to_csv(m, ctx.trial, 1, ctx.config.window)}};
}

std::vector<OutFile> run_trial(const ExperimentConfig& config, const DomainPreset& preset,
                               const LabeledGridEnv& env, int trial) {
  TrialContext ctx{config, preset, env, trial};
  if (config.mode == "compose-eval") return run_compose_trial(ctx);
  if (config.mode == "repr-eval") return run_repr_trial(ctx);
  if (config.mode == "lifelong") return run_lifelong_trial(ctx);
  if (config.mode == "single") return run_single_trial(ctx);
  throw std::invalid_argument("unknown mode: " + config.mode);
}

std::vector<OutFile> run_all(const ExperimentConfig& config, bool parallel) {
  const DomainPreset& preset = domain_preset(config.domain);
  std::string map_path = config.map_file.empty() ? preset.map_file : config.map_file;
  LabeledGridEnv env(load_map_file(map_path));

  std::vector<std::vector<OutFile>> per_trial(config.trials);
  std::vector<std::string> errors(config.trials);

#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < config.trials; ++t) {
      try {
        per_trial[t] = run_trial(config, preset, env, t);
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
  } else
#endif
  {
    (void)parallel;
    for (int t = 0; t < config.trials; ++t) {
      try {
        per_trial[t] = run_trial(config, preset, env, t);
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("trial failed: " + e);

  std::vector<OutFile> out;
  json meta;
  meta["domain"] = config.domain;
  meta["mode"] = config.mode;
  meta["scale"] = config.scale;
  meta["scale_note"] = config.scale == "paper"
                           ? "paper-scale budgets"
                           : "desk-scale budgets (reduced from paper scale)";
  meta["trials"] = config.trials;
  meta["seed"] = config.seed;
  meta["map"] = map_path;
  meta["mapping"] = config.mapping_preset;
  meta["params"] = {{"epsilon", config.params.epsilon},
                    {"gamma", config.params.gamma},
                    {"alpha", config.params.alpha},
                    {"episode_cap", preset.episode_cap}};
  meta["budgets"] = {{"pretrain", config.effective_pretrain(preset)},
                     {"target", config.effective_target(preset)},
                     {"phase", config.effective_phase(preset)},
                     {"repr", config.effective_repr(preset)},
                     {"eval_every", config.effective_eval_every()}};
  meta["estimators"] = {
      {"avg_steps_window", "running mean of training episode lengths over the last " +
                               std::to_string(config.window) + " episodes"},
      {"eval_steps", "greedy-policy episode length, episode cap counted on failure"}};
  meta["baseline_reset"] = "scratch baselines reset Q-tables per task";
  out.push_back({"metadata.json", meta.dump(2) + "\n"});
  for (auto& files : per_trial)
    for (auto& f : files) out.push_back(std::move(f));
  return out;
}

}  // namespace

std::vector<OutFile> run_experiment(const ExperimentConfig& config) {
  return run_all(config, config.parallel);
}

std::vector<OutFile> run_experiment_serial(const ExperimentConfig& config) {
  return run_all(config, false);
}

void write_outputs(const ExperimentConfig& config, const std::vector<OutFile>& files) {
  fs::create_directories(config.out_dir);
  for (const auto& f : files) {
    std::ofstream out(fs::path(config.out_dir) / f.name, std::ios::binary);
    out << f.content;
  }
}

void emit_plots(const std::string& metrics_dir) {
  std::vector<std::string> csvs;
  if (fs::is_directory(metrics_dir))
    for (const auto& e : fs::directory_iterator(metrics_dir))
      if (e.path().extension() == ".csv") csvs.push_back(e.path().filename().string());
  if (csvs.empty())
    throw std::runtime_error(
        "no CSV metrics found in '" + metrics_dir +
        "'; expected files like compose_*_trial*.csv, repr_*_trial*.csv or "
        "lifelong_*_trial*.csv produced by 'sltlrm run'");

  std::string script = R"PY(#!/usr/bin/env python3
"""Plot learning curves from sltlrm metrics CSVs (mean +/- std over trials)."""
import glob
import os
import re
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

HERE = os.path.dirname(os.path.abspath(__file__))


def load_group(pattern):
    """Group files by their name with the trial number stripped."""
    groups = {}
    for path in sorted(glob.glob(os.path.join(HERE, pattern))):
        name = os.path.basename(path)
        if name.endswith("_summary.csv") or name == "repr_counts.csv":
            continue
        key = re.sub(r"_trial\d+", "", name)[:-4]
        groups.setdefault(key, []).append(path)
    return groups


def curve(paths, value_col="avg_steps_window", x_col="env_steps_cumulative", bins=30):
    frames = []
    for p in paths:
        df = pd.read_csv(p)
        df = df.dropna(subset=[value_col, x_col])
        if df.empty:
            continue
        span = max(df[x_col].max(), 1)
        df = df.assign(bin=(df[x_col] / span * bins).round().astype(int))
        frames.append(df.groupby("bin").agg(x=(x_col, "mean"), y=(value_col, "mean")))
    if not frames:
        return None
    allb = pd.concat(frames, axis=0).groupby(level=0)
    return allb["x"].mean(), allb["y"].mean(), allb["y"].std().fillna(0.0)


def main():
    groups = load_group("*.csv")
    if not groups:
        sys.exit("no plottable CSVs found")
    # panel per task family: strip the arm suffix where present
    panels = {}
    for key, paths in groups.items():
        m = re.match(r"(compose|repr|lifelong|single)_(.*)", key)
        if m and m.group(1) == "compose":
            target, arm = m.group(2).rsplit("_", 1)
            panels.setdefault("compose_" + target, {})[arm] = paths
        elif m and m.group(1) == "lifelong":
            panels.setdefault("lifelong", {})[m.group(2)] = paths
        else:
            panels.setdefault(key, {})[key] = paths
    ncols = min(3, len(panels))
    nrows = (len(panels) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(5 * ncols, 4 * nrows), squeeze=False)
    for ax, (panel, arms) in zip(axes.flat, sorted(panels.items())):
        for arm, paths in sorted(arms.items()):
            c = curve(paths)
            if c is None:
                continue
            x, y, s = c
            ax.plot(x, y, label=arm)
            if len(paths) > 1:
                ax.fill_between(x, y - s, y + s, alpha=0.2)
        ax.set_title(panel)
        ax.set_xlabel("environment steps")
        ax.set_ylabel("avg steps to complete")
        ax.legend(fontsize=7)
    for ax in axes.flat[len(panels):]:
        ax.axis("off")
    fig.tight_layout()
    out = os.path.join(HERE, "curves.png")
    fig.savefig(out, dpi=150)
    print("wrote", out)


if __name__ == "__main__":
    main()
)PY";
  std::ofstream out(fs::path(metrics_dir) / "plots.py", std::ios::binary);
  out << script;
}

}  // namespace sltlrm
