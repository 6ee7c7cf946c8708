#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sltlrm/learning.hpp"

namespace sltlrm {

struct NamedTask {
  std::string name;
  std::string formula;
};

// Built-in task tables and budgets for the two shipped domains. Budgets
// are in environment steps at paper scale; desk scale shrinks them.
struct DomainPreset {
  std::string name;
  std::string map_file;
  int episode_cap = 1000;
  std::vector<NamedTask> sources;
  // target name -> (operator class, formula)
  std::vector<std::tuple<std::string, std::string, std::string>> compose_targets;
  std::vector<NamedTask> repr_sources;
  std::vector<NamedTask> representations;  // first one is the designated smallest
  std::vector<std::vector<NamedTask>> phases;
  long paper_pretrain_budget = 0;  // per source task
  long paper_target_budget = 0;    // per compose/repr target
  long paper_phase_budget = 0;
  long paper_repr_budget = 0;
};

const DomainPreset& domain_preset(const std::string& domain);

struct ExperimentConfig {
  std::string domain = "office";  // office | minecraft
  std::string mode = "lifelong";  // compose-eval | repr-eval | lifelong | single
  int trials = 5;
  uint64_t seed = 0;
  std::string scale = "desk";  // desk | paper
  std::string out_dir = "out";
  std::string map_file;        // empty = preset default
  std::string mapping_preset = "best";  // best | worst | custom
  CompositionMapping custom_mapping;
  LearnParams params;
  long pretrain_budget = 0;  // 0 = scale default
  long target_budget = 0;
  long phase_budget = 0;
  long eval_every = 0;
  int window = 20;           // episodes in the running-mean window
  int episode_cap_override = 0;  // 0 = domain preset default
  bool parallel = true;
  std::vector<NamedTask> tasks;  // single mode, or extra named tasks

  // budgets after applying scale and overrides
  long effective_pretrain(const DomainPreset& d) const;
  long effective_target(const DomainPreset& d) const;
  long effective_phase(const DomainPreset& d) const;
  long effective_repr(const DomainPreset& d) const;
  long effective_eval_every() const;
  CompositionMapping mapping() const;
  uint64_t trial_seed(int trial) const { return seed * 1000003ULL + static_cast<uint64_t>(trial); }
};

ExperimentConfig load_config_file(const std::string& path);

// One output artifact of a run, assembled in memory so trials can run on
// worker threads and be written in deterministic order afterwards.
struct OutFile {
  std::string name;     // relative to out_dir
  std::string content;
};

std::vector<OutFile> run_experiment(const ExperimentConfig& config);

// Writes the files under config.out_dir.
void write_outputs(const ExperimentConfig& config, const std::vector<OutFile>& files);

// Serial reference runner: same outputs as run_experiment, trials
// executed one after another on the calling thread.
std::vector<OutFile> run_experiment_serial(const ExperimentConfig& config);

std::string metrics_to_csv(const Metrics& metrics, int trial, int phase, int window);

// Writes a self-contained Python plotting script next to the CSVs.
void emit_plots(const std::string& metrics_dir);

}  // namespace sltlrm
