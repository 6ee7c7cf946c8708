#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "sltlrm/experiment.hpp"
#include "sltlrm/reward_machine.hpp"

using namespace sltlrm;

namespace {

int cmd_run(ExperimentConfig config) {
  auto files = run_experiment(config);
  write_outputs(config, files);
  std::cout << "wrote " << files.size() << " files to " << config.out_dir << "\n";
  return 0;
}

int cmd_export_rm(const std::string& formula_text, const std::vector<std::string>& props,
                  bool as_json) {
  FormulaRef f = parse(formula_text);
  RewardMachine rm(Alphabet::singletons(props));
  rm.extend(f);
  rm.set_initial(f->is_terminal() ? top() : f);
  if (as_json)
    std::cout << rm.to_json().dump(2) << "\n";
  else
    std::cout << rm.to_dot();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SLTL reward-machine lifelong learning experiments"};
  app.require_subcommand(1);

  ExperimentConfig config;
  if (const char* env_seed = std::getenv("SLTLRM_SEED")) config.seed = std::strtoull(env_seed, nullptr, 10);

  auto* run = app.add_subcommand("run", "run an experiment and write metrics CSVs");
  std::string config_file;
  run->add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
  std::string mode, domain, scale, out_dir, mapping, map_file;
  int trials = -1;
  long seed = -1;
  bool serial = false;
  run->add_option("--mode", mode, "compose-eval|repr-eval|lifelong|single");
  run->add_option("--domain", domain, "office|minecraft");
  run->add_option("--trials", trials, "number of independent trials");
  run->add_option("--seed", seed, "base RNG seed");
  run->add_option("--scale", scale, "desk|paper budget scale");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--mapping", mapping, "best|worst|custom");
  run->add_option("--map", map_file, "map file override");
  run->add_flag("--serial", serial, "run trials serially instead of in parallel");

  auto* export_rm = app.add_subcommand("export-rm", "compile a formula to a reward machine");
  std::string formula_text;
  std::vector<std::string> props;
  bool as_json = false, as_dot = false;
  export_rm->add_option("--formula", formula_text, "SLTL formula")->required();
  export_rm->add_option("--props", props, "proposition names forming the alphabet")
      ->required()
      ->delimiter(',');
  export_rm->add_flag("--json", as_json, "emit JSON");
  export_rm->add_flag("--dot", as_dot, "emit Graphviz DOT (default)");

  auto* plot = app.add_subcommand("plot", "write a plotting script for a metrics directory");
  std::string metrics_dir;
  plot->add_option("dir", metrics_dir, "metrics directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      if (!config_file.empty()) {
        uint64_t env_seed = config.seed;
        config = load_config_file(config_file);
        if (config.seed == 0) config.seed = env_seed;
      }
      if (!mode.empty()) config.mode = mode;
      if (!domain.empty()) config.domain = domain;
      if (trials >= 0) config.trials = trials;
      if (seed >= 0) config.seed = static_cast<uint64_t>(seed);
      if (!scale.empty()) config.scale = scale;
      if (!out_dir.empty()) config.out_dir = out_dir;
      if (!mapping.empty()) config.mapping_preset = mapping;
      if (!map_file.empty()) config.map_file = map_file;
      if (serial) config.parallel = false;
      return cmd_run(std::move(config));
    }
    if (export_rm->parsed()) return cmd_export_rm(formula_text, props, as_json && !as_dot);
    if (plot->parsed()) {
      emit_plots(metrics_dir);
      std::cout << "wrote " << metrics_dir << "/plots.py\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
