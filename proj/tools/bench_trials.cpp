// Compares the OpenMP trial fan-out against the serial reference runner
// on a reduced lifelong workload and checks that both produce identical
// output bytes.

#include <chrono>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sltlrm/experiment.hpp"

using namespace sltlrm;

namespace {

double run_timed(std::vector<OutFile> (*runner)(const ExperimentConfig&),
                 const ExperimentConfig& config, std::vector<OutFile>& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = runner(config);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig config;
  config.domain = "office";
  config.mode = "lifelong";
  config.trials = argc > 1 ? std::atoi(argv[1]) : 8;
  config.seed = 42;
  config.phase_budget = 5000;
  config.eval_every = 1000;

#ifdef _OPENMP
  std::cout << "omp max threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "built without OpenMP; both runs are serial\n";
#endif
  std::cout << "trials: " << config.trials << "\n";

  std::vector<OutFile> serial_out, parallel_out;
  double t_serial = run_timed(run_experiment_serial, config, serial_out);
  double t_parallel = run_timed(run_experiment, config, parallel_out);

  std::cout << "serial:   " << t_serial << " s\n";
  std::cout << "parallel: " << t_parallel << " s\n";
  std::cout << "speedup:  " << t_serial / t_parallel << "x\n";

  if (serial_out.size() != parallel_out.size()) {
    std::cerr << "FAIL: output file counts differ\n";
    return 1;
  }
  for (size_t i = 0; i < serial_out.size(); ++i) {
    if (serial_out[i].name != parallel_out[i].name ||
        serial_out[i].content != parallel_out[i].content) {
      std::cerr << "FAIL: outputs differ at " << serial_out[i].name << "\n";
      return 1;
    }
  }
  std::cout << "outputs identical across serial and parallel runs\n";
  return 0;
}
