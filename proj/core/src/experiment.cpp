#include "polycone/experiment.hpp"

#include "polycone/io.hpp"
#include "polycone/problem.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace polycone {

void ConfigOverrides::apply(ALMConfig& c) const {
  if (mode) c.mode = *mode;
  if (zeta) c.zeta = *zeta;
  if (r_max) c.r_max = *r_max;
  if (rho0) c.rho0 = *rho0;
  if (eps0) c.eps0 = *eps0;
  if (sigma) c.sigma = *sigma;
  if (tau) c.tau = *tau;
  if (radius) c.safeguard_radius = *radius;
  if (max_outer) c.max_outer = *max_outer;
  if (mu0_policy) c.mu0_policy = *mu0_policy;
}

ALMConfig make_config(int m, std::uint64_t seed, const ConfigOverrides& overrides) {
  ALMConfig c = ALMConfig::defaults_for(m);
  c.seed = seed;
  overrides.apply(c);
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (objectives.empty()) throw std::invalid_argument("experiment: no objectives");
  if (orders.empty()) throw std::invalid_argument("experiment: no matrix orders");
  if (seeds.empty()) throw std::invalid_argument("experiment: no seeds");
  if (modes.empty()) throw std::invalid_argument("experiment: no modes");
  if (jobs < 1) throw std::invalid_argument("experiment: jobs must be >= 1");
  for (const int m : orders) {
    if (m < 1) throw std::invalid_argument("experiment: m must be >= 1");
  }
  for (const int z : zetas) {
    if (z < 1) throw std::invalid_argument("experiment: zeta must be >= 1");
  }
}

std::string problem_label(ObjectiveId objective, int m, int n, std::uint64_t seed) {
  std::ostringstream ss;
  ss << objective_name(objective) << "_m" << m << "_n" << n << "_s" << seed;
  return ss.str();
}

std::vector<ExperimentRun> run_experiment(const ExperimentConfig& config) {
  config.validate();

  struct Task {
    std::size_t instance;
    Mode mode;
    std::optional<int> zeta;
    std::string solver;
  };
  std::vector<ProblemInstance> instances;
  std::vector<std::string> labels;
  for (const ObjectiveId id : config.objectives) {
    for (const int m : config.orders) {
      for (const std::uint64_t seed : config.seeds) {
        instances.push_back(generate_instance(id, m, 0, seed));
        labels.push_back(problem_label(id, m, instances.back().n(), seed));
      }
    }
  }
  std::vector<std::optional<int>> zetas;
  if (config.zetas.empty()) {
    zetas.push_back(std::nullopt);
  } else {
    zetas.assign(config.zetas.begin(), config.zetas.end());
  }
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const Mode mode : config.modes) {
      for (const auto& z : zetas) {
        // Standard mode ignores zeta; run it once.
        if (mode == Mode::standard && z != zetas.front()) continue;
        std::string solver(to_string(mode));
        if (mode == Mode::proposed && config.zetas.size() > 1) solver += "_z" + std::to_string(*z);
        tasks.push_back({i, mode, z, solver});
      }
    }
  }

  if (!config.out_dir.empty()) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      write_instance(config.out_dir / labels[i] / "instance.json", instances[i]);
    }
  }

  std::vector<ExperimentRun> runs(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        const Task& task = tasks[t];
        const ProblemInstance& inst = instances[task.instance];
        ConfigOverrides o = config.overrides;
        o.mode = task.mode;
        if (task.zeta) o.zeta = task.zeta;
        const ALMConfig cfg = make_config(inst.m(), inst.seed, o);
        ExperimentRun& run = runs[t];
        run.problem = labels[task.instance];
        run.solver = task.solver;
        run.objective = inst.objective;
        run.m = inst.m();
        run.seed = inst.seed;
        run.report = run_alm(inst, cfg);
        if (!config.out_dir.empty()) {
          const auto dir = config.out_dir / run.problem / run.solver;
          write_text(dir / "report.json", report_to_json(run.report, inst, cfg, run.solver));
          std::ostringstream csv;
          write_iteration_csv(csv, run.report);
          write_text(dir / "iterations.csv", csv.str());
          std::ostringstream timing;
          write_timing_csv(timing, run.report);
          write_text(dir / "timing.csv", timing.str());
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(config.jobs, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return runs;
}

}  // namespace polycone
