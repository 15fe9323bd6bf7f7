#pragma once

#include "polycone/alm.hpp"
#include "polycone/objectives.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace polycone {

/// Command-line overrides applied on top of ALMConfig::defaults_for(m).
struct ConfigOverrides {
  std::optional<Mode> mode;
  std::optional<int> zeta;
  std::optional<int> r_max;
  std::optional<double> rho0;
  std::optional<double> eps0;
  std::optional<double> sigma;
  std::optional<double> tau;
  std::optional<double> radius;
  std::optional<int> max_outer;
  std::optional<Mu0Policy> mu0_policy;

  void apply(ALMConfig& config) const;
};

/// defaults_for(m) with the overrides applied and the start seed set.
ALMConfig make_config(int m, std::uint64_t seed, const ConfigOverrides& overrides);

struct ExperimentConfig {
  std::vector<ObjectiveId> objectives;
  std::vector<int> orders{3};
  std::vector<std::uint64_t> seeds{1};
  std::vector<Mode> modes{Mode::proposed};
  /// Empty keeps the per-m default.
  std::vector<int> zetas;
  ConfigOverrides overrides;
  /// Empty: nothing is written.
  std::filesystem::path out_dir;
  int jobs = 1;

  /// Throws std::invalid_argument for empty lists, zeta < 1, m < 1 or jobs < 1.
  void validate() const;
};

struct ExperimentRun {
  std::string problem;
  std::string solver;
  ObjectiveId objective = ObjectiveId::cq;
  int m = 0;
  std::uint64_t seed = 0;
  RunReport report;
};

/// Problem label shared by all solvers, e.g. "cq_m3_n2_s1".
std::string problem_label(ObjectiveId objective, int m, int n, std::uint64_t seed);

/// Generates every (objective, m, seed) instance once and solves it with
/// every (mode, zeta) configuration. Runs are independent and are spread
/// over `jobs` worker threads; results come back in a fixed order. With an
/// output directory, writes <out>/<problem>/instance.json and
/// <out>/<problem>/<solver>/{report.json, iterations.csv, timing.csv}.
std::vector<ExperimentRun> run_experiment(const ExperimentConfig& config);

}  // namespace polycone
