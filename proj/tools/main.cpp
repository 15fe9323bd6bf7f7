#include "polycone/alm.hpp"
#include "polycone/experiment.hpp"
#include "polycone/io.hpp"
#include "polycone/objectives.hpp"
#include "polycone/problem.hpp"
#include "polycone/profile.hpp"
#include "polycone/selfcheck.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace polycone;

namespace {

enum ExitCode { kSuccess = 0, kError = 1, kFailPolicy = 2, kMaxOuter = 3 };

int exit_code(Termination t) {
  switch (t) {
    case Termination::success:
      return kSuccess;
    case Termination::fail_policy:
      return kFailPolicy;
    case Termination::max_outer:
      return kMaxOuter;
  }
  return kError;
}

ObjectiveId objective_or_throw(const std::string& name) {
  const auto id = parse_objective(name);
  if (!id) throw CLI::ValidationError("--objective", "unknown objective '" + name + "'");
  return *id;
}

struct SolverFlags {
  std::string mode;
  std::optional<int> zeta, r_max, max_outer;
  std::optional<double> rho0, eps0, sigma, tau, radius;
  std::string mu0;

  void add_to(CLI::App* app) {
    app->add_option("--mode", mode, "proposed or standard")
        ->check(CLI::IsMember({"proposed", "standard"}));
    app->add_option("--zeta", zeta, "directions added per outer iteration")
        ->check(CLI::PositiveNumber);
    app->add_option("--rmax", r_max, "largest grid shell")->check(CLI::NonNegativeNumber);
    app->add_option("--rho0", rho0, "initial penalty");
    app->add_option("--eps0", eps0, "initial inner tolerance");
    app->add_option("--sigma", sigma, "penalty keep ratio");
    app->add_option("--tau", tau, "penalty growth factor");
    app->add_option("--radius", radius, "safeguard ball radius");
    app->add_option("--max-outer", max_outer, "outer iteration cap")->check(CLI::PositiveNumber);
    app->add_option("--mu0", mu0, "initial safeguarded multiplier policy")
        ->check(CLI::IsMember({"paper_literal_RI", "polar_projected"}));
  }

  ConfigOverrides overrides() const {
    ConfigOverrides o;
    if (!mode.empty()) o.mode = parse_mode(mode);
    o.zeta = zeta;
    o.r_max = r_max;
    o.rho0 = rho0;
    o.eps0 = eps0;
    o.sigma = sigma;
    o.tau = tau;
    o.radius = radius;
    o.max_outer = max_outer;
    if (!mu0.empty()) o.mu0_policy = parse_mu0_policy(mu0);
    return o;
  }
};

void print_run_line(const std::string& problem, const std::string& solver, const RunReport& r) {
  const IterationRecord* last = r.records.empty() ? nullptr : &r.records.back();
  std::printf("%-24s %-12s %-12s it=%-4d fails=%-3d |J|=%-5d grad=%.2e v=%.2e dist=%.2e t=%.2fs\n",
              problem.c_str(), solver.c_str(), std::string(to_string(r.termination)).c_str(),
              r.iterations, r.fails, last ? last->active_count : 0, last ? last->grad_norm : 0.0,
              last ? last->v_max : 0.0, r.distance_to_spn, r.total_wall_time);
}

int cmd_gen(const std::string& objective, int m, int n, std::uint64_t seed, const std::string& out) {
  const ProblemInstance inst = generate_instance(objective_or_throw(objective), m, n, seed);
  const std::string text = instance_to_json(inst);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text(out, text);
  }
  return kSuccess;
}

int cmd_run(const std::string& instance_path, const SolverFlags& flags, std::uint64_t seed,
            bool seed_given, const std::string& out, const std::string& label) {
  const ProblemInstance inst = read_instance(instance_path);
  const ALMConfig cfg = make_config(inst.m(), seed_given ? seed : inst.seed, flags.overrides());
  const RunReport report = run_alm(inst, cfg);
  const std::string solver = label.empty() ? std::string(to_string(cfg.mode)) : label;
  const std::string problem = problem_label(inst.objective, inst.m(), inst.n(), inst.seed);
  if (!out.empty()) {
    const fs::path dir(out);
    write_text(dir / "report.json", report_to_json(report, inst, cfg, solver));
    std::ostringstream csv;
    write_iteration_csv(csv, report);
    write_text(dir / "iterations.csv", csv.str());
    std::ostringstream timing;
    write_timing_csv(timing, report);
    write_text(dir / "timing.csv", timing.str());
  }
  print_run_line(problem, solver, report);
  return exit_code(report.termination);
}

int cmd_batch(const std::vector<std::string>& objectives, const std::vector<int>& orders,
              const std::vector<std::uint64_t>& seeds, const std::vector<std::string>& modes,
              const std::vector<int>& zetas, const SolverFlags& flags, int jobs,
              const std::string& out) {
  ExperimentConfig cfg;
  if (objectives.empty()) {
    for (const ObjectiveSpec& s : all_objectives()) cfg.objectives.push_back(s.id);
  } else {
    for (const std::string& o : objectives) cfg.objectives.push_back(objective_or_throw(o));
  }
  cfg.orders = orders;
  cfg.seeds = seeds;
  cfg.modes.clear();
  for (const std::string& m : modes) cfg.modes.push_back(*parse_mode(m));
  cfg.zetas = zetas;
  cfg.overrides = flags.overrides();
  cfg.overrides.mode.reset();
  if (flags.zeta && zetas.empty()) cfg.zetas = {*flags.zeta};
  cfg.out_dir = out;
  cfg.jobs = jobs;
  const std::vector<ExperimentRun> runs = run_experiment(cfg);
  int solved = 0;
  std::string summary = "problem,solver,termination,iterations,fails,active_count,grad_norm,v_max,distance_to_spn,wall_time\n";
  for (const ExperimentRun& run : runs) {
    print_run_line(run.problem, run.solver, run.report);
    solved += run.report.success() ? 1 : 0;
    const IterationRecord* last = run.report.records.empty() ? nullptr : &run.report.records.back();
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                  run.problem.c_str(), run.solver.c_str(),
                  std::string(to_string(run.report.termination)).c_str(), run.report.iterations,
                  run.report.fails, last ? last->active_count : 0, last ? last->grad_norm : 0.0,
                  last ? last->v_max : 0.0, run.report.distance_to_spn, run.report.total_wall_time);
    summary += buf;
  }
  if (!out.empty()) write_text(fs::path(out) / "summary.csv", summary);
  std::printf("solved %d of %zu runs\n", solved, runs.size());
  return kSuccess;
}

int cmd_profile(const std::string& report_dir, const std::string& out) {
  std::vector<ProfileEntry> entries;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(report_dir)) {
    if (e.is_regular_file() && e.path().filename() == "report.json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    const ReportSummary s = summary_from_report_json(read_text(f));
    entries.push_back({s.problem, s.solver, s.success, s.wall_time});
  }
  if (entries.empty()) throw std::runtime_error("no report.json files under " + report_dir);
  const PerformanceProfile profile = performance_profile(entries);
  const std::string csv = profile_to_csv(profile);
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    write_text(out, csv);
  }
  for (const std::string& solver : profile.solvers) {
    std::fprintf(stderr, "%-16s solved %.0f%% of %zu problems\n", solver.c_str(),
                 100.0 * profile.steps.at(solver).back().fraction, profile.problems.size());
  }
  return kSuccess;
}

int cmd_check(const std::string& level, std::uint64_t seed, bool inject_fault) {
  CheckOptions opt;
  opt.level = *parse_check_level(level);
  opt.seed = seed;
  opt.inject_grid_fault = inject_fault;
  int failures = 0;
  for (const CheckResult& r : run_self_check(opt)) {
    std::printf("%s %-12s %s%s%s\n", r.passed ? "PASS" : "FAIL", r.suite.c_str(),
                r.invariant.c_str(), r.detail.empty() ? "" : "  ", r.detail.c_str());
    failures += r.passed ? 0 : 1;
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? kSuccess : kError;
}

int cmd_fdcheck(const std::vector<std::string>& objectives, int points, std::uint64_t seed, double h) {
  std::vector<ObjectiveId> ids;
  if (objectives.empty()) {
    for (const ObjectiveSpec& s : all_objectives()) ids.push_back(s.id);
  } else {
    for (const std::string& o : objectives) ids.push_back(objective_or_throw(o));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  int failures = 0;
  for (const ObjectiveId id : ids) {
    const int n = resolve_dimension(id, 0);
    const Eigen::VectorXd center = known_minimizers(id, n).front().point;
    double worst = 0.0;
    for (int t = 0; t < points; ++t) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = center(i) + offset(rng);
      if (!std::isfinite(evaluate(id, x))) continue;
      worst = std::max(worst, finite_difference_check(id, x, h));
    }
    const bool ok = worst <= 1e-5;
    failures += ok ? 0 : 1;
    std::printf("%s %-10s max relative error %.3e\n", ok ? "PASS" : "FAIL",
                std::string(objective_name(id)).c_str(), worst);
  }
  return failures == 0 ? kSuccess : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Augmented Lagrangian solver for copositive-constrained problems"};
  app.require_subcommand(1);

  std::string objective = "cq";
  int m = 3;
  int n = 0;
  std::uint64_t seed = 1;
  std::string out;

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--objective", objective, "objective id")->required();
  gen->add_option("--m", m, "matrix order")->check(CLI::PositiveNumber);
  gen->add_option("--n", n, "variable dimension (0 = objective default)");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", out, "output file (default stdout)");

  std::string instance_path;
  std::string label;
  SolverFlags run_flags;
  auto* run = app.add_subcommand("run", "solve one instance");
  run->add_option("instance", instance_path, "instance JSON")->required()->check(CLI::ExistingFile);
  run_flags.add_to(run);
  auto* run_seed = run->add_option("--seed", seed, "start point seed (default: instance seed)");
  run->add_option("--out", out, "directory for report.json, iterations.csv and timing.csv");
  run->add_option("--label", label, "solver label in the report (default: mode)");

  std::vector<std::string> objectives;
  std::vector<int> orders{3};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<std::string> modes{"proposed"};
  std::vector<int> zetas;
  int jobs = 1;
  SolverFlags batch_flags;
  auto* batch = app.add_subcommand("batch", "solve a grid of instances and configurations");
  batch->add_option("--objective", objectives, "objective ids (default: all)");
  batch->add_option("--m", orders, "matrix orders");
  batch->add_option("--seed", seeds, "instance seeds");
  batch->add_option("--modes", modes, "modes to compare")
      ->check(CLI::IsMember({"proposed", "standard"}));
  batch->add_option("--zetas", zetas, "zeta sweep");
  batch_flags.add_to(batch);
  batch->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
  batch->add_option("--out", out, "output directory");

  std::string report_dir;
  auto* profile = app.add_subcommand("profile", "performance profile from report files");
  profile->add_option("reports", report_dir, "directory searched for report.json")
      ->required()
      ->check(CLI::ExistingDirectory);
  profile->add_option("--out", out, "output CSV (default stdout)");

  std::string level = "quick";
  bool inject_fault = false;
  auto* check = app.add_subcommand("check", "run the invariant suites");
  check->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  check->add_option("--seed", seed, "random seed");
  check->add_flag("--inject-grid-fault", inject_fault, "corrupt the grid count (test hook)");

  int points = 20;
  double h = 1e-6;
  auto* fdcheck = app.add_subcommand("fdcheck", "compare analytic and finite-difference gradients");
  fdcheck->add_option("--objective", objectives, "objective ids (default: all)");
  fdcheck->add_option("--points", points, "random points per objective")->check(CLI::PositiveNumber);
  fdcheck->add_option("--seed", seed, "random seed");
  fdcheck->add_option("--step", h, "difference step")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(objective, m, n, seed, out);
    if (*run) return cmd_run(instance_path, run_flags, seed, run_seed->count() > 0, out, label);
    if (*batch) return cmd_batch(objectives, orders, seeds, modes, zetas, batch_flags, jobs, out);
    if (*profile) return cmd_profile(report_dir, out);
    if (*check) return cmd_check(level, seed, inject_fault);
    if (*fdcheck) return cmd_fdcheck(objectives, points, seed, h);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
