#include "polycone/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

namespace polycone {

PerformanceProfile performance_profile(const std::vector<ProfileEntry>& entries) {
  if (entries.empty()) throw std::invalid_argument("performance_profile: no entries");
  std::map<std::string, std::map<std::string, const ProfileEntry*>> by_solver;
  std::set<std::string> problems;
  for (const ProfileEntry& e : entries) {
    if (e.solved && !(e.time > 0.0 && std::isfinite(e.time))) {
      throw std::invalid_argument("performance_profile: solved entry for '" + e.problem +
                                  "' needs a positive finite time");
    }
    auto [it, inserted] = by_solver[e.solver].emplace(e.problem, &e);
    if (!inserted) {
      throw std::invalid_argument("performance_profile: duplicate entry for solver '" + e.solver +
                                  "' on '" + e.problem + "'");
    }
    problems.insert(e.problem);
  }
  for (const auto& [solver, runs] : by_solver) {
    if (runs.size() != problems.size()) {
      throw std::invalid_argument("performance_profile: solver '" + solver +
                                  "' does not cover the shared problem set");
    }
  }

  PerformanceProfile out;
  out.problems.assign(problems.begin(), problems.end());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(out.problems.size(), inf);
  for (const auto& [solver, runs] : by_solver) {
    out.solvers.push_back(solver);
    for (std::size_t p = 0; p < out.problems.size(); ++p) {
      const ProfileEntry* e = runs.at(out.problems[p]);
      if (e->solved) best[p] = std::min(best[p], e->time);
    }
  }
  const double count = static_cast<double>(out.problems.size());
  for (const auto& [solver, runs] : by_solver) {
    std::vector<double> r(out.problems.size(), inf);
    for (std::size_t p = 0; p < out.problems.size(); ++p) {
      const ProfileEntry* e = runs.at(out.problems[p]);
      if (e->solved) r[p] = e->time / best[p];
    }
    std::vector<double> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    std::vector<ProfileStep> steps{{1.0, 0.0}};
    for (std::size_t i = 0; i < sorted.size() && std::isfinite(sorted[i]); ++i) {
      const double frac = static_cast<double>(i + 1) / count;
      if (sorted[i] == steps.back().tau) {
        steps.back().fraction = frac;
      } else {
        steps.push_back({sorted[i], frac});
      }
    }
    out.ratios[solver] = std::move(r);
    out.steps[solver] = std::move(steps);
  }
  return out;
}

double profile_value(const PerformanceProfile& profile, const std::string& solver, double tau) {
  const auto it = profile.ratios.find(solver);
  if (it == profile.ratios.end()) {
    throw std::invalid_argument("profile_value: unknown solver '" + solver + "'");
  }
  const auto& r = it->second;
  const auto hits = std::count_if(r.begin(), r.end(), [&](double x) { return x <= tau; });
  return static_cast<double>(hits) / static_cast<double>(r.size());
}

std::string profile_to_csv(const PerformanceProfile& profile) {
  std::string out = "solver,tau,fraction\n";
  char buf[64];
  for (const std::string& solver : profile.solvers) {
    for (const ProfileStep& s : profile.steps.at(solver)) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", s.tau, s.fraction);
      out += solver;
      out += buf;
    }
  }
  return out;
}

}  // namespace polycone
