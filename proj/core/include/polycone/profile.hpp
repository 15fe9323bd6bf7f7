#pragma once

#include <map>
#include <string>
#include <vector>

namespace polycone {

/// Outcome of one solver on one problem. Unsolved problems carry no time.
struct ProfileEntry {
  std::string problem;
  std::string solver;
  bool solved = false;
  double time = 0.0;
};

struct ProfileStep {
  double tau = 1.0;
  /// Fraction of problems with ratio <= tau.
  double fraction = 0.0;
};

struct PerformanceProfile {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  /// ratios[s][p] = t_{p,s} / min_s t_{p,s}; +inf if s did not solve p or
  /// no solver did.
  std::map<std::string, std::vector<double>> ratios;
  /// Step points per solver, tau ascending, fraction nondecreasing. The
  /// first step is at tau = 1.
  std::map<std::string, std::vector<ProfileStep>> steps;
};

/// Dolan-More profile. Every solver must report exactly the same set of
/// problems, once each; throws std::invalid_argument otherwise. Times must
/// be positive for solved entries.
PerformanceProfile performance_profile(const std::vector<ProfileEntry>& entries);

/// Fraction of problems with ratio <= tau for one solver.
double profile_value(const PerformanceProfile& profile, const std::string& solver, double tau);

/// solver,tau,fraction
std::string profile_to_csv(const PerformanceProfile& profile);

}  // namespace polycone
