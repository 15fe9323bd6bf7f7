#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polycone {

enum class ObjectiveId {
  cq,
  fc,
  eR,
  FR,
  Pbs,
  B,
  Ps,
  W,
  qp,
  LY,
  ex4_1_5,
  ex8_1_4,
  ex8_1_5,
  ex8_1_6,
};

/// A published local minimizer together with how strictly it is expected
/// to be stationary.
struct KnownMinimizer {
  Eigen::VectorXd point;
  /// Bound on ||gradient(point)||_inf.
  double stationarity_tol = 1e-6;
  /// Stationarity is reported but not enforced.
  bool advisory = false;
};

struct ObjectiveSpec {
  ObjectiveId id;
  std::string name;
  /// Natural dimension; 0 when the objective accepts any n >= 2.
  int fixed_dimension = 0;
  /// Dimension used when none is requested (eR and qp default to 5).
  int default_dimension = 2;
  std::string reference;
};

/// All fourteen objectives in catalog order.
std::span<const ObjectiveSpec> all_objectives();
const ObjectiveSpec& objective_spec(ObjectiveId id);
/// Parses the short name ("cq", "ex8_1_4", ...). Returns nullopt if unknown.
std::optional<ObjectiveId> parse_objective(std::string_view name);
std::string_view objective_name(ObjectiveId id);

/// Resolves a requested dimension (0 = default) and validates it.
/// Throws std::invalid_argument for dimensions the objective does not accept.
int resolve_dimension(ObjectiveId id, int requested);

/// Known minimizers for dimension n (eR and qp scale with n).
std::vector<KnownMinimizer> known_minimizers(ObjectiveId id, int n);

/// Throws std::invalid_argument if x has the wrong dimension. Values may be
/// +inf (never NaN) where the formula overflows or hits a pole.
double evaluate(ObjectiveId id, const Eigen::VectorXd& x);
Eigen::VectorXd gradient(ObjectiveId id, const Eigen::VectorXd& x);

/// max_i |g_i - fd_i| / max(1, |g_i|, |fd_i|) with central differences of
/// step h. Requires h > 0.
double finite_difference_check(ObjectiveId id, const Eigen::VectorXd& x, double h);

}  // namespace polycone
