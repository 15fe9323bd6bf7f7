#pragma once

#include "polycone/objectives.hpp"
#include "polycone/sym_matrix.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace polycone {

/// Affine matrix map g(x) = Q_0 + sum_i x_i Q_i.
class LinearMatrixMap {
 public:
  /// Needs at least Q_0 and one more matrix, all of the same order.
  explicit LinearMatrixMap(std::vector<SymMatrix> q);

  int n() const { return static_cast<int>(q_.size()) - 1; }
  int m() const { return q_.front().order(); }
  const std::vector<SymMatrix>& matrices() const { return q_; }
  const SymMatrix& q(int i) const { return q_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<SymMatrix> q_;
};

/// g(x). Throws std::invalid_argument if dim(x) != n.
SymMatrix g_eval(const LinearMatrixMap& map, const Eigen::VectorXd& x);

/// (Dg^*[M])_i = <Q_i, M>, i = 1..n.
Eigen::VectorXd adjoint_apply(const LinearMatrixMap& map, const SymMatrix& mat);

struct InstanceCertificates {
  /// lambda_max(g(x*) + P1); <= 0 certifies g(x*) + P1 in S_-.
  double max_eig_at_minimizer = 0.0;
  /// lambda_min(g(xbar) - P2); >= 0 certifies g(xbar) - P2 in S_+.
  double min_eig_at_anchor = 0.0;
  double min_eig_p1 = 0.0;
  double min_eig_p2 = 0.0;
};

struct ProblemInstance {
  ObjectiveId objective;
  LinearMatrixMap map;
  Eigen::VectorXd x_star;
  Eigen::VectorXd x_bar;
  std::uint64_t seed = 0;
  SymMatrix p1{1};
  SymMatrix p2{1};
  InstanceCertificates certificates;

  int n() const { return map.n(); }
  int m() const { return map.m(); }
};

/// Random instance anchored at the objective's first known minimizer x*:
/// g(x*) = -P1 and g(xbar) = P2 hold by construction for random PSD P1, P2
/// with eigenvalues uniform on [0, 1] and xbar uniform on [10, 100]^n; the
/// map is then enriched by perturbations that vanish at both anchors.
/// Deterministic for a given seed. `n` = 0 picks the objective's default.
ProblemInstance generate_instance(ObjectiveId objective, int m, int n, std::uint64_t seed);

/// Recomputes the eigenvalue certificates from the stored map and anchors.
InstanceCertificates compute_certificates(const ProblemInstance& instance);

}  // namespace polycone
