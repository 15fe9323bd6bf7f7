#include "polycone/problem.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace polycone {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd random_orthogonal(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd g(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) g(i, j) = normal(rng);
  }
  const Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(m, m);
  // Fix column signs so the frame is a deterministic function of g.
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

SymMatrix random_psd_unit_spectrum(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  VectorXd eig(m);
  for (int i = 0; i < m; ++i) eig(i) = unit(rng);
  const MatrixXd v = random_orthogonal(m, rng);
  return SymMatrix::symmetrized(v * eig.asDiagonal() * v.transpose());
}

SymMatrix random_unit_symmetric(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd e(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) e(i, j) = normal(rng);
  }
  SymMatrix s = SymMatrix::symmetrized(e);
  return (1.0 / s.norm()) * s;
}

}  // namespace

LinearMatrixMap::LinearMatrixMap(std::vector<SymMatrix> q) : q_(std::move(q)) {
  if (q_.size() < 2) throw std::invalid_argument("LinearMatrixMap: need Q_0 and at least Q_1");
  for (const SymMatrix& qi : q_) {
    if (qi.order() != q_.front().order()) {
      throw std::invalid_argument("LinearMatrixMap: all Q_i must share the same order");
    }
  }
}

SymMatrix g_eval(const LinearMatrixMap& map, const VectorXd& x) {
  if (x.size() != map.n()) {
    throw std::invalid_argument("g_eval: expected " + std::to_string(map.n()) +
                                " variables, got " + std::to_string(x.size()));
  }
  SymMatrix g = map.q(0);
  for (int i = 0; i < map.n(); ++i) g.add_scaled(x(i), map.q(i + 1));
  return g;
}

VectorXd adjoint_apply(const LinearMatrixMap& map, const SymMatrix& mat) {
  if (mat.order() != map.m()) {
    throw std::invalid_argument("adjoint_apply: matrix order mismatch");
  }
  VectorXd out(map.n());
  for (int i = 0; i < map.n(); ++i) out(i) = frobenius_inner(map.q(i + 1), mat);
  return out;
}

InstanceCertificates compute_certificates(const ProblemInstance& instance) {
  InstanceCertificates c;
  c.max_eig_at_minimizer = max_eigenvalue(g_eval(instance.map, instance.x_star) + instance.p1);
  c.min_eig_at_anchor = min_eigenvalue(g_eval(instance.map, instance.x_bar) - instance.p2);
  c.min_eig_p1 = min_eigenvalue(instance.p1);
  c.min_eig_p2 = min_eigenvalue(instance.p2);
  return c;
}

ProblemInstance generate_instance(ObjectiveId objective, int m, int n, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("generate_instance: m must be >= 1");
  n = resolve_dimension(objective, n);
  const VectorXd x_star = known_minimizers(objective, n).front().point;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(10.0, 100.0);
  VectorXd x_bar(n);
  VectorXd delta;
  do {
    for (int i = 0; i < n; ++i) x_bar(i) = box(rng);
    delta = x_bar - x_star;
  } while (delta.squaredNorm() == 0.0);

  const SymMatrix p1 = random_psd_unit_spectrum(m, rng);
  const SymMatrix p2 = random_psd_unit_spectrum(m, rng);
  const SymMatrix sum = p1 + p2;
  const double delta_sq = delta.squaredNorm();

  // Interpolation: g(x*) = -P1 and g(xbar) = P2.
  std::vector<SymMatrix> q(static_cast<std::size_t>(n) + 1, SymMatrix(m));
  for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) + 1] = (delta(i) / delta_sq) * sum;

  // Enrichment along directions c with delta . c = 0; the Q_0 term below
  // cancels them at x*, hence also at xbar.
  if (n > 1) {
    const Eigen::HouseholderQR<MatrixXd> qr(delta);
    const MatrixXd basis = (qr.householderQ() * MatrixXd::Identity(n, n)).rightCols(n - 1);
    const double scale = 0.1 * sum.norm() / delta_sq;
    for (int k = 0; k < n - 1; ++k) {
      const SymMatrix e = random_unit_symmetric(m, rng);
      for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) + 1].add_scaled(scale * basis(i, k), e);
    }
  }

  SymMatrix q0 = -p1;
  for (int i = 0; i < n; ++i) q0.add_scaled(-x_star(i), q[static_cast<std::size_t>(i) + 1]);
  q[0] = q0;

  ProblemInstance inst{objective, LinearMatrixMap(std::move(q)), x_star, x_bar, seed, p1, p2, {}};
  inst.certificates = compute_certificates(inst);
  return inst;
}

}  // namespace polycone
