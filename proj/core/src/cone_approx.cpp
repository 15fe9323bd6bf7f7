#include "polycone/cone_approx.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace polycone {

PolyhedralConeApprox::PolyhedralConeApprox(std::shared_ptr<const SimplexGrid> grid,
                                           int active_count)
    : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("PolyhedralConeApprox: null grid");
  if (active_count < 1 || active_count > grid_->size()) {
    throw std::invalid_argument("PolyhedralConeApprox: active count " +
                                std::to_string(active_count) + " outside [1, " +
                                std::to_string(grid_->size()) + "]");
  }
  gram_.resize(grid_->size(), grid_->size());
  fill_gram(0, active_count);
  active_ = active_count;
}

void PolyhedralConeApprox::grow_to(int count) {
  if (count < active_) throw std::invalid_argument("PolyhedralConeApprox: cannot shrink");
  count = std::min(count, grid_->size());
  if (count == active_) return;
  fill_gram(active_, count);
  active_ = count;
}

void PolyhedralConeApprox::fill_gram(int from, int to) {
  const Eigen::MatrixXd& d = grid_->directions();
  const Eigen::MatrixXd cross = d.topRows(to) * d.middleRows(from, to - from).transpose();
  const Eigen::MatrixXd block = cross.array().square().matrix();
  gram_.block(0, from, to, to - from) = block;
  gram_.block(from, 0, to - from, to) = block.transpose();
}

Eigen::VectorXd linear_forms(const SymMatrix& y, const PolyhedralConeApprox& cone) {
  if (y.order() != cone.m()) {
    throw std::invalid_argument("linear_forms: matrix order " + std::to_string(y.order()) +
                                " does not match cone order " + std::to_string(cone.m()));
  }
  const auto d = cone.directions();
  return (d * y.matrix()).cwiseProduct(d).rowwise().sum();
}

double min_quadratic_form(const SymMatrix& y, const PolyhedralConeApprox& cone) {
  return linear_forms(y, cone).minCoeff();
}

PolarProjection project_polar(const SymMatrix& y, const PolyhedralConeApprox& cone,
                              const Eigen::VectorXd& warm, const NNQPOptions& options) {
  const Eigen::VectorXd s = linear_forms(y, cone);
  const Eigen::Index n = s.size();
  if (warm.size() > n) throw std::invalid_argument("project_polar: warm start longer than active set");
  Eigen::VectorXd start;
  if (warm.size() > 0) {
    start = Eigen::VectorXd::Zero(n);
    start.head(warm.size()) = warm.cwiseMax(0.0);
  }

  PolarProjection out;
  // Quick exit: Y inside the approximation projects to the origin.
  if ((s.array() >= 0.0).all()) {
    out.polar = SymMatrix(cone.m());
    out.lambda = Eigen::VectorXd::Zero(n);
    return out;
  }
  NNQPResult qp = solve_nnqp(cone.gram_hadamard(), s, start, options);

  const auto d = cone.directions();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(cone.m(), cone.m());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (qp.lambda(i) != 0.0) p.noalias() -= qp.lambda(i) * d.row(i).transpose() * d.row(i);
  }
  out.polar = SymMatrix::symmetrized(p);
  out.lambda = std::move(qp.lambda);
  out.converged = qp.converged;
  out.kkt_residual = qp.kkt_residual;
  out.iterations = qp.iterations;
  return out;
}

SymMatrix project_cone(const SymMatrix& y, const PolyhedralConeApprox& cone) {
  return y - project_polar(y, cone).polar;
}

}  // namespace polycone
