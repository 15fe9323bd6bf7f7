#pragma once

#include "polycone/nnqp.hpp"
#include "polycone/simplex_grid.hpp"
#include "polycone/sym_matrix.hpp"

#include <Eigen/Dense>

#include <memory>

namespace polycone {

/// Polyhedral outer approximation K = {Y : d_i^T Y d_i >= 0, i < active_count}
/// of the copositive cone, where d_i are the leading points of a simplex grid.
///
/// The Gram-Hadamard matrix R_ij = (d_i^T d_j)^2 of the active directions is
/// cached and extended in place when the active prefix grows. Growth is the
/// only mutation; all projection routines take the approximation by const
/// reference and may run concurrently between growth steps.
class PolyhedralConeApprox {
 public:
  /// Throws std::invalid_argument unless 1 <= active_count <= grid size.
  PolyhedralConeApprox(std::shared_ptr<const SimplexGrid> grid, int active_count);

  const SimplexGrid& grid() const { return *grid_; }
  std::shared_ptr<const SimplexGrid> shared_grid() const { return grid_; }
  int m() const { return grid_->m(); }
  int active_count() const { return active_; }
  bool is_full() const { return active_ == grid_->size(); }

  /// Grows the active prefix to `count` (clamped to the grid size). Throws
  /// std::invalid_argument when asked to shrink.
  void grow_to(int count);

  /// Active block of R = (D D^T) o (D D^T).
  Eigen::Ref<const Eigen::MatrixXd> gram_hadamard() const {
    return gram_.topLeftCorner(active_, active_);
  }
  /// Rows are the active directions d_i.
  Eigen::Ref<const Eigen::MatrixXd> directions() const {
    return grid_->directions().topRows(active_);
  }

 private:
  void fill_gram(int from, int to);

  std::shared_ptr<const SimplexGrid> grid_;
  int active_ = 0;
  Eigen::MatrixXd gram_;
};

/// s_i = d_i^T Y d_i over the active directions.
Eigen::VectorXd linear_forms(const SymMatrix& y, const PolyhedralConeApprox& cone);

/// min_i d_i^T Y d_i; nonnegative iff Y lies in the approximation.
double min_quadratic_form(const SymMatrix& y, const PolyhedralConeApprox& cone);

struct PolarProjection {
  /// Projection of Y onto the polar cone, -sum_i lambda_i d_i d_i^T.
  SymMatrix polar{1};
  /// Nonnegative weights of the dual QP (not unique when the active set is
  /// larger than dim S^m; the projection itself is).
  Eigen::VectorXd lambda;
  bool converged = true;
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// Projection onto the polar cone by solving the dual nonnegative QP with
/// s = linear_forms(Y) and R = gram_hadamard(). `warm` may be empty or any
/// nonnegative vector no longer than the active set; it is zero-padded.
/// QP non-convergence is reported on the result, never thrown.
PolarProjection project_polar(const SymMatrix& y, const PolyhedralConeApprox& cone,
                              const Eigen::VectorXd& warm = {},
                              const NNQPOptions& options = {});

/// Y - project_polar(Y): projection onto the approximation itself.
SymMatrix project_cone(const SymMatrix& y, const PolyhedralConeApprox& cone);

}  // namespace polycone
