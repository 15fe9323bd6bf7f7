#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace polycone {

/// Raised when an iterative numerical kernel exhausts its iteration budget
/// and the caller has no meaningful partial result to fall back on.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense real symmetric matrix with the trace (Frobenius) inner product.
///
/// Storage is a full Eigen matrix; symmetry is enforced when constructing
/// from an arbitrary matrix and preserved by every arithmetic operation.
class SymMatrix {
 public:
  /// Zero matrix of the given order.
  explicit SymMatrix(int order);

  /// Validates near-symmetry (relative 1e-10) and stores the exact
  /// symmetric part. Throws std::invalid_argument otherwise.
  static SymMatrix from_matrix(const Eigen::MatrixXd& full);
  /// Stores (full + full^T) / 2 without any symmetry check.
  static SymMatrix symmetrized(const Eigen::MatrixXd& full);
  static SymMatrix identity(int order);
  static SymMatrix diagonal(const Eigen::VectorXd& diag);
  /// d d^T
  static SymMatrix outer(const Eigen::VectorXd& d);

  int order() const { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }

  /// Frobenius norm.
  double norm() const { return a_.norm(); }
  /// max_{i,j} |a_ij|
  double max_abs() const { return a_.cwiseAbs().maxCoeff(); }
  /// d^T A d
  double quadratic_form(const Eigen::VectorXd& d) const { return d.dot(a_ * d); }
  bool all_finite() const { return a_.allFinite(); }

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);
  /// this += s * other
  SymMatrix& add_scaled(double s, const SymMatrix& other);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator-(SymMatrix a) { return a *= -1.0; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) { return a.a_ == b.a_; }

 private:
  struct Unchecked {};
  SymMatrix(Eigen::MatrixXd full, Unchecked) : a_(std::move(full)) {}

  Eigen::MatrixXd a_;
};

/// Eigenvalues sorted in descending order with matching orthonormal columns.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  /// V diag(lambda) V^T
  SymMatrix reconstruct() const;
};

/// sum_{ij} A_ij B_ij. Throws std::invalid_argument on order mismatch.
double frobenius_inner(const SymMatrix& a, const SymMatrix& b);

/// Cyclic Jacobi rotations with a threshold strategy, capped at
/// `max_sweeps`. Throws ConvergenceError if the cap is reached and
/// std::invalid_argument on non-finite input.
EigenDecomposition symmetric_eigen(const SymMatrix& a, int max_sweeps = 100);

double min_eigenvalue(const SymMatrix& a);
double max_eigenvalue(const SymMatrix& a);

/// Projection onto the positive semidefinite cone (eigenvalue clipping).
SymMatrix project_psd(const SymMatrix& a);
/// Projection onto the negative semidefinite cone, -project_psd(-a).
SymMatrix project_nsd(const SymMatrix& a);
/// Entrywise min(a_ij, 0): projection onto the nonpositive matrices.
SymMatrix clip_nonpositive(const SymMatrix& a);
/// Entrywise max(a_ij, 0): projection onto the nonnegative matrices.
SymMatrix clip_nonnegative(const SymMatrix& a);

/// Result of the distance computation to S_+ + N.
///
/// Dykstra's increments give an exact decomposition witness:
/// input - polar_point = psd_part + nonnegative_part, with psd_part PSD and
/// nonnegative_part entrywise nonnegative by construction.
struct SpnDistance {
  double distance = 0.0;
  /// Projection of the input onto the polar cone S_- ∩ (-N).
  SymMatrix polar_point{1};
  SymMatrix psd_part{1};
  SymMatrix nonnegative_part{1};
  /// Frobenius change between the last two Dykstra iterates.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// min over Y in S^m_+ + N^m of ||a - Y||_F, computed as the norm of the
/// projection of `a` onto the polar cone S_- ∩ (-N) by Dykstra's
/// alternating projections. Non-convergence is reported through
/// `converged` with the last iterate kept. Requires tol > 0.
SpnDistance distance_to_spn(const SymMatrix& a, double tol = 1e-9, int max_iter = 10000);

}  // namespace polycone
