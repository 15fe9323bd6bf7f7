#include "polycone/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace polycone {

namespace {

void require_same_order(const SymMatrix& a, const SymMatrix& b, const char* what) {
  if (a.order() != b.order()) {
    throw std::invalid_argument(std::string(what) + ": order mismatch " +
                                std::to_string(a.order()) + " vs " + std::to_string(b.order()));
  }
}

}  // namespace

SymMatrix::SymMatrix(int order) {
  if (order < 1) throw std::invalid_argument("SymMatrix: order must be >= 1");
  a_ = Eigen::MatrixXd::Zero(order, order);
}

SymMatrix SymMatrix::from_matrix(const Eigen::MatrixXd& full) {
  if (full.rows() != full.cols() || full.rows() < 1) {
    throw std::invalid_argument("SymMatrix: expected a nonempty square matrix");
  }
  const double scale = 1.0 + full.cwiseAbs().maxCoeff();
  const double asym = (full - full.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-10 * scale)) {
    throw std::invalid_argument("SymMatrix: input is not symmetric (max asymmetry " +
                                std::to_string(asym) + ")");
  }
  return symmetrized(full);
}

SymMatrix SymMatrix::symmetrized(const Eigen::MatrixXd& full) {
  if (full.rows() != full.cols() || full.rows() < 1) {
    throw std::invalid_argument("SymMatrix: expected a nonempty square matrix");
  }
  Eigen::MatrixXd s = 0.5 * (full + full.transpose());
  return SymMatrix(std::move(s), Unchecked{});
}

SymMatrix SymMatrix::identity(int order) {
  SymMatrix m(order);
  m.a_.setIdentity();
  return m;
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& diag) {
  SymMatrix m(static_cast<int>(diag.size()));
  m.a_.diagonal() = diag;
  return m;
}

SymMatrix SymMatrix::outer(const Eigen::VectorXd& d) {
  Eigen::MatrixXd o = d * d.transpose();
  return SymMatrix(std::move(o), Unchecked{});
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  require_same_order(*this, other, "operator+=");
  a_ += other.a_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  require_same_order(*this, other, "operator-=");
  a_ -= other.a_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  a_ *= s;
  return *this;
}

SymMatrix& SymMatrix::add_scaled(double s, const SymMatrix& other) {
  require_same_order(*this, other, "add_scaled");
  a_ += s * other.a_;
  return *this;
}

SymMatrix EigenDecomposition::reconstruct() const {
  return SymMatrix::symmetrized(eigenvectors * eigenvalues.asDiagonal() *
                                eigenvectors.transpose());
}

double frobenius_inner(const SymMatrix& a, const SymMatrix& b) {
  require_same_order(a, b, "frobenius_inner");
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

EigenDecomposition symmetric_eigen(const SymMatrix& a, int max_sweeps) {
  if (!a.all_finite()) throw std::invalid_argument("symmetric_eigen: non-finite input");
  const int n = a.order();
  Eigen::MatrixXd w = a.matrix();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd d = w.diagonal();
  Eigen::VectorXd b = d;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);

  bool converged = n == 1;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) off += std::abs(w(p, q));
    }
    if (off == 0.0) {
      converged = true;
      break;
    }
    // Early sweeps only rotate away large elements.
    const double thresh = sweep < 3 ? 0.2 * off / (n * n) : 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::abs(w(p, q));
        if (sweep > 3 && std::abs(d(p)) + g == std::abs(d(p)) &&
            std::abs(d(q)) + g == std::abs(d(q))) {
          w(p, q) = 0.0;
          continue;
        }
        if (std::abs(w(p, q)) <= thresh) continue;

        double h = d(q) - d(p);
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = w(p, q) / h;
        } else {
          const double theta = 0.5 * h / w(p, q);
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        h = t * w(p, q);
        z(p) -= h;
        z(q) += h;
        d(p) -= h;
        d(q) += h;
        w(p, q) = 0.0;
        auto rotate = [&](double& x, double& y) {
          const double gx = x;
          const double hy = y;
          x = gx - s * (hy + gx * tau);
          y = hy + s * (gx - hy * tau);
        };
        for (int j = 0; j < p; ++j) rotate(w(j, p), w(j, q));
        for (int j = p + 1; j < q; ++j) rotate(w(p, j), w(j, q));
        for (int j = q + 1; j < n; ++j) rotate(w(p, j), w(q, j));
        for (int j = 0; j < n; ++j) rotate(v(j, p), v(j, q));
      }
    }
    b += z;
    d = b;
    z.setZero();
  }
  if (!converged) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) off += std::abs(w(p, q));
    }
    converged = off == 0.0;
  }
  if (!converged) {
    throw ConvergenceError("symmetric_eigen: no convergence after " +
                           std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d(i) > d(j); });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues(k) = d(order[k]);
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

double min_eigenvalue(const SymMatrix& a) {
  const auto e = symmetric_eigen(a);
  return e.eigenvalues(e.eigenvalues.size() - 1);
}

double max_eigenvalue(const SymMatrix& a) { return symmetric_eigen(a).eigenvalues(0); }

SymMatrix project_psd(const SymMatrix& a) {
  EigenDecomposition e = symmetric_eigen(a);
  e.eigenvalues = e.eigenvalues.cwiseMax(0.0);
  return e.reconstruct();
}

SymMatrix project_nsd(const SymMatrix& a) { return -project_psd(-a); }

SymMatrix clip_nonpositive(const SymMatrix& a) {
  return SymMatrix::symmetrized(a.matrix().cwiseMin(0.0));
}

SymMatrix clip_nonnegative(const SymMatrix& a) {
  return SymMatrix::symmetrized(a.matrix().cwiseMax(0.0));
}

SpnDistance distance_to_spn(const SymMatrix& a, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("distance_to_spn: tol must be positive");
  const int m = a.order();
  SymMatrix x = a;
  SymMatrix p(m);  // increment of the S_- step, PSD by Moreau
  SymMatrix q(m);  // increment of the -N step, nonnegative
  SpnDistance out;
  for (int it = 1; it <= max_iter; ++it) {
    const SymMatrix xp = x + p;
    const SymMatrix y = project_nsd(xp);
    p = xp - y;
    const SymMatrix yq = y + q;
    SymMatrix next = clip_nonpositive(yq);
    q = yq - next;
    out.residual = (next - x).norm();
    out.iterations = it;
    x = std::move(next);
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
  }
  out.distance = x.norm();
  out.polar_point = std::move(x);
  out.psd_part = std::move(p);
  out.nonnegative_part = std::move(q);
  return out;
}

}  // namespace polycone
