#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdf/error.hpp"
#include "qdf/linalg.hpp"

namespace qdf {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-13;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

// Zero a(p,q) with J = diag(1, conj(e)) * [[c, s], [-s, c]] where e = a(p,q)/|a(p,q)|;
// a <- J* a J and v <- v J.
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex e = apq / r;
  const Complex ce = std::conj(e);
  const Eigen::Index n = a.rows();

  Complex* colp = a.col(p).data();
  Complex* colq = a.col(q).data();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex kp = colp[k];
    const Complex kq = colq[k];
    colp[k] = c * kp - s * ce * kq;
    colq[k] = s * kp + c * ce * kq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex pk = a(p, k);
    const Complex qk = a(q, k);
    a(p, k) = c * pk - s * e * qk;
    a(q, k) = s * pk + c * e * qk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  Complex* vp = v.col(p).data();
  Complex* vq = v.col(q).data();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex kp = vp[k];
    const Complex kq = vq[k];
    vp[k] = c * kp - s * ce * kq;
    vq[k] = s * kp + c * ce * kq;
  }
}

}  // namespace

EigenDecomposition eig_hermitian(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n != x.cols()) throw InvalidArgument("eig_hermitian: matrix is not square");
  Matrix a = 0.5 * (x + x.adjoint());
  Matrix v = Matrix::Identity(n, n);
  const double target = kOffDiagonalTol * a.norm();

  int sweep = 0;
  double off = off_diagonal_norm(a);
  while (off > target) {
    if (++sweep > kMaxSweeps) {
      throw NumericalError("eig_hermitian: Jacobi did not converge in 100 sweeps (off-diagonal " +
                           std::to_string(off) + ")");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        // Entries below the last bit of both diagonal partners are round-off.
        const double g = 100.0 * r;
        const double dp = std::abs(a(p, p).real());
        const double dq = std::abs(a(q, q).real());
        if (sweep > 4 && dp + g == dp && dq + g == dq) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
    off = off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  EigenDecomposition out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace qdf
