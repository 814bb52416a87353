#pragma once

// Generators and independent reference computations shared by the test
// binaries. Oracles here use explicit index loops or Eigen's own solvers so
// they do not share code paths with the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qdf/linalg.hpp"

namespace qdf::testing {

using Rng = std::mt19937;

inline Matrix random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

inline Matrix random_hermitian(int n, Rng& rng) {
  const Matrix g = random_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

// Full-rank PSD with entries bounded by 1 in modulus.
inline Matrix random_psd(int n, Rng& rng) {
  const Matrix g = random_matrix(n, n, rng);
  Matrix p = g * g.adjoint() + 0.05 * Matrix::Identity(n, n);
  return p / p.cwiseAbs().maxCoeff();
}

inline LeggedOperator op(Matrix m, std::vector<int> legs) { return {std::move(m), std::move(legs)}; }

// Convex combination of `terms` products p_i (x) q_i of random PSD matrices.
inline LeggedOperator random_separable(int m, int n, int terms, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& x : w) total += (x = unit(rng));
  Matrix acc = Matrix::Zero(m * n, m * n);
  for (int k = 0; k < terms; ++k) {
    const Matrix p = random_psd(m, rng), q = random_psd(n, rng);
    for (int i = 0; i < m * n; ++i) {
      for (int j = 0; j < m * n; ++j) acc(i, j) += w[k] / total * p(i / n, j / n) * q(i % n, j % n);
    }
  }
  return op(acc, {m, n});
}

// Eigenvalues by Eigen's self-adjoint solver, ascending.
inline Eigen::VectorXd reference_eigenvalues(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double reference_min_eig(const Matrix& x) { return reference_eigenvalues(x)(0); }

inline int reference_rank(const Matrix& x, double tol = 1e-9) {
  Eigen::FullPivLU<Matrix> lu(x);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

inline double max_abs_diff(const Matrix& x, const Matrix& y) { return (x - y).cwiseAbs().maxCoeff(); }

// Partial transpose of the second factor of an (m x n)-leg matrix by index loops.
inline Matrix reference_partial_transpose(const Matrix& x, int m, int n) {
  Matrix out(m * n, m * n);
  for (int a = 0; a < m; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int b = 0; b < m; ++b) {
        for (int j = 0; j < n; ++j) out(a * n + i, b * n + j) = x(a * n + j, b * n + i);
      }
    }
  }
  return out;
}

// (id (x) rho) on the last factor of a (pre x n) matrix: sum_{ij} D_{ji} x[(a,i),(b,j)].
inline Matrix reference_contract_last(const Matrix& x, const Matrix& d, int pre, int n) {
  Matrix out = Matrix::Zero(pre, pre);
  for (int a = 0; a < pre; ++a) {
    for (int b = 0; b < pre; ++b) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out(a, b) += d(j, i) * x(a * n + i, b * n + j);
      }
    }
  }
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Swap of the two trailing n-legs of an (m x n x n) matrix, as an explicit unitary.
inline Matrix trailing_swap(int m, int n) {
  const int side = m * n * n;
  Matrix u = Matrix::Zero(side, side);
  for (int a = 0; a < m; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) u((a * n + j) * n + i, (a * n + i) * n + j) = 1.0;
    }
  }
  return u;
}

// Least ||tr_C(S(G G*)) - a||_F^2 over G in C^{8x8}, with S the average over
// the swap of the two trailing qubits: every swap-invariant PSD b on 2 (x) 2 (x) 2
// is S(G G*) for some G. Gradient descent with backtracking from several
// random starts. Used to bound the exact 2-extension defect of a 2 (x) 2 state.
inline double two_extension_defect(const Matrix& a, int starts, int iterations, Rng& rng) {
  const Matrix swap = trailing_swap(2, 2);
  const Matrix id2 = Matrix::Identity(2, 2);
  auto objective = [&](const Matrix& g, Matrix* residual) {
    const Matrix b = g * g.adjoint();
    const Matrix s = 0.5 * (b + swap * b * swap.adjoint());
    const Matrix r = reference_contract_last(s, id2, 4, 2) - a;
    if (residual) *residual = r;
    return r.squaredNorm();
  };
  double best = std::numeric_limits<double>::infinity();
  for (int start = 0; start < starts; ++start) {
    Matrix g = 0.5 * random_matrix(8, 8, rng);
    Matrix r;
    double f = objective(g, &r);
    double step = 0.1;
    for (int it = 0; it < iterations; ++it) {
      // Gradient 4 S(Phi*(r)) G with Phi*(r) = r (x) I.
      const Matrix lift = kron(r, id2);
      const Matrix sym = 0.5 * (lift + swap * lift * swap.adjoint());
      const Matrix grad = 4.0 * sym * g;
      const double gn = grad.squaredNorm();
      if (gn < 1e-30) break;
      while (step > 1e-12) {
        const Matrix trial = g - step * grad;
        Matrix tr;
        const double ft = objective(trial, &tr);
        if (ft <= f - 1e-4 * step * gn) {
          g = trial;
          f = ft;
          r = tr;
          step *= 1.5;
          break;
        }
        step *= 0.5;
      }
    }
    best = std::min(best, f);
  }
  return best;
}

}  // namespace qdf::testing
