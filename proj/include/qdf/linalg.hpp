#pragma once

// Dense complex operators on tensor products of matrix algebras.
//
// Index convention: row-major Kronecker. For legs [d1, d2, ..., dk] the
// multi-index (i1, ..., ik) maps to i1*(d2*...*dk) + ... + ik, so leg 0 is the
// slowest index. Leg indices in this API are zero-based.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qdf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultPsdTol = 1e-9;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kFaithfulTol = 1e-12;

// An element of M_{d1} (x) ... (x) M_{dk} stored as one dense matrix.
class LeggedOperator {
 public:
  LeggedOperator() = default;
  // Throws InvalidArgument unless entries is square with side == prod(legs).
  LeggedOperator(Matrix entries, std::vector<int> legs);

  static LeggedOperator identity(std::vector<int> legs);
  static LeggedOperator zero(std::vector<int> legs);
  // Single-leg operator from a square matrix.
  static LeggedOperator single(Matrix entries);

  const Matrix& matrix() const { return entries_; }
  const std::vector<int>& legs() const { return legs_; }
  Eigen::Index side() const { return entries_.rows(); }
  std::size_t num_legs() const { return legs_.size(); }

  double max_abs() const;
  // max |x - x*| <= kHermitianTol * max|x|
  bool is_hermitian() const;
  Complex trace() const { return entries_.trace(); }

  LeggedOperator adjoint() const;
  LeggedOperator operator+(const LeggedOperator& o) const;
  LeggedOperator operator-(const LeggedOperator& o) const;
  LeggedOperator operator*(Complex s) const;
  LeggedOperator& operator+=(const LeggedOperator& o);

 private:
  Matrix entries_{Matrix::Zero(1, 1)};
  std::vector<int> legs_{};
};

// Faithful positive functional rho(x) = trace(D x) on M_n.
class Functional {
 public:
  // Throws InvalidArgument if D is not Hermitian or its least eigenvalue is
  // below kFaithfulTol * trace(D).
  explicit Functional(Matrix density);

  static Functional trace(int n);
  static Functional normalized_trace(int n);
  // D = G G* / trace(G G*) + I / n for G with standard normal entries, then
  // renormalized to unit trace; deterministic in seed.
  static Functional random(int n, std::uint64_t seed);

  const Matrix& density() const { return density_; }
  int dim() const { return static_cast<int>(density_.rows()); }
  Complex operator()(const Matrix& x) const;

 private:
  Matrix density_;
};

struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, unitary
};

// Throws InvalidArgument on non-Hermitian input.
void require_hermitian(const LeggedOperator& x, const char* what);

LeggedOperator tensor(const LeggedOperator& x, const LeggedOperator& y);
// x^{(x) k}; k == 0 gives the 1x1 identity with no legs.
LeggedOperator tensor_power(const LeggedOperator& x, int k);

// trace(y* x)
Complex hs_inner(const LeggedOperator& x, const LeggedOperator& y);

// Cyclic complex Jacobi. Throws NumericalError if 100 sweeps do not bring the
// off-diagonal Frobenius norm below 1e-13 * ||x||_F.
EigenDecomposition eig_hermitian(const LeggedOperator& x);
EigenDecomposition eig_hermitian(const Matrix& x);

double min_eigenvalue(const LeggedOperator& x);

// Relative threshold: min eig >= -tol * side * max(1, ||x||_max).
bool is_psd(const LeggedOperator& x, double tol = kDefaultPsdTol);
bool loewner_leq(const LeggedOperator& x, const LeggedOperator& y, double tol = kDefaultPsdTol);

// Nearest PSD operator in Hilbert-Schmidt norm.
LeggedOperator psd_project(const LeggedOperator& x);
// Same, on a raw matrix already known to be Hermitian; skips validation.
Matrix psd_project_unchecked(const Matrix& x);

// Applies rho to each listed leg and the identity elsewhere; the listed legs
// are removed. Duplicates are rejected.
LeggedOperator contract_legs(const LeggedOperator& x, const Functional& rho,
                             std::span<const int> legs);
LeggedOperator contract_legs(const LeggedOperator& x, const Functional& rho,
                             std::initializer_list<int> legs);
// Contracts the trailing `count` legs.
LeggedOperator contract_trailing(const LeggedOperator& x, const Functional& rho, int count);

LeggedOperator partial_transpose(const LeggedOperator& x, int leg);

}  // namespace qdf
