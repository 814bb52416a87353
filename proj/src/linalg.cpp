#include "qdf/linalg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "qdf/error.hpp"

namespace qdf {
namespace {

Eigen::Index leg_product(const std::vector<int>& legs) {
  Eigen::Index p = 1;
  for (int d : legs) p *= d;
  return p;
}

std::string legs_str(const std::vector<int>& legs) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < legs.size(); ++i) os << (i ? "," : "") << legs[i];
  os << ']';
  return os.str();
}

void require_same_shape(const LeggedOperator& x, const LeggedOperator& y, const char* what) {
  if (x.side() != y.side()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch " + legs_str(x.legs()) +
                          " vs " + legs_str(y.legs()));
  }
}

// Contract one leg: out[(a,b),(a',b')] = sum_{i,j} D(j,i) x[(a,i,b),(a',j,b')].
Matrix contract_one(const Matrix& x, const Matrix& d, Eigen::Index pre, Eigen::Index dim,
                    Eigen::Index post) {
  const Eigen::Index out_side = pre * post;
  Matrix out = Matrix::Zero(out_side, out_side);
  for (Eigen::Index a = 0; a < pre; ++a) {
    for (Eigen::Index ap = 0; ap < pre; ++ap) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
          const Complex w = d(j, i);
          if (w == Complex(0.0)) continue;
          const Eigen::Index r0 = (a * dim + i) * post;
          const Eigen::Index c0 = (ap * dim + j) * post;
          out.block(a * post, ap * post, post, post) += w * x.block(r0, c0, post, post);
        }
      }
    }
  }
  return out;
}

}  // namespace

LeggedOperator::LeggedOperator(Matrix entries, std::vector<int> legs)
    : entries_(std::move(entries)), legs_(std::move(legs)) {
  for (int d : legs_) {
    if (d <= 0) throw InvalidArgument("leg dimensions must be positive, got " + legs_str(legs_));
  }
  if (entries_.rows() != entries_.cols()) {
    throw InvalidArgument("operator matrix must be square");
  }
  if (entries_.rows() != leg_product(legs_)) {
    throw InvalidArgument("matrix side " + std::to_string(entries_.rows()) +
                          " does not match legs " + legs_str(legs_));
  }
}

LeggedOperator LeggedOperator::identity(std::vector<int> legs) {
  const auto n = leg_product(legs);
  return {Matrix::Identity(n, n), std::move(legs)};
}

LeggedOperator LeggedOperator::zero(std::vector<int> legs) {
  const auto n = leg_product(legs);
  return {Matrix::Zero(n, n), std::move(legs)};
}

LeggedOperator LeggedOperator::single(Matrix entries) {
  const int n = static_cast<int>(entries.rows());
  return {std::move(entries), {n}};
}

double LeggedOperator::max_abs() const {
  return entries_.size() ? entries_.cwiseAbs().maxCoeff() : 0.0;
}

bool LeggedOperator::is_hermitian() const {
  const double scale = max_abs();
  if (scale == 0.0) return true;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTol * scale;
}

LeggedOperator LeggedOperator::adjoint() const { return {entries_.adjoint(), legs_}; }

LeggedOperator LeggedOperator::operator+(const LeggedOperator& o) const {
  require_same_shape(*this, o, "operator+");
  return {entries_ + o.entries_, legs_};
}

LeggedOperator LeggedOperator::operator-(const LeggedOperator& o) const {
  require_same_shape(*this, o, "operator-");
  return {entries_ - o.entries_, legs_};
}

LeggedOperator LeggedOperator::operator*(Complex s) const { return {entries_ * s, legs_}; }

LeggedOperator& LeggedOperator::operator+=(const LeggedOperator& o) {
  require_same_shape(*this, o, "operator+=");
  entries_ += o.entries_;
  return *this;
}

Functional::Functional(Matrix density) : density_(std::move(density)) {
  if (density_.rows() == 0 || density_.rows() != density_.cols()) {
    throw InvalidArgument("functional density must be a non-empty square matrix");
  }
  const LeggedOperator as_op = LeggedOperator::single(density_);
  if (!as_op.is_hermitian()) throw InvalidArgument("functional density is not Hermitian");
  const double tr = density_.trace().real();
  const double lo = eig_hermitian(as_op).eigenvalues(0);
  if (!(tr > 0.0) || lo < kFaithfulTol * tr) {
    throw InvalidArgument("functional is not faithful: least eigenvalue " + std::to_string(lo) +
                          " against trace " + std::to_string(tr));
  }
  density_ = 0.5 * (density_ + density_.adjoint());
}

Functional Functional::trace(int n) { return Functional(Matrix::Identity(n, n)); }

Functional Functional::normalized_trace(int n) {
  return Functional(Matrix::Identity(n, n) / static_cast<double>(n));
}

Functional Functional::random(int n, std::uint64_t seed) {
  if (n <= 0) throw InvalidArgument("random functional: n must be positive");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = Complex(normal(gen), normal(gen));
  }
  Matrix d = g * g.adjoint();
  d /= d.trace().real();
  d += Matrix::Identity(n, n) / static_cast<double>(n);
  return Functional(d / d.trace().real());
}

Complex Functional::operator()(const Matrix& x) const {
  if (x.rows() != density_.rows() || x.cols() != density_.cols()) {
    throw InvalidArgument("functional applied to a matrix of the wrong size");
  }
  return (density_.transpose().cwiseProduct(x)).sum();
}

void require_hermitian(const LeggedOperator& x, const char* what) {
  if (!x.is_hermitian()) throw InvalidArgument(std::string(what) + ": input is not Hermitian");
}

LeggedOperator tensor(const LeggedOperator& x, const LeggedOperator& y) {
  const Matrix& a = x.matrix();
  const Matrix& b = y.matrix();
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  std::vector<int> legs = x.legs();
  legs.insert(legs.end(), y.legs().begin(), y.legs().end());
  return {std::move(out), std::move(legs)};
}

LeggedOperator tensor_power(const LeggedOperator& x, int k) {
  if (k < 0) throw InvalidArgument("tensor_power: negative exponent");
  LeggedOperator out = LeggedOperator::identity({});
  for (int i = 0; i < k; ++i) out = tensor(out, x);
  return out;
}

Complex hs_inner(const LeggedOperator& x, const LeggedOperator& y) {
  require_same_shape(x, y, "hs_inner");
  return (y.matrix().conjugate().cwiseProduct(x.matrix())).sum();
}

EigenDecomposition eig_hermitian(const LeggedOperator& x) {
  require_hermitian(x, "eig_hermitian");
  return eig_hermitian(x.matrix());
}

double min_eigenvalue(const LeggedOperator& x) {
  if (x.side() == 0) return 0.0;
  return eig_hermitian(x).eigenvalues(0);
}

bool is_psd(const LeggedOperator& x, double tol) {
  require_hermitian(x, "is_psd");
  const double threshold =
      -tol * static_cast<double>(x.side()) * std::max(1.0, x.max_abs());
  return eig_hermitian(x.matrix()).eigenvalues(0) >= threshold;
}

bool loewner_leq(const LeggedOperator& x, const LeggedOperator& y, double tol) {
  require_same_shape(x, y, "loewner_leq");
  return is_psd(y - x, tol);
}

Matrix psd_project_unchecked(const Matrix& x) {
  const EigenDecomposition e = eig_hermitian(x);
  const RealVector clipped = e.eigenvalues.cwiseMax(0.0);
  Matrix out = e.eigenvectors * clipped.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

LeggedOperator psd_project(const LeggedOperator& x) {
  require_hermitian(x, "psd_project");
  return {psd_project_unchecked(x.matrix()), x.legs()};
}

LeggedOperator contract_legs(const LeggedOperator& x, const Functional& rho,
                             std::span<const int> legs) {
  std::vector<int> order(legs.begin(), legs.end());
  std::sort(order.begin(), order.end(), std::greater<>());
  if (std::adjacent_find(order.begin(), order.end()) != order.end()) {
    throw InvalidArgument("contract_legs: duplicate leg index");
  }
  Matrix cur = x.matrix();
  std::vector<int> cur_legs = x.legs();
  for (int leg : order) {
    if (leg < 0 || leg >= static_cast<int>(cur_legs.size())) {
      throw InvalidArgument("contract_legs: leg index " + std::to_string(leg) +
                            " out of range for legs " + legs_str(x.legs()));
    }
    if (cur_legs[leg] != rho.dim()) {
      throw InvalidArgument("contract_legs: leg " + std::to_string(leg) + " has dimension " +
                            std::to_string(cur_legs[leg]) + " but the functional acts on M_" +
                            std::to_string(rho.dim()));
    }
    Eigen::Index pre = 1, post = 1;
    for (int i = 0; i < leg; ++i) pre *= cur_legs[i];
    for (std::size_t i = leg + 1; i < cur_legs.size(); ++i) post *= cur_legs[i];
    cur = contract_one(cur, rho.density(), pre, cur_legs[leg], post);
    cur_legs.erase(cur_legs.begin() + leg);
  }
  return {std::move(cur), std::move(cur_legs)};
}

LeggedOperator contract_legs(const LeggedOperator& x, const Functional& rho,
                             std::initializer_list<int> legs) {
  return contract_legs(x, rho, std::span<const int>(legs.begin(), legs.size()));
}

LeggedOperator contract_trailing(const LeggedOperator& x, const Functional& rho, int count) {
  const int k = static_cast<int>(x.num_legs());
  if (count < 0 || count > k) throw InvalidArgument("contract_trailing: bad leg count");
  std::vector<int> legs(count);
  std::iota(legs.begin(), legs.end(), k - count);
  return contract_legs(x, rho, legs);
}

LeggedOperator partial_transpose(const LeggedOperator& x, int leg) {
  const auto& legs = x.legs();
  if (legs.size() < 2) throw InvalidArgument("partial_transpose: needs at least two legs");
  if (leg < 0 || leg >= static_cast<int>(legs.size())) {
    throw InvalidArgument("partial_transpose: leg index out of range");
  }
  Eigen::Index pre = 1, post = 1;
  for (int i = 0; i < leg; ++i) pre *= legs[i];
  for (std::size_t i = leg + 1; i < legs.size(); ++i) post *= legs[i];
  const Eigen::Index dim = legs[leg];
  const Matrix& m = x.matrix();
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index a = 0; a < pre; ++a) {
    for (Eigen::Index ap = 0; ap < pre; ++ap) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
          out.block((a * dim + i) * post, (ap * dim + j) * post, post, post) =
              m.block((a * dim + j) * post, (ap * dim + i) * post, post, post);
        }
      }
    }
  }
  return {std::move(out), legs};
}

}  // namespace qdf
