#include "qdf/boundary.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qdf/error.hpp"

namespace qdf {
namespace {

void require_length(const BoundaryElement& seq, int at_least, const char* what) {
  if (seq.length() < at_least) {
    throw InvalidArgument(std::string(what) + ": sequence needs at least " +
                          std::to_string(at_least + 1) + " entries");
  }
}

LeggedOperator compress(const LeggedOperator& x, int m, const Matrix& basis) {
  // I_m (x) basis is block diagonal.
  Matrix v = Matrix::Zero(m * basis.rows(), m * basis.cols());
  for (int i = 0; i < m; ++i) {
    v.block(i * basis.rows(), i * basis.cols(), basis.rows(), basis.cols()) = basis;
  }
  return {v.adjoint() * x.matrix() * v, {m, static_cast<int>(basis.cols())}};
}

}  // namespace

GroupLike::GroupLike(Matrix t) : t_(std::move(t)) {
  if (t_.rows() == 0 || t_.rows() != t_.cols()) {
    throw InvalidArgument("GroupLike: t must be a non-empty square matrix");
  }
  if (!t_.allFinite()) throw InvalidArgument("GroupLike: t has non-finite entries");
  const double bound = 1e-12 * std::pow(t_.norm(), static_cast<double>(t_.rows()));
  if (!(std::abs(t_.determinant()) > bound)) {
    throw InvalidArgument("GroupLike: t is not invertible");
  }
}

BoundaryElement grouplike_sequence(const LeggedOperator& a, const GroupLike& g, int L,
                                   const Functional& rho) {
  if (a.num_legs() != 1) throw InvalidArgument("grouplike_sequence: a must have a single leg");
  if (L < 0 || L > kMaxSymmetricDegree) {
    throw InvalidArgument("grouplike_sequence: L outside 0.." +
                          std::to_string(kMaxSymmetricDegree));
  }
  const LeggedOperator t(g.t(), {g.n()});
  std::vector<LeggedOperator> entries{a};
  for (int l = 1; l <= L; ++l) entries.push_back(tensor(entries.back(), t));
  return {a.legs()[0], g.n(), rho, std::move(entries)};
}

BoundaryElement grouplike_sequence(const LeggedOperator& a, const GroupLike& g, int L) {
  return grouplike_sequence(a, g, L, Functional::trace(g.n()));
}

BoundaryElement p_map(const BoundaryElement& seq, const Functional& rho) {
  require_length(seq, 1, "p_map");
  std::vector<LeggedOperator> out;
  for (int l = 0; l < seq.length(); ++l) out.push_back(contract_trailing(seq[l + 1], rho, 1));
  return {seq.m(), seq.n(), rho, std::move(out)};
}

bool subharmonic_check(const BoundaryElement& seq, const Functional& rho, double tol) {
  require_length(seq, 1, "subharmonic_check");
  for (const auto& x : seq.entries()) {
    if (!x.is_hermitian() || !is_psd(x, tol)) return false;
  }
  const BoundaryElement image = p_map(seq, rho);
  for (int l = 0; l < image.length() + 1; ++l) {
    if (!loewner_leq(image[l], seq[l], tol)) return false;
  }
  return true;
}

ExponentialReport exponential_test(const GroupLike& g, int L, double tol) {
  if (L < 1 || L > kMaxSymmetricDegree) {
    throw InvalidArgument("exponential_test: L outside 1.." + std::to_string(kMaxSymmetricDegree));
  }
  const int n = g.n();
  const LeggedOperator t(g.t(), {n});
  ExponentialReport out;
  LeggedOperator power = LeggedOperator::identity({});
  for (int l = 1; l <= L; ++l) {
    power = tensor(power, t);
    for (const auto& block : schur_weyl_table(n, l)) {
      const Matrix basis = isotypic_basis(n, block.lambda);
      const LeggedOperator c(basis.adjoint() * power.matrix() * basis,
                             {static_cast<int>(basis.cols())});
      BlockFailure f{l, block.lambda, std::numeric_limits<double>::quiet_NaN()};
      if (c.is_hermitian()) {
        f.min_eigenvalue = min_eigenvalue(c);
        if (is_psd(c, tol)) continue;
      }
      out.failures.push_back(f);
    }
  }
  out.is_exponential = out.failures.empty();
  if (!out.failures.empty()) out.failing_block = out.failures.front();
  return out;
}

double e_rho_value(const GroupLike& g, const Functional& rho, double tol) {
  if (rho.dim() != g.n()) throw InvalidArgument("e_rho_value: functional dimension mismatch");
  const Complex v = rho(g.t());
  if (std::abs(v.imag()) > tol * std::max(1.0, std::abs(v))) {
    throw DomainError("e_rho_value: rho(t) has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

bool in_e_rho(const GroupLike& g, const Functional& rho, int L, double tol) {
  if (!exponential_test(g, L, tol).is_exponential) return false;
  return e_rho_value(g, rho) <= 1.0 + tol;
}

LeggedOperator recover_block(const BoundaryElement& seq, const Partition& lambda) {
  const int l = lambda.size();
  if (l > seq.length()) {
    throw InvalidArgument("recover_block: |lambda| = " + std::to_string(l) +
                          " exceeds the prefix length " + std::to_string(seq.length()));
  }
  const Matrix basis = isotypic_basis(seq.n(), lambda);
  if (basis.cols() == 0) throw InvalidArgument("recover_block: zero projector for lambda");
  return compress(seq[l], seq.m(), basis);
}

LeggedOperator recover_copy_block(const BoundaryElement& seq, const Partition& lambda, int copy) {
  const int l = lambda.size();
  if (l > seq.length()) {
    throw InvalidArgument("recover_copy_block: |lambda| = " + std::to_string(l) +
                          " exceeds the prefix length " + std::to_string(seq.length()));
  }
  const Matrix basis = irrep_copy_basis(seq.n(), lambda, copy);
  if (basis.cols() == 0) throw InvalidArgument("recover_copy_block: zero projector for lambda");
  return compress(seq[l], seq.m(), basis);
}

LeggedOperator determinant_twist(const LeggedOperator& block, const GroupLike& g, int k) {
  return block * std::pow(g.det(), k);
}

SeparableImageReport separable_image_check(const BoundaryElement& seq, const Functional& rho,
                                           int max_l, const SolverOptions& opts) {
  if (!subharmonic_check(seq, rho)) {
    throw InvalidArgument("separable_image_check: sequence is not subharmonic");
  }
  SeparableImageReport out;
  out.level_one = seq[1];
  out.separability = separability_verdict(seq[1], rho, max_l, opts);
  out.contradiction = out.separability.verdict == SeparabilityVerdict::entangled_evidence;
  return out;
}

}  // namespace qdf
