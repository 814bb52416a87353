#pragma once

// Group-like and exponential elements of U(n), the transition operator acting
// on Schur-Weyl image sequences, and isotypic block recovery.
//
// Elements of M_m (x) U(G) are handled only through their image prefixes
// (x_0, ..., x_L), x_l = (id_m (x) Pi^{(x) l})(x), with Pi the fundamental
// representation; on such prefixes the transition operator contracts the last
// n-leg.

#include <optional>
#include <vector>

#include "qdf/hierarchy.hpp"
#include "qdf/symmetry.hpp"

namespace qdf {

using BoundaryElement = SymSequence;

// Default truncation for boundary prefixes.
inline constexpr int kDefaultTruncation = 4;

// e_t for t in GL(n, C).
class GroupLike {
 public:
  // Throws InvalidArgument unless t is square with |det t| > 1e-12 * ||t||_F^n.
  explicit GroupLike(Matrix t);

  const Matrix& t() const { return t_; }
  int n() const { return static_cast<int>(t_.rows()); }
  Complex det() const { return t_.determinant(); }

 private:
  Matrix t_;
};

// (a (x) t^{(x) l})_{l=0..L}; a has legs [m]. The sequence carries rho for
// later queries (trace on M_n when omitted).
BoundaryElement grouplike_sequence(const LeggedOperator& a, const GroupLike& g, int L,
                                   const Functional& rho);
BoundaryElement grouplike_sequence(const LeggedOperator& a, const GroupLike& g, int L);

// Entry l of the result is the last-leg contraction of x_{l+1}; one level
// shorter. Throws InvalidArgument when L < 1.
BoundaryElement p_map(const BoundaryElement& seq, const Functional& rho);

// Entries Hermitian PSD and p_map(seq)_l <= x_l for l < L, at the is_psd
// tolerance. Throws InvalidArgument when L < 1.
bool subharmonic_check(const BoundaryElement& seq, const Functional& rho,
                       double tol = kDefaultPsdTol);

struct BlockFailure {
  int level = 0;
  Partition lambda;
  // Least eigenvalue of the compression; NaN when the compression is not Hermitian.
  double min_eigenvalue = 0.0;
};

struct ExponentialReport {
  bool is_exponential = true;
  // First failure in (level, table order); empty when exponential.
  std::optional<BlockFailure> failing_block;
  std::vector<BlockFailure> failures;
};

// Checks t PSD, then for every l <= L and every block lambda of the Schur-Weyl
// table that the compression of t^{(x) l} to range(P_lambda) is PSD.
ExponentialReport exponential_test(const GroupLike& g, int L = kDefaultTruncation,
                                   double tol = kDefaultPsdTol);

// rho(t) = trace(D t). Throws DomainError when the imaginary part exceeds
// tol * max(1, |rho(t)|).
double e_rho_value(const GroupLike& g, const Functional& rho, double tol = 1e-10);

// exponential_test passes and rho(t) <= 1.
bool in_e_rho(const GroupLike& g, const Functional& rho, int L = kDefaultTruncation,
              double tol = kDefaultPsdTol);

// (I_m (x) B)* x_l (I_m (x) B) with B the orthonormal basis of range(P_lambda)
// from isotypic_basis, l = |lambda|. Result legs [m, rank P_lambda].
// Throws InvalidArgument if l > L or P_lambda == 0.
LeggedOperator recover_block(const BoundaryElement& seq, const Partition& lambda);

// Same compression onto one irreducible copy (irrep_copy_basis). For
// group-like input every copy yields a (x) pi_lambda(t) in the same basis.
LeggedOperator recover_copy_block(const BoundaryElement& seq, const Partition& lambda, int copy);

// Multiplies a recovered block by det(t)^k; realizes the weight lambda + (k, ..., k)
// for k of either sign.
LeggedOperator determinant_twist(const LeggedOperator& block, const GroupLike& g, int k);

struct SeparableImageReport {
  LeggedOperator level_one;  // x_1
  SeparabilityReport separability;
  // True when a subharmonic sequence produced entangled_evidence.
  bool contradiction = false;
};

// Runs separability_verdict on x_1 up to max_l. Throws InvalidArgument unless
// subharmonic_check passes.
SeparableImageReport separable_image_check(const BoundaryElement& seq, const Functional& rho,
                                           int max_l = 3, const SolverOptions& opts = {});

}  // namespace qdf
