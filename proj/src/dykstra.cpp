// Dykstra's alternating projections for the l-(sub-)extension problem.

#include <cmath>

#include "qdf/error.hpp"
#include "qdf/hierarchy.hpp"
#include "qdf/symmetry.hpp"

namespace qdf {
namespace {

Matrix hermitize(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

// Projection onto {(b, s) : b S_l-invariant, Phi(b) + s = a} (sub), or onto
// {b : b S_l-invariant, Phi(b) = a} (exact, s stays zero).
//
// With S the symmetrizer, the least-norm correction has the form
// b = S(b0) + S(Phi*(w)), s = s0 + w, where w solves T(w) = a - Phi(S(b0)) - s0
// and T = Phi S Phi* (+ id in the sub case). S mixes the kept n-leg with the
// contracted ones, so T is not a multiple of the identity; it is assembled once
// on the (mn)^2-dimensional space and factored.
class AffineProjector {
 public:
  AffineProjector(const LeggedOperator& a, const Functional& rho, int l, Relation relation)
      : legs_(1 + l, rho.dim()), a_(a), map_(a.legs()[0], rho, l), relation_(relation) {
    legs_[0] = a.legs()[0];
    const Eigen::Index k = a.side();
    const Eigen::Index dim = k * k;
    Matrix t(dim, dim);
    for (Eigen::Index c = 0; c < k; ++c) {
      for (Eigen::Index r = 0; r < k; ++r) {
        Matrix e = Matrix::Zero(k, k);
        e(r, c) = 1.0;
        LeggedOperator w(std::move(e), a.legs());
        Matrix col = map_.apply(symmetrize_tail(map_.adjoint(w))).matrix();
        if (relation_ == Relation::sub) col(r, c) += 1.0;
        t.col(c * k + r) = Eigen::Map<const Eigen::VectorXcd>(col.data(), dim);
      }
    }
    lu_.compute(t);
    if (!lu_.isInvertible()) {
      throw NumericalError("sub_extension_feasibility: affine constraint operator is singular");
    }
  }

  // (b, s) -> nearest point of the affine set; s is ignored in the exact case.
  void project(Matrix& b, Matrix& s) const {
    LeggedOperator bs = symmetrize_tail(LeggedOperator(std::move(b), legs_));
    Matrix r = a_.matrix() - map_.apply(bs).matrix();
    if (relation_ == Relation::sub) r -= s;
    const Eigen::Index k = a_.side();
    const Eigen::VectorXcd wv = lu_.solve(Eigen::Map<const Eigen::VectorXcd>(r.data(), k * k));
    const Matrix w = hermitize(Eigen::Map<const Matrix>(wv.data(), k, k));
    const LeggedOperator correction = symmetrize_tail(map_.adjoint(LeggedOperator(w, a_.legs())));
    b = hermitize(bs.matrix() + correction.matrix());
    if (relation_ == Relation::sub) s += w;
  }

 private:
  std::vector<int> legs_;
  LeggedOperator a_;
  MarginalMap map_;
  Relation relation_;
  Eigen::FullPivLU<Matrix> lu_;
};

FeasibilityReport trivially_feasible(LeggedOperator witness, int l, Relation relation) {
  FeasibilityReport out;
  out.level = l;
  out.relation = relation;
  out.verdict = Verdict::feasible;
  out.witness = std::move(witness);
  return out;
}

}  // namespace

FeasibilityReport sub_extension_feasibility(const LeggedOperator& a, const Functional& rho, int l,
                                            const SolverOptions& opts) {
  if (a.num_legs() != 2 || a.legs()[1] != rho.dim()) {
    throw InvalidArgument("sub_extension_feasibility: expected legs [m, " +
                          std::to_string(rho.dim()) + "]");
  }
  if (l < 1 || l > kMaxSymmetricDegree) {
    throw InvalidArgument("sub_extension_feasibility: level " + std::to_string(l) +
                          " outside 1.." + std::to_string(kMaxSymmetricDegree));
  }
  if (!(opts.tol > 0.0) || opts.max_iterations < 1 || opts.plateau_window < 1) {
    throw InvalidArgument("sub_extension_feasibility: invalid solver options");
  }
  require_hermitian(a, "sub_extension_feasibility");
  if (!is_psd(a)) throw InvalidArgument("sub_extension_feasibility: a is not PSD");

  const int m = a.legs()[0];
  const int n = rho.dim();
  std::vector<int> legs(1 + l, n);
  legs[0] = m;

  if (a.max_abs() == 0.0) return trivially_feasible(LeggedOperator::zero(legs), l, opts.relation);
  if (l == 1) return trivially_feasible(a, l, opts.relation);

  const AffineProjector affine(a, rho, l, opts.relation);
  const bool sub = opts.relation == Relation::sub;
  const double scale = a.matrix().norm();
  const double validation_tol = 10.0 * opts.tol;

  FeasibilityReport out;
  out.level = l;
  out.relation = opts.relation;
  const Eigen::Index side = LeggedOperator::zero(legs).side();
  const Eigen::Index k = a.side();

  // Current point (after the affine projection) and Dykstra increments per set.
  Matrix b = Matrix::Zero(side, side), s = Matrix::Zero(k, k);
  Matrix inc_b1 = Matrix::Zero(side, side);
  Matrix inc_s2 = Matrix::Zero(k, k);
  Matrix inc_b3 = Matrix::Zero(side, side), inc_s3 = Matrix::Zero(k, k);
  auto& history = out.residual_history;
  history.reserve(static_cast<std::size_t>(std::min(opts.max_iterations, 4096)));

  for (int it = 1; it <= opts.max_iterations; ++it) {
    Matrix y = b + inc_b1;
    const Matrix b1 = psd_project_unchecked(hermitize(y));
    inc_b1 = y - b1;

    Matrix s2 = s;
    if (sub) {
      Matrix ys = s + inc_s2;
      s2 = psd_project_unchecked(hermitize(ys));
      inc_s2 = ys - s2;
    }

    Matrix b3 = b1 + inc_b3;
    Matrix s3 = s2 + inc_s3;
    const Matrix yb = b3, ys = s3;
    affine.project(b3, s3);
    inc_b3 = yb - b3;
    inc_s3 = ys - s3;

    const double moved = std::sqrt((b3 - b).squaredNorm() + (s3 - s).squaredNorm());
    const double gap = std::sqrt((b1 - b3).squaredNorm() + (s2 - s3).squaredNorm());
    const double residual = (moved + gap) / scale;
    history.push_back(residual);
    b = std::move(b3);
    s = std::move(s3);
    out.iterations = it;
    out.final_residual = residual;

    if (residual < opts.tol) {
      LeggedOperator witness(hermitize(b1), legs);
      if (is_extension(witness, a, rho, opts.relation, validation_tol)) {
        out.verdict = Verdict::feasible;
        out.witness = std::move(witness);
        return out;
      }
    } else if (it > opts.plateau_window) {
      const double before = history[it - 1 - opts.plateau_window];
      if (before > 0.0 && std::abs(before - residual) / before < opts.plateau_threshold) {
        out.verdict = Verdict::infeasible_at_tolerance;
        return out;
      }
    }
  }
  out.verdict = Verdict::max_iterations;
  return out;
}

}  // namespace qdf
