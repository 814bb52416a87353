#include "qdf/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdf/error.hpp"
#include "qdf/symmetry.hpp"

namespace qdf {
namespace {

std::vector<int> sequence_legs(int m, int n, int l) {
  std::vector<int> legs(1 + l, n);
  legs[0] = m;
  return legs;
}

std::string legs_str(const std::vector<int>& legs) {
  std::string s = "[";
  for (std::size_t i = 0; i < legs.size(); ++i) s += (i ? "," : "") + std::to_string(legs[i]);
  return s + "]";
}

double symmetry_defect(const LeggedOperator& x) {
  if (x.num_legs() <= 2) return 0.0;
  return (symmetrize_tail(x).matrix() - x.matrix()).cwiseAbs().maxCoeff();
}

// Distance below the is_psd threshold; positive means violated.
double psd_shortfall(const LeggedOperator& x, double tol) {
  const double threshold = -tol * static_cast<double>(x.side()) * std::max(1.0, x.max_abs());
  return threshold - min_eigenvalue(x);
}

void require_bipartite(const LeggedOperator& a, const Functional& rho, const char* what) {
  if (a.num_legs() != 2 || a.legs()[1] != rho.dim()) {
    throw InvalidArgument(std::string(what) + ": expected legs [m, " + std::to_string(rho.dim()) +
                          "], got " + legs_str(a.legs()));
  }
}

}  // namespace

SymSequence::SymSequence(int m, int n, Functional rho, std::vector<LeggedOperator> entries)
    : m_(m), n_(n), rho_(std::move(rho)), entries_(std::move(entries)) {
  if (m <= 0 || n <= 0) throw InvalidArgument("SymSequence: m and n must be positive");
  if (rho_.dim() != n) {
    throw InvalidArgument("SymSequence: functional acts on M_" + std::to_string(rho_.dim()) +
                          ", sequence legs have n = " + std::to_string(n));
  }
  if (entries_.empty()) throw InvalidArgument("SymSequence: empty sequence");
  for (std::size_t l = 0; l < entries_.size(); ++l) {
    const auto expected = sequence_legs(m, n, static_cast<int>(l));
    if (entries_[l].legs() != expected) {
      throw InvalidArgument("SymSequence: entry " + std::to_string(l) + " has legs " +
                            legs_str(entries_[l].legs()) + ", expected " + legs_str(expected));
    }
  }
}

const char* to_string(Violation v) {
  switch (v) {
    case Violation::none: return "none";
    case Violation::not_hermitian: return "not_hermitian";
    case Violation::not_psd: return "not_psd";
    case Violation::not_symmetric: return "not_symmetric";
    case Violation::submartingale: return "submartingale";
  }
  return "unknown";
}

const char* to_string(Relation r) { return r == Relation::sub ? "sub" : "exact"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible: return "feasible";
    case Verdict::infeasible_at_tolerance: return "infeasible_at_tolerance";
    case Verdict::max_iterations: return "max_iterations";
  }
  return "unknown";
}

const char* to_string(SeparabilityVerdict v) {
  switch (v) {
    case SeparabilityVerdict::separable_evidence: return "separable_evidence";
    case SeparabilityVerdict::entangled_evidence: return "entangled_evidence";
    case SeparabilityVerdict::undetermined: return "undetermined";
  }
  return "unknown";
}

ValidationReport validate_k_prefix(const SymSequence& seq, double tol) {
  auto fail = [](Violation c, int level, double magnitude, std::string msg) {
    return ValidationReport{false, c, level, magnitude, std::move(msg)};
  };
  const auto& xs = seq.entries();
  for (int l = 0; l <= seq.length(); ++l) {
    const LeggedOperator& x = xs[l];
    if (!x.is_hermitian()) {
      const double defect = (x.matrix() - x.matrix().adjoint()).cwiseAbs().maxCoeff();
      return fail(Violation::not_hermitian, l, defect,
                  "x_" + std::to_string(l) + " is not Hermitian");
    }
    if (const double s = psd_shortfall(x, tol); s > 0.0) {
      return fail(Violation::not_psd, l, s, "x_" + std::to_string(l) + " is not PSD");
    }
    if (const double d = symmetry_defect(x); d > tol * std::max(1.0, x.max_abs())) {
      return fail(Violation::not_symmetric, l, d,
                  "x_" + std::to_string(l) + " is not invariant under permutations of its n-legs");
    }
    if (l == 0) continue;
    const LeggedOperator gap = xs[l - 1] - contract_trailing(x, seq.rho(), 1);
    if (const double s = psd_shortfall(gap, tol); s > 0.0) {
      return fail(Violation::submartingale, l - 1, s,
                  "contraction of x_" + std::to_string(l) + " exceeds x_" + std::to_string(l - 1));
    }
  }
  return {};
}

MarginalMap::MarginalMap(int m, const Functional& rho, int l)
    : m_(m), n_(rho.dim()), l_(l), rho_(rho) {
  if (m <= 0) throw InvalidArgument("MarginalMap: m must be positive");
  if (l < 1) throw InvalidArgument("MarginalMap: level must be at least 1");
  const LeggedOperator d(rho.density(), {n_});
  tail_ = tensor_power(d, l - 1);
  scale_ = std::pow(rho.density().squaredNorm(), l - 1);
}

LeggedOperator MarginalMap::apply(const LeggedOperator& b) const {
  if (b.legs() != sequence_legs(m_, n_, l_)) {
    throw InvalidArgument("MarginalMap::apply: expected legs " +
                          legs_str(sequence_legs(m_, n_, l_)) + ", got " + legs_str(b.legs()));
  }
  return contract_trailing(b, rho_, l_ - 1);
}

LeggedOperator MarginalMap::adjoint(const LeggedOperator& y) const {
  if (y.legs() != sequence_legs(m_, n_, 1)) {
    throw InvalidArgument("MarginalMap::adjoint: expected legs " +
                          legs_str(sequence_legs(m_, n_, 1)) + ", got " + legs_str(y.legs()));
  }
  return l_ == 1 ? y : tensor(y, tail_);
}

bool is_extension(const LeggedOperator& b, const LeggedOperator& a, const Functional& rho,
                  Relation relation, double tol) {
  require_bipartite(a, rho, "is_extension");
  const int m = a.legs()[0];
  const int l = static_cast<int>(b.num_legs()) - 1;
  if (l < 1 || b.legs() != sequence_legs(m, rho.dim(), l)) return false;
  if (!b.is_hermitian() || !is_psd(b, tol)) return false;
  if (symmetry_defect(b) > tol * std::max(1.0, b.max_abs())) return false;
  const LeggedOperator marginal = contract_trailing(b, rho, l - 1);
  if (relation == Relation::sub) return loewner_leq(marginal, a, tol);
  const double defect = (marginal.matrix() - a.matrix()).cwiseAbs().maxCoeff();
  return defect <= tol * std::max(1.0, a.max_abs());
}

SeparabilityReport separability_verdict(const LeggedOperator& a, const Functional& rho, int max_l,
                                        const SolverOptions& opts) {
  require_bipartite(a, rho, "separability_verdict");
  if (max_l < 2) throw InvalidArgument("separability_verdict: max_l must be at least 2");
  SeparabilityReport out;
  const int m = a.legs()[0], n = a.legs()[1];
  if ((m == 2 && n == 2) || (m == 2 && n == 3) || (m == 3 && n == 2)) {
    out.ppt_min_eig = ppt_min_eig(a);
  }
  bool stalled = false;
  for (int l = 2; l <= max_l; ++l) {
    out.levels.push_back(sub_extension_feasibility(a, rho, l, opts));
    const Verdict v = out.levels.back().verdict;
    if (v == Verdict::infeasible_at_tolerance) {
      out.decisive_level = l;
      out.verdict = SeparabilityVerdict::entangled_evidence;
      return out;
    }
    if (v == Verdict::max_iterations) stalled = true;
  }
  out.verdict = stalled ? SeparabilityVerdict::undetermined : SeparabilityVerdict::separable_evidence;
  return out;
}

LeggedOperator compress_chain(const LeggedOperator& x_k, const Functional& rho, int l) {
  const int k = static_cast<int>(x_k.num_legs()) - 1;
  if (k < 0) throw InvalidArgument("compress_chain: operator has no legs");
  if (l < 0 || l > k) {
    throw InvalidArgument("compress_chain: target level " + std::to_string(l) +
                          " outside 0.." + std::to_string(k));
  }
  return contract_trailing(x_k, rho, k - l);
}

ProductProbe product_probe(const SymSequence& seq, double tol) {
  if (seq.length() < 1) throw InvalidArgument("product_probe: need at least x_0 and x_1");
  const LeggedOperator& x0 = seq[0];
  const Complex norm = x0.trace();
  if (x0.max_abs() == 0.0 || std::abs(norm) == 0.0) {
    throw InvalidArgument("product_probe: x_0 is zero or has zero trace");
  }
  ProductProbe out;
  out.a = x0;
  const LeggedOperator b = contract_legs(seq[1], Functional::trace(seq.m()), {0});
  out.b = b * (1.0 / norm);
  out.is_product = true;
  LeggedOperator model = x0;
  for (int l = 1; l <= seq.length(); ++l) {
    model = tensor(model, out.b);
    const LeggedOperator& x = seq[l];
    const double err = (x.matrix() - model.matrix()).cwiseAbs().maxCoeff();
    const double scale = x.max_abs();
    const double rel = scale > 0.0 ? err / scale : err;
    out.worst_relative_residual = std::max(out.worst_relative_residual, rel);
    if (err > tol * scale) out.is_product = false;
  }
  return out;
}

double ppt_min_eig(const LeggedOperator& a) {
  if (a.num_legs() != 2) {
    throw InvalidArgument("ppt_min_eig: expected a bipartite operator, got legs " +
                          legs_str(a.legs()));
  }
  require_hermitian(a, "ppt_min_eig");
  return min_eigenvalue(partial_transpose(a, 1));
}

LeggedOperator werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("werner_state: p must lie in [0, 1]");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  Matrix w = p * (psi * psi.adjoint()) + (1.0 - p) * 0.25 * Matrix::Identity(4, 4);
  return {std::move(w), {2, 2}};
}

LeggedOperator bell_projector() {
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return {phi * phi.adjoint(), {2, 2}};
}

}  // namespace qdf
