#pragma once

// Symmetric (sub-)extensions of bipartite positive operators, sub-martingale
// sequence prefixes and the finite-level separability verdict built on them.

#include <optional>
#include <string>
#include <vector>

#include "qdf/linalg.hpp"

namespace qdf {

// Finite prefix (x_0, ..., x_L) with x_l on legs [m, n, ..., n] (l copies of n).
class SymSequence {
 public:
  // Throws InvalidArgument on a leg-shape mismatch or when rho does not act on M_n.
  SymSequence(int m, int n, Functional rho, std::vector<LeggedOperator> entries);

  int m() const { return m_; }
  int n() const { return n_; }
  const Functional& rho() const { return rho_; }
  const std::vector<LeggedOperator>& entries() const { return entries_; }
  const LeggedOperator& operator[](int l) const { return entries_.at(l); }
  // L, the highest level present.
  int length() const { return static_cast<int>(entries_.size()) - 1; }

 private:
  int m_;
  int n_;
  Functional rho_;
  std::vector<LeggedOperator> entries_;
};

enum class Violation { none, not_hermitian, not_psd, not_symmetric, submartingale };

const char* to_string(Violation v);

struct ValidationReport {
  bool ok = true;
  Violation condition = Violation::none;
  // Entry index of the first violation; for submartingale, the l of the
  // failing comparison between x_{l+1} and x_l.
  int level = -1;
  double magnitude = 0.0;  // how far past the threshold (eigenvalue or max-abs defect)
  std::string message;
};

// Checks, level by level: x_l Hermitian, PSD, invariant under permutations of
// its n-legs, then (id (x) rho)(x_{l+1}) <= x_l on the last leg. Reports the
// first failure. Tolerances follow is_psd.
ValidationReport validate_k_prefix(const SymSequence& seq, double tol = kDefaultPsdTol);

// The contraction Phi(b) = (id_m (x) id_n (x) rho^{(x)(l-1)})(b) from legs
// [m, n^l] down to [m, n], with its Hilbert-Schmidt adjoint
// Phi*(y) = y (x) D^{(x)(l-1)}; Phi(Phi*(y)) = trace(D^2)^{l-1} y.
class MarginalMap {
 public:
  MarginalMap(int m, const Functional& rho, int l);

  LeggedOperator apply(const LeggedOperator& b) const;
  LeggedOperator adjoint(const LeggedOperator& y) const;
  double adjoint_scale() const { return scale_; }
  int level() const { return l_; }

 private:
  int m_;
  int n_;
  int l_;
  Functional rho_;
  LeggedOperator tail_;  // D^{(x)(l-1)}
  double scale_;
};

// sub:   Phi(b) <= a  (b = 0 always qualifies)
// exact: Phi(b) == a  (symmetric extension)
enum class Relation { sub, exact };

const char* to_string(Relation r);

// b on legs [m, n^l] is PSD, S_l-invariant on its n-legs and satisfies the
// relation against a, all at the is_psd-style tolerance tol.
bool is_extension(const LeggedOperator& b, const LeggedOperator& a, const Functional& rho,
                  Relation relation, double tol);

struct SolverOptions {
  double tol = 1e-7;
  int max_iterations = 20000;
  int plateau_window = 500;
  double plateau_threshold = 1e-3;
  Relation relation = Relation::exact;
};

enum class Verdict { feasible, infeasible_at_tolerance, max_iterations };

const char* to_string(Verdict v);

// `infeasible_at_tolerance` means the Dykstra residual stopped improving above
// tol. It is a numerical judgement, not a certificate: no separating
// functional is produced.
struct FeasibilityReport {
  int level = 0;
  Relation relation = Relation::exact;
  Verdict verdict = Verdict::max_iterations;
  std::optional<LeggedOperator> witness;
  double final_residual = 0.0;
  std::vector<double> residual_history;
  int iterations = 0;
};

// Searches for an l-(sub-)extension of a (legs [m, n]) by Dykstra's
// alternating projections on (b, s) over {b PSD}, {s PSD} and
// {b S_l-invariant, Phi(b) + s = a}. With Relation::exact the slack s is
// pinned to zero. The residual is (distance moved per cycle + distance between
// the PSD and affine iterates) / ||a||_F. A feasible verdict is only issued
// once the witness passes is_extension at 10 * tol.
//
// Throws InvalidArgument if a is not PSD, if l < 1 or l > kMaxSymmetricDegree.
FeasibilityReport sub_extension_feasibility(const LeggedOperator& a, const Functional& rho,
                                            int l, const SolverOptions& opts = {});

enum class SeparabilityVerdict { separable_evidence, entangled_evidence, undetermined };

const char* to_string(SeparabilityVerdict v);

struct SeparabilityReport {
  SeparabilityVerdict verdict = SeparabilityVerdict::undetermined;
  // First level reported infeasible, when there is one.
  std::optional<int> decisive_level;
  std::vector<FeasibilityReport> levels;
  // Attached for (m, n) in {(2,2), (2,3), (3,2)}, where PPT is exact.
  std::optional<double> ppt_min_eig;
};

// Runs levels 2..max_l (stopping at the first infeasible one, since
// infeasibility at l implies it at every higher level). Any infeasible level
// gives entangled_evidence; all feasible gives separable_evidence (finite-level
// evidence only); otherwise undetermined.
SeparabilityReport separability_verdict(const LeggedOperator& a, const Functional& rho, int max_l,
                                        const SolverOptions& opts = {});

// x_{l,k} = (id_m (x) id_n^{(x)l} (x) rho^{(x)(k-l)})(x_k): legs [m, n^k] -> [m, n^l].
LeggedOperator compress_chain(const LeggedOperator& x_k, const Functional& rho, int l);

struct ProductProbe {
  bool is_product = false;
  LeggedOperator a;  // x_0
  LeggedOperator b;  // (Tr (x) id)(x_1) / Tr(x_0)
  double worst_relative_residual = 0.0;
};

// Detects sequences of the form (a (x) b^{(x)l}). Throws InvalidArgument if
// x_0 == 0 or L < 1.
ProductProbe product_probe(const SymSequence& seq, double tol = 1e-9);

// Least eigenvalue of the partial transpose on the second leg.
double ppt_min_eig(const LeggedOperator& a);

// p |psi-><psi-| + (1 - p) I/4 on 2 (x) 2.
LeggedOperator werner_state(double p);
// |phi+><phi+| on 2 (x) 2.
LeggedOperator bell_projector();

}  // namespace qdf
