#pragma once

// Symmetric-group action on tensor legs and the Schur-Weyl decomposition of
// (C^n)^{(x) l} into isotypic blocks.

#include <cstdint>
#include <vector>

#include "qdf/linalg.hpp"

namespace qdf {

// Full enumeration of S_l is used everywhere; beyond this, operations throw.
inline constexpr int kMaxSymmetricDegree = 8;
// Largest (C^n)^{(x) l} side for which projectors are materialized.
inline constexpr Eigen::Index kMaxProjectorSide = 1024;

// Weakly decreasing positive parts. The empty partition has size 0.
class Partition {
 public:
  Partition() = default;
  // Throws InvalidArgument unless parts are positive and weakly decreasing.
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int size() const;
  int length() const { return static_cast<int>(parts_.size()); }
  int operator[](int i) const { return i < length() ? parts_[i] : 0; }

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

// All partitions of l with at most max_parts parts (max_parts <= 0: no bound),
// in reverse lexicographic order: (l), (l-1,1), ...
std::vector<Partition> partitions_of(int l, int max_parts = 0);

// A bijection of {0, ..., l-1}.
//
// Acting on l tensor legs: sigma . (x_0 (x) ... (x) x_{l-1}) = x_{sigma(0)} (x) ... (x) x_{sigma(l-1)}.
// This is a right action, so composition is ordered to make
// act(compose(s, t), x) == act(s, act(t, x)).
class LegPermutation {
 public:
  // Throws InvalidArgument if images is not a permutation.
  explicit LegPermutation(std::vector<int> images);
  static LegPermutation identity(int l);

  const std::vector<int>& images() const { return images_; }
  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int k) const { return images_[k]; }

  LegPermutation inverse() const;
  Partition cycle_type() const;
  int sign() const;

 private:
  std::vector<int> images_;
};

// compose(s, t)(k) = t(s(k)); see LegPermutation.
LegPermutation compose(const LegPermutation& s, const LegPermutation& t);

// All l! permutations in lexicographic order. Throws beyond kMaxSymmetricDegree.
const std::vector<LegPermutation>& all_permutations(int l);

// Contiguous block of legs [first, first + count).
struct LegRange {
  int first = 0;
  int count = 0;
};

// Acts on legs [first_leg, first_leg + sigma.size()); those legs must share
// one dimension. first_leg < 0 selects the trailing sigma.size() legs, which
// fixes a leading m-leg when one is present.
LeggedOperator permute_legs(const LeggedOperator& x, const LegPermutation& sigma,
                            int first_leg = -1);

// (1/l!) sum_sigma sigma . x over the legs in `which`.
LeggedOperator symmetrize(const LeggedOperator& x, LegRange which);
// Symmetrizes every leg after the first; the layout of sequence entries [m, n, ..., n].
LeggedOperator symmetrize_tail(const LeggedOperator& x);

// chi_lambda at the class with the given cycle type (Murnaghan-Nakayama).
std::int64_t sym_group_character(const Partition& lambda, const Partition& cycle_type);
// f^lambda by the hook-length formula; independent of the character recursion.
std::int64_t hook_length_dimension(const Partition& lambda);
// dim of the U(n) irrep with highest weight lambda (Weyl dimension formula).
std::int64_t weyl_dimension(const Partition& lambda, int n);

// The permutation operator U_sigma on (C^n)^{(x) l}: slot k moves to slot sigma(k).
// sigma -> U_sigma is a homomorphism, and U_sigma x U_sigma* = sigma^{-1} . x.
Matrix slot_permutation_matrix(int n, const LegPermutation& sigma);

// P_lambda = (d_lambda / l!) sum_sigma chi_lambda(sigma) U_sigma on legs [n]*l.
// Zero when lambda has more than n parts.
LeggedOperator isotypic_projector(int n, const Partition& lambda);

// Orthonormal basis of range(P_lambda): Gram-Schmidt over the columns of
// P_lambda in standard-basis order. Zero columns when P_lambda == 0.
Matrix isotypic_basis(int n, const Partition& lambda);

// Standard Young tableaux of shape lambda, each as row-major box entries.
std::vector<std::vector<int>> standard_tableaux(const Partition& lambda);

// Orthonormal basis of one irreducible U(n)-copy inside range(P_lambda).
// Copy 0 is the range of the Young symmetrizer of the row-reading tableau;
// copy k is its image under the slot permutation carrying that tableau to the
// k-th standard tableau. Copies are invariant under every t^{(x) l}.
Matrix irrep_copy_basis(int n, const Partition& lambda, int copy);

struct SchurWeylBlock {
  Partition lambda;
  std::int64_t block_dim = 0;     // dim of the U(n) irrep
  std::int64_t multiplicity = 0;  // rank(P_lambda) / block_dim
};

// One entry per lambda |- l with nonzero projector.
std::vector<SchurWeylBlock> schur_weyl_table(int n, int l);

}  // namespace qdf
