#include "doctest.h"

#include "qdf/error.hpp"
#include "qdf/symmetry.hpp"
#include "support.hpp"

using namespace qdf;
using namespace qdf::testing;

namespace {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Partition P(std::vector<int> parts) { return Partition(std::move(parts)); }

}  // namespace

TEST_CASE("permute_legs and symmetrize on small products") {
  Rng rng(11);
  const Matrix a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng);
  const auto ab = op(kron(a, b), {3, 3});
  const LegPermutation swap({1, 0});
  CHECK(max_abs_diff(permute_legs(ab, swap).matrix(), kron(b, a)) < 1e-14);
  CHECK(max_abs_diff(permute_legs(ab, LegPermutation::identity(2)).matrix(), ab.matrix()) == 0.0);

  const auto s = symmetrize(ab, {0, 2});
  CHECK(max_abs_diff(s.matrix(), 0.5 * (kron(a, b) + kron(b, a))) < 1e-14);
  CHECK(max_abs_diff(symmetrize(s, {0, 2}).matrix(), s.matrix()) <= 1e-12);

  // Symmetrizing the trailing legs leaves the first alone.
  const Matrix c = random_matrix(2, 2, rng);
  const auto x = op(kron(c, kron(a, b)), {2, 3, 3});
  CHECK(max_abs_diff(symmetrize_tail(x).matrix(), kron(c, s.matrix())) < 1e-13);

  CHECK_THROWS_AS(LegPermutation({0, 0}), InvalidArgument);
  CHECK_THROWS_AS(permute_legs(op(kron(c, a), {2, 3}), swap), InvalidArgument);
}

TEST_CASE("slot permutations form a representation") {
  Rng rng(12);
  const auto& perms = all_permutations(3);
  CHECK(perms.size() == 6);
  const Matrix x = random_matrix(27, 27, rng);
  for (const auto& s : perms) {
    for (const auto& t : perms) {
      const Matrix us = slot_permutation_matrix(3, s), ut = slot_permutation_matrix(3, t);
      // Matrices compose in the opposite order to the operator action below.
      CHECK(max_abs_diff(slot_permutation_matrix(3, compose(s, t)), ut * us) == 0.0);
      // The operator action: compose(s, t) acts as t first, then s.
      const auto lhs = permute_legs(op(x, {3, 3, 3}), compose(s, t));
      const auto rhs = permute_legs(permute_legs(op(x, {3, 3, 3}), t), s);
      CHECK(max_abs_diff(lhs.matrix(), rhs.matrix()) == 0.0);
    }
  }
  CHECK(max_abs_diff(slot_permutation_matrix(2, LegPermutation({1, 0})), trailing_swap(1, 2)) == 0.0);
}

TEST_CASE("characters") {
  for (int l = 1; l <= 6; ++l) {
    CHECK(sym_group_character(P({l}), P({l})) == 1);
  }
  CHECK(sym_group_character(P({3}), P({2, 1})) == 1);
  CHECK(sym_group_character(P({1, 1, 1}), P({2, 1})) == -1);
  CHECK(sym_group_character(P({2, 1}), P({3})) == -1);
  CHECK(sym_group_character(P({2, 1}), P({1, 1, 1})) == 2);
}

TEST_CASE("character orthogonality and hook lengths") {
  for (int l = 1; l <= 6; ++l) {
    const auto parts = partitions_of(l);
    const auto& perms = all_permutations(l);
    std::int64_t factorial = 1;
    for (int i = 2; i <= l; ++i) factorial *= i;
    for (const auto& lam : parts) {
      CHECK(sym_group_character(lam, P(std::vector<int>(l, 1))) == hook_length_dimension(lam));
      for (const auto& mu : parts) {
        std::int64_t sum = 0;
        for (const auto& s : perms) {
          sum += sym_group_character(lam, s.cycle_type()) * sym_group_character(mu, s.cycle_type());
        }
        CHECK(sum == (lam == mu ? factorial : 0));
      }
    }
  }
}

TEST_CASE("isotypic projectors") {
  Rng rng(13);
  for (int n : {2, 3}) {
    for (int l = 1; l <= 3; ++l) {
      const Eigen::Index side = static_cast<Eigen::Index>(std::pow(n, l));
      Matrix total = Matrix::Zero(side, side);
      const Matrix t = random_matrix(n, n, rng);
      Matrix tl = Matrix::Identity(1, 1);
      for (int k = 0; k < l; ++k) tl = kron(tl, t);
      const double tnorm = std::pow(t.norm(), l);
      for (const auto& lam : partitions_of(l)) {
        const Matrix p = isotypic_projector(n, lam).matrix();
        total += p;
        CHECK(max_abs_diff(p * p, p) < 1e-10);
        CHECK(max_abs_diff(p, p.adjoint()) < 1e-10);
        for (const auto& s : all_permutations(l)) {
          const Matrix u = slot_permutation_matrix(n, s);
          CHECK(max_abs_diff(p * u, u * p) < 1e-10);
        }
        CHECK(max_abs_diff(p * tl, tl * p) <= 1e-9 * tnorm);
        const std::int64_t rank = reference_rank(p);
        CHECK(rank == weyl_dimension(lam, n) * hook_length_dimension(lam) * (lam.length() <= n ? 1 : 0));
      }
      CHECK(max_abs_diff(total, Matrix::Identity(side, side)) < 1e-10);
    }
  }
  // Symmetric and antisymmetric ranks by counting multisets and subsets.
  for (int n : {2, 3, 4}) {
    CHECK(reference_rank(isotypic_projector(n, P({2})).matrix()) == binomial(n + 1, 2));
    CHECK(reference_rank(isotypic_projector(n, P({1, 1})).matrix()) == binomial(n, 2));
    CHECK(reference_rank(isotypic_projector(n, P({3})).matrix()) == binomial(n + 2, 3));
    CHECK(reference_rank(isotypic_projector(n, P({1, 1, 1})).matrix()) == binomial(n, 3));
  }
  CHECK_THROWS_AS(isotypic_projector(2, P({9})), InvalidArgument);
}

TEST_CASE("Schur-Weyl tables") {
  auto check = [](int n, int l, std::vector<std::tuple<std::vector<int>, int, int>> want) {
    const auto table = schur_weyl_table(n, l);
    REQUIRE(table.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(table[i].lambda == P(std::get<0>(want[i])));
      CHECK(table[i].block_dim == std::get<1>(want[i]));
      CHECK(table[i].multiplicity == std::get<2>(want[i]));
    }
  };
  check(2, 2, {{{2}, 3, 1}, {{1, 1}, 1, 1}});
  check(2, 3, {{{3}, 4, 1}, {{2, 1}, 2, 2}});
  check(3, 1, {{{1}, 3, 1}});

  for (int n = 1; n <= 3; ++n) {
    for (int l = 1; l <= 4; ++l) {
      std::int64_t total = 0;
      for (const auto& b : schur_weyl_table(n, l)) total += b.block_dim * b.multiplicity;
      CHECK(total == static_cast<std::int64_t>(std::pow(n, l)));
    }
  }
}

TEST_CASE("irreducible copies") {
  Rng rng(14);
  const int n = 2;
  const Partition lam = P({2, 1});
  const Matrix p = isotypic_projector(n, lam).matrix();
  const Matrix t = random_matrix(n, n, rng);
  const Matrix t3 = kron(t, kron(t, t));
  const auto tableaux = standard_tableaux(lam);
  REQUIRE(tableaux.size() == 2);
  Matrix first;
  for (int copy = 0; copy < 2; ++copy) {
    const Matrix b = irrep_copy_basis(n, lam, copy);
    REQUIRE(b.cols() == 2);
    CHECK(max_abs_diff(b.adjoint() * b, Matrix::Identity(2, 2)) < 1e-10);
    CHECK(max_abs_diff(p * b, b) < 1e-10);
    // Each copy is t^{(x)3}-invariant, and carries the same matrix representation.
    CHECK(max_abs_diff(t3 * b, b * (b.adjoint() * t3 * b)) < 1e-9 * std::pow(t.norm(), 3));
    const Matrix rep = b.adjoint() * t3 * b;
    if (copy == 0) first = rep;
    else CHECK(max_abs_diff(rep, first) < 1e-9 * std::pow(t.norm(), 3));
  }
  CHECK_THROWS_AS(irrep_copy_basis(n, lam, 2), InvalidArgument);
}
