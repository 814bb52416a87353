#include "doctest.h"

#include "qdf/error.hpp"
#include "qdf/hierarchy.hpp"
#include "qdf/symmetry.hpp"
#include "support.hpp"

using namespace qdf;
using namespace qdf::testing;

namespace {

// (a (x) b^{(x)l})_{l=0..L}.
SymSequence product_sequence(const Matrix& a, const Matrix& b, const Functional& rho, int L) {
  std::vector<LeggedOperator> xs;
  Matrix acc = a;
  std::vector<int> legs{static_cast<int>(a.rows())};
  for (int l = 0; l <= L; ++l) {
    if (l > 0) {
      acc = kron(acc, b);
      legs.push_back(static_cast<int>(b.rows()));
    }
    xs.push_back(op(acc, legs));
  }
  return {static_cast<int>(a.rows()), static_cast<int>(b.rows()), rho, std::move(xs)};
}

SymSequence add(const SymSequence& x, const SymSequence& y) {
  std::vector<LeggedOperator> xs;
  for (int l = 0; l <= x.length(); ++l) xs.push_back(x[l] + y[l]);
  return {x.m(), x.n(), x.rho(), std::move(xs)};
}

LeggedOperator explicit_witness(const Matrix& p, const Matrix& q, const Functional& rho, int l) {
  Matrix b = p;
  for (int k = 0; k < l; ++k) b = kron(b, q);
  std::vector<int> legs(1 + l, static_cast<int>(q.rows()));
  legs[0] = static_cast<int>(p.rows());
  return op(b / std::pow(rho(q).real(), l - 1), legs);
}

}  // namespace

TEST_CASE("sequence shape checks") {
  const auto rho = Functional::trace(2);
  CHECK_THROWS_AS(SymSequence(1, 2, rho, {}), InvalidArgument);
  CHECK_THROWS_AS(SymSequence(1, 3, rho, {LeggedOperator::identity({1})}), InvalidArgument);
  CHECK_THROWS_AS(SymSequence(1, 2, rho, {LeggedOperator::identity({1}), LeggedOperator::identity({1, 3})}),
                  InvalidArgument);
}

TEST_CASE("validate_k_prefix") {
  Rng rng(21);
  const auto rho = Functional::trace(2);
  const Matrix a = random_psd(2, rng);
  Matrix b = random_psd(2, rng);
  b /= rho(b).real();

  const auto good = product_sequence(a, 0.8 * b, rho, 3);
  CHECK(validate_k_prefix(good).ok);

  const auto bad = product_sequence(a, 1.5 * b, rho, 3);
  const auto r = validate_k_prefix(bad);
  CHECK_FALSE(r.ok);
  CHECK(r.condition == Violation::submartingale);
  CHECK(r.level == 0);

  const auto mix = add(good, product_sequence(random_psd(2, rng), b, rho, 3));
  CHECK(validate_k_prefix(mix).ok);

  // Break symmetry of x_2 while keeping it PSD.
  auto xs = good.entries();
  xs[2] = op(kron(a, kron(b, random_psd(2, rng))), {2, 2, 2});
  const auto asym = validate_k_prefix(SymSequence(2, 2, rho, xs));
  CHECK(asym.condition == Violation::not_symmetric);
  CHECK(asym.level == 2);

  xs = good.entries();
  xs[1] = xs[1] * -1.0;
  const auto neg = validate_k_prefix(SymSequence(2, 2, rho, xs));
  CHECK(neg.condition == Violation::not_psd);
  CHECK(neg.level == 1);
}

TEST_CASE("marginal map adjoint") {
  Rng rng(22);
  const Functional rho(random_psd(2, rng) + 0.2 * Matrix::Identity(2, 2));
  for (int l = 1; l <= 4; ++l) {
    const MarginalMap phi(2, rho, l);
    std::vector<int> legs(1 + l, 2);
    const auto side = static_cast<int>(std::pow(2, 1 + l));
    const auto b = op(random_matrix(side, side, rng), legs);
    const auto y = op(random_matrix(4, 4, rng), {2, 2});
    const Complex lhs = hs_inner(phi.apply(b), y);
    const Complex rhs = hs_inner(b, phi.adjoint(y));
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(lhs)));
    const double scale = std::pow((rho.density() * rho.density()).trace().real(), l - 1);
    CHECK(phi.adjoint_scale() == doctest::Approx(scale).epsilon(1e-14));
    CHECK(max_abs_diff(phi.apply(phi.adjoint(y)).matrix(), scale * y.matrix()) < 1e-12);
  }
  CHECK_THROWS_AS(MarginalMap(2, rho, 0), InvalidArgument);
}

TEST_CASE("feasibility of products") {
  Rng rng(23);
  const auto rho = Functional::trace(2);
  const Matrix p = random_psd(2, rng), q = random_psd(2, rng);
  const auto a = op(kron(p, q), {2, 2});
  for (int l = 1; l <= 4; ++l) {
    CHECK(is_extension(explicit_witness(p, q, rho, l), a, rho, Relation::exact, 1e-9));
    const auto rep = sub_extension_feasibility(a, rho, l);
    REQUIRE(rep.verdict == Verdict::feasible);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.final_residual < 1e-7);
    CHECK(is_extension(*rep.witness, a, rho, Relation::exact, 1e-6));
    // Lower levels are certified by contracting the witness.
    for (int lower = 1; lower < l; ++lower) {
      const auto c = compress_chain(*rep.witness, rho, lower);
      CHECK(is_extension(c, a, rho, Relation::exact, 1e-6));
    }
  }
}

TEST_CASE("maximally mixed with normalized trace") {
  const auto rho = Functional::normalized_trace(2);
  const auto a = LeggedOperator::identity({2, 2});
  const auto rep = sub_extension_feasibility(a, rho, 3);
  REQUIRE(rep.verdict == Verdict::feasible);
  CHECK(max_abs_diff(rep.witness->matrix(), Matrix::Identity(16, 16)) < 1e-6);
}

TEST_CASE("Bell projector has no 2-extension") {
  const auto rho = Functional::trace(2);
  const auto bell = bell_projector();
  const auto rep = sub_extension_feasibility(bell, rho, 2);
  CHECK(rep.verdict == Verdict::infeasible_at_tolerance);
  CHECK_FALSE(rep.witness.has_value());
  CHECK(rep.final_residual > 1e-3);

  // Independent search over all swap-invariant PSD b stays well away from a.
  Rng rng(24);
  CHECK(two_extension_defect(bell.matrix(), 4, 3000, rng) > 1e-2);

  const auto sep = separability_verdict(bell, rho, 3);
  CHECK(sep.verdict == SeparabilityVerdict::entangled_evidence);
  CHECK(sep.decisive_level == 2);
  REQUIRE(sep.ppt_min_eig.has_value());
  CHECK(*sep.ppt_min_eig == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("sub relation is satisfied by the zero operator") {
  const auto rho = Functional::trace(2);
  SolverOptions opts;
  opts.relation = Relation::sub;
  const auto rep = sub_extension_feasibility(bell_projector(), rho, 2, opts);
  REQUIRE(rep.verdict == Verdict::feasible);
  CHECK(is_extension(*rep.witness, bell_projector(), rho, Relation::sub, 1e-6));
  CHECK(is_extension(LeggedOperator::zero({2, 2, 2}), bell_projector(), rho, Relation::sub, 1e-9));
}

TEST_CASE("feasibility edge cases and errors") {
  const auto rho = Functional::trace(2);
  const auto zero = sub_extension_feasibility(LeggedOperator::zero({2, 2}), rho, 3);
  CHECK(zero.verdict == Verdict::feasible);
  const auto one = sub_extension_feasibility(bell_projector(), rho, 1);
  CHECK(one.verdict == Verdict::feasible);

  Matrix neg = Matrix::Identity(4, 4);
  neg(0, 0) = -1.0;
  CHECK_THROWS_AS(sub_extension_feasibility(op(neg, {2, 2}), rho, 2), InvalidArgument);
  CHECK_THROWS_AS(sub_extension_feasibility(bell_projector(), rho, 0), InvalidArgument);
  CHECK_THROWS_AS(sub_extension_feasibility(bell_projector(), rho, 9), InvalidArgument);
  CHECK_THROWS_AS(sub_extension_feasibility(bell_projector(), Functional::trace(3), 2), InvalidArgument);
  CHECK_THROWS_AS(separability_verdict(bell_projector(), rho, 1), InvalidArgument);
}

TEST_CASE("separable mixtures") {
  Rng rng(25);
  const auto rho = Functional::trace(2);
  const Matrix p1 = random_psd(2, rng), q1 = random_psd(2, rng);
  const Matrix p2 = random_psd(2, rng), q2 = random_psd(2, rng);
  const auto a = op(0.5 * (kron(p1, q1) + kron(p2, q2)), {2, 2});
  const auto rep = separability_verdict(a, rho, 4);
  CHECK(rep.verdict == SeparabilityVerdict::separable_evidence);
  CHECK(rep.levels.size() == 3);
  CHECK(*rep.ppt_min_eig >= 0.0);
}

TEST_CASE("ppt_min_eig") {
  CHECK(ppt_min_eig(LeggedOperator::identity({2, 2}) * 0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ppt_min_eig(bell_projector()) == doctest::Approx(-0.5).epsilon(1e-12));
  // Werner: least PT eigenvalue is (1 - 3p)/4 from p = 0 up, vanishing at p = 1/3.
  for (double p = 0.0; p <= 1.0; p += 0.125) {
    const auto w = werner_state(p);
    CHECK(ppt_min_eig(w) == doctest::Approx(reference_min_eig(reference_partial_transpose(w.matrix(), 2, 2))).epsilon(1e-10));
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (reference_min_eig(reference_partial_transpose(werner_state(mid).matrix(), 2, 2)) >= 0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK_THROWS_AS(werner_state(1.5), InvalidArgument);
  CHECK_THROWS_AS(ppt_min_eig(LeggedOperator::identity({4})), InvalidArgument);
}

TEST_CASE("compress_chain") {
  Rng rng(26);
  const Functional rho(random_psd(2, rng) + 0.2 * Matrix::Identity(2, 2));
  const Matrix a = random_psd(2, rng), b = random_psd(2, rng);
  const auto x3 = product_sequence(a, b, rho, 3)[3];
  const double rb = rho(b).real();
  CHECK(max_abs_diff(compress_chain(x3, rho, 1).matrix(), rb * rb * kron(a, b)) < 1e-12);
  CHECK(max_abs_diff(compress_chain(x3, rho, 3).matrix(), x3.matrix()) == 0.0);
  CHECK_THROWS_AS(compress_chain(x3, rho, 4), InvalidArgument);

  // S_3-invariant input gives S_2-invariant output.
  const auto sym = symmetrize_tail(op(random_psd(16, rng), {2, 2, 2, 2}));
  const auto c = compress_chain(sym, rho, 2);
  CHECK(max_abs_diff(symmetrize_tail(c).matrix(), c.matrix()) < 1e-12);
}

TEST_CASE("product_probe") {
  Rng rng(27);
  const auto rho = Functional::trace(2);
  const Matrix a = random_psd(2, rng), b = random_psd(2, rng);
  const auto probe = product_probe(product_sequence(a, b, rho, 3));
  CHECK(probe.is_product);
  CHECK(max_abs_diff(probe.a.matrix(), a) < 1e-14);
  // Gauge fixed by the trace of x_0.
  CHECK(max_abs_diff(probe.b.matrix(), b) < 1e-12);

  const auto mix = add(product_sequence(a, b, rho, 3), product_sequence(random_psd(2, rng), random_psd(2, rng), rho, 3));
  const auto p2 = product_probe(mix);
  CHECK_FALSE(p2.is_product);
  CHECK(p2.worst_relative_residual > 1e-3);

  std::vector<LeggedOperator> xs{op(a, {2}), LeggedOperator::zero({2, 2}), LeggedOperator::zero({2, 2, 2})};
  const auto p3 = product_probe(SymSequence(2, 2, rho, xs));
  CHECK(p3.is_product);
  CHECK(p3.b.max_abs() == 0.0);

  CHECK_THROWS_AS(product_probe(SymSequence(2, 2, rho, {op(a, {2})})), InvalidArgument);
}
