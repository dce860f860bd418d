#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nonsing/irreducible.hpp"
#include "oracles.hpp"

using namespace nonsing;

namespace {

MPoly random_poly(const FieldPtr& f, std::uint32_t nvars, std::uint32_t deg,
                  std::mt19937_64& rng, bool homogeneous) {
  const auto monos = monomials_of_degree(nvars, deg, homogeneous);
  std::vector<Term> terms;
  for (const auto& m : monos) {
    const felt c = static_cast<felt>(rng() % f->q());
    if (c != 0) terms.push_back({m, c});
  }
  return MPoly::from_terms(f, nvars, std::move(terms));
}

// Norm form of a linear polynomial over F_{q^3}: the product of its three
// Frobenius conjugates, which is defined over F_q and splits completely over
// the closure.
MPoly norm_form_of_linear(const FieldPtr& base, felt alpha_idx, felt beta_idx) {
  const FieldPtr K = FieldSpec::make(base->p(), base->k() * 3, 1u << 30);
  const auto sigma = [&](felt x) {
    felt y = x;
    for (std::uint32_t i = 0; i < base->k(); ++i) y = K->frobenius(y);
    return y;
  };
  felt alpha = alpha_idx % K->q(), beta = beta_idx % K->q();
  MPoly prod = MPoly::constant(K, 2, 1);
  for (int conj = 0; conj < 3; ++conj) {
    const MPoly lin = MPoly::variable(K, 2, 0) +
                      MPoly::variable(K, 2, 1).scale(alpha) +
                      MPoly::constant(K, 2, beta);
    prod = prod * lin;
    alpha = sigma(alpha);
    beta = sigma(beta);
  }
  // pull the coefficients back down to the base field
  Embedding emb(base, K);
  std::vector<felt> down(K->q(), K->q());
  for (felt a = 0; a < base->q(); ++a) down[emb(a)] = a;
  std::vector<Term> terms;
  for (const auto& t : prod.terms()) {
    REQUIRE(down[t.coeff] != K->q());  // coefficient must lie in F_q
    terms.push_back({t.exps, down[t.coeff]});
  }
  return MPoly::from_terms(base, 2, std::move(terms));
}

}  // namespace

TEST_CASE("is_irreducible_over examples") {
  auto f5 = FieldSpec::make(5, 1);
  auto f7 = FieldSpec::make(7, 1);
  // 2^2 = -1 mod 5, so x0^2 + x1^2 = (x0 + 2 x1)(x0 - 2 x1)
  CHECK_FALSE(is_irreducible_over(MPoly::parse("x0^2 + x1^2", f5, 2), 1));
  CHECK(is_irreducible_over(MPoly::parse("x0^2 + x1^2", f7, 2), 1));
  CHECK(is_irreducible_over(MPoly::parse("x0 + 3*x1", f7, 2), 1));
  CHECK(is_irreducible_over(MPoly::parse("x0*x1 - 1", f7, 2), 1));
  CHECK_FALSE(is_irreducible_over(MPoly::parse("x0^2 + x1^2", f7, 2), 2));
  CHECK_THROWS_AS(is_irreducible_over(MPoly::zero(f7, 2), 1),
                  std::invalid_argument);
}

TEST_CASE("is_absolutely_irreducible examples") {
  auto f5 = FieldSpec::make(5, 1);
  auto f7 = FieldSpec::make(7, 1);
  CHECK(is_absolutely_irreducible(MPoly::parse("x0*x2 - x1^2", f5, 3)));
  // splits over F_49
  CHECK_FALSE(is_absolutely_irreducible(MPoly::parse("x0^2 + x1^2", f7, 2)));
  CHECK(is_absolutely_irreducible(MPoly::parse("x0 + x1 + x2", f7, 3)));
  CHECK_FALSE(is_absolutely_irreducible(MPoly::parse("x0^2 + 2*x0*x1 + x1^2", f7, 2)));
}

TEST_CASE("norm forms are detected as not absolutely irreducible") {
  // these are F_q-irreducible cubics that split over F_{q^3}; they exercise
  // the linear-factor search over the big extension
  for (std::uint32_t q : {7u, 31u}) {
    auto base = FieldSpec::make(q, 1);
    int built = 0;
    for (felt alpha = q; alpha < q + 3; ++alpha) {
      const MPoly N = norm_form_of_linear(base, alpha, alpha + q);
      if (N.degree() != 3) continue;
      ++built;
      CAPTURE(q, N.str());
      REQUIRE_FALSE(is_absolutely_irreducible(N));
      // the all-extensions oracle is only affordable on the small field
      if (q == 7) REQUIRE_FALSE(oracle::absolutely_irreducible(N, false));
    }
    REQUIRE(built > 0);
  }
}

TEST_CASE("fast linear-factor path agrees with exhaustive enumeration") {
  std::mt19937_64 rng(404);
  IrreducibilityOptions fast;
  fast.exhaustive_budget = 0;  // leaves only the fast path for a = 1
  IrreducibilityOptions slow;
  slow.force_exhaustive = true;

  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const auto f = (i % 2 == 0) ? FieldSpec::make(5, 1) : FieldSpec::make(7, 1);
    const std::uint32_t nvars = 2 + i % 2;
    MPoly F = random_poly(f, nvars, 2 + i % 2, rng, false);
    if (F.is_zero() || F.degree() < 2) continue;
    if (i % 3 == 0) {
      // plant a linear factor
      const MPoly A = random_poly(f, nvars, 1, rng, false);
      if (!A.is_zero() && A.degree() == 1) F = A * F;
      if (F.degree() > 4) continue;
    }
    bool fast_result;
    try {
      fast_result = has_factor_of_degree(F, 1, fast);
    } catch (const BudgetExceeded&) {
      continue;  // tiny fields can starve the node search
    }
    const bool slow_result = has_factor_of_degree(F, 1, slow);
    CAPTURE(F.str(), f->designator());
    REQUIRE(fast_result == slow_result);
    ++checked;
  }
  REQUIRE(checked > 200);
}

TEST_CASE("implementation agrees with the all-extensions oracle (sample)") {
  std::mt19937_64 rng(777);
  for (auto fp : {FieldSpec::make(2, 1), FieldSpec::make(3, 1)}) {
    for (int i = 0; i < 150; ++i) {
      const std::uint32_t d = 1 + i % 3;
      const MPoly F = random_poly(fp, 3, d, rng, true);
      if (F.is_zero() || F.degree() != static_cast<int>(d)) continue;
      CAPTURE(fp->designator(), F.str());
      REQUIRE(is_absolutely_irreducible(F) ==
              oracle::absolutely_irreducible(F, true));
    }
  }
}

TEST_CASE("oracle homogeneous restriction is consistent") {
  // factors of forms are forms; spot-check that restricting the oracle's
  // candidate basis does not change verdicts
  std::mt19937_64 rng(31337);
  for (auto fp : {FieldSpec::make(2, 1), FieldSpec::make(3, 1)}) {
    for (int i = 0; i < 40; ++i) {
      const MPoly F = random_poly(fp, 3, 2 + i % 2, rng, true);
      if (F.is_zero() || F.degree() < 2) continue;
      REQUIRE(oracle::absolutely_irreducible(F, true) ==
              oracle::absolutely_irreducible(F, false));
    }
  }
}

TEST_CASE("degree preconditions and budget exhaustion") {
  auto f64 = FieldSpec::make(2, 6);
  auto f7 = FieldSpec::make(7, 1);
  IrreducibilityOptions opts;
  opts.exhaustive_budget = 1000;
  // quadratic candidates over F_64 in 3 variables cannot be enumerated in
  // 1000 steps and have no fast path
  const MPoly q4 = MPoly::parse("x0^4 + x0*x1^3 + x2^4 + x0*x1*x2^2", f64, 3);
  CHECK_THROWS_AS(has_factor_of_degree(q4, 2, opts), BudgetExceeded);

  IrreducibilityOptions small_deg;
  small_deg.max_degree = 3;
  CHECK_THROWS_AS(
      is_absolutely_irreducible(MPoly::parse("x0^4 + x1^4", f7, 2), small_deg),
      std::invalid_argument);
}

TEST_CASE("common factors over the closure") {
  auto f7 = FieldSpec::make(7, 1);
  auto f5 = FieldSpec::make(5, 1);
  const MPoly G = MPoly::parse("x0 + x1", f7, 3);
  const MPoly H = MPoly::parse("x1 + x2", f7, 3);
  CHECK_FALSE(have_common_factor_over_closure(G, H));
  CHECK(have_common_factor_over_closure(G * H, H));
  CHECK(have_common_factor_over_closure(G, G));

  // x0^2 + x1^2 over F_7 shares conjugate factors with itself over F_49 but
  // none with an unrelated conic
  const MPoly C = MPoly::parse("x0^2 + x1^2", f7, 2);
  CHECK(have_common_factor_over_closure(C, C));
  CHECK_FALSE(have_common_factor_over_closure(
      C, MPoly::parse("x0*x1 + 1", f7, 2)));
  // a pair with a common conjugate (not F_q-rational) factor
  const MPoly D = MPoly::parse("x0^2 + x1^2", f5, 2);     // (x0+2x1)(x0-2x1)
  const MPoly E = MPoly::parse("x0^2 - x0*x1 + x1", f5, 2);
  CHECK_FALSE(have_common_factor_over_closure(D, E));
  CHECK(have_common_factor_over_closure(
      D, MPoly::parse("x0 + 2*x1", f5, 2) * E));
}
