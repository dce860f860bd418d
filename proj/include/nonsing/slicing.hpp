#pragma once

// Bertini slicing: restrict a polynomial in m = n+1 variables to an affine
// 2-plane parameterized by xi in F_q^{3n+1},
//
//   x_0 -> xi_0 + X,   x_i -> xi_i + xi_{n+i} X + xi_{2n+i} Y  (1 <= i <= n),
//
// giving the bivariate sliced polynomial f|_xi(X, Y). Points on the sliced
// curve lift to ambient points through the same map, and slicing commutes
// with evaluation (the module's core identity, property-tested). Good slices
// keep the polynomial absolutely irreducible; the sampler measures how often
// that fails and compares against the bad-slice density cap
// (3d^4 - 4d^3 + 5d^2) / (2q).

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "nonsing/bounds.hpp"
#include "nonsing/enumerate.hpp"
#include "nonsing/field.hpp"
#include "nonsing/irreducible.hpp"
#include "nonsing/poly.hpp"
#include "nonsing/rng.hpp"

namespace nonsing {

struct SliceVector {
  FieldPtr spec;
  std::vector<felt> xi;  // 3(m-1)+1 parameters for m ambient variables

  static SliceVector make(FieldPtr spec, std::vector<felt> xi,
                          std::uint32_t ambient_vars) {
    if (ambient_vars < 2)
      throw std::invalid_argument("slice: need at least 2 ambient variables");
    const std::size_t expect = 3ull * (ambient_vars - 1) + 1;
    if (xi.size() != expect)
      throw std::invalid_argument("slice vector must have 3(m-1)+1 entries");
    for (felt v : xi)
      if (v >= spec->q())
        throw std::invalid_argument("slice entry outside the field");
    return {std::move(spec), std::move(xi)};
  }

  static SliceVector random(const FieldPtr& spec, std::uint32_t ambient_vars,
                            Rng& rng) {
    std::vector<felt> xi(3ull * (ambient_vars - 1) + 1);
    for (auto& v : xi) v = rng.element(*spec);
    return {spec, std::move(xi)};
  }

  std::uint32_t ambient_vars() const {
    return static_cast<std::uint32_t>((xi.size() - 1) / 3 + 1);
  }
};

// Exact symbolic substitution; the result lives in two variables
// (x0 = X, x1 = Y) and has degree at most deg f.
inline MPoly slice(const MPoly& f, const SliceVector& sv) {
  const std::uint32_t m = f.nvars();
  if (m < 2) throw std::invalid_argument("slice: need at least 2 variables");
  if (!f.field()->same(*sv.spec))
    throw std::invalid_argument("slice: field mismatch");
  if (sv.ambient_vars() != m)
    throw std::invalid_argument("slice: dimension mismatch");
  const std::uint32_t n = m - 1;
  const FieldPtr& K = f.field();
  const MPoly X = MPoly::variable(K, 2, 0);
  const MPoly Y = MPoly::variable(K, 2, 1);
  std::vector<MPoly> images;
  images.reserve(m);
  images.push_back(MPoly::constant(K, 2, sv.xi[0]) + X);
  for (std::uint32_t i = 1; i <= n; ++i) {
    MPoly img = MPoly::constant(K, 2, sv.xi[i]);
    img = img + X.scale(sv.xi[n + i]);
    img = img + Y.scale(sv.xi[2 * n + i]);
    images.push_back(img);
  }
  return substitute(f, images);
}

// Ambient point corresponding to curve coordinates (a, b).
inline std::vector<felt> lift_point(const SliceVector& sv, felt a, felt b) {
  const FieldSpec& f = *sv.spec;
  const std::uint32_t n = sv.ambient_vars() - 1;
  std::vector<felt> x(n + 1);
  x[0] = f.add(sv.xi[0], a);
  for (std::uint32_t i = 1; i <= n; ++i)
    x[i] = f.add(sv.xi[i],
                 f.add(f.mul(sv.xi[n + i], a), f.mul(sv.xi[2 * n + i], b)));
  return x;
}

struct BadSliceReport {
  std::uint64_t trials = 0;
  std::uint64_t bad = 0;
  std::uint64_t good = 0;
  std::uint64_t undecided = 0;
  double fraction = 0.0;  // bad / decided
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  BigRat density_bound;  // (3d^4 - 4d^3 + 5d^2) / (2q)
  bool bound_holds = false;
};

namespace detail {

inline void wilson_interval(std::uint64_t hits, std::uint64_t n, double* lo,
                            double* hi) {
  if (n == 0) {
    *lo = 0.0;
    *hi = 1.0;
    return;
  }
  const double z = 1.959963984540054;  // 95%
  const double phat = static_cast<double>(hits) / static_cast<double>(n);
  const double z2n = z * z / static_cast<double>(n);
  const double denom = 1.0 + z2n;
  const double center = (phat + z2n / 2.0) / denom;
  const double half =
      z *
      std::sqrt(phat * (1.0 - phat) / static_cast<double>(n) + z2n / (4.0 * n)) /
      denom;
  *lo = std::max(0.0, center - half);
  *hi = std::min(1.0, center + half);
}

}  // namespace detail

// Draw seeded uniform slices, classify each sliced polynomial, and compare
// the observed bad fraction against the density cap. Slices of dropped
// degree (including constants and zero) are bad; budget exhaustion inside
// the irreducibility test makes a trial undecided, never good or bad.
inline BadSliceReport sample_bad_slice_fraction(
    const MPoly& f, std::uint64_t trials, std::uint64_t seed,
    const IrreducibilityOptions& irr_opts = {}) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int d = f.degree();
  if (d < 2) throw std::invalid_argument("degree must be >= 2");
  if (!is_absolutely_irreducible(f, irr_opts))
    throw std::invalid_argument("polynomial is not absolutely irreducible");

  BadSliceReport rep;
  rep.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_instance(seed, t);
    const SliceVector sv = SliceVector::random(f.field(), f.nvars(), rng);
    const MPoly s = slice(f, sv);
    if (s.is_zero() || s.degree() < d) {
      ++rep.bad;
      continue;
    }
    try {
      if (is_absolutely_irreducible(s, irr_opts))
        ++rep.good;
      else
        ++rep.bad;
    } catch (const BudgetExceeded&) {
      ++rep.undecided;
    }
  }
  const std::uint64_t decided = rep.bad + rep.good;
  rep.fraction =
      decided ? static_cast<double>(rep.bad) / static_cast<double>(decided)
              : 0.0;
  detail::wilson_interval(rep.bad, decided, &rep.wilson_lo, &rep.wilson_hi);
  rep.density_bound =
      thm3_threshold(static_cast<std::uint64_t>(d)) / BigRat(f.field()->q());
  rep.bound_holds = rep.density_bound >= 1 ||
                    (decided > 0 && BigRat(rep.bad, decided) <= rep.density_bound);
  return rep;
}

struct SliceSearchResult {
  std::optional<Witness> witness;
  std::uint64_t slices_tried = 0;
  std::uint64_t good_slices = 0;
  bool exhausted = false;  // max_slices used up; says nothing about existence
};

// Constructive search: draw seeded slices; for each absolutely irreducible
// slice scan F_q^2 for a non-singular curve point, lift it, and re-verify
// the ambient conditions directly with the naive evaluator.
inline SliceSearchResult find_nonsingular_via_slicing(
    const MPoly& F, std::uint64_t seed, std::uint64_t max_slices,
    const IrreducibilityOptions& irr_opts = {}) {
  if (F.is_zero() || F.degree() < 1)
    throw std::invalid_argument("need a nonzero polynomial of degree >= 1");
  if (!F.is_homogeneous())
    throw std::invalid_argument("polynomial is not homogeneous");
  if (!is_absolutely_irreducible(F, irr_opts))
    throw std::invalid_argument("polynomial is not absolutely irreducible");
  const FieldPtr& K = F.field();
  const std::uint32_t q = K->q();
  const int d = F.degree();

  SliceSearchResult result;
  for (std::uint64_t t = 0; t < max_slices; ++t) {
    ++result.slices_tried;
    Rng rng = Rng::for_instance(seed, t);
    const SliceVector sv = SliceVector::random(K, F.nvars(), rng);
    const MPoly s = slice(F, sv);
    if (s.is_zero() || s.degree() != d) continue;  // degenerate: bad slice
    try {
      if (d >= 2 && !is_absolutely_irreducible(s, irr_opts)) continue;
    } catch (const BudgetExceeded&) {
      continue;  // undecided slice cannot certify the curve
    }
    ++result.good_slices;

    const MPoly sx = s.derivative(0);
    const MPoly sy = s.derivative(1);
    for (felt a = 0; a < q; ++a) {
      for (felt b = 0; b < q; ++b) {
        if (s.evaluate({a, b}) != 0) continue;
        if (sx.evaluate({a, b}) == 0 && sy.evaluate({a, b}) == 0) continue;
        const auto x = lift_point(sv, a, b);
        // direct ambient verification, not the chain rule
        Witness w;
        w.point = x;
        w.value = F.evaluate(x);
        bool grad_nonzero = false;
        for (std::uint32_t i = 0; i < F.nvars(); ++i) {
          w.gradient.push_back(F.derivative(i).evaluate(x));
          grad_nonzero = grad_nonzero || w.gradient.back() != 0;
        }
        if (w.value != 0 || !grad_nonzero)
          throw std::logic_error(
              "sliced non-singular point failed ambient verification");
        result.witness = std::move(w);
        return result;
      }
    }
  }
  result.exhausted = true;
  return result;
}

}  // namespace nonsing
