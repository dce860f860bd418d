#pragma once

// Seeded random instance generation. Forms are sampled uniformly over the
// coefficient vectors of the full degree-d monomial basis (zero polynomial
// excluded); constrained generation is rejection sampling against the
// poly-algebra predicates, with rejection counts reported.

#include <cstdint>
#include <utility>

#include "nonsing/field.hpp"
#include "nonsing/irreducible.hpp"
#include "nonsing/poly.hpp"
#include "nonsing/rng.hpp"

namespace nonsing {

enum class FormConstraint { any, absolutely_irreducible, pair_with_h };

struct RandomFormSpec {
  std::uint32_t d = 2;
  std::uint32_t n = 3;
  FieldPtr field;
  FormConstraint constraint = FormConstraint::any;
  std::uint32_t e = 0;  // degree of H in pair mode
  std::uint64_t seed = 0;
  bool homogeneous = true;  // false: general polynomial of exact total degree d
  std::uint64_t rejection_budget = 10000;
};

struct GeneratedForm {
  MPoly form;
  std::uint64_t rejections = 0;
};

struct GeneratedPair {
  MPoly g;
  MPoly h;
  std::uint64_t rejections = 0;
};

// Uniform polynomial of exact total degree d (for forms: any nonzero
// coefficient vector on the degree-d basis).
inline MPoly random_poly_of_degree(const FieldPtr& f, std::uint32_t nvars,
                                   std::uint32_t d, bool homogeneous, Rng& rng) {
  const auto monos = monomials_of_degree(nvars, d, homogeneous);
  while (true) {
    std::vector<Term> terms;
    bool top_nonzero = false;
    for (const auto& m : monos) {
      const felt c = rng.element(*f);
      if (c == 0) continue;
      std::uint64_t deg = 0;
      for (auto e : m) deg += e;
      if (deg == d) top_nonzero = true;
      terms.push_back({m, c});
    }
    if (!top_nonzero) continue;  // resample: degree must be exactly d
    return MPoly::from_terms(f, nvars, std::move(terms));
  }
}

inline GeneratedForm gen_random_form(const RandomFormSpec& spec, Rng& rng,
                                     const IrreducibilityOptions& irr = {}) {
  if (!spec.field) throw std::invalid_argument("gen_random_form: no field");
  if (spec.d < 1) throw std::invalid_argument("gen_random_form: d >= 1");
  GeneratedForm out{MPoly::zero(spec.field, spec.n), 0};
  for (std::uint64_t attempt = 0; attempt < spec.rejection_budget; ++attempt) {
    MPoly cand =
        random_poly_of_degree(spec.field, spec.n, spec.d, spec.homogeneous, rng);
    if (spec.constraint == FormConstraint::absolutely_irreducible &&
        !is_absolutely_irreducible(cand, irr)) {
      ++out.rejections;
      continue;
    }
    out.form = std::move(cand);
    return out;
  }
  throw BudgetExceeded("gen_random_form: rejection budget exhausted");
}

// G absolutely irreducible of degree d, H of degree e with G not dividing H.
inline GeneratedPair gen_random_pair(const RandomFormSpec& spec, Rng& rng,
                                     const IrreducibilityOptions& irr = {}) {
  RandomFormSpec gspec = spec;
  gspec.constraint = FormConstraint::absolutely_irreducible;
  GeneratedForm g = gen_random_form(gspec, rng, irr);
  GeneratedPair out{g.form, MPoly::zero(spec.field, spec.n), g.rejections};
  if (spec.e < 1) throw std::invalid_argument("gen_random_pair: e >= 1");
  for (std::uint64_t attempt = 0; attempt < spec.rejection_budget; ++attempt) {
    MPoly h =
        random_poly_of_degree(spec.field, spec.n, spec.e, spec.homogeneous, rng);
    if (spec.e >= spec.d && divides(out.g, h)) {
      ++out.rejections;
      continue;
    }
    out.h = std::move(h);
    return out;
  }
  throw BudgetExceeded("gen_random_pair: rejection budget exhausted");
}

}  // namespace nonsing
