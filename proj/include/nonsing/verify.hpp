#pragma once

// Verification suites: seeded random-instance runs that check each theorem
// or lemma at desk scale and serialize machine-readable reports. Instances
// fan out to a worker pool; every instance derives its randomness from
// (seed, index), and outcomes are stored by index, so reports are identical
// across thread counts and scheduling orders. A suite passes only with zero
// failures and zero undecided instances.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "nonsing/bounds.hpp"
#include "nonsing/enumerate.hpp"
#include "nonsing/irreducible.hpp"
#include "nonsing/poly.hpp"
#include "nonsing/random_forms.hpp"
#include "nonsing/rng.hpp"
#include "nonsing/slicing.hpp"

namespace nonsing {

using Json = nlohmann::ordered_json;

enum class Status { pass, fail, undecided };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "undecided";
  }
}

struct SuiteOptions {
  std::uint32_t threads = 1;
  std::uint64_t budget_evals = 1ull << 31;
  IrreducibilityOptions irr;
  std::uint64_t rejection_budget = 10000;
  std::uint64_t max_slices = 50;
  bool exploratory = false;   // allow running below a theorem threshold
  bool elide_timing = false;  // zero elapsed fields for byte-stable reports
};

struct InstanceOutcome {
  std::uint64_t index = 0;
  Status status = Status::undecided;
  Json detail = Json::object();
};

struct VerificationRun {
  std::string suite;
  Json parameters;
  std::vector<InstanceOutcome> outcomes;
  std::uint64_t pass = 0, fail = 0, undecided = 0;
  double elapsed_ms = 0.0;
  bool elide_timing = false;

  bool passed() const { return fail == 0 && undecided == 0; }

  int exit_code() const {
    if (fail > 0) return 1;
    if (undecided > 0) return 3;
    return 0;
  }

  Json to_json() const {
    Json j;
    j["schema_version"] = 1;
    j["suite"] = suite;
    j["parameters"] = parameters;
    Json arr = Json::array();
    for (const auto& o : outcomes) {
      Json e;
      e["index"] = o.index;
      e["status"] = to_string(o.status);
      if (!o.detail.empty()) e["detail"] = o.detail;
      arr.push_back(std::move(e));
    }
    j["outcomes"] = std::move(arr);
    j["summary"] = Json{{"pass", pass},
                        {"fail", fail},
                        {"undecided", undecided},
                        {"elapsed_ms", elide_timing ? 0.0 : elapsed_ms}};
    return j;
  }

  // CSV projection of the same data: one line per instance.
  std::string to_csv() const {
    std::string out = "index,status\n";
    for (const auto& o : outcomes) {
      out += std::to_string(o.index);
      out += ",";
      out += to_string(o.status);
      out += "\n";
    }
    return out;
  }
};

inline FieldPtr field_from_q(std::uint64_t q) {
  std::uint64_t p = 0;
  if (!detail::is_prime_power_u64(q, &p))
    throw std::invalid_argument("q is not a prime power");
  std::uint32_t k = 0;
  for (std::uint64_t m = q; m > 1; m /= p) ++k;
  return FieldSpec::make(static_cast<std::uint32_t>(p), k);
}

inline Json witness_json(const Witness& w) {
  Json j;
  j["point"] = w.point;
  j["gradient"] = w.gradient;
  if (w.h_value) j["h_value"] = *w.h_value;
  return j;
}

namespace detail {

template <typename Fn>
VerificationRun run_suite(std::string suite, Json parameters,
                          std::uint64_t count, const SuiteOptions& opts,
                          Fn&& instance_fn) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationRun run;
  run.suite = std::move(suite);
  run.parameters = std::move(parameters);
  run.elide_timing = opts.elide_timing;
  run.outcomes.resize(count);

  std::atomic<std::uint64_t> next{0};
  const auto worker = [&] {
    while (true) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) break;
      InstanceOutcome out;
      out.index = i;
      try {
        instance_fn(i, out);
      } catch (const BudgetExceeded& e) {
        out.status = Status::undecided;
        out.detail["error"] = e.what();
      } catch (const std::exception& e) {
        out.status = Status::fail;
        out.detail["error"] = e.what();
      }
      run.outcomes[i] = std::move(out);
    }
  };
  const std::uint32_t threads =
      std::max<std::uint32_t>(1, std::min<std::uint64_t>(opts.threads, count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::uint32_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& o : run.outcomes) {
    switch (o.status) {
      case Status::pass: ++run.pass; break;
      case Status::fail: ++run.fail; break;
      case Status::undecided: ++run.undecided; break;
    }
  }
  run.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return run;
}

}  // namespace detail

// thm2 suite: above the pair existence threshold, every sampled (G, H)
// pair must yield a witness off H, and the counting criterion
// N - S1 - S2 > 0 must hold exactly; S1 is also checked against its
// d(d-1) q^{n-2} cap.
inline VerificationRun verify_thm2(std::uint64_t d, std::uint64_t e,
                                   std::uint32_t n, std::uint64_t q,
                                   std::uint64_t samples, std::uint64_t seed,
                                   const SuiteOptions& opts = {}) {
  const Verdict verdict = thm2_satisfied(q, d, e);
  if (verdict != Verdict::yes && !opts.exploratory)
    throw std::invalid_argument(
        "verify_thm2: q is not above the pair existence threshold");
  const FieldPtr field = field_from_q(q);
  Json params{{"d", d},       {"e", e},
              {"n", n},       {"q", q},
              {"field", field->designator()},
              {"samples", samples},
              {"seed", seed}, {"exploratory", opts.exploratory}};
  const BigInt s1_cap = BigInt(d) * BigInt(d - 1) *
                        detail::pow_big(BigInt(q), n >= 2 ? n - 2 : 0);
  return detail::run_suite(
      "thm2", std::move(params), samples, opts,
      [=](std::uint64_t i, InstanceOutcome& out) {
        Rng rng = Rng::for_instance(seed, i);
        RandomFormSpec rs;
        rs.d = static_cast<std::uint32_t>(d);
        rs.e = static_cast<std::uint32_t>(e);
        rs.n = n;
        rs.field = field;
        rs.rejection_budget = opts.rejection_budget;
        const GeneratedPair pair = gen_random_pair(rs, rng, opts.irr);
        EnumOptions eo;
        eo.budget_evals = opts.budget_evals;
        const CountReport rep = count_full(pair.g, &pair.h, eo);
        const auto w = find_nonsingular(pair.g, &pair.h, eo);
        const std::int64_t margin = *rep.n_affine - *rep.s1 - *rep.s2;
        out.detail["margin"] = margin;
        if (w) out.detail["witness"] = witness_json(*w);
        const bool s1_ok = BigInt(*rep.s1) <= s1_cap;
        const bool ok = w.has_value() && margin > 0 && s1_ok;
        if (opts.exploratory) {
          out.detail["witness_found"] = w.has_value();
          out.status = Status::pass;
        } else if (ok) {
          out.status = Status::pass;
        } else {
          out.status = Status::fail;
          out.detail["g"] = pair.g.str();
          out.detail["h"] = pair.h.str();
          out.detail["n_affine"] = *rep.n_affine;
          out.detail["s1"] = *rep.s1;
          out.detail["s2"] = *rep.s2;
          out.detail["s1_cap_ok"] = s1_ok;
        }
      });
}

enum class Thm3Mode { direct, via_slicing, both };

inline const char* to_string(Thm3Mode m) {
  switch (m) {
    case Thm3Mode::direct: return "direct";
    case Thm3Mode::via_slicing: return "via-slicing";
    default: return "both";
  }
}

// thm3 suite: above the absolute-irreducibility existence threshold, every
// sampled absolutely irreducible form must have a non-singular zero;
// via-slicing uses the constructive pipeline and must agree with the direct
// scan on existence.
inline VerificationRun verify_thm3(std::uint64_t d, std::uint32_t n,
                                   std::uint64_t q, std::uint64_t samples,
                                   std::uint64_t seed, Thm3Mode mode,
                                   const SuiteOptions& opts = {}) {
  if (!thm3_satisfied(q, d) && !opts.exploratory)
    throw std::invalid_argument(
        "verify_thm3: q is not above the existence threshold");
  const FieldPtr field = field_from_q(q);
  Json params{{"d", d},
              {"n", n},
              {"q", q},
              {"field", field->designator()},
              {"samples", samples},
              {"seed", seed},
              {"mode", to_string(mode)},
              {"max_slices", opts.max_slices},
              {"exploratory", opts.exploratory}};
  return detail::run_suite(
      "thm3", std::move(params), samples, opts,
      [=](std::uint64_t i, InstanceOutcome& out) {
        Rng rng = Rng::for_instance(seed, i);
        RandomFormSpec rs;
        rs.d = static_cast<std::uint32_t>(d);
        rs.n = n;
        rs.field = field;
        rs.constraint = FormConstraint::absolutely_irreducible;
        rs.rejection_budget = opts.rejection_budget;
        const GeneratedForm g = gen_random_form(rs, rng, opts.irr);
        EnumOptions eo;
        eo.budget_evals = opts.budget_evals;

        std::optional<Witness> direct;
        bool slicing_ran = false, slicing_found = false, slicing_exhausted = false;
        if (mode != Thm3Mode::via_slicing)
          direct = find_nonsingular(g.form, nullptr, eo);
        if (mode != Thm3Mode::direct) {
          slicing_ran = true;
          const std::uint64_t slice_seed = Rng::for_instance(seed, i).next();
          const SliceSearchResult res = find_nonsingular_via_slicing(
              g.form, slice_seed, opts.max_slices, opts.irr);
          slicing_found = res.witness.has_value();
          slicing_exhausted = res.exhausted;
          out.detail["slices_tried"] = res.slices_tried;
          out.detail["good_slices"] = res.good_slices;
          if (res.witness) out.detail["witness"] = witness_json(*res.witness);
        }
        if (direct && !out.detail.contains("witness"))
          out.detail["witness"] = witness_json(*direct);

        if (opts.exploratory) {
          out.detail["witness_found"] =
              direct.has_value() || slicing_found;
          out.status = Status::pass;
          return;
        }
        if (slicing_ran && slicing_exhausted) {
          out.status = Status::undecided;
          out.detail["error"] = "max_slices exhausted";
          out.detail["g"] = g.form.str();
          return;
        }
        bool ok = true;
        if (mode == Thm3Mode::direct) ok = direct.has_value();
        if (mode == Thm3Mode::via_slicing) ok = slicing_found;
        if (mode == Thm3Mode::both) ok = direct.has_value() && slicing_found;
        if (ok) {
          out.status = Status::pass;
        } else {
          out.status = Status::fail;
          out.detail["g"] = g.form.str();
        }
      });
}

// Cafure-Matera deviation bound on sampled absolutely irreducible forms, or
// exhaustively over every form of degree d when samples == 0 (one instance
// per q; the scan is partitioned over threads inside the instance).
inline VerificationRun verify_cafure_matera(std::uint64_t d, std::uint32_t n,
                                            std::vector<std::uint64_t> q_list,
                                            std::uint64_t samples,
                                            std::uint64_t seed,
                                            const SuiteOptions& opts = {}) {
  Json params{{"d", d}, {"n", n}, {"q_list", q_list}, {"samples", samples},
              {"seed", seed}};
  if (samples == 0) {
    SuiteOptions outer = opts;
    outer.threads = 1;  // parallelism lives inside each exhaustive scan
    return detail::run_suite(
        "cafure-matera", std::move(params), q_list.size(), outer,
        [=](std::uint64_t qi, InstanceOutcome& out) {
          const std::uint64_t q = q_list[qi];
          const FieldPtr field = field_from_q(q);
          const Enclosure rhs = cafure_matera_rhs(d, n, q);
          const auto monos =
              monomials_of_degree(n, static_cast<std::uint32_t>(d), true);
          const std::uint64_t total = nonsing::detail::pow_u64_checked(
              q, static_cast<std::uint32_t>(monos.size()), 1ull << 22);
          if (total > (1ull << 22))
            throw BudgetExceeded("exhaustive form space too large");

          struct Chunk {
            std::uint64_t checked = 0, abs_irr = 0, undecided = 0;
            std::uint64_t first_violation = ~0ull;
          };
          std::vector<Chunk> chunks(std::max<std::uint32_t>(1, opts.threads));
          nonsing::detail::parallel_chunks(
              static_cast<std::uint32_t>(total - 1),
              opts.threads,
              [&](std::uint32_t t, std::uint32_t lo, std::uint32_t hi) {
                Chunk c;
                EnumOptions eo;
                eo.budget_evals = opts.budget_evals;
                for (std::uint64_t raw = lo; raw < hi; ++raw) {
                  const std::uint64_t idx = raw + 1;  // skip the zero form
                  std::vector<Term> terms;
                  std::uint64_t rest = idx;
                  for (const auto& m : monos) {
                    const felt c2 = static_cast<felt>(rest % q);
                    rest /= q;
                    if (c2 != 0) terms.push_back({m, c2});
                  }
                  const MPoly F =
                      MPoly::from_terms(field, n, std::move(terms));
                  ++c.checked;
                  bool irr = false;
                  try {
                    irr = is_absolutely_irreducible(F, opts.irr);
                  } catch (const BudgetExceeded&) {
                    ++c.undecided;
                    continue;
                  }
                  if (!irr) continue;
                  ++c.abs_irr;
                  const auto rep = count_zeros(F, CountMode::affine, eo);
                  const BigInt expected =
                      nonsing::detail::pow_big(BigInt(q), n - 1);
                  const BigInt measured =
                      BigInt(*rep.n_affine) >= expected
                          ? BigInt(*rep.n_affine) - expected
                          : expected - BigInt(*rep.n_affine);
                  if (BigRat(measured) > rhs.hi)
                    c.first_violation = std::min(c.first_violation, idx);
                }
                chunks[t] = c;
              });
          Chunk total_c;
          for (const auto& c : chunks) {
            total_c.checked += c.checked;
            total_c.abs_irr += c.abs_irr;
            total_c.undecided += c.undecided;
            total_c.first_violation =
                std::min(total_c.first_violation, c.first_violation);
          }
          out.detail["q"] = q;
          out.detail["forms_checked"] = total_c.checked;
          out.detail["absolutely_irreducible"] = total_c.abs_irr;
          out.detail["rhs"] = rhs.approx();
          if (total_c.first_violation != ~0ull) {
            out.status = Status::fail;
            out.detail["violating_form_index"] = total_c.first_violation;
          } else if (total_c.undecided > 0) {
            out.status = Status::undecided;
            out.detail["undecided_forms"] = total_c.undecided;
          } else {
            out.status = Status::pass;
          }
        });
  }

  const std::uint64_t count = q_list.size() * samples;
  return detail::run_suite(
      "cafure-matera", std::move(params), count, opts,
      [=](std::uint64_t i, InstanceOutcome& out) {
        const std::uint64_t q = q_list[i / samples];
        const FieldPtr field = field_from_q(q);
        Rng rng = Rng::for_instance(seed, i);
        RandomFormSpec rs;
        rs.d = static_cast<std::uint32_t>(d);
        rs.n = n;
        rs.field = field;
        rs.constraint = FormConstraint::absolutely_irreducible;
        rs.rejection_budget = opts.rejection_budget;
        const GeneratedForm g = gen_random_form(rs, rng, opts.irr);
        EnumOptions eo;
        eo.budget_evals = opts.budget_evals;
        const auto rep = count_zeros(g.form, CountMode::affine, eo);
        const Enclosure rhs = cafure_matera_rhs(d, n, q);
        const BigInt expected = detail::pow_big(BigInt(q), n - 1);
        const BigInt measured = BigInt(*rep.n_affine) >= expected
                                    ? BigInt(*rep.n_affine) - expected
                                    : expected - BigInt(*rep.n_affine);
        out.detail["q"] = q;
        out.detail["n_affine"] = *rep.n_affine;
        out.detail["measured"] = measured.str();
        out.detail["rhs"] = rhs.approx();
        if (BigRat(measured) <= rhs.hi) {
          out.status = Status::pass;
        } else {
          out.status = Status::fail;
          out.detail["form"] = g.form.str();
        }
      });
}

// Leep-Yeomans lower bound on projective non-singular counts of sampled
// absolutely irreducible plane curves; affine counts are logged alongside.
inline VerificationRun verify_leep_yeomans(std::uint64_t d,
                                           std::vector<std::uint64_t> q_list,
                                           std::uint64_t samples,
                                           std::uint64_t seed,
                                           const SuiteOptions& opts = {}) {
  Json params{{"d", d}, {"q_list", q_list}, {"samples", samples}, {"seed", seed}};
  const std::uint64_t count = q_list.size() * samples;
  return detail::run_suite(
      "leep-yeomans", std::move(params), count, opts,
      [=](std::uint64_t i, InstanceOutcome& out) {
        const std::uint64_t q = q_list[i / samples];
        const FieldPtr field = field_from_q(q);
        Rng rng = Rng::for_instance(seed, i);
        RandomFormSpec rs;
        rs.d = static_cast<std::uint32_t>(d);
        rs.n = 2;
        rs.field = field;
        rs.constraint = FormConstraint::absolutely_irreducible;
        rs.homogeneous = false;  // plane curves, not binary forms
        rs.rejection_budget = opts.rejection_budget;
        const GeneratedForm g = gen_random_form(rs, rng, opts.irr);
        EnumOptions eo;
        eo.budget_evals = opts.budget_evals;
        const std::int64_t nproj =
            count_nonsingular_curve(g.form, CountMode::projective, eo);
        const std::int64_t naff =
            count_nonsingular_curve(g.form, CountMode::affine, eo);
        const BigInt bound = leep_yeomans_lower(d, q);
        out.detail["q"] = q;
        out.detail["nonsingular_projective"] = nproj;
        out.detail["nonsingular_affine"] = naff;
        out.detail["bound"] = bound.str();
        if (BigInt(nproj) >= bound) {
          out.status = Status::pass;
        } else {
          out.status = Status::fail;
          out.detail["p"] = g.form.str();
        }
      });
}

// Lemma 2 (N <= d q^{n-1}) on sampled forms and Lemma 3 / Bezout
// (S2 <= d1 d2 q^{n-2}) on sampled pairs certified coprime over the closure.
inline VerificationRun verify_lemma_bounds(std::uint64_t d1, std::uint64_t d2,
                                           std::uint32_t n, std::uint64_t q,
                                           std::uint64_t samples,
                                           std::uint64_t seed,
                                           const SuiteOptions& opts = {}) {
  if (n < 2) throw std::invalid_argument("verify_lemma_bounds: n >= 2");
  const FieldPtr field = field_from_q(q);
  Json params{{"d1", d1}, {"d2", d2}, {"n", n}, {"q", q},
              {"samples", samples}, {"seed", seed}};
  return detail::run_suite(
      "lemma-bounds", std::move(params), samples, opts,
      [=](std::uint64_t i, InstanceOutcome& out) {
        Rng rng = Rng::for_instance(seed, i);
        RandomFormSpec rs1;
        rs1.d = static_cast<std::uint32_t>(d1);
        rs1.n = n;
        rs1.field = field;
        rs1.rejection_budget = opts.rejection_budget;
        const MPoly f1 = gen_random_form(rs1, rng, opts.irr).form;

        // resample f2 until the pair is coprime over the closure
        RandomFormSpec rs2 = rs1;
        rs2.d = static_cast<std::uint32_t>(d2);
        std::uint64_t rejections = 0;
        std::optional<MPoly> f2;
        for (std::uint64_t attempt = 0; attempt < opts.rejection_budget;
             ++attempt) {
          MPoly cand = gen_random_form(rs2, rng, opts.irr).form;
          if (have_common_factor_over_closure(f1, cand, opts.irr)) {
            ++rejections;
            continue;
          }
          f2 = std::move(cand);
          break;
        }
        if (!f2) throw BudgetExceeded("coprime pair rejection budget exhausted");

        EnumOptions eo;
        eo.budget_evals = opts.budget_evals;
        const auto rep1 = count_zeros(f1, CountMode::affine, eo);
        const BigInt lemma2_cap =
            BigInt(d1) * detail::pow_big(BigInt(q), n - 1);
        const std::int64_t s2 = count_common_zeros(f1, *f2, eo);
        const BigInt lemma3_cap =
            BigInt(d1) * BigInt(d2) * detail::pow_big(BigInt(q), n - 2);
        out.detail["n_affine"] = *rep1.n_affine;
        out.detail["lemma2_cap"] = lemma2_cap.str();
        out.detail["s2"] = s2;
        out.detail["lemma3_cap"] = lemma3_cap.str();
        out.detail["coprime_rejections"] = rejections;
        const bool ok =
            BigInt(*rep1.n_affine) <= lemma2_cap && BigInt(s2) <= lemma3_cap;
        if (ok) {
          out.status = Status::pass;
        } else {
          out.status = Status::fail;
          out.detail["f1"] = f1.str();
          out.detail["f2"] = f2->str();
        }
      });
}

// Chevalley-Warning sanity: every form of degree d in n > d variables has a
// nontrivial zero.
inline VerificationRun verify_chevalley_warning(std::uint64_t d, std::uint32_t n,
                                                std::uint64_t q,
                                                std::uint64_t samples,
                                                std::uint64_t seed,
                                                const SuiteOptions& opts = {}) {
  if (n <= d)
    throw std::invalid_argument("verify_chevalley_warning: requires n > d");
  const FieldPtr field = field_from_q(q);
  Json params{{"d", d}, {"n", n}, {"q", q}, {"samples", samples}, {"seed", seed}};
  return detail::run_suite(
      "chevalley-warning", std::move(params), samples, opts,
      [=](std::uint64_t i, InstanceOutcome& out) {
        Rng rng = Rng::for_instance(seed, i);
        RandomFormSpec rs;
        rs.d = static_cast<std::uint32_t>(d);
        rs.n = n;
        rs.field = field;
        rs.rejection_budget = opts.rejection_budget;
        const MPoly F = gen_random_form(rs, rng, opts.irr).form;
        if (nonsing::detail::pow_u64_checked(q, n, opts.budget_evals) >
            opts.budget_evals)
          throw BudgetExceeded("scan exceeds the evaluation budget");
        const CompiledPoly hot(F);
        std::vector<felt> x(n, 0);
        bool found = false;
        // lexicographic scan, skipping the origin
        while (nonsing::detail::next_point(x, static_cast<std::uint32_t>(q), 0)) {
          if (hot.eval(x.data()) == 0) {
            found = true;
            break;
          }
        }
        if (found) {
          out.detail["zero"] = x;
          if (F.evaluate(x) != 0)
            throw std::logic_error("zero failed independent verification");
          out.status = Status::pass;
        } else {
          out.status = Status::fail;
          out.detail["form"] = F.str();
        }
      });
}

// Property suite for the slicing evaluation identity on seeded random
// (f, xi, a, b) instances.
inline VerificationRun verify_slicing_identity(std::uint64_t d, std::uint32_t n,
                                               std::uint64_t q,
                                               std::uint64_t samples,
                                               std::uint64_t seed,
                                               const SuiteOptions& opts = {}) {
  if (n < 2)
    throw std::invalid_argument("verify_slicing_identity: need n >= 2 variables");
  const FieldPtr field = field_from_q(q);
  Json params{{"d", d}, {"n", n}, {"q", q}, {"samples", samples}, {"seed", seed}};
  return detail::run_suite(
      "slicing-identity", std::move(params), samples, opts,
      [=](std::uint64_t i, InstanceOutcome& out) {
        Rng rng = Rng::for_instance(seed, i);
        const MPoly f = random_poly_of_degree(
            field, n, 1 + static_cast<std::uint32_t>(rng.below(d)), false, rng);
        const SliceVector sv = SliceVector::random(field, n, rng);
        const felt a = rng.element(*field);
        const felt b = rng.element(*field);
        const MPoly s = slice(f, sv);
        const felt lhs = s.evaluate({a, b});
        const felt rhs = f.evaluate(lift_point(sv, a, b));
        if (lhs == rhs) {
          out.status = Status::pass;
        } else {
          out.status = Status::fail;
          out.detail["f"] = f.str();
          out.detail["lhs"] = lhs;
          out.detail["rhs"] = rhs;
        }
      });
}

}  // namespace nonsing
