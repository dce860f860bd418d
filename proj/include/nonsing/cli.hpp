#pragma once

// Command-line interface. Subcommands: bounds, count, find-nonsingular,
// slice, verify <suite>, gen. One JSON document per run goes to stdout (and
// to --json PATH when given); --csv writes the index/status projection.
// Exit codes: 0 pass, 1 suite failure, 2 usage error, 3 budget exhaustion
// with zero failures. NONSING_SEED provides the default --seed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nonsing/bounds.hpp"
#include "nonsing/cli_version.hpp"
#include "nonsing/enumerate.hpp"
#include "nonsing/slicing.hpp"
#include "nonsing/verify.hpp"

namespace nonsing {

namespace cli_detail {

inline Json enclosure_json(const Enclosure& e) {
  return Json{{"lo", e.lo.str()}, {"hi", e.hi.str()}, {"approx", e.approx()}};
}

inline Json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(v));
  return Json(v.str());
}

inline Json bigrat_json(const BigRat& v) {
  if (boost::multiprecision::denominator(v) == 1)
    return bigint_json(boost::multiprecision::numerator(v));
  return Json(v.str());
}

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("NONSING_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw std::invalid_argument("NONSING_SEED is not an integer");
    }
  }
  return 0;
}

inline std::vector<std::uint64_t> parse_q_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stoull(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty q list");
  return out;
}

inline void emit(const Json& j, const std::string& json_path,
                 std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!json_path.empty()) {
    std::ofstream f(json_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open " + json_path);
    f << text;
  }
}

inline Json count_report_json(const CountReport& rep, bool elide_timing) {
  Json j;
  j["schema_version"] = 1;
  j["q"] = rep.q;
  j["n"] = rep.n;
  j["d"] = rep.d;
  if (rep.n_affine) j["n_affine"] = *rep.n_affine;
  if (rep.n_projective) j["n_projective"] = *rep.n_projective;
  if (rep.s1) j["s1"] = *rep.s1;
  if (rep.s2) j["s2"] = *rep.s2;
  j["elapsed_ms"] = elide_timing ? 0.0 : rep.elapsed_ms;
  return j;
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv,
                    std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  using cli_detail::emit;

  CLI::App app{"non-singular point toolkit for hypersurfaces over finite fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // shared option state
  std::string field_str = "7", poly_str, poly2_str, xi_str, json_path, csv_path;
  std::string mode_str = "full", constraint_str = "any", suite;
  std::uint32_t nvars = 3, threads = 1, max_degree = 4;
  std::uint64_t d = 2, e = 0, d2 = 1, q = 0, samples = 100;
  std::uint64_t seed = cli_detail::default_seed();
  std::uint64_t budget_evals = 1ull << 31, max_slices = 50, trials = 200;
  std::uint64_t count_n = 1;
  std::string q_list_str;
  std::int64_t a_coord = -1, b_coord = -1;
  bool elide_timing = false, exploratory = false, general = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "worker threads");
    cmd->add_option("--budget-evals", budget_evals, "evaluation budget");
    cmd->add_option("--json", json_path, "also write the JSON report here");
    cmd->add_flag("--elide-timing", elide_timing,
                  "zero elapsed fields for byte-stable output");
  };

  auto* bounds_cmd = app.add_subcommand("bounds", "threshold and bound calculators");
  bounds_cmd->add_option("--d", d, "degree of G")->required();
  bounds_cmd->add_option("--e", e, "degree of H");
  bounds_cmd->add_option("--q", q, "field size to test against the thresholds");
  std::uint64_t bounds_n = 0;
  bounds_cmd->add_option("--n", bounds_n, "variable count for the deviation RHS");
  bounds_cmd->add_option("--json", json_path, "also write the JSON report here");

  auto* count_cmd = app.add_subcommand("count", "exact point counts");
  count_cmd->add_option("--field", field_str, "field designator p or p^k")->required();
  count_cmd->add_option("--nvars", nvars, "number of variables")->required();
  count_cmd->add_option("--poly", poly_str, "polynomial")->required();
  count_cmd->add_option("--poly2", poly2_str, "second polynomial for S2");
  count_cmd->add_option("--mode", mode_str, "affine | projective | full");
  add_common(count_cmd);

  auto* find_cmd = app.add_subcommand("find-nonsingular", "witness search");
  find_cmd->add_option("--field", field_str)->required();
  find_cmd->add_option("--nvars", nvars)->required();
  find_cmd->add_option("--poly", poly_str, "the form G")->required();
  find_cmd->add_option("--avoid", poly2_str, "constraint polynomial H");
  std::uint64_t random_start_seed = 0;
  auto* random_start_opt = find_cmd->add_option(
      "--random-start", random_start_seed,
      "start the scan at a seeded point instead of lexicographic order");
  add_common(find_cmd);

  auto* slice_cmd = app.add_subcommand("slice", "slice a polynomial to a plane");
  slice_cmd->add_option("--field", field_str)->required();
  slice_cmd->add_option("--nvars", nvars)->required();
  slice_cmd->add_option("--poly", poly_str)->required();
  slice_cmd->add_option("--xi", xi_str, "comma-separated element indices, 3(m-1)+1 of them")
      ->required();
  slice_cmd->add_option("--a", a_coord, "curve X coordinate to lift");
  slice_cmd->add_option("--b", b_coord, "curve Y coordinate to lift");
  slice_cmd->add_option("--json", json_path);

  auto* gen_cmd = app.add_subcommand("gen", "seeded random form generation");
  gen_cmd->add_option("--field", field_str)->required();
  gen_cmd->add_option("--nvars", nvars)->required();
  gen_cmd->add_option("--d", d, "degree")->required();
  gen_cmd->add_option("--e", e, "degree of H in pair mode");
  gen_cmd->add_option("--constraint", constraint_str, "any | abs-irr | pair");
  gen_cmd->add_flag("--general", general, "general polynomial, not a form");
  gen_cmd->add_option("--seed", seed, "random seed");
  gen_cmd->add_option("--count", count_n, "how many instances");
  gen_cmd->add_option("--max-degree", max_degree, "irreducibility degree cap");
  gen_cmd->add_option("--json", json_path);

  auto* verify_cmd = app.add_subcommand("verify", "verification suites");
  verify_cmd
      ->add_option("suite", suite,
                   "thm2 | thm3 | cafure-matera | leep-yeomans | lemma-bounds | "
                   "chevalley-warning | slicing-identity")
      ->required();
  verify_cmd->add_option("--d", d, "degree (d1 for lemma-bounds)");
  verify_cmd->add_option("--e", e, "degree of H (thm2)");
  verify_cmd->add_option("--d2", d2, "second degree (lemma-bounds)");
  verify_cmd->add_option("--n", nvars, "number of variables");
  verify_cmd->add_option("--q", q_list_str,
                         "field size, or a comma-separated list for "
                         "cafure-matera / leep-yeomans");
  verify_cmd->add_option("--samples", samples,
                         "instances per field (0 = exhaustive for cafure-matera)");
  verify_cmd->add_option("--seed", seed, "random seed");
  std::string thm3_mode_str = "direct";
  verify_cmd->add_option("--mode", thm3_mode_str,
                         "thm3: direct | via-slicing | both");
  verify_cmd->add_option("--max-slices", max_slices, "slice attempts per instance");
  verify_cmd->add_option("--trials", trials, "trials for sampling reports");
  verify_cmd->add_option("--max-degree", max_degree, "irreducibility degree cap");
  verify_cmd->add_flag("--exploratory", exploratory,
                       "allow runs below a theorem threshold");
  verify_cmd->add_option("--csv", csv_path, "write the CSV projection here");
  add_common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& pe) {
    err << pe.what() << "\n";
    return 2;
  }

  try {
    if (*bounds_cmd) {
      const auto rep = make_threshold_report(
          d, e, q != 0 ? std::optional<std::uint64_t>(q) : std::nullopt);
      Json j;
      j["schema_version"] = 1;
      j["d"] = d;
      j["e"] = e;
      j["alpha"] = cli_detail::bigint_json(rep.alpha);
      j["beta"] = cli_detail::enclosure_json(rep.beta);
      j["thm2_threshold"] = cli_detail::enclosure_json(rep.thm2_threshold);
      j["thm3_threshold"] = cli_detail::bigrat_json(rep.thm3);
      if (d <= 4) j["schmidt_c"] = schmidt_constant(d).str();
      if (rep.thm2_verdict) {
        j["q"] = q;
        j["thm2_satisfied"] = to_string(*rep.thm2_verdict);
        j["thm3_satisfied"] = *rep.thm3_verdict;
      }
      if (bounds_n >= 2 && q >= 2) {
        j["cafure_matera_rhs"] =
            cli_detail::enclosure_json(cafure_matera_rhs(d, bounds_n, q));
        if (d <= 4)
          j["schmidt_rhs"] =
              cli_detail::enclosure_json(schmidt_rhs(d, bounds_n, q));
      }
      emit(j, json_path, out);
      return 0;
    }

    if (*count_cmd) {
      const FieldPtr field = FieldSpec::parse(field_str);
      const MPoly F = MPoly::parse(poly_str, field, nvars);
      EnumOptions eo;
      eo.threads = threads;
      eo.budget_evals = budget_evals;
      CountReport rep;
      if (mode_str == "affine") {
        rep = count_zeros(F, CountMode::affine, eo);
      } else if (mode_str == "projective") {
        rep = count_zeros(F, CountMode::projective, eo);
      } else if (mode_str == "full") {
        std::optional<MPoly> H;
        if (!poly2_str.empty()) H = MPoly::parse(poly2_str, field, nvars);
        rep = count_full(F, H ? &*H : nullptr, eo);
      } else {
        throw std::invalid_argument("unknown mode: " + mode_str);
      }
      Json j = cli_detail::count_report_json(rep, elide_timing);
      j["field"] = field->designator();
      j["poly"] = F.str();
      if (!poly2_str.empty()) j["poly2"] = poly2_str;
      emit(j, json_path, out);
      return 0;
    }

    if (*find_cmd) {
      const FieldPtr field = FieldSpec::parse(field_str);
      const MPoly G = MPoly::parse(poly_str, field, nvars);
      std::optional<MPoly> H;
      if (!poly2_str.empty()) H = MPoly::parse(poly2_str, field, nvars);
      EnumOptions eo;
      eo.threads = threads;
      eo.budget_evals = budget_evals;
      if (random_start_opt->count() > 0) eo.random_start = random_start_seed;
      const auto w = find_nonsingular(G, H ? &*H : nullptr, eo);
      Json j;
      j["schema_version"] = 1;
      j["field"] = field->designator();
      j["poly"] = G.str();
      if (H) j["avoid"] = H->str();
      j["found"] = w.has_value();
      if (w) j["witness"] = witness_json(*w);
      emit(j, json_path, out);
      return 0;
    }

    if (*slice_cmd) {
      const FieldPtr field = FieldSpec::parse(field_str);
      const MPoly F = MPoly::parse(poly_str, field, nvars);
      std::vector<felt> xi;
      for (const auto v : cli_detail::parse_q_list(xi_str))
        xi.push_back(static_cast<felt>(v));
      const SliceVector sv = SliceVector::make(field, xi, nvars);
      const MPoly s = slice(F, sv);
      Json j;
      j["schema_version"] = 1;
      j["field"] = field->designator();
      j["poly"] = F.str();
      j["sliced"] = s.str();
      j["degree"] = s.is_zero() ? Json(nullptr) : Json(s.degree());
      if (a_coord >= 0 && b_coord >= 0) {
        const felt a = field->from_int(a_coord);
        const felt b = field->from_int(b_coord);
        const auto x = lift_point(sv, a, b);
        j["lift"] = x;
        j["poly_at_lift"] = F.evaluate(x);
        j["sliced_at_ab"] = s.evaluate({a, b});
      }
      emit(j, json_path, out);
      return 0;
    }

    if (*gen_cmd) {
      const FieldPtr field = FieldSpec::parse(field_str);
      RandomFormSpec rs;
      rs.d = static_cast<std::uint32_t>(d);
      rs.e = static_cast<std::uint32_t>(e);
      rs.n = nvars;
      rs.field = field;
      rs.homogeneous = !general;
      rs.seed = seed;
      IrreducibilityOptions irr;
      irr.max_degree = max_degree;
      if (constraint_str == "any") {
        rs.constraint = FormConstraint::any;
      } else if (constraint_str == "abs-irr") {
        rs.constraint = FormConstraint::absolutely_irreducible;
      } else if (constraint_str == "pair") {
        rs.constraint = FormConstraint::pair_with_h;
      } else {
        throw std::invalid_argument("unknown constraint: " + constraint_str);
      }
      Json arr = Json::array();
      for (std::uint64_t i = 0; i < count_n; ++i) {
        Rng rng = Rng::for_instance(seed, i);
        Json item;
        if (rs.constraint == FormConstraint::pair_with_h) {
          const auto pr = gen_random_pair(rs, rng, irr);
          item["g"] = pr.g.str();
          item["h"] = pr.h.str();
          item["rejections"] = pr.rejections;
        } else {
          const auto g = gen_random_form(rs, rng, irr);
          item["form"] = g.form.str();
          item["rejections"] = g.rejections;
        }
        arr.push_back(std::move(item));
      }
      Json j;
      j["schema_version"] = 1;
      j["field"] = field->designator();
      j["d"] = d;
      j["seed"] = seed;
      j["instances"] = std::move(arr);
      emit(j, json_path, out);
      return 0;
    }

    if (*verify_cmd) {
      SuiteOptions opts;
      opts.threads = threads;
      opts.budget_evals = budget_evals;
      opts.max_slices = max_slices;
      opts.exploratory = exploratory;
      opts.elide_timing = elide_timing;
      opts.irr.max_degree = max_degree;
      if (q_list_str.empty())
        throw std::invalid_argument("verify: --q is required");
      const auto q_list = cli_detail::parse_q_list(q_list_str);
      const std::uint64_t q0 = q_list.front();

      VerificationRun run;
      if (suite == "thm2") {
        run = verify_thm2(d, e, nvars, q0, samples, seed, opts);
      } else if (suite == "thm3") {
        Thm3Mode mode = Thm3Mode::direct;
        if (thm3_mode_str == "via-slicing") mode = Thm3Mode::via_slicing;
        else if (thm3_mode_str == "both") mode = Thm3Mode::both;
        else if (thm3_mode_str != "direct")
          throw std::invalid_argument("unknown thm3 mode: " + thm3_mode_str);
        run = verify_thm3(d, nvars, q0, samples, seed, mode, opts);
      } else if (suite == "cafure-matera") {
        run = verify_cafure_matera(d, nvars, q_list, samples, seed, opts);
      } else if (suite == "leep-yeomans") {
        run = verify_leep_yeomans(d, q_list, samples, seed, opts);
      } else if (suite == "lemma-bounds") {
        run = verify_lemma_bounds(d, d2, nvars, q0, samples, seed, opts);
      } else if (suite == "chevalley-warning") {
        run = verify_chevalley_warning(d, nvars, q0, samples, seed, opts);
      } else if (suite == "slicing-identity") {
        run = verify_slicing_identity(d, nvars, q0, samples, seed, opts);
      } else {
        throw std::invalid_argument("unknown suite: " + suite);
      }
      emit(run.to_json(), json_path, out);
      if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open " + csv_path);
        f << run.to_csv();
      }
      return run.exit_code();
    }
  } catch (const BudgetExceeded& e2) {
    err << "budget exhausted: " << e2.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e2) {
    err << "error: " << e2.what() << "\n";
    return 2;
  } catch (const std::exception& e2) {
    err << "error: " << e2.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace nonsing
