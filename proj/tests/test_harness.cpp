#include <catch2/catch_amalgamated.hpp>

#include "nonsing/random_forms.hpp"
#include "nonsing/verify.hpp"

using namespace nonsing;

TEST_CASE("gen_random_form determinism and constraints") {
  auto f7 = FieldSpec::make(7, 1);
  RandomFormSpec rs;
  rs.d = 2;
  rs.n = 3;
  rs.field = f7;

  SECTION("same seed, same form") {
    Rng r1 = Rng::for_instance(42, 0);
    Rng r2 = Rng::for_instance(42, 0);
    CHECK(gen_random_form(rs, r1).form == gen_random_form(rs, r2).form);
    Rng r3 = Rng::for_instance(43, 0);
    CHECK_FALSE(gen_random_form(rs, r1).form == gen_random_form(rs, r3).form);
  }
  SECTION("forms are homogeneous of exact degree") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
      const auto g = gen_random_form(rs, rng);
      REQUIRE(g.form.is_homogeneous());
      REQUIRE(g.form.degree() == 2);
    }
  }
  SECTION("linear forms are always absolutely irreducible") {
    RandomFormSpec lin = rs;
    lin.d = 1;
    lin.constraint = FormConstraint::absolutely_irreducible;
    Rng rng(3);
    const auto g = gen_random_form(lin, rng);
    CHECK(g.rejections == 0);
    CHECK(is_absolutely_irreducible(g.form));
  }
  SECTION("constrained generation validates") {
    RandomFormSpec irr = rs;
    irr.constraint = FormConstraint::absolutely_irreducible;
    Rng rng(42);
    for (int i = 0; i < 10; ++i)
      CHECK(is_absolutely_irreducible(gen_random_form(irr, rng).form));
  }
  SECTION("general mode produces exact total degree") {
    RandomFormSpec gen = rs;
    gen.homogeneous = false;
    Rng rng(17);
    for (int i = 0; i < 30; ++i) {
      const auto g = gen_random_form(gen, rng);
      REQUIRE(g.form.degree() == 2);
    }
  }
  SECTION("rejection budget exhaustion: binary forms are never abs irr") {
    RandomFormSpec bad;
    bad.d = 2;
    bad.n = 2;
    bad.field = FieldSpec::make(2, 1);
    bad.constraint = FormConstraint::absolutely_irreducible;
    bad.rejection_budget = 50;
    Rng rng(1);
    CHECK_THROWS_AS(gen_random_form(bad, rng), BudgetExceeded);
  }
}

TEST_CASE("gen_random_pair") {
  auto f7 = FieldSpec::make(7, 1);
  RandomFormSpec rs;
  rs.d = 2;
  rs.e = 2;
  rs.n = 3;
  rs.field = f7;
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto pr = gen_random_pair(rs, rng);
    REQUIRE(is_absolutely_irreducible(pr.g));
    REQUIRE(pr.h.degree() == 2);
    REQUIRE_FALSE(divides(pr.g, pr.h));
  }
}

TEST_CASE("verify_thm2") {
  SECTION("d = 1, e = 1 at q = 7 (beta = 6 < 7): all pass") {
    const auto run = verify_thm2(1, 1, 3, 7, 20, 123);
    CHECK(run.pass == 20);
    CHECK(run.fail == 0);
    CHECK(run.undecided == 0);
    CHECK(run.passed());
    CHECK(run.exit_code() == 0);
  }
  SECTION("below threshold is a precondition error") {
    CHECK_THROWS_AS(verify_thm2(2, 1, 3, 103, 5, 1), std::invalid_argument);
  }
  SECTION("exploratory mode records instead of failing") {
    SuiteOptions opts;
    opts.exploratory = true;
    const auto run = verify_thm2(2, 1, 3, 103, 3, 1, opts);
    CHECK(run.fail == 0);
    for (const auto& o : run.outcomes)
      CHECK(o.detail.contains("witness_found"));
  }
}

TEST_CASE("verify_thm3 modes") {
  SECTION("d = 1 anywhere above q = 2") {
    const auto run = verify_thm3(1, 3, 3, 10, 7, Thm3Mode::direct);
    CHECK(run.passed());
  }
  SECTION("d = 2 at q = 19, direct and slicing agree") {
    const auto direct = verify_thm3(2, 3, 19, 5, 7, Thm3Mode::direct);
    CHECK(direct.passed());
    const auto both = verify_thm3(2, 3, 19, 5, 7, Thm3Mode::both);
    CHECK(both.passed());
    for (const auto& o : both.outcomes)
      CHECK(o.detail.contains("slices_tried"));
  }
  SECTION("max_slices = 0 leaves instances undecided, exit code 3") {
    SuiteOptions opts;
    opts.max_slices = 0;
    const auto run = verify_thm3(2, 3, 19, 3, 7, Thm3Mode::via_slicing, opts);
    CHECK(run.undecided == 3);
    CHECK_FALSE(run.passed());
    CHECK(run.exit_code() == 3);
  }
  SECTION("threshold gate") {
    CHECK_THROWS_AS(verify_thm3(2, 3, 17, 5, 7, Thm3Mode::direct),
                    std::invalid_argument);
  }
}

TEST_CASE("verify_cafure_matera") {
  SECTION("sampled cubics over one small field") {
    const auto run = verify_cafure_matera(3, 3, {7}, 10, 99);
    CHECK(run.passed());
    CHECK(run.outcomes.size() == 10);
  }
  SECTION("exhaustive conics over F_3") {
    const auto run = verify_cafure_matera(2, 3, {3}, 0, 0);
    CHECK(run.passed());
    REQUIRE(run.outcomes.size() == 1);
    const auto& detail = run.outcomes[0].detail;
    CHECK(detail.at("forms_checked").get<std::uint64_t>() == 728);  // 3^6 - 1
    CHECK(detail.at("absolutely_irreducible").get<std::uint64_t>() > 0);
  }
}

TEST_CASE("verify_leep_yeomans on conics") {
  const auto run = verify_leep_yeomans(2, {5, 7}, 5, 3);
  CHECK(run.passed());
  // d = 2: the bound is q + 1 and smooth conics meet it exactly
  for (const auto& o : run.outcomes) {
    const auto q = o.detail.at("q").get<std::uint64_t>();
    CHECK(o.detail.at("nonsingular_projective").get<std::int64_t>() ==
          static_cast<std::int64_t>(q) + 1);
    CHECK(o.detail.contains("nonsingular_affine"));
  }
}

TEST_CASE("verify_lemma_bounds") {
  const auto run = verify_lemma_bounds(1, 1, 3, 7, 10, 77);
  CHECK(run.passed());
  for (const auto& o : run.outcomes) {
    // hyperplanes: N = q^2 exactly, the Lemma 2 cap with equality
    CHECK(o.detail.at("n_affine").get<std::int64_t>() == 49);
    CHECK(o.detail.at("s2").get<std::int64_t>() <= 7);
  }
  const auto run2 = verify_lemma_bounds(2, 2, 3, 5, 10, 78);
  CHECK(run2.passed());
}

TEST_CASE("verify_chevalley_warning") {
  const auto run = verify_chevalley_warning(2, 3, 3, 10, 5);
  CHECK(run.passed());
  CHECK_THROWS_AS(verify_chevalley_warning(3, 3, 3, 5, 5),
                  std::invalid_argument);
  // the classical example: x0^2 + x1^2 + x2^2 over F_3 has (1,1,1)
  auto f3 = FieldSpec::make(3, 1);
  const auto w =
      find_nonsingular(MPoly::parse("x0^2 + x1^2 + x2^2", f3, 3), nullptr);
  REQUIRE(w.has_value());
  CHECK(w->point == std::vector<felt>{1, 1, 1});
}

TEST_CASE("verify_slicing_identity") {
  const auto run = verify_slicing_identity(3, 3, 7, 500, 11);
  CHECK(run.pass == 500);
  CHECK(run.passed());
}

TEST_CASE("suite JSON is byte-identical across runs and thread counts") {
  SuiteOptions base;
  base.elide_timing = true;
  base.threads = 1;
  const auto r1 = verify_thm3(2, 3, 19, 10, 5, Thm3Mode::direct, base);
  const auto r2 = verify_thm3(2, 3, 19, 10, 5, Thm3Mode::direct, base);
  SuiteOptions par = base;
  par.threads = 4;
  const auto r3 = verify_thm3(2, 3, 19, 10, 5, Thm3Mode::direct, par);
  const std::string s1 = r1.to_json().dump(2);
  CHECK(s1 == r2.to_json().dump(2));
  CHECK(s1 == r3.to_json().dump(2));

  const auto c1 = verify_cafure_matera(2, 3, {7}, 5, 9, base);
  const auto c2 = verify_cafure_matera(2, 3, {7}, 5, 9, par);
  CHECK(c1.to_json().dump() == c2.to_json().dump());
}

TEST_CASE("CSV projection") {
  SuiteOptions opts;
  opts.elide_timing = true;
  const auto run = verify_thm3(1, 3, 3, 3, 7, Thm3Mode::direct, opts);
  const std::string csv = run.to_csv();
  CHECK(csv.rfind("index,status\n", 0) == 0);
  CHECK(csv.find("0,pass") != std::string::npos);
  CHECK(csv.find("2,pass") != std::string::npos);
}
