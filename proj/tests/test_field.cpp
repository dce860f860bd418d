#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>
#include <set>
#include <vector>

#include "nonsing/field.hpp"

using namespace nonsing;

namespace {

// Independent oracle for the lex-smallest monic irreducible quadratic over
// F_p: enumerate (c0, c1) low-degree-first and take the first with no root.
std::vector<std::uint32_t> smallest_irreducible_quadratic(std::uint32_t p) {
  for (std::uint32_t c0 = 0; c0 < p; ++c0) {
    for (std::uint32_t c1 = 0; c1 < p; ++c1) {
      bool has_root = false;
      for (std::uint32_t t = 0; t < p && !has_root; ++t)
        if ((t * t + c1 * t + c0) % p == 0) has_root = true;
      if (!has_root) return {c0, c1, 1};
    }
  }
  FAIL("no irreducible quadratic found");
  return {};
}

}  // namespace

TEST_CASE("make_field on prime fields") {
  auto f7 = FieldSpec::make(7, 1);
  CHECK(f7->p() == 7);
  CHECK(f7->k() == 1);
  CHECK(f7->q() == 7);
  CHECK(f7->modulus() == std::vector<std::uint32_t>{0, 1});  // x
  CHECK(f7->designator() == "7");
}

TEST_CASE("make_field picks the lex-smallest irreducible modulus") {
  auto f9 = FieldSpec::make(3, 2);
  CHECK(f9->q() == 9);
  CHECK(f9->modulus() == smallest_irreducible_quadratic(3));
  CHECK(f9->modulus() == std::vector<std::uint32_t>{1, 0, 1});  // t^2 + 1

  CHECK(FieldSpec::make(2, 2)->modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(FieldSpec::make(5, 2)->modulus() == smallest_irreducible_quadratic(5));
  CHECK(FieldSpec::make(5, 2)->modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(FieldSpec::make(7, 2)->modulus() == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(FieldSpec::make(2, 3)->modulus() ==
        std::vector<std::uint32_t>{1, 0, 1, 1});  // t^3 + t^2 + 1
  CHECK(FieldSpec::make(3, 3)->modulus() ==
        std::vector<std::uint32_t>{1, 0, 2, 1});  // t^3 + 2t^2 + 1
}

TEST_CASE("make_field rejects bad parameters") {
  CHECK_THROWS_AS(FieldSpec::make(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::make(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::make(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::make(7, 0), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::make(2, 21), std::invalid_argument);  // 2^21 > 2^20
  CHECK_THROWS_AS(FieldSpec::make(2, 30, 1u << 20), std::invalid_argument);
}

TEST_CASE("make_field is deterministic") {
  auto a = FieldSpec::make(3, 2);
  auto b = FieldSpec::make(3, 2);
  CHECK(a->modulus() == b->modulus());
  CHECK(a->same(*b));
}

TEST_CASE("field designator parsing") {
  CHECK(FieldSpec::parse("7")->q() == 7);
  CHECK(FieldSpec::parse("3^2")->q() == 9);
  CHECK(FieldSpec::parse("3^2")->designator() == "3^2");
  CHECK_THROWS_AS(FieldSpec::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::parse("3^"), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::parse("6"), std::invalid_argument);
}

TEST_CASE("basic arithmetic in F_7") {
  auto f = FieldSpec::make(7, 1);
  CHECK(f->mul(3, 5) == 1);  // 15 mod 7
  CHECK(f->div(3, 5) == 2);  // 5 * 2 = 10 = 3 mod 7
  for (felt a = 0; a < 7; ++a) CHECK(f->add(a, 0) == a);
  CHECK_THROWS_AS(f->div(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(f->inv(0), std::invalid_argument);
}

TEST_CASE("field axioms hold exhaustively for q <= 64") {
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> specs = {
      {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 1}, {3, 2},
      {3, 3}, {5, 1}, {5, 2}, {7, 1}, {7, 2}, {11, 1}, {31, 1}, {61, 1}};
  for (auto [p, k] : specs) {
    auto f = FieldSpec::make(p, k);
    const felt q = f->q();
    CAPTURE(p, k, q);
    for (felt a = 0; a < q; ++a) {
      CHECK(f->add(a, 0) == a);
      CHECK(f->mul(a, 1) == a);
      CHECK(f->add(a, f->neg(a)) == 0);
      if (a != 0) REQUIRE(f->mul(a, f->inv(a)) == 1);
      REQUIRE(f->pow(a, q) == a);  // a^q = a
    }
    for (felt a = 0; a < q; ++a) {
      for (felt b = 0; b < q; ++b) {
        REQUIRE(f->add(a, b) == f->add(b, a));
        REQUIRE(f->mul(a, b) == f->mul(b, a));
        for (felt c = 0; c < q; c += (q > 16 ? 7 : 1)) {
          REQUIRE(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
          REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
          REQUIRE(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
        }
      }
    }
  }
}

TEST_CASE("field axioms hold on random pairs for larger q") {
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> specs = {
      {101, 1}, {2, 10}, {3, 5}, {5, 5}, {13, 3}};
  std::mt19937_64 rng(0x5eed);
  for (auto [p, k] : specs) {
    auto f = FieldSpec::make(p, k);
    const felt q = f->q();
    CAPTURE(p, k, q);
    for (int i = 0; i < 2000; ++i) {
      const felt a = static_cast<felt>(rng() % q);
      const felt b = static_cast<felt>(rng() % q);
      const felt c = static_cast<felt>(rng() % q);
      REQUIRE(f->add(a, b) == f->add(b, a));
      REQUIRE(f->mul(a, b) == f->mul(b, a));
      REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
      REQUIRE(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      if (a != 0) REQUIRE(f->mul(a, f->inv(a)) == 1);
      REQUIRE(f->pow(a, q) == a);
    }
  }
}

TEST_CASE("cached tables are bit-identical to the Euclid path") {
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {3, 2}, {7, 2}, {2, 3}, {19, 1}}) {
    auto f = FieldSpec::make(p, k);
    REQUIRE(f->q() <= FieldSpec::kTableLimit);
    for (felt a = 0; a < f->q(); ++a) {
      for (felt b = 0; b < f->q(); ++b)
        REQUIRE(f->mul(a, b) == f->mul_nocache(a, b));
      if (a != 0) REQUIRE(f->inv(a) == f->inv_nocache(a));
    }
  }
}

TEST_CASE("coordinate codecs are canonical") {
  auto f = FieldSpec::make(3, 2);
  for (felt a = 0; a < 9; ++a) {
    auto c = f->coeffs(a);
    REQUIRE(c.size() == 2);
    CHECK(c[0] < 3);
    CHECK(c[1] < 3);
    CHECK(f->from_coeffs(c) == a);
  }
  CHECK(f->from_coeffs({2, 1}) == 5);
  CHECK_THROWS_AS(f->from_coeffs({3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(f->from_coeffs({0, 0, 1}), std::invalid_argument);
}

TEST_CASE("frobenius") {
  SECTION("identity on the prime field") {
    auto f = FieldSpec::make(13, 1);
    for (felt a = 0; a < 13; ++a) CHECK(f->frobenius(a) == a);
  }
  SECTION("moves elements outside the prime subfield of F_9") {
    auto f = FieldSpec::make(3, 2);
    CHECK(f->frobenius(0) == 0);
    for (felt a = 0; a < 9; ++a) {
      const bool in_prime_subfield = a < 3;
      if (in_prime_subfield)
        CHECK(f->frobenius(a) == a);
      else
        CHECK(f->frobenius(a) != a);
    }
  }
  SECTION("applying it k times is the identity") {
    for (auto [p, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {2, 6}, {3, 3}, {5, 2}, {7, 2}}) {
      auto f = FieldSpec::make(p, k);
      for (felt a = 0; a < f->q(); ++a) {
        felt x = a;
        for (std::uint32_t i = 0; i < k; ++i) x = f->frobenius(x);
        REQUIRE(x == a);
      }
    }
  }
}

TEST_CASE("embeddings") {
  SECTION("prime subfield constants embed as constants") {
    auto f7 = FieldSpec::make(7, 1);
    auto f49 = FieldSpec::make(7, 2);
    Embedding e(f7, f49);
    CHECK(e(0) == 0);
    for (felt c = 0; c < 7; ++c) CHECK(e(c) == f49->from_int(c));
  }
  SECTION("F_9 into F_81: Frobenius twice fixes the image") {
    auto f9 = FieldSpec::make(3, 2);
    auto f81 = FieldSpec::make(3, 4);
    Embedding e(f9, f81);
    for (felt a = 0; a < 9; ++a) {
      const felt img = e(a);
      CHECK(f81->frobenius(f81->frobenius(img)) == img);
      if (a >= 3) CHECK(f81->frobenius(img) != img);  // not in F_3
    }
  }
  SECTION("injective ring homomorphism, exhaustively for p^k <= 2^12") {
    const std::vector<std::array<std::uint32_t, 3>> cases = {
        {2, 2, 4}, {2, 3, 6}, {2, 2, 10}, {3, 2, 4}, {3, 2, 6}, {5, 2, 4}, {7, 2, 4}};
    for (auto [p, j, k] : cases) {
      auto from = FieldSpec::make(p, j);
      auto to = FieldSpec::make(p, k);
      REQUIRE(to->q() <= (1u << 12));
      Embedding e(from, to);
      std::set<felt> images;
      for (felt a = 0; a < from->q(); ++a) images.insert(e(a));
      REQUIRE(images.size() == from->q());  // injective
      CHECK(e(from->one()) == to->one());
      for (felt a = 0; a < from->q(); ++a) {
        for (felt b = 0; b < from->q(); ++b) {
          REQUIRE(e(from->mul(a, b)) == to->mul(e(a), e(b)));
          REQUIRE(e(from->add(a, b)) == to->add(e(a), e(b)));
        }
      }
    }
  }
  SECTION("composite through an intermediate field agrees on F_p") {
    auto f2 = FieldSpec::make(2, 1);
    auto f4 = FieldSpec::make(2, 2);
    auto f16 = FieldSpec::make(2, 4);
    Embedding e1(f2, f4), e2(f4, f16), e3(f2, f16);
    for (felt c = 0; c < 2; ++c) CHECK(e2(e1(c)) == e3(c));
  }
  SECTION("incompatible embeddings are rejected") {
    CHECK_THROWS_AS(Embedding(FieldSpec::make(2, 2), FieldSpec::make(3, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(Embedding(FieldSpec::make(2, 2), FieldSpec::make(2, 3)),
                    std::invalid_argument);
  }
}
