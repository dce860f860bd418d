#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <vector>

#include "nonsing/bounds.hpp"

using namespace nonsing;
using Dec50 = boost::multiprecision::cpp_dec_float_50;

namespace {

// Independent 50-digit oracle for the pair-threshold margin
// q - alpha sqrt(q) - beta.
Dec50 thm2_margin_oracle(std::uint64_t q, std::uint64_t d, std::uint64_t e) {
  const Dec50 alpha = d >= 2 ? Dec50((d - 1) * (d - 2)) : Dec50(0);
  const Dec50 beta =
      5 * boost::multiprecision::pow(Dec50(d), Dec50(13) / 3) +
      Dec50(d) * Dec50(d + e - 1);
  return Dec50(q) - alpha * boost::multiprecision::sqrt(Dec50(q)) - beta;
}

Dec50 to_dec(const BigRat& r) {
  return Dec50(boost::multiprecision::numerator(r).str()) /
         Dec50(boost::multiprecision::denominator(r).str());
}

std::vector<std::uint64_t> prime_powers_up_to(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
    for (std::uint64_t v = p; v <= limit; v *= p) {
      out.push_back(v);
      if (v > limit / p) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("thm2_satisfied examples") {
  CHECK(thm2_satisfied(107, 2, 1) == Verdict::yes);  // beta ~ 104.79
  CHECK(thm2_satisfied(103, 2, 1) == Verdict::no);
  CHECK(thm2_satisfied(7, 1, 1) == Verdict::yes);  // beta = 6 < 7
  CHECK(thm2_satisfied(5, 1, 1) == Verdict::no);
  // d = 1: beta = 5 + e exactly, so yes iff q > 5 + e
  for (std::uint64_t e = 0; e <= 4; ++e) {
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 8ull, 9ull, 11ull, 13ull}) {
      const Verdict v = thm2_satisfied(q, 1, e);
      CHECK(v == (q > 5 + e ? Verdict::yes : Verdict::no));
    }
  }
  CHECK_THROWS_AS(thm2_satisfied(6, 2, 1), std::invalid_argument);  // not a prime power
  CHECK_THROWS_AS(thm2_satisfied(7, 0, 1), std::invalid_argument);
}

TEST_CASE("thm3 threshold values") {
  CHECK(thm3_threshold(1) == BigRat(2));
  CHECK(thm3_threshold(2) == BigRat(18));
  CHECK(thm3_threshold(3) == BigRat(90));
  // always integral
  for (std::uint64_t d = 1; d <= 12; ++d)
    CHECK(boost::multiprecision::denominator(thm3_threshold(d)) == 1);
  CHECK(thm3_satisfied(19, 2));
  CHECK_FALSE(thm3_satisfied(17, 2));
}

TEST_CASE("thm3_satisfied validates q") {
  CHECK_THROWS_AS(thm3_satisfied(18, 2), std::invalid_argument);
  CHECK(thm3_satisfied(19, 2));
}

TEST_CASE("leep_yeomans_lower") {
  for (std::uint64_t q : {3ull, 7ull, 25ull, 101ull})
    CHECK(leep_yeomans_lower(2, q) == BigInt(q + 1));
  CHECK(leep_yeomans_lower(3, 7) == 3);    // 8 - isqrt(28) = 8 - 5
  CHECK(leep_yeomans_lower(4, 25) == -4);  // 26 - 3 * 10
  // floor, never rounding: 2 sqrt(7) = 5.29..., so 3 rather than 2
  CHECK(leep_yeomans_lower(3, 7) != 2);
  CHECK_THROWS_AS(leep_yeomans_lower(3, 6), std::invalid_argument);
}

TEST_CASE("schmidt constant") {
  CHECK(schmidt_constant(2) == 157464);  // 6 * 4 * 3^8
  CHECK(schmidt_constant(1) == 6);
  // independent recomputation for d = 3: k = 6, C = 6 * 9 * 6^64
  BigInt p = 1;
  for (int i = 0; i < 64; ++i) p *= 6;
  CHECK(schmidt_constant(3) == 54 * p);
  CHECK_THROWS_AS(schmidt_constant(5), std::invalid_argument);  // guard
  CHECK(schmidt_constant(4) > BigInt(1));
  SECTION("d = 4 has the advertised magnitude: k^{2^k} = 10^1024") {
    BigInt t = detail::pow_big(BigInt(10), 1024);
    CHECK(schmidt_constant(4) == 6 * 16 * t);
  }
}

TEST_CASE("bezout") {
  CHECK(bezout_rhs(1, 1) == 1);
  CHECK(bezout_rhs(3, 4) == 12);
  for (std::uint64_t d = 1; d <= 7; ++d) CHECK(bezout_rhs(d, 1) == BigInt(d));
}

TEST_CASE("cafure_matera_rhs enclosures") {
  // d = 2: alpha = 0, value = 5 * 2^{13/3} * q
  const Dec50 coeff = 5 * boost::multiprecision::pow(Dec50(2), Dec50(13) / 3);
  for (std::uint64_t q : {7ull, 11ull, 101ull}) {
    const auto enc = cafure_matera_rhs(2, 3, q);
    const Dec50 truth = coeff * q;
    CHECK(to_dec(enc.lo) <= truth);
    CHECK(to_dec(enc.hi) >= truth);
    CHECK((enc.hi - enc.lo) * 1000000000 < enc.lo);  // relative width < 1e-9
  }
  // d = 1 second term: 5 * q^{n-2} exactly, first term zero
  const auto e1 = cafure_matera_rhs(1, 3, 7);
  CHECK(e1.lo == BigRat(35));
  CHECK(e1.hi == BigRat(35));
}

TEST_CASE("lang_weil_rhs") {
  const auto e = lang_weil_rhs(1, 2, 9, BigInt(42));
  CHECK(e.lo == BigRat(42 * 9));  // first term vanishes for d = 1
  CHECK(e.hi == e.lo);
  const auto f = lang_weil_rhs(3, 2, 7, BigInt(10));
  // 2 * 7^{1.5} + 70
  const Dec50 truth = 2 * boost::multiprecision::sqrt(Dec50(7)) * 7 + 70;
  CHECK(to_dec(f.lo) <= truth);
  CHECK(to_dec(f.hi) >= truth);
}

TEST_CASE("cafure-matera improves on schmidt pointwise for d <= 4") {
  for (std::uint64_t d = 1; d <= 4; ++d) {
    for (std::uint64_t n = 2; n <= 4; ++n) {
      for (std::uint64_t q : {2ull, 3ull, 5ull, 9ull, 49ull, 1021ull}) {
        const auto cm = cafure_matera_rhs(d, n, q);
        const auto sc = schmidt_rhs(d, n, q);
        CAPTURE(d, n, q);
        REQUIRE(cm.hi < sc.lo);
      }
    }
  }
}

TEST_CASE("thm2 monotone in q") {
  for (auto [d, e] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
           {1, 1}, {2, 1}, {2, 3}, {3, 2}, {4, 4}}) {
    bool seen_yes = false;
    for (std::uint64_t q : prime_powers_up_to(3000)) {
      const Verdict v = thm2_satisfied(q, d, e);
      if (seen_yes) REQUIRE(v == Verdict::yes);
      if (v == Verdict::yes) seen_yes = true;
    }
    REQUIRE(seen_yes);  // threshold is finite for these parameters
  }
}

TEST_CASE("thm2_satisfied agrees with the 50-digit oracle (sample)") {
  const auto qs = prime_powers_up_to(2000);
  for (std::uint64_t d = 1; d <= 6; ++d) {
    for (std::uint64_t e = 0; e <= 6; e += 2) {
      for (std::uint64_t q : qs) {
        const Verdict v = thm2_satisfied(q, d, e);
        const Dec50 margin = thm2_margin_oracle(q, d, e);
        CAPTURE(q, d, e, margin.str(8, std::ios_base::scientific));
        if (v == Verdict::yes) REQUIRE(margin > 0);
        if (v == Verdict::no) REQUIRE(margin <= 1e-30);
        if (v == Verdict::boundary) REQUIRE(abs(margin) < 1e-6);
      }
    }
  }
}

TEST_CASE("threshold report") {
  const auto r = make_threshold_report(3, 2, 107);
  CHECK(r.alpha == 2);
  CHECK(r.thm3 == BigRat(90));
  // beta = 5 * 3^{13/3} + 12 = 596.63...
  CHECK(r.beta.lo > 596);
  CHECK(r.beta.hi < 597);
  CHECK(r.beta.lo <= r.beta.hi);
  // threshold = 1/4 (2 + sqrt(4 + 4 beta))^2; bracket with the oracle
  const Dec50 beta = 5 * boost::multiprecision::pow(Dec50(3), Dec50(13) / 3) + 12;
  const Dec50 truth =
      boost::multiprecision::pow(
          (2 + boost::multiprecision::sqrt(4 + 4 * beta)) / 2, 2);
  CHECK(to_dec(r.thm2_threshold.lo) <= truth);
  CHECK(to_dec(r.thm2_threshold.hi) >= truth);
  CHECK((r.thm2_threshold.hi - r.thm2_threshold.lo) * 1000000000 <
        r.thm2_threshold.lo);
  REQUIRE(r.thm2_verdict.has_value());
  CHECK(*r.thm2_verdict == Verdict::no);  // 107 < ~647
  REQUIRE(r.thm3_verdict.has_value());
  CHECK(*r.thm3_verdict);  // 107 > 90

  const auto dev = make_deviation_report(2, 3, 7, BigInt(49));
  CHECK(dev.measured == 0);
  CHECK(dev.within_cafure_matera);
  CHECK(dev.within_schmidt);
  const auto dev2 = make_deviation_report(2, 3, 7, BigInt(98));
  CHECK(dev2.measured == 49);
}
