#pragma once

// Exact calculators and three-valued predicates for the explicit bounds:
// existence thresholds, the Cafure-Matera and Schmidt right-hand sides, the
// Leep-Yeomans lower bound and the Bezout degree cap. Irrational terms
// (square roots of q, cube roots of d^13) are enclosed by scaled integer
// roots with directed rounding; predicates compare exact integers only, so
// floating point can never flip a verdict. Every report also carries a
// double-precision convenience value.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace nonsing {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class Verdict { yes, no, boundary };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "boundary";
  }
}

// lo <= exact value <= hi
struct Enclosure {
  BigRat lo;
  BigRat hi;

  double approx() const {
    return (static_cast<double>(lo) + static_cast<double>(hi)) / 2.0;
  }
  BigRat width() const { return hi - lo; }
};

namespace detail {

inline BigInt isqrt_floor(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("isqrt of negative");
  return boost::multiprecision::sqrt(n);
}

inline BigInt icbrt_floor(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("icbrt of negative");
  if (n == 0) return 0;
  const std::size_t bits = boost::multiprecision::msb(n) + 1;
  BigInt x = BigInt(1) << (bits / 3 + 1);
  while (true) {
    const BigInt y = (2 * x + n / (x * x)) / 3;
    if (y >= x) break;
    x = y;
  }
  while (x * x * x > n) --x;
  while ((x + 1) * (x + 1) * (x + 1) <= n) ++x;
  return x;
}

inline BigInt pow_big(BigInt base, std::uint64_t exp) {
  BigInt r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

// Directed enclosure of sqrt(n) with denominator 10^scale; exact for perfect
// squares.
inline Enclosure sqrt_bounds(const BigInt& n, std::uint32_t scale) {
  const BigInt r = isqrt_floor(n);
  if (r * r == n) return {BigRat(r), BigRat(r)};
  const BigInt den = pow_big(10, scale);
  const BigInt lo = isqrt_floor(n * den * den);
  return {BigRat(lo, den), BigRat(lo + 1, den)};
}

// Directed enclosure of cbrt(n); exact for perfect cubes.
inline Enclosure cbrt_bounds(const BigInt& n, std::uint32_t scale) {
  const BigInt r = icbrt_floor(n);
  if (r * r * r == n) return {BigRat(r), BigRat(r)};
  const BigInt den = pow_big(10, scale);
  const BigInt lo = icbrt_floor(n * den * den * den);
  return {BigRat(lo, den), BigRat(lo + 1, den)};
}

inline bool is_prime_power_u64(std::uint64_t q, std::uint64_t* prime_out = nullptr) {
  if (q < 2) return false;
  std::uint64_t m = q;
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      p = d;
      while (m % d == 0) m /= d;
      if (m != 1) return false;
      if (prime_out) *prime_out = p;
      return true;
    }
  }
  if (prime_out) *prime_out = q;  // q itself is prime
  return true;
}

}  // namespace detail

// (d-1)(d-2), always a non-negative even integer for d >= 1.
inline BigInt alpha_of(std::uint64_t d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  return d >= 2 ? BigInt(d - 1) * BigInt(d - 2) : BigInt(0);
}

// beta = 5 d^{13/3} + d(d+e-1), enclosed by directed cube roots of d^13.
// The enclosure is exact when d is a perfect cube and never contains an
// integer otherwise (5 d^{13/3} is irrational then). Memoized: predicate
// sweeps call this for the same few (d, e) pairs millions of times.
inline Enclosure beta_bounds(std::uint64_t d, std::uint64_t e,
                             std::uint32_t scale = 18) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  static std::mutex cache_mutex;
  static std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint32_t>,
                  Enclosure>
      cache;
  const auto key = std::make_tuple(d, e, scale);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const BigInt d13 = detail::pow_big(BigInt(d), 13);
  const Enclosure c = detail::cbrt_bounds(d13, scale);
  const BigRat linear = BigRat(BigInt(d) * (BigInt(d) + BigInt(e) - 1));
  const Enclosure result{5 * c.lo + linear, 5 * c.hi + linear};
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(key, result);
  return result;
}

// Exact decision of q > 1/4 (alpha + sqrt(alpha^2 + 4 beta))^2, equivalently
// q - alpha sqrt(q) - beta > 0: with [beta_lo, beta_hi] a directed rational
// enclosure, yes when q - beta_hi > 0 and (q - beta_hi)^2 > alpha^2 q, no
// when the analogous test with beta_lo fails, boundary when the enclosure is
// too tight to split (only at ~10^-18-level ties).
inline Verdict thm2_satisfied(std::uint64_t q, std::uint64_t d, std::uint64_t e) {
  if (d < 1 || !detail::is_prime_power_u64(q))
    throw std::invalid_argument("thm2_satisfied: invalid parameters");
  const Enclosure beta = beta_bounds(d, e);
  const BigInt alpha = alpha_of(d);
  const BigInt a2q = alpha * alpha * q;

  const auto strictly_above = [&](const BigRat& b) {
    // q - b > 0 and (q - b)^2 > alpha^2 q, exactly
    const BigInt num = boost::multiprecision::numerator(b);
    const BigInt den = boost::multiprecision::denominator(b);
    const BigInt lhs = BigInt(q) * den - num;  // (q - b) * den
    if (lhs <= 0) return false;
    return lhs * lhs > a2q * den * den;
  };

  if (strictly_above(beta.hi)) return Verdict::yes;
  if (!strictly_above(beta.lo)) return Verdict::no;
  return Verdict::boundary;
}

// 1/2 (3 d^4 - 4 d^3 + 5 d^2); integral for every d, returned exactly.
inline BigRat thm3_threshold(std::uint64_t d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  const BigInt dd(d);
  return BigRat(3 * dd * dd * dd * dd - 4 * dd * dd * dd + 5 * dd * dd, 2);
}

inline bool thm3_satisfied(std::uint64_t q, std::uint64_t d) {
  if (!detail::is_prime_power_u64(q))
    throw std::invalid_argument("thm3_satisfied: q not a prime power");
  return BigRat(q) > thm3_threshold(d);
}

// 1/4 (alpha + sqrt(alpha^2 + 4 beta))^2 with relative enclosure width below
// rel_tol (default 1e-9).
inline Enclosure thm2_threshold_bounds(std::uint64_t d, std::uint64_t e) {
  const BigInt alpha = alpha_of(d);
  for (std::uint32_t scale = 12;; scale += 6) {
    const Enclosure beta = beta_bounds(d, e, scale);
    const BigRat disc_lo = BigRat(alpha * alpha) + 4 * beta.lo;
    const BigRat disc_hi = BigRat(alpha * alpha) + 4 * beta.hi;
    // sqrt of a rational: sqrt(num)/sqrt(den) directed
    const auto sqrt_rat = [&](const BigRat& x, bool upper) {
      const BigInt num = boost::multiprecision::numerator(x);
      const BigInt den = boost::multiprecision::denominator(x);
      const Enclosure sn = detail::sqrt_bounds(num, scale);
      const Enclosure sd = detail::sqrt_bounds(den, scale);
      // lower: sn.lo / sd.hi, upper: sn.hi / sd.lo (sd.lo > 0 since den >= 1)
      return upper ? sn.hi / sd.lo : sn.lo / sd.hi;
    };
    const BigRat root_lo = sqrt_rat(disc_lo, false);
    const BigRat root_hi = sqrt_rat(disc_hi, true);
    const BigRat t_lo = (BigRat(alpha) + root_lo) * (BigRat(alpha) + root_lo) / 4;
    const BigRat t_hi = (BigRat(alpha) + root_hi) * (BigRat(alpha) + root_hi) / 4;
    if (t_lo > 0 && (t_hi - t_lo) * 1000000000 < t_lo) return {t_lo, t_hi};
    if (scale > 60) return {t_lo, t_hi};
  }
}

// (d-1)(d-2) q^{n-3/2} + 5 d^{13/3} q^{n-2}, enclosed with relative width
// below rel_tol.
inline Enclosure cafure_matera_rhs(std::uint64_t d, std::uint64_t n,
                                   std::uint64_t q) {
  if (d < 1 || n < 2 || q < 2)
    throw std::invalid_argument("cafure_matera_rhs: invalid parameters");
  const BigInt alpha = alpha_of(d);
  const BigInt qn2 = detail::pow_big(BigInt(q), n - 2);
  const BigInt d13 = detail::pow_big(BigInt(d), 13);
  for (std::uint32_t scale = 12;; scale += 6) {
    const Enclosure sq = detail::sqrt_bounds(BigInt(q), scale);
    const Enclosure cb = detail::cbrt_bounds(d13, scale);
    const BigRat lo = BigRat(alpha * qn2) * sq.lo + 5 * BigRat(qn2) * cb.lo;
    const BigRat hi = BigRat(alpha * qn2) * sq.hi + 5 * BigRat(qn2) * cb.hi;
    if (lo > 0 && (hi - lo) * 1000000000 < lo) return {lo, hi};
    if (scale > 60) return {lo, hi};
  }
}

// Schmidt's Lang-Weil constant C = 6 d^2 k^{2^k} with k = d(d+1)/2, exact.
// Guarded by max_d because the number of digits explodes (d = 4 already gives
// k^{2^k} = 10^1024).
inline BigInt schmidt_constant(std::uint64_t d, std::uint64_t max_d = 4) {
  if (d < 1) throw std::invalid_argument("schmidt_constant: d must be >= 1");
  if (d > max_d)
    throw std::invalid_argument(
        "schmidt_constant: d exceeds the configured big-integer guard");
  const std::uint64_t k = d * (d + 1) / 2;
  const std::uint64_t two_k = 1ull << k;
  return 6 * BigInt(d) * BigInt(d) * detail::pow_big(BigInt(k), two_k);
}

// (d-1)(d-2) q^{n-3/2} + C_schmidt q^{n-2}; the second term is exact.
inline Enclosure schmidt_rhs(std::uint64_t d, std::uint64_t n, std::uint64_t q,
                             std::uint64_t max_d = 4) {
  if (d < 1 || n < 2 || q < 2)
    throw std::invalid_argument("schmidt_rhs: invalid parameters");
  const BigInt alpha = alpha_of(d);
  const BigInt qn2 = detail::pow_big(BigInt(q), n - 2);
  const BigRat second(schmidt_constant(d, max_d) * qn2);
  for (std::uint32_t scale = 12;; scale += 6) {
    const Enclosure sq = detail::sqrt_bounds(BigInt(q), scale);
    const BigRat lo = BigRat(alpha * qn2) * sq.lo + second;
    const BigRat hi = BigRat(alpha * qn2) * sq.hi + second;
    if (lo > 0 && (hi - lo) * 1000000000 < lo) return {lo, hi};
    if (scale > 60) return {lo, hi};
  }
}

// Generic Lang-Weil right-hand side (d-1)(d-2) q^{r-1/2} + C q^{r-1} for a
// caller-supplied constant C.
inline Enclosure lang_weil_rhs(std::uint64_t d, std::uint64_t r, std::uint64_t q,
                               const BigInt& C) {
  if (d < 1 || r < 1 || q < 2)
    throw std::invalid_argument("lang_weil_rhs: invalid parameters");
  const BigInt alpha = alpha_of(d);
  const BigInt qr1 = detail::pow_big(BigInt(q), r - 1);
  const BigRat second(C * qr1);
  for (std::uint32_t scale = 12;; scale += 6) {
    const Enclosure sq = detail::sqrt_bounds(BigInt(q), scale);
    const BigRat lo = BigRat(alpha * qr1) * sq.lo + second;
    const BigRat hi = BigRat(alpha * qr1) * sq.hi + second;
    if ((lo > 0 && (hi - lo) * 1000000000 < lo) || alpha == 0) return {lo, hi};
    if (scale > 60) return {lo, hi};
  }
}

// q + 1 - (1/2)(d-1)(d-2) floor(2 sqrt(q)), with floor(2 sqrt(q)) computed as
// isqrt(4q); (d-1)(d-2) is even, so the half product is integral. May be
// negative.
inline BigInt leep_yeomans_lower(std::uint64_t d, std::uint64_t q) {
  if (d < 1 || !detail::is_prime_power_u64(q))
    throw std::invalid_argument("leep_yeomans_lower: invalid parameters");
  const BigInt half_alpha = alpha_of(d) / 2;
  return BigInt(q) + 1 - half_alpha * detail::isqrt_floor(BigInt(4) * q);
}

// Bezout degree cap for the intersection of two hypersurfaces.
inline BigInt bezout_rhs(std::uint64_t d1, std::uint64_t d2) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("bezout_rhs: degrees >= 1");
  return BigInt(d1) * BigInt(d2);
}

struct ThresholdReport {
  std::uint64_t d = 0;
  std::uint64_t e = 0;
  BigInt alpha;
  Enclosure beta;
  Enclosure thm2_threshold;
  BigRat thm3;
  std::optional<Verdict> thm2_verdict;  // set when q was supplied
  std::optional<bool> thm3_verdict;
};

inline ThresholdReport make_threshold_report(
    std::uint64_t d, std::uint64_t e,
    std::optional<std::uint64_t> q = std::nullopt) {
  ThresholdReport r;
  r.d = d;
  r.e = e;
  r.alpha = alpha_of(d);
  r.beta = beta_bounds(d, e);
  r.thm2_threshold = thm2_threshold_bounds(d, e);
  r.thm3 = thm3_threshold(d);
  if (q) {
    r.thm2_verdict = thm2_satisfied(*q, d, e);
    r.thm3_verdict = thm3_satisfied(*q, d);
  }
  return r;
}

struct DeviationReport {
  BigInt measured;  // |N_affine - q^{n-1}|, exact
  Enclosure cafure_matera;
  Enclosure schmidt;
  bool within_cafure_matera = false;  // measured <= upper enclosure
  bool within_schmidt = false;
};

inline DeviationReport make_deviation_report(std::uint64_t d, std::uint64_t n,
                                             std::uint64_t q,
                                             const BigInt& n_affine,
                                             std::uint64_t schmidt_max_d = 4) {
  DeviationReport r;
  const BigInt expected = detail::pow_big(BigInt(q), n - 1);
  r.measured = n_affine >= expected ? n_affine - expected : expected - n_affine;
  r.cafure_matera = cafure_matera_rhs(d, n, q);
  r.schmidt = schmidt_rhs(d, n, q, schmidt_max_d);
  r.within_cafure_matera = BigRat(r.measured) <= r.cafure_matera.hi;
  r.within_schmidt = BigRat(r.measured) <= r.schmidt.hi;
  return r;
}

inline bool is_prime_power(std::uint64_t q) {
  return detail::is_prime_power_u64(q);
}

}  // namespace nonsing
