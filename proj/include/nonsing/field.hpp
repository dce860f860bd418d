#pragma once

// Exact arithmetic in F_p and F_{p^k}. Elements are canonical indices in
// [0, q): the base-p digits of the index are the coordinates in the power
// basis of the modulus, least-significant digit first.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nonsing {

using felt = std::uint32_t;  // field element index in [0, q)

// Thrown when an operation would exceed a configured search/enumeration
// budget. Distinct from a verdict: callers may turn it into "undecided".
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Remainder of a by b in F_p[t]; coefficient vectors low-degree first,
// b monic. Used only by the modulus search.
inline std::vector<std::uint32_t> upoly_rem(std::vector<std::uint32_t> a,
                                            const std::vector<std::uint32_t>& b,
                                            std::uint32_t p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint64_t lead = a.back();
    if (lead != 0) {
      const std::size_t shift = a.size() - 1 - db;
      for (std::size_t j = 0; j < db; ++j) {
        std::uint64_t v = a[shift + j] + lead * (p - b[j]) % p;
        a[shift + j] = static_cast<std::uint32_t>(v % p);
      }
    }
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

}  // namespace detail

class FieldSpec;
using FieldPtr = std::shared_ptr<const FieldSpec>;

// Immutable description of F_{p^k}. Shareable across threads; all element
// operations are pure. Multiplication/inversion tables are built at
// construction for q <= kTableLimit and are bit-identical to the direct
// Euclid path (tests enforce this).
class FieldSpec {
 public:
  static constexpr std::uint64_t kDefaultLimit = 1ull << 20;
  static constexpr std::uint32_t kTableLimit = 512;

  static FieldPtr make(std::uint32_t p, std::uint32_t k,
                       std::uint64_t limit = kDefaultLimit);

  // Designator grammar: "p" or "p^k", e.g. "7", "3^2".
  static FieldPtr parse(std::string_view designator,
                        std::uint64_t limit = kDefaultLimit);

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t q() const { return q_; }
  // Monic irreducible modulus, k+1 coefficients, low-degree first.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  std::string designator() const {
    return k_ == 1 ? std::to_string(p_)
                   : std::to_string(p_) + "^" + std::to_string(k_);
  }

  bool same(const FieldSpec& o) const {
    return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
  }

  felt zero() const { return 0; }
  felt one() const { return 1; }
  bool is_zero(felt a) const { return a == 0; }

  // Least non-negative residue of v, as an element of the prime subfield.
  felt from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<felt>(r);
  }

  std::vector<std::uint32_t> coeffs(felt a) const {
    std::vector<std::uint32_t> c(k_);
    for (std::uint32_t i = 0; i < k_; ++i) {
      c[i] = a % p_;
      a /= p_;
    }
    return c;
  }

  felt from_coeffs(const std::vector<std::uint32_t>& c) const {
    if (c.size() > k_) throw std::invalid_argument("too many coordinates");
    felt a = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] >= p_) throw std::invalid_argument("coordinate out of range");
      a = a * p_ + c[i];
    }
    return a;
  }

  felt add(felt a, felt b) const {
    if (k_ == 1) {
      felt s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    felt r = 0, pw = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      felt s = a % p_ + b % p_;
      if (s >= p_) s -= p_;
      r += s * pw;
      a /= p_;
      b /= p_;
      pw *= p_;
    }
    return r;
  }

  felt neg(felt a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    felt r = 0, pw = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      felt d = a % p_;
      r += (d == 0 ? 0 : p_ - d) * pw;
      a /= p_;
      pw *= p_;
    }
    return r;
  }

  felt sub(felt a, felt b) const { return add(a, neg(b)); }

  felt mul(felt a, felt b) const {
    if (tabulated_) return mul_table_[static_cast<std::size_t>(a) * q_ + b];
    return mul_nocache(a, b);
  }

  // Direct path: digit convolution and reduction by the modulus; no tables.
  felt mul_nocache(felt a, felt b) const {
    if (k_ == 1) return static_cast<felt>(std::uint64_t(a) * b % p_);
    std::uint32_t da[kMaxDigits], db[kMaxDigits];
    std::uint64_t conv[2 * kMaxDigits];
    for (std::uint32_t i = 0; i < k_; ++i) {
      da[i] = a % p_;
      a /= p_;
      db[i] = b % p_;
      b /= p_;
    }
    const std::uint32_t clen = 2 * k_ - 1;
    for (std::uint32_t i = 0; i < clen; ++i) conv[i] = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
      if (da[i] == 0) continue;
      for (std::uint32_t j = 0; j < k_; ++j)
        conv[i + j] += std::uint64_t(da[i]) * db[j];
    }
    // t^k = -(m_0 + m_1 t + ... + m_{k-1} t^{k-1})
    for (std::uint32_t i = clen; i-- > k_;) {
      const std::uint64_t c = conv[i] % p_;
      if (c == 0) continue;
      for (std::uint32_t j = 0; j < k_; ++j)
        conv[i - k_ + j] += c * ((p_ - modulus_[j]) % p_);
    }
    felt r = 0, pw = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += static_cast<felt>(conv[i] % p_) * pw;
      pw *= p_;
    }
    return r;
  }

  felt inv(felt a) const {
    if (a == 0) throw std::invalid_argument("division by zero");
    if (tabulated_) return inv_table_[a];
    return inv_nocache(a);
  }

  // Extended Euclid: on integers mod p for k = 1, on F_p[t] against the
  // modulus otherwise.
  felt inv_nocache(felt a) const {
    if (a == 0) throw std::invalid_argument("division by zero");
    if (k_ == 1) {
      std::int64_t t = 0, newt = 1, r = p_, newr = a;
      while (newr != 0) {
        const std::int64_t qq = r / newr;
        std::int64_t tmp = t - qq * newt;
        t = newt;
        newt = tmp;
        tmp = r - qq * newr;
        r = newr;
        newr = tmp;
      }
      if (t < 0) t += p_;
      return static_cast<felt>(t);
    }
    using Poly = std::vector<std::uint32_t>;
    const auto trim = [](Poly& x) {
      while (!x.empty() && x.back() == 0) x.pop_back();
    };
    const auto pinv = [&](std::uint32_t v) {
      std::int64_t t = 0, newt = 1, r = p_, newr = v;
      while (newr != 0) {
        const std::int64_t qq = r / newr;
        std::int64_t tmp = t - qq * newt;
        t = newt;
        newt = tmp;
        tmp = r - qq * newr;
        r = newr;
        newr = tmp;
      }
      if (t < 0) t += p_;
      return static_cast<std::uint32_t>(t);
    };
    Poly r0 = modulus_, r1 = coeffs(a), t0 = {}, t1 = {1};
    trim(r1);
    while (!r1.empty()) {
      // divide r0 by r1: quotient q, remainder r
      Poly quo(r0.size() > r1.size() - 1 ? r0.size() - r1.size() + 1 : 0, 0);
      Poly rem = r0;
      const std::uint32_t lead_inv = pinv(r1.back());
      while (rem.size() >= r1.size() && !rem.empty()) {
        const std::uint64_t c = std::uint64_t(rem.back()) * lead_inv % p_;
        const std::size_t shift = rem.size() - r1.size();
        if (c != 0) {
          quo[shift] = static_cast<std::uint32_t>(c);
          for (std::size_t j = 0; j < r1.size(); ++j) {
            std::uint64_t v = rem[shift + j] + c * (p_ - r1[j]) % p_;
            rem[shift + j] = static_cast<std::uint32_t>(v % p_);
          }
        }
        rem.pop_back();
        trim(rem);
        if (rem.size() < r1.size()) break;
      }
      // t2 = t0 - q*t1
      Poly t2(std::max(t0.size(), quo.size() + t1.size()), 0);
      for (std::size_t i = 0; i < t0.size(); ++i) t2[i] = t0[i];
      for (std::size_t i = 0; i < quo.size(); ++i) {
        if (quo[i] == 0) continue;
        for (std::size_t j = 0; j < t1.size(); ++j) {
          std::uint64_t v = t2[i + j] + std::uint64_t(quo[i]) * (p_ - t1[j]) % p_;
          t2[i + j] = static_cast<std::uint32_t>(v % p_);
        }
      }
      trim(t2);
      r0 = r1;
      r1 = rem;
      t0 = t1;
      t1 = t2;
    }
    // r0 is the gcd, a nonzero constant (modulus irreducible)
    if (r0.size() != 1) throw std::logic_error("modulus not irreducible");
    const std::uint32_t scale = pinv(r0[0]);
    Poly res(k_, 0);
    for (std::size_t i = 0; i < t0.size() && i < k_; ++i)
      res[i] = static_cast<std::uint32_t>(std::uint64_t(t0[i]) * scale % p_);
    return from_coeffs(res);
  }

  felt div(felt a, felt b) const { return mul(a, inv(b)); }

  felt pow(felt a, std::uint64_t e) const {
    felt r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  felt frobenius(felt a) const { return pow(a, p_); }

 private:
  static constexpr std::uint32_t kMaxDigits = 32;

  FieldSpec(std::uint32_t p, std::uint32_t k, std::uint32_t q,
            std::vector<std::uint32_t> modulus)
      : p_(p), k_(k), q_(q), modulus_(std::move(modulus)) {
    if (q_ <= kTableLimit) {
      mul_table_.resize(static_cast<std::size_t>(q_) * q_);
      for (felt a = 0; a < q_; ++a)
        for (felt b = 0; b < q_; ++b)
          mul_table_[static_cast<std::size_t>(a) * q_ + b] = mul_nocache(a, b);
      inv_table_.resize(q_);
      inv_table_[0] = 0;
      for (felt a = 1; a < q_; ++a) inv_table_[a] = inv_nocache(a);
      tabulated_ = true;
    }
  }

  std::uint32_t p_, k_, q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<felt> mul_table_;
  std::vector<felt> inv_table_;
  bool tabulated_ = false;
};

inline FieldPtr FieldSpec::make(std::uint32_t p, std::uint32_t k,
                                std::uint64_t limit) {
  if (!detail::is_prime_u64(p)) throw std::invalid_argument("p is not prime");
  if (k < 1) throw std::invalid_argument("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > limit) throw std::invalid_argument("p^k exceeds the field limit");
  }
  if (q > (1u << 30)) throw std::invalid_argument("p^k exceeds the field limit");

  static std::mutex cache_mutex;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({p, k});
    if (it != cache.end()) return it->second;
  }

  // Lex-smallest monic irreducible modulus, coefficients compared
  // low-degree-first.
  std::vector<std::uint32_t> mod(k + 1, 0);
  mod[k] = 1;
  if (k > 1) {
    std::uint64_t span = 1;
    for (std::uint32_t i = 0; i + 1 < k; ++i) span *= p;  // p^{k-1}
    bool found = false;
    for (std::uint64_t idx = 0; idx < span * p && !found; ++idx) {
      std::uint64_t rest = idx;
      std::uint64_t div = span;
      for (std::uint32_t j = 0; j < k; ++j) {
        mod[j] = static_cast<std::uint32_t>(rest / div);
        rest %= div;
        div /= p;
      }
      bool irreducible = true;
      // trial division by every monic divisor of degree 1..k/2
      for (std::uint32_t a = 1; a <= k / 2 && irreducible; ++a) {
        std::uint64_t pa = 1;
        for (std::uint32_t i = 0; i < a; ++i) pa *= p;
        std::vector<std::uint32_t> cand(a + 1, 0);
        cand[a] = 1;
        for (std::uint64_t c = 0; c < pa && irreducible; ++c) {
          std::uint64_t cc = c;
          for (std::uint32_t j = 0; j < a; ++j) {
            cand[j] = static_cast<std::uint32_t>(cc % p);
            cc /= p;
          }
          if (detail::upoly_rem(mod, cand, p).empty()) irreducible = false;
        }
      }
      if (irreducible) found = true;
    }
    if (!found) throw std::logic_error("no irreducible modulus found");
  }

  FieldPtr spec(new FieldSpec(p, k, static_cast<std::uint32_t>(q), mod));
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(std::make_pair(p, k), spec);
  return spec;
}

inline FieldPtr FieldSpec::parse(std::string_view s, std::uint64_t limit) {
  const auto parse_num = [](std::string_view t) -> std::uint64_t {
    if (t.empty()) throw std::invalid_argument("bad field designator");
    std::uint64_t v = 0;
    for (char c : t) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad field designator");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
      if (v > (1ull << 32)) throw std::invalid_argument("bad field designator");
    }
    return v;
  };
  const auto caret = s.find('^');
  std::uint64_t p, k = 1;
  if (caret == std::string_view::npos) {
    p = parse_num(s);
  } else {
    p = parse_num(s.substr(0, caret));
    k = parse_num(s.substr(caret + 1));
  }
  return make(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k),
              limit);
}

// Fixed embedding F_{p^j} -> F_{p^k} for j | k: the from-field generator maps
// to the index-smallest root of the from-modulus in the to-field, so the map
// is deterministic. It is a ring homomorphism fixing F_p.
class Embedding {
 public:
  Embedding(FieldPtr from, FieldPtr to)
      : from_(std::move(from)), to_(std::move(to)) {
    if (from_->p() != to_->p())
      throw std::invalid_argument("embedding: characteristic mismatch");
    if (to_->k() % from_->k() != 0)
      throw std::invalid_argument("embedding: degree does not divide");
    basis_image_.assign(from_->k(), to_->one());
    if (from_->k() > 1) {
      felt root = 0;
      bool found = false;
      const auto& mod = from_->modulus();
      for (felt r = 0; r < to_->q() && !found; ++r) {
        felt v = to_->zero();
        for (std::size_t i = mod.size(); i-- > 0;)
          v = to_->add(to_->mul(v, r), to_->from_int(mod[i]));
        if (v == 0) {
          root = r;
          found = true;
        }
      }
      if (!found) throw std::logic_error("embedding: no root of modulus");
      felt pw = to_->one();
      for (std::uint32_t i = 0; i < from_->k(); ++i) {
        basis_image_[i] = pw;
        pw = to_->mul(pw, root);
      }
    }
    if (from_->q() <= 4096) {
      map_.resize(from_->q());
      for (felt a = 0; a < from_->q(); ++a) map_[a] = image_of(a);
    }
  }

  felt operator()(felt a) const {
    if (!map_.empty()) return map_[a];
    return image_of(a);
  }

  const FieldPtr& from() const { return from_; }
  const FieldPtr& to() const { return to_; }

  bool identity() const { return from_->same(*to_); }

 private:
  felt image_of(felt a) const {
    felt img = to_->zero();
    const std::uint32_t p = from_->p();
    for (std::uint32_t i = 0; i < from_->k(); ++i) {
      const felt digit = a % p;
      a /= p;
      if (digit != 0)
        img = to_->add(img, to_->mul(to_->from_int(digit), basis_image_[i]));
    }
    return img;
  }

  FieldPtr from_, to_;
  std::vector<felt> basis_image_;
  std::vector<felt> map_;
};

inline felt embed(felt a, const FieldPtr& from, const FieldPtr& to) {
  return Embedding(from, to)(a);
}

}  // namespace nonsing
