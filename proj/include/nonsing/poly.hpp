#pragma once

// Sparse multivariate polynomials over a FieldSpec. Terms are kept in graded
// lexicographic order, leading term first (total degree, then lex with x0
// major). The zero polynomial has an empty term list and a distinct degree
// sentinel; callers branch on it explicitly.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nonsing/field.hpp"

namespace nonsing {

struct Term {
  std::vector<std::uint32_t> exps;
  felt coeff;

  std::uint64_t total_degree() const {
    std::uint64_t d = 0;
    for (auto e : exps) d += e;
    return d;
  }
  bool operator==(const Term&) const = default;
};

// -1 / 0 / +1 with a < b meaning "a comes later in canonical order".
inline int grlex_cmp(const std::vector<std::uint32_t>& a,
                     const std::vector<std::uint32_t>& b) {
  std::uint64_t da = 0, db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

class PolyParseError : public std::invalid_argument {
 public:
  PolyParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class MPoly {
 public:
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  static MPoly zero(FieldPtr spec, std::uint32_t nvars) {
    return MPoly(std::move(spec), nvars, {});
  }

  static MPoly constant(FieldPtr spec, std::uint32_t nvars, felt c) {
    std::vector<Term> t;
    if (c != 0) t.push_back({std::vector<std::uint32_t>(nvars, 0), c});
    return MPoly(std::move(spec), nvars, std::move(t));
  }

  static MPoly monomial(FieldPtr spec, std::uint32_t nvars,
                        std::vector<std::uint32_t> exps, felt c) {
    if (exps.size() != nvars)
      throw std::invalid_argument("monomial: exponent vector length mismatch");
    std::vector<Term> t;
    if (c != 0) t.push_back({std::move(exps), c});
    return MPoly(std::move(spec), nvars, std::move(t));
  }

  static MPoly variable(FieldPtr spec, std::uint32_t nvars, std::uint32_t i) {
    if (i >= nvars) throw std::invalid_argument("variable index out of range");
    std::vector<std::uint32_t> e(nvars, 0);
    e[i] = 1;
    return monomial(std::move(spec), nvars, std::move(e), 1);
  }

  static MPoly parse(std::string_view text, FieldPtr spec, std::uint32_t nvars);

  static MPoly from_terms(FieldPtr spec, std::uint32_t nvars,
                          std::vector<Term> terms) {
    for (const auto& t : terms)
      if (t.exps.size() != nvars)
        throw std::invalid_argument("term exponent length mismatch");
    normalize(*spec, terms);
    return MPoly(std::move(spec), nvars, std::move(terms));
  }

  const FieldPtr& field() const { return spec_; }
  std::uint32_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    if (terms_.empty()) return kZeroDegree;
    return static_cast<int>(terms_.front().total_degree());
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const auto d = terms_.front().total_degree();
    for (const auto& t : terms_)
      if (t.total_degree() != d) return false;
    return true;
  }

  const Term& leading_term() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero");
    return terms_.front();
  }

  felt coefficient(const std::vector<std::uint32_t>& exps) const {
    for (const auto& t : terms_)
      if (t.exps == exps) return t.coeff;
    return 0;
  }

  felt evaluate(const std::vector<felt>& x) const {
    if (x.size() != nvars_)
      throw std::invalid_argument("evaluate: dimension mismatch");
    felt acc = 0;
    for (const auto& t : terms_) {
      felt v = t.coeff;
      for (std::uint32_t i = 0; i < nvars_; ++i)
        if (t.exps[i] != 0) v = spec_->mul(v, spec_->pow(x[i], t.exps[i]));
      acc = spec_->add(acc, v);
    }
    return acc;
  }

  MPoly operator+(const MPoly& o) const {
    check_compatible(o);
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (i == terms_.size()) {
        out.push_back(o.terms_[j++]);
      } else if (j == o.terms_.size()) {
        out.push_back(terms_[i++]);
      } else {
        const int c = grlex_cmp(terms_[i].exps, o.terms_[j].exps);
        if (c > 0) {
          out.push_back(terms_[i++]);
        } else if (c < 0) {
          out.push_back(o.terms_[j++]);
        } else {
          const felt s = spec_->add(terms_[i].coeff, o.terms_[j].coeff);
          if (s != 0) out.push_back({terms_[i].exps, s});
          ++i;
          ++j;
        }
      }
    }
    return MPoly(spec_, nvars_, std::move(out));
  }

  MPoly operator-() const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff = spec_->neg(t.coeff);
    return MPoly(spec_, nvars_, std::move(out));
  }

  MPoly operator-(const MPoly& o) const { return *this + (-o); }

  MPoly scale(felt c) const {
    if (c == 0) return zero(spec_, nvars_);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      const felt v = spec_->mul(t.coeff, c);
      if (v != 0) out.push_back({t.exps, v});
    }
    return MPoly(spec_, nvars_, std::move(out));
  }

  MPoly operator*(const MPoly& o) const {
    check_compatible(o);
    std::vector<Term> out;
    out.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_) {
      for (const auto& b : o.terms_) {
        const felt c = spec_->mul(a.coeff, b.coeff);
        if (c == 0) continue;
        std::vector<std::uint32_t> e(nvars_);
        for (std::uint32_t v = 0; v < nvars_; ++v) e[v] = a.exps[v] + b.exps[v];
        out.push_back({std::move(e), c});
      }
    }
    normalize(*spec_, out);
    return MPoly(spec_, nvars_, std::move(out));
  }

  // Formal derivative; in characteristic p the exponent multiplies in as
  // (e mod p), so x_i^p differentiates to zero.
  MPoly derivative(std::uint32_t var) const {
    if (var >= nvars_) throw std::invalid_argument("derivative: bad variable");
    std::vector<Term> out;
    for (const auto& t : terms_) {
      if (t.exps[var] == 0) continue;
      const felt m = spec_->from_int(static_cast<std::int64_t>(t.exps[var]));
      const felt c = spec_->mul(t.coeff, m);
      if (c == 0) continue;
      Term nt = t;
      nt.exps[var] -= 1;
      nt.coeff = c;
      out.push_back(std::move(nt));
    }
    // term order is preserved within a fixed variable decrement only up to
    // ties, so renormalize
    normalize(*spec_, out);
    return MPoly(spec_, nvars_, std::move(out));
  }

  bool operator==(const MPoly& o) const {
    return spec_->same(*o.spec_) && nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  std::string str() const;

 private:
  MPoly(FieldPtr spec, std::uint32_t nvars, std::vector<Term> terms)
      : spec_(std::move(spec)), nvars_(nvars), terms_(std::move(terms)) {
    if (!spec_) throw std::invalid_argument("null field");
    if (nvars_ < 1) throw std::invalid_argument("nvars must be >= 1");
  }

  void check_compatible(const MPoly& o) const {
    if (!spec_->same(*o.spec_) || nvars_ != o.nvars_)
      throw std::invalid_argument("polynomial field/dimension mismatch");
  }

  static void normalize(const FieldSpec& f, std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      return grlex_cmp(a.exps, b.exps) > 0;
    });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (auto& t : terms) {
      if (t.coeff == 0) continue;
      if (!merged.empty() && merged.back().exps == t.exps) {
        merged.back().coeff = f.add(merged.back().coeff, t.coeff);
        if (merged.back().coeff == 0) merged.pop_back();
      } else {
        merged.push_back(std::move(t));
      }
    }
    terms = std::move(merged);
  }

  FieldPtr spec_;
  std::uint32_t nvars_;
  std::vector<Term> terms_;
};

// Grammar: terms joined by '+'/'-'; a term is an optional coefficient and
// '*'-joined factors 'x<index>' with optional '^<positive integer>';
// whitespace insignificant; integer coefficients reduced mod p. A bracketed
// coefficient '[i]' denotes the field element with index i, which is how
// coefficients outside the prime subfield round-trip.
inline MPoly MPoly::parse(std::string_view text, FieldPtr spec,
                          std::uint32_t nvars) {
  if (nvars < 1) throw std::invalid_argument("nvars must be >= 1");
  std::size_t pos = 0;
  const auto skip_ws = [&] {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n'))
      ++pos;
  };
  const auto peek = [&]() -> int {
    return pos < text.size() ? static_cast<unsigned char>(text[pos]) : -1;
  };
  const auto parse_uint = [&](const char* what) -> std::uint64_t {
    if (peek() < '0' || peek() > '9') throw PolyParseError(what, pos);
    std::uint64_t v = 0;
    while (peek() >= '0' && peek() <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(text[pos] - '0');
      if (v > (1ull << 40)) throw PolyParseError("number too large", pos);
      ++pos;
    }
    return v;
  };

  std::vector<Term> terms;
  skip_ws();
  if (pos == text.size()) throw PolyParseError("empty polynomial", pos);
  bool first = true;
  while (true) {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = (text[pos] == '-');
      ++pos;
      skip_ws();
    } else if (!first) {
      if (pos == text.size()) break;
      throw PolyParseError("expected '+' or '-'", pos);
    }
    first = false;

    felt coeff = spec->one();
    bool saw_coeff = false;
    bool saw_factor = false;
    std::vector<std::uint32_t> exps(nvars, 0);

    if (peek() >= '0' && peek() <= '9') {
      const std::uint64_t v = parse_uint("expected coefficient");
      coeff = spec->from_int(static_cast<std::int64_t>(v % spec->p()));
      saw_coeff = true;
    } else if (peek() == '[') {
      ++pos;
      skip_ws();
      const std::uint64_t v = parse_uint("expected element index");
      skip_ws();
      if (peek() != ']') throw PolyParseError("expected ']'", pos);
      ++pos;
      if (v >= spec->q())
        throw PolyParseError("coefficient not reducible into the field", pos);
      coeff = static_cast<felt>(v);
      saw_coeff = true;
    }

    const auto parse_factor = [&] {
      if (peek() != 'x') throw PolyParseError("expected variable", pos);
      ++pos;
      const std::size_t idx_pos = pos;
      const std::uint64_t idx = parse_uint("expected variable index");
      if (idx >= nvars)
        throw PolyParseError("variable index out of range", idx_pos);
      std::uint64_t e = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos;
        skip_ws();
        const std::size_t exp_pos = pos;
        e = parse_uint("expected exponent");
        if (e == 0) throw PolyParseError("exponent must be positive", exp_pos);
        if (e > (1u << 20)) throw PolyParseError("exponent too large", exp_pos);
      }
      exps[idx] += static_cast<std::uint32_t>(e);
      saw_factor = true;
    };

    skip_ws();
    if (saw_coeff) {
      while (true) {
        skip_ws();
        if (peek() == '*') {
          ++pos;
          skip_ws();
          parse_factor();
        } else {
          break;
        }
      }
    } else {
      parse_factor();
      while (true) {
        skip_ws();
        if (peek() == '*') {
          ++pos;
          skip_ws();
          parse_factor();
        } else {
          break;
        }
      }
    }
    (void)saw_factor;
    if (negate) coeff = spec->neg(coeff);
    if (coeff != 0) terms.push_back({std::move(exps), coeff});

    skip_ws();
    if (pos == text.size()) break;
    if (peek() != '+' && peek() != '-')
      throw PolyParseError("unexpected character", pos);
  }
  return from_terms(std::move(spec), nvars, std::move(terms));
}

// Canonical printing: graded-lex descending, coefficients as least
// non-negative residues (element indices in brackets outside the prime
// subfield), coefficient 1 omitted except for constants.
inline std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  const auto coeff_str = [&](felt c) {
    if (c < spec_->p()) return std::to_string(c);
    return "[" + std::to_string(c) + "]";
  };
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out += " + ";
    first = false;
    const bool constant = t.total_degree() == 0;
    if (constant) {
      out += coeff_str(t.coeff);
      continue;
    }
    bool emitted = false;
    if (t.coeff != 1) {
      out += coeff_str(t.coeff);
      emitted = true;
    }
    for (std::uint32_t i = 0; i < nvars_; ++i) {
      if (t.exps[i] == 0) continue;
      if (emitted) out += "*";
      out += "x" + std::to_string(i);
      if (t.exps[i] > 1) out += "^" + std::to_string(t.exps[i]);
      emitted = true;
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const MPoly& f) {
  return os << f.str();
}

struct GradientVector {
  std::vector<MPoly> partials;
};

inline GradientVector gradient(const MPoly& f) {
  GradientVector g;
  g.partials.reserve(f.nvars());
  for (std::uint32_t i = 0; i < f.nvars(); ++i)
    g.partials.push_back(f.derivative(i));
  return g;
}

// True iff all formal partials vanish identically. When true, every exponent
// of every term must be divisible by p; that implication is checked, not
// assumed.
inline bool is_gradient_degenerate(const MPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("zero polynomial");
  for (std::uint32_t i = 0; i < f.nvars(); ++i)
    if (!f.derivative(i).is_zero()) return false;
  const std::uint32_t p = f.field()->p();
  for (const auto& t : f.terms())
    for (auto e : t.exps)
      if (e % p != 0)
        throw std::logic_error(
            "degenerate gradient with exponent not divisible by p");
  return true;
}

inline bool homogeneous_check(const MPoly& f) { return f.is_homogeneous(); }

// Single-divisor division in graded-lex order. Returns the quotient iff the
// remainder is zero; for one divisor an exact multiple always keeps its
// leading monomial divisible, so this decides divisibility.
inline std::optional<MPoly> try_quotient(const MPoly& h, const MPoly& g) {
  if (g.is_zero()) throw std::invalid_argument("division by zero polynomial");
  const Term& lg = g.leading_term();
  if (!h.is_zero()) {
    // cheap rejection before any copying: LT(g) must divide LT(h)
    const Term& lh = h.leading_term();
    for (std::uint32_t i = 0; i < h.nvars(); ++i)
      if (lh.exps[i] < lg.exps[i]) return std::nullopt;
  }
  MPoly r = h;
  MPoly q = MPoly::zero(h.field(), h.nvars());
  const felt lg_inv = h.field()->inv(lg.coeff);
  while (!r.is_zero()) {
    const Term& lr = r.leading_term();
    std::vector<std::uint32_t> diff(r.nvars());
    for (std::uint32_t i = 0; i < r.nvars(); ++i) {
      if (lr.exps[i] < lg.exps[i]) return std::nullopt;
      diff[i] = lr.exps[i] - lg.exps[i];
    }
    const MPoly t = MPoly::monomial(h.field(), h.nvars(), std::move(diff),
                                    h.field()->mul(lr.coeff, lg_inv));
    q = q + t;
    r = r - t * g;
  }
  return q;
}

namespace detail {

// Packed monomial key: the total degree in the top 8-bit lane, then one
// 8-bit lane per variable (x0 highest), so unsigned comparison of keys is
// exactly graded-lex comparison. Valid while nvars <= 6 and every total
// degree involved stays <= 255; intermediate remainders in exact division
// never exceed the dividend's degree, so packing both operands is enough.
struct PackedPoly {
  std::vector<std::uint64_t> keys;  // descending
  std::vector<felt> coeffs;
  std::uint32_t nvars = 0;

  void clear() {
    keys.clear();
    coeffs.clear();
  }
};

inline bool pack_poly(const MPoly& f, PackedPoly& out) {
  const std::uint32_t n = f.nvars();
  if (n > 6) return false;
  out.clear();
  out.nvars = n;
  for (const auto& t : f.terms()) {
    const std::uint64_t deg = t.total_degree();
    if (deg > 255) return false;
    std::uint64_t key = deg << (8 * n);
    for (std::uint32_t i = 0; i < n; ++i)
      key |= static_cast<std::uint64_t>(t.exps[i]) << (8 * (n - 1 - i));
    out.keys.push_back(key);
    out.coeffs.push_back(t.coeff);
  }
  return true;  // term order of MPoly is already key-descending
}

struct PackedScratch {
  std::vector<std::uint64_t> k1, k2;
  std::vector<felt> c1, c2;
  PackedPoly pg, ph;
};

inline bool packed_divides(const PackedPoly& g, const PackedPoly& h,
                           const FieldSpec& f, PackedScratch& s) {
  if (h.keys.empty()) return true;
  const std::uint64_t kg = g.keys.front();
  const felt inv_cg = f.inv(g.coeffs.front());
  const std::uint32_t lanes = g.nvars + 1;
  const auto lanes_ge = [lanes](std::uint64_t a, std::uint64_t b) {
    for (std::uint32_t l = 0; l < lanes; ++l)
      if (((a >> (8 * l)) & 0xff) < ((b >> (8 * l)) & 0xff)) return false;
    return true;
  };
  s.k1.assign(h.keys.begin(), h.keys.end());
  s.c1.assign(h.coeffs.begin(), h.coeffs.end());
  while (!s.k1.empty()) {
    const std::uint64_t kr = s.k1.front();
    if (!lanes_ge(kr, kg)) return false;
    const std::uint64_t kt = kr - kg;  // lane-exact given lanes_ge
    const felt ct = f.mul(s.c1.front(), inv_cg);
    // r -= t*g by a single merge; the leading terms cancel by construction
    s.k2.clear();
    s.c2.clear();
    std::size_t i = 0, j = 0;
    while (i < s.k1.size() || j < g.keys.size()) {
      const std::uint64_t pk =
          j < g.keys.size() ? g.keys[j] + kt : 0;  // unused when j spent
      if (j == g.keys.size() || (i < s.k1.size() && s.k1[i] > pk)) {
        s.k2.push_back(s.k1[i]);
        s.c2.push_back(s.c1[i]);
        ++i;
      } else if (i == s.k1.size() || pk > s.k1[i]) {
        s.k2.push_back(pk);
        s.c2.push_back(f.neg(f.mul(ct, g.coeffs[j])));
        ++j;
      } else {
        const felt c = f.sub(s.c1[i], f.mul(ct, g.coeffs[j]));
        if (c != 0) {
          s.k2.push_back(s.k1[i]);
          s.c2.push_back(c);
        }
        ++i;
        ++j;
      }
    }
    s.k1.swap(s.k2);
    s.c1.swap(s.c2);
  }
  return true;
}

}  // namespace detail

inline bool divides(const MPoly& g, const MPoly& h) {
  if (g.is_zero()) throw std::invalid_argument("division by zero polynomial");
  if (h.is_zero()) return true;
  thread_local detail::PackedScratch scratch;
  if (detail::pack_poly(g, scratch.pg) && detail::pack_poly(h, scratch.ph))
    return detail::packed_divides(scratch.pg, scratch.ph, *g.field(), scratch);
  return try_quotient(h, g).has_value();
}

// Bivariate P of degree <= d lifts to a degree-d form in three variables;
// setting the new variable to 1 recovers P.
inline MPoly homogenize(const MPoly& p, std::uint32_t d) {
  if (p.nvars() != 2) throw std::invalid_argument("homogenize: need 2 variables");
  if (!p.is_zero() && p.degree() > static_cast<int>(d))
    throw std::invalid_argument("homogenize: d below the degree");
  std::vector<Term> out;
  out.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    const std::uint32_t rem = d - static_cast<std::uint32_t>(t.total_degree());
    out.push_back({{t.exps[0], t.exps[1], rem}, t.coeff});
  }
  return MPoly::from_terms(p.field(), 3, std::move(out));
}

inline MPoly dehomogenize(const MPoly& f) {
  if (f.nvars() != 3)
    throw std::invalid_argument("dehomogenize: need 3 variables");
  std::vector<Term> out;
  out.reserve(f.terms().size());
  for (const auto& t : f.terms()) out.push_back({{t.exps[0], t.exps[1]}, t.coeff});
  return MPoly::from_terms(f.field(), 2, std::move(out));
}

// Coefficient-wise embedding into an extension field; variables unchanged.
inline MPoly map_field(const MPoly& f, const Embedding& emb) {
  if (!emb.from()->same(*f.field()))
    throw std::invalid_argument("map_field: embedding source mismatch");
  std::vector<Term> out;
  out.reserve(f.terms().size());
  for (const auto& t : f.terms()) out.push_back({t.exps, emb(t.coeff)});
  return MPoly::from_terms(emb.to(), f.nvars(), std::move(out));
}

inline MPoly map_field(const MPoly& f, const FieldPtr& to) {
  if (to->same(*f.field())) return f;
  return map_field(f, Embedding(f.field(), to));
}

// Evaluate with the point drawn from an extension of the coefficient field;
// coefficients are embedded first.
inline felt evaluate_embedded(const MPoly& f, const std::vector<felt>& x,
                              const FieldPtr& xspec) {
  if (xspec->same(*f.field())) return f.evaluate(x);
  return map_field(f, xspec).evaluate(x);
}

// Substitute images[i] for variable i. All images must share one field and
// variable count; coefficients of f are embedded into the image field.
inline MPoly substitute(const MPoly& f, const std::vector<MPoly>& images) {
  if (images.size() != f.nvars())
    throw std::invalid_argument("substitute: need one image per variable");
  const FieldPtr out_spec = images.front().field();
  const std::uint32_t out_nvars = images.front().nvars();
  for (const auto& im : images)
    if (!im.field()->same(*out_spec) || im.nvars() != out_nvars)
      throw std::invalid_argument("substitute: inconsistent images");
  std::optional<Embedding> emb;
  if (!out_spec->same(*f.field())) emb.emplace(f.field(), out_spec);

  // power cache per variable
  std::vector<std::vector<MPoly>> powers(f.nvars());
  for (std::uint32_t i = 0; i < f.nvars(); ++i)
    powers[i].push_back(MPoly::constant(out_spec, out_nvars, 1));
  const auto power = [&](std::uint32_t var, std::uint32_t e) -> const MPoly& {
    auto& cache = powers[var];
    while (cache.size() <= e) cache.push_back(cache.back() * images[var]);
    return cache[e];
  };

  MPoly acc = MPoly::zero(out_spec, out_nvars);
  for (const auto& t : f.terms()) {
    const felt c = emb ? (*emb)(t.coeff) : t.coeff;
    MPoly prod = MPoly::constant(out_spec, out_nvars, c);
    for (std::uint32_t i = 0; i < f.nvars(); ++i)
      if (t.exps[i] != 0) prod = prod * power(i, t.exps[i]);
    acc = acc + prod;
  }
  return acc;
}

// All exponent vectors of the given total degree (exactly, or up to it),
// graded-lex descending.
inline std::vector<std::vector<std::uint32_t>> monomials_of_degree(
    std::uint32_t nvars, std::uint32_t d, bool exact) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(nvars, 0);
  const auto rec = [&](auto&& self, std::uint32_t var,
                       std::uint32_t remaining) -> void {
    if (var + 1 == nvars) {
      if (exact) {
        cur[var] = remaining;
        out.push_back(cur);
      } else {
        for (std::uint32_t e = 0; e <= remaining; ++e) {
          cur[var] = e;
          out.push_back(cur);
        }
      }
      cur[var] = 0;
      return;
    }
    for (std::uint32_t e = 0; e <= remaining; ++e) {
      cur[var] = e;
      self(self, var + 1, remaining - e);
    }
    cur[var] = 0;
  };
  rec(rec, 0, d);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return grlex_cmp(a, b) > 0; });
  return out;
}

}  // namespace nonsing
