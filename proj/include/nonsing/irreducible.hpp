#pragma once

// Desk-scale (absolute) irreducibility testing by exhaustive trial division.
//
// Candidate divisors of degree a are enumerated up to scalar (leading
// graded-lex coefficient 1) and checked with exact polynomial division. When
// the candidate space for a = 1 is too large to enumerate, an exact fast path
// finds every possible linear factor instead: specialize all but the pivot
// variable at affinely independent nodes, read off univariate root sets
// (at most d each), interpolate the few affine candidates they admit, and
// certify each with the same exact divides() test. A linear factor's root
// survives every specialization that keeps the polynomial nonzero, so no
// candidate is missed. Budget exhaustion is reported as BudgetExceeded,
// never as a verdict.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nonsing/field.hpp"
#include "nonsing/poly.hpp"

namespace nonsing {

struct IrreducibilityOptions {
  std::uint64_t exhaustive_budget = 1ull << 21;
  std::uint32_t max_degree = 4;
  std::uint32_t node_scan_cap = 4096;
  bool force_exhaustive = false;  // testing hook: always enumerate
};

namespace detail {

inline std::uint64_t pow_saturating(std::uint64_t base, std::uint64_t exp,
                                    std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > cap / (base ? base : 1)) return cap + 1;
    r *= base;
  }
  return r;
}

// Coefficients of a univariate polynomial, low degree first.
inline std::vector<felt> univariate_coeffs(const MPoly& u) {
  if (u.nvars() != 1) throw std::logic_error("univariate expected");
  std::vector<felt> c(u.is_zero() ? 0 : static_cast<std::size_t>(u.degree()) + 1,
                      0);
  for (const auto& t : u.terms()) c[t.exps[0]] = t.coeff;
  return c;
}

inline felt horner(const std::vector<felt>& c, felt x, const FieldSpec& f) {
  felt v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = f.add(f.mul(v, x), c[i]);
  return v;
}

inline std::vector<felt> all_roots(const std::vector<felt>& c,
                                   const FieldSpec& f) {
  std::vector<felt> roots;
  for (felt x = 0; x < f.q(); ++x)
    if (horner(c, x, f) == 0) roots.push_back(x);
  return roots;
}

// Solve M u = rhs over the field; M given as rows. Returns nullopt when
// singular.
inline std::optional<std::vector<felt>> gauss_solve(
    const FieldSpec& f, std::vector<std::vector<felt>> m,
    std::vector<felt> rhs) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    const felt inv = f.inv(m[col][col]);
    for (std::size_t j = col; j < n; ++j) m[col][j] = f.mul(m[col][j], inv);
    rhs[col] = f.mul(rhs[col], inv);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const felt factor = m[row][col];
      for (std::size_t j = col; j < n; ++j)
        m[row][j] = f.sub(m[row][j], f.mul(factor, m[col][j]));
      rhs[row] = f.sub(rhs[row], f.mul(factor, rhs[col]));
    }
  }
  return rhs;
}

// Incremental rank tracking for affine-independence of nodes: rows are
// (v_0..v_{r-1}, 1); a node is accepted iff its row extends the rank.
class RankTracker {
 public:
  RankTracker(const FieldPtr& f, std::size_t dim) : f_(f), dim_(dim) {}

  bool try_add(std::vector<felt> row) {
    for (const auto& b : basis_) {
      const std::size_t lead = b.first;
      if (row[lead] != 0) {
        const felt factor = row[lead];
        for (std::size_t j = 0; j < dim_; ++j)
          row[j] = f_->sub(row[j], f_->mul(factor, b.second[j]));
      }
    }
    std::size_t lead = dim_;
    for (std::size_t j = 0; j < dim_; ++j)
      if (row[j] != 0) {
        lead = j;
        break;
      }
    if (lead == dim_) return false;
    const felt inv = f_->inv(row[lead]);
    for (std::size_t j = 0; j < dim_; ++j) row[j] = f_->mul(row[j], inv);
    basis_.emplace_back(lead, std::move(row));
    return true;
  }

  std::size_t rank() const { return basis_.size(); }

 private:
  FieldPtr f_;
  std::size_t dim_;
  std::vector<std::pair<std::size_t, std::vector<felt>>> basis_;
};

using FactorPredicate = std::function<bool(const MPoly&)>;

// Exhaustive trial division by all normalized candidates of degree exactly
// `a`. When `homogeneous` is set the candidate monomials are restricted to
// degree exactly a (factors of a homogeneous polynomial are homogeneous).
inline std::uint64_t exhaustive_candidate_count(std::uint32_t q,
                                                std::uint32_t nvars,
                                                std::uint32_t a,
                                                bool homogeneous,
                                                std::uint64_t cap) {
  const auto monos = monomials_of_degree(nvars, a, homogeneous);
  std::uint64_t total = 0;
  for (std::size_t lead = 0; lead < monos.size(); ++lead) {
    std::uint64_t deg = 0;
    for (auto e : monos[lead]) deg += e;
    if (deg != a) continue;
    const std::uint64_t free = monos.size() - lead - 1;
    const std::uint64_t c = pow_saturating(q, free, cap);
    if (c > cap || total > cap - c) return cap + 1;
    total += c;
  }
  return total;
}

inline bool exhaustive_factor_search(const MPoly& F, std::uint32_t a,
                                     bool homogeneous,
                                     const FactorPredicate& accept) {
  const FieldPtr& K = F.field();
  const std::uint32_t nvars = F.nvars();
  const auto monos = monomials_of_degree(nvars, a, homogeneous);
  std::vector<felt> coeffs(monos.size(), 0);
  for (std::size_t lead = 0; lead < monos.size(); ++lead) {
    std::uint64_t deg = 0;
    for (auto e : monos[lead]) deg += e;
    if (deg != a) continue;
    std::fill(coeffs.begin(), coeffs.end(), 0);
    coeffs[lead] = 1;
    while (true) {
      std::vector<Term> terms;
      for (std::size_t i = lead; i < monos.size(); ++i)
        if (coeffs[i] != 0) terms.push_back({monos[i], coeffs[i]});
      const MPoly cand = MPoly::from_terms(K, nvars, std::move(terms));
      if (accept(cand)) return true;
      // odometer over the free positions, last position fastest
      bool carried_out = true;
      for (std::size_t pos = monos.size(); pos-- > lead + 1;) {
        if (++coeffs[pos] < K->q()) {
          carried_out = false;
          break;
        }
        coeffs[pos] = 0;
      }
      if (carried_out) break;
    }
  }
  return false;
}

// Exact search for linear factors (degree-1 candidates). `accept` certifies a
// candidate; completeness of the node/root filter is discussed at the top of
// the file.
inline bool linear_factor_search(const MPoly& F,
                                 const IrreducibilityOptions& opts,
                                 const FactorPredicate& accept) {
  const FieldPtr& K = F.field();
  const std::uint32_t n = F.nvars();
  const std::uint32_t q = K->q();

  for (std::uint32_t pivot = 0; pivot < n; ++pivot) {
    std::uint32_t deg_pivot = 0;
    for (const auto& t : F.terms())
      deg_pivot = std::max(deg_pivot, t.exps[pivot]);
    if (deg_pivot == 0) continue;  // a monic-in-pivot factor needs the pivot

    const std::uint32_t r = n - 1 - pivot;  // variables available to g

    if (r == 0) {
      // candidates x_pivot - c: c must be a common root of every coefficient
      // polynomial of the other variables
      std::vector<std::vector<felt>> per_mono;  // univariate coeffs, by mono
      {
        std::vector<std::vector<std::uint32_t>> keys;
        for (const auto& t : F.terms()) {
          auto key = t.exps;
          const std::uint32_t e = key[pivot];
          key[pivot] = 0;
          std::size_t idx = keys.size();
          for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == key) {
              idx = i;
              break;
            }
          if (idx == keys.size()) {
            keys.push_back(key);
            per_mono.emplace_back();
          }
          auto& c = per_mono[idx];
          if (c.size() <= e) c.resize(e + 1, 0);
          c[e] = t.coeff;
        }
      }
      for (felt c = 0; c < q; ++c) {
        bool all_zero = true;
        for (const auto& u : per_mono)
          if (horner(u, c, *K) != 0) {
            all_zero = false;
            break;
          }
        if (!all_zero) continue;
        std::vector<std::uint32_t> e(n, 0);
        e[pivot] = 1;
        const MPoly cand = MPoly::monomial(K, n, e, 1) +
                           MPoly::constant(K, n, K->neg(c));
        if (accept(cand)) return true;
      }
      continue;
    }

    // collect r+1 affinely independent usable nodes v in K^r
    struct Node {
      std::vector<felt> v;      // values for variables pivot+1..n-1
      std::vector<felt> roots;  // pivot-variable roots at this node
    };
    std::vector<Node> nodes;
    RankTracker rank(K, r + 1);
    bool pivot_ruled_out = false;
    std::uint64_t scanned = 0;

    // Probes one node; returns true when the node was usable (roots filled).
    // Sets pivot_ruled_out when a usable node admits no root at all.
    const auto probe = [&](const std::vector<felt>& v,
                           std::vector<felt>& roots) -> bool {
      // images: x_{pivot+1+i} := v[i]; pivot and earlier stay symbolic
      std::vector<MPoly> images;
      images.reserve(n);
      const std::uint32_t head = pivot + 1;  // symbolic variables 0..pivot
      for (std::uint32_t i = 0; i < head; ++i)
        images.push_back(MPoly::variable(K, head, i));
      for (std::uint32_t i = 0; i < r; ++i)
        images.push_back(MPoly::constant(K, head, v[i]));
      const MPoly G = substitute(F, images);
      if (G.is_zero()) return false;

      // specialize the variables before the pivot until the univariate in
      // the pivot is nonzero
      bool usable = false;
      if (pivot == 0) {
        const auto u = univariate_coeffs(G);
        if (u.size() == 1) {
          pivot_ruled_out = true;  // nonzero constant: no root anywhere
        } else {
          roots = all_roots(u, *K);
          usable = true;
        }
      } else {
        std::vector<felt> w(pivot, 0);
        std::uint64_t wscan = 0;
        while (true) {
          std::vector<MPoly> wimg;
          for (std::uint32_t i = 0; i < pivot; ++i)
            wimg.push_back(MPoly::constant(K, 1, w[i]));
          wimg.push_back(MPoly::variable(K, 1, 0));
          const MPoly U = substitute(G, wimg);
          if (!U.is_zero()) {
            const auto u = univariate_coeffs(U);
            if (u.size() == 1) {
              pivot_ruled_out = true;
            } else {
              roots = all_roots(u, *K);
              usable = true;
            }
            break;
          }
          if (++wscan > opts.node_scan_cap) break;
          std::uint32_t i = pivot;
          bool carry = true;
          while (i-- > 0) {
            if (++w[i] < q) {
              carry = false;
              break;
            }
            w[i] = 0;
          }
          if (carry) break;
        }
      }
      if (usable && roots.empty()) pivot_ruled_out = true;
      return usable;
    };

    const auto consider = [&](const std::vector<felt>& v) {
      std::vector<felt> roots;
      if (!probe(v, roots) || pivot_ruled_out) return;
      std::vector<felt> row = v;
      row.push_back(1);
      if (rank.try_add(row)) nodes.push_back({v, std::move(roots)});
    };

    // Phase 1: moment-curve nodes (c, c^2, ..., c^r). Distinct parameters
    // give affinely independent rows (Vandermonde), so the first r+1 usable
    // probes already suffice.
    for (felt c = 0; c < q && nodes.size() < r + 1 && !pivot_ruled_out; ++c) {
      if (++scanned > opts.node_scan_cap) break;
      std::vector<felt> v(r);
      felt pw = c;
      for (std::uint32_t i = 0; i < r; ++i) {
        v[i] = pw;
        pw = K->mul(pw, c);
      }
      consider(v);
    }

    // Phase 2 (fallback, tiny or degenerate cases): full odometer scan with
    // rank tracking.
    if (!pivot_ruled_out && nodes.size() < r + 1) {
      std::vector<felt> v(r, 0);
      while (nodes.size() < r + 1 && !pivot_ruled_out) {
        if (++scanned > 4 * opts.node_scan_cap)
          throw BudgetExceeded("linear factor search: node scan cap reached");
        consider(v);
        std::uint32_t i = r;
        bool carry = true;
        while (i-- > 0) {
          if (++v[i] < q) {
            carry = false;
            break;
          }
          v[i] = 0;
        }
        if (carry) break;  // exhausted K^r
      }
    }
    if (pivot_ruled_out) continue;
    if (nodes.size() < r + 1)
      throw BudgetExceeded("linear factor search: not enough usable nodes");

    // interpolate every root combination and certify
    std::vector<std::size_t> choice(r + 1, 0);
    while (true) {
      std::vector<std::vector<felt>> m;
      std::vector<felt> rhs;
      for (std::size_t i = 0; i <= r; ++i) {
        auto row = nodes[i].v;
        row.push_back(1);
        m.push_back(std::move(row));
        rhs.push_back(nodes[i].roots[choice[i]]);
      }
      const auto sol = gauss_solve(*K, std::move(m), std::move(rhs));
      if (!sol) throw std::logic_error("nodes were not affinely independent");
      // candidate A = x_pivot - sum sol[i] x_{pivot+1+i} - sol[r]
      std::vector<Term> terms;
      {
        std::vector<std::uint32_t> e(n, 0);
        e[pivot] = 1;
        terms.push_back({std::move(e), 1});
      }
      for (std::uint32_t i = 0; i < r; ++i) {
        if ((*sol)[i] == 0) continue;
        std::vector<std::uint32_t> e(n, 0);
        e[pivot + 1 + i] = 1;
        terms.push_back({std::move(e), K->neg((*sol)[i])});
      }
      if ((*sol)[r] != 0)
        terms.push_back({std::vector<std::uint32_t>(n, 0), K->neg((*sol)[r])});
      const MPoly cand = MPoly::from_terms(K, n, std::move(terms));
      if (accept(cand)) return true;

      std::size_t i = r + 1;
      bool carry = true;
      while (i-- > 0) {
        if (++choice[i] < nodes[i].roots.size()) {
          carry = false;
          break;
        }
        choice[i] = 0;
      }
      if (carry) break;
    }
  }
  return false;
}

}  // namespace detail

// Does F (over its own field) have a factor of degree exactly `a`, up to
// scalars? `accept` may narrow what counts as a hit (it still certifies with
// exact division); by default a candidate is accepted iff it divides F.
inline bool has_factor_of_degree(
    const MPoly& F, std::uint32_t a, const IrreducibilityOptions& opts = {},
    const detail::FactorPredicate& accept_override = nullptr) {
  if (F.is_zero()) throw std::invalid_argument("zero polynomial");
  if (a < 1 || static_cast<int>(a) > F.degree()) return false;
  const detail::FactorPredicate accept =
      accept_override ? accept_override
                      : detail::FactorPredicate(
                            [&F](const MPoly& cand) { return divides(cand, F); });
  const bool homogeneous = F.is_homogeneous();
  const std::uint64_t count = detail::exhaustive_candidate_count(
      F.field()->q(), F.nvars(), a, homogeneous, opts.exhaustive_budget);
  if (count <= opts.exhaustive_budget &&
      (opts.force_exhaustive || a != 1 || count <= 512))
    return detail::exhaustive_factor_search(F, a, homogeneous, accept);
  if (a == 1 && !opts.force_exhaustive) {
    try {
      return detail::linear_factor_search(F, opts, accept);
    } catch (const BudgetExceeded&) {
      if (count <= opts.exhaustive_budget)
        return detail::exhaustive_factor_search(F, a, homogeneous, accept);
      throw;
    }
  }
  if (count <= opts.exhaustive_budget)
    return detail::exhaustive_factor_search(F, a, homogeneous, accept);
  throw BudgetExceeded("candidate space exceeds the exhaustive budget");
}

// Irreducibility over F_{q^ext_degree}: no factorization F = A * B with both
// degrees >= 1, decided by trial division over all candidate degrees up to
// deg(F)/2.
inline bool is_irreducible_over(const MPoly& F, std::uint32_t ext_degree,
                                const IrreducibilityOptions& opts = {}) {
  if (F.is_zero()) throw std::invalid_argument("zero polynomial");
  if (ext_degree < 1) throw std::invalid_argument("extension degree < 1");
  const int d = F.degree();
  if (d < 1 || d > static_cast<int>(opts.max_degree))
    throw std::invalid_argument("degree outside the configured range");
  const FieldPtr base = F.field();
  FieldPtr K = base;
  if (ext_degree > 1)
    K = FieldSpec::make(base->p(), base->k() * ext_degree, 1u << 30);
  const MPoly FK = map_field(F, K);
  for (std::uint32_t a = 1; a <= static_cast<std::uint32_t>(d) / 2; ++a)
    if (has_factor_of_degree(FK, a, opts)) return false;
  return true;
}

// Absolute irreducibility: irreducible over F_q and, for every prime l
// dividing d, no factor of degree d/l over F_{q^l}. The absolutely
// irreducible factors of an F_q-irreducible F form one Frobenius orbit of
// size r | d; for any prime l | r the orbit groups into l conjugate products
// defined over F_{q^l}, each of degree d/l, so these searches are exhaustive.
// An all-extensions oracle cross-checks this reduction in the tests.
inline bool is_absolutely_irreducible(const MPoly& F,
                                      const IrreducibilityOptions& opts = {}) {
  if (F.is_zero()) throw std::invalid_argument("zero polynomial");
  const int d = F.degree();
  if (d < 1 || d > static_cast<int>(opts.max_degree))
    throw std::invalid_argument("degree outside the configured range");
  if (d == 1) return true;
  if (!is_irreducible_over(F, 1, opts)) return false;
  const FieldPtr base = F.field();
  for (std::uint32_t l = 2; l <= static_cast<std::uint32_t>(d); ++l) {
    if (d % l != 0 || !detail::is_prime_u64(l)) continue;
    const FieldPtr K = FieldSpec::make(base->p(), base->k() * l, 1u << 30);
    if (has_factor_of_degree(map_field(F, K), static_cast<std::uint32_t>(d) / l,
                             opts))
      return false;
  }
  return true;
}

// Common factor of F1 and F2 over the closure: any common absolutely
// irreducible factor A of degree a lives over some F_{q^r}, and its conjugate
// orbit product (degree r*a) divides both, so r*a <= min(d1, d2) bounds the
// search.
inline bool have_common_factor_over_closure(
    const MPoly& F1, const MPoly& F2, const IrreducibilityOptions& opts = {}) {
  if (F1.is_zero() || F2.is_zero())
    throw std::invalid_argument("zero polynomial");
  if (!F1.field()->same(*F2.field()) || F1.nvars() != F2.nvars())
    throw std::invalid_argument("field/dimension mismatch");
  const std::uint32_t dmin = static_cast<std::uint32_t>(
      std::min(F1.degree(), F2.degree()));
  const FieldPtr base = F1.field();
  for (std::uint32_t r = 1; r <= dmin; ++r) {
    const FieldPtr K =
        r == 1 ? base : FieldSpec::make(base->p(), base->k() * r, 1u << 30);
    const MPoly f1 = map_field(F1, K);
    const MPoly f2 = map_field(F2, K);
    for (std::uint32_t a = 1; r * a <= dmin; ++a) {
      const auto accept = [&](const MPoly& cand) {
        return divides(cand, f1) && divides(cand, f2);
      };
      if (has_factor_of_degree(f1, a, opts, accept)) return true;
    }
  }
  return false;
}

}  // namespace nonsing
