#pragma once

// Exhaustive point counting and witness search over F_q^n. Points are
// enumerated in lexicographic coordinate order (x0 most significant, element
// index order within a coordinate). Work is partitioned on the first free
// coordinate; counts merge by exact addition and witness selection takes the
// lowest partition, so parallel results are bit-identical to single-threaded
// ones.

#include <atomic>
#include <mutex>
#include <chrono>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "nonsing/field.hpp"
#include "nonsing/poly.hpp"
#include "nonsing/rng.hpp"

namespace nonsing {

enum class CountMode { affine, projective };

struct EnumOptions {
  std::uint64_t budget_evals = 1ull << 31;
  std::uint32_t threads = 1;
  bool self_check = true;  // compare the hot evaluator against the naive one
  // Witness search normally scans in lexicographic order. With a seed set it
  // starts at a seeded point and wraps, trading the canonical witness for
  // speed; the witness is re-verified identically.
  std::optional<std::uint64_t> random_start;
};

struct CountReport {
  std::uint32_t q = 0;
  std::uint32_t n = 0;
  int d = 0;
  std::optional<std::int64_t> n_affine;
  std::optional<std::int64_t> n_projective;
  std::optional<std::int64_t> s1;
  std::optional<std::int64_t> s2;
  double elapsed_ms = 0.0;
};

// A non-singular zero, re-verified by independent evaluation before it is
// returned.
struct Witness {
  std::vector<felt> point;
  felt value = 0;
  std::vector<felt> gradient;
  std::optional<felt> h_value;
};

// Term-list evaluator with per-variable power tables. Results must match the
// naive MPoly evaluator; counting loops spot-check that when self_check is
// on.
class CompiledPoly {
 public:
  explicit CompiledPoly(const MPoly& f) : spec_(f.field()), nvars_(f.nvars()) {
    const std::uint64_t q = spec_->q();
    max_exp_.assign(nvars_, 0);
    for (const auto& t : f.terms())
      for (std::uint32_t i = 0; i < nvars_; ++i)
        max_exp_[i] = std::max(max_exp_[i], t.exps[i]);
    std::uint64_t table_cells = 0;
    for (std::uint32_t i = 0; i < nvars_; ++i)
      table_cells += q * (max_exp_[i] + 1);
    use_tables_ = table_cells <= (1u << 24);
    if (use_tables_) {
      pow_.resize(nvars_);
      for (std::uint32_t i = 0; i < nvars_; ++i) {
        const std::uint32_t stride = max_exp_[i] + 1;
        pow_[i].resize(q * stride);
        for (felt x = 0; x < q; ++x) {
          felt pw = 1;
          for (std::uint32_t e = 0; e < stride; ++e) {
            pow_[i][x * stride + e] = pw;
            pw = spec_->mul(pw, x);
          }
        }
      }
    }
    coeffs_.reserve(f.terms().size());
    exps_.reserve(f.terms().size() * nvars_);
    for (const auto& t : f.terms()) {
      coeffs_.push_back(t.coeff);
      for (std::uint32_t i = 0; i < nvars_; ++i) exps_.push_back(t.exps[i]);
    }
  }

  felt eval(const felt* x) const {
    const FieldSpec& f = *spec_;
    felt acc = 0;
    const std::uint32_t* e = exps_.data();
    for (std::size_t t = 0; t < coeffs_.size(); ++t, e += nvars_) {
      felt v = coeffs_[t];
      for (std::uint32_t i = 0; i < nvars_ && v != 0; ++i) {
        const std::uint32_t ei = e[i];
        if (ei == 0) continue;
        const felt pw = use_tables_ ? pow_[i][x[i] * (max_exp_[i] + 1) + ei]
                                    : f.pow(x[i], ei);
        v = f.mul(v, pw);
      }
      acc = f.add(acc, v);
    }
    return acc;
  }

 private:
  FieldPtr spec_;
  std::uint32_t nvars_;
  std::vector<std::uint32_t> max_exp_;
  bool use_tables_ = false;
  std::vector<std::vector<felt>> pow_;
  std::vector<felt> coeffs_;
  std::vector<std::uint32_t> exps_;
};

namespace detail {

inline std::uint64_t pow_u64_checked(std::uint64_t base, std::uint32_t exp,
                                     std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

// Advance coordinates from..n-1 (last fastest); false on wrap.
inline bool next_point(std::vector<felt>& x, std::uint32_t q,
                       std::uint32_t from) {
  for (std::size_t i = x.size(); i-- > from;) {
    if (++x[i] < q) return true;
    x[i] = 0;
  }
  return false;
}

struct SelfChecker {
  const MPoly* naive = nullptr;
  std::uint64_t stride = 0;
  std::uint64_t counter = 0;

  void check(const CompiledPoly& hot, const std::vector<felt>& x, felt got) {
    if (!naive || stride == 0) return;
    if (++counter % stride != 0) return;
    (void)hot;
    if (naive->evaluate(x) != got)
      throw std::logic_error("hot-loop evaluator disagrees with the naive one");
  }
};

// Run fn(chunk_index, lo, hi) over contiguous chunks of [0, extent).
template <typename Fn>
void parallel_chunks(std::uint32_t extent, std::uint32_t threads, Fn&& fn) {
  threads = std::max(1u, std::min(threads, extent == 0 ? 1u : extent));
  if (threads == 1 || extent <= 1) {
    fn(0u, 0u, extent);
    return;
  }
  const std::uint32_t chunk = (extent + threads - 1) / threads;
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::uint32_t t = 0; t < threads; ++t) {
    const std::uint32_t lo = t * chunk;
    const std::uint32_t hi = std::min(extent, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, t, lo, hi] {
      try {
        fn(t, lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> g(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Exact affine (all of F_q^n) or projective (representatives with first
// nonzero coordinate 1) zero count by full enumeration.
inline CountReport count_zeros(const MPoly& F, CountMode mode,
                               const EnumOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint32_t q = F.field()->q();
  const std::uint32_t n = F.nvars();
  CountReport rep;
  rep.q = q;
  rep.n = n;
  rep.d = F.is_zero() ? 0 : F.degree();
  const CompiledPoly hot(F);

  if (mode == CountMode::affine) {
    if (detail::pow_u64_checked(q, n, opts.budget_evals) > opts.budget_evals)
      throw BudgetExceeded("affine enumeration exceeds the evaluation budget");
    std::vector<std::int64_t> partial(opts.threads ? opts.threads : 1, 0);
    detail::parallel_chunks(q, opts.threads, [&](std::uint32_t t,
                                                 std::uint32_t lo,
                                                 std::uint32_t hi) {
      detail::SelfChecker checker;
      std::uint64_t span = 1;
      for (std::uint32_t i = 1; i < n; ++i) span *= q;
      if (opts.self_check) {
        checker.naive = &F;
        checker.stride = std::max<std::uint64_t>(1, span * (hi - lo) / 64);
      }
      std::int64_t count = 0;
      std::vector<felt> x(n, 0);
      for (std::uint32_t x0 = lo; x0 < hi; ++x0) {
        x[0] = x0;
        std::fill(x.begin() + 1, x.end(), 0);
        do {
          const felt v = hot.eval(x.data());
          checker.check(hot, x, v);
          if (v == 0) ++count;
        } while (n > 1 && detail::next_point(x, q, 1));
      }
      partial[t] = count;
    });
    std::int64_t total = 0;
    for (auto c : partial) total += c;
    rep.n_affine = total;
  } else {
    // blocks i: x_0..x_{i-1} = 0, x_i = 1, the rest free
    std::uint64_t total_pts = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      total_pts += detail::pow_u64_checked(q, n - 1 - i, opts.budget_evals);
    if (total_pts > opts.budget_evals)
      throw BudgetExceeded("projective enumeration exceeds the budget");
    std::int64_t total = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t free0 = i + 1;  // first free coordinate
      if (free0 >= n) {
        std::vector<felt> x(n, 0);
        x[i] = 1;
        if (hot.eval(x.data()) == 0) ++total;
        continue;
      }
      std::vector<std::int64_t> partial(opts.threads ? opts.threads : 1, 0);
      detail::parallel_chunks(
          q, opts.threads,
          [&](std::uint32_t t, std::uint32_t lo, std::uint32_t hi) {
            std::int64_t count = 0;
            std::vector<felt> x(n, 0);
            x[i] = 1;
            for (std::uint32_t v0 = lo; v0 < hi; ++v0) {
              x[free0] = v0;
              std::fill(x.begin() + free0 + 1, x.end(), 0);
              do {
                if (hot.eval(x.data()) == 0) ++count;
              } while (free0 + 1 < n && detail::next_point(x, q, free0 + 1));
            }
            partial[t] = count;
          });
      for (auto c : partial) total += c;
    }
    rep.n_projective = total;
  }
  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return rep;
}

// One affine pass computing N_affine, S1 and (with H) S2; with homogeneous G
// of degree >= 1 the projective count is enumerated separately and the
// identity N_affine = (q-1) N_projective + 1 is asserted.
inline CountReport count_full(const MPoly& G, const MPoly* H,
                              const EnumOptions& opts = {}) {
  if (G.is_zero()) throw std::invalid_argument("count_full: zero polynomial");
  if (H && (!H->field()->same(*G.field()) || H->nvars() != G.nvars()))
    throw std::invalid_argument("count_full: field/dimension mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint32_t q = G.field()->q();
  const std::uint32_t n = G.nvars();
  if (detail::pow_u64_checked(q, n, opts.budget_evals) > opts.budget_evals)
    throw BudgetExceeded("affine enumeration exceeds the evaluation budget");

  CountReport rep;
  rep.q = q;
  rep.n = n;
  rep.d = G.degree();

  const CompiledPoly hot(G);
  std::vector<CompiledPoly> partials;
  partials.reserve(n);
  const auto grad = gradient(G);
  for (const auto& gp : grad.partials) partials.emplace_back(gp);
  std::optional<CompiledPoly> hoth;
  if (H) hoth.emplace(*H);

  struct Acc {
    std::int64_t zeros = 0, singular = 0, common = 0;
  };
  std::vector<Acc> partial(opts.threads ? opts.threads : 1);
  detail::parallel_chunks(q, opts.threads, [&](std::uint32_t t,
                                               std::uint32_t lo,
                                               std::uint32_t hi) {
    detail::SelfChecker checker;
    if (opts.self_check) {
      std::uint64_t span = 1;
      for (std::uint32_t i = 1; i < n; ++i) span *= q;
      checker.naive = &G;
      checker.stride = std::max<std::uint64_t>(1, span * (hi - lo) / 64);
    }
    Acc acc;
    std::vector<felt> x(n, 0);
    for (std::uint32_t x0 = lo; x0 < hi; ++x0) {
      x[0] = x0;
      std::fill(x.begin() + 1, x.end(), 0);
      do {
        const felt v = hot.eval(x.data());
        checker.check(hot, x, v);
        if (v == 0) {
          ++acc.zeros;
          bool grad_zero = true;
          for (const auto& pc : partials)
            if (pc.eval(x.data()) != 0) {
              grad_zero = false;
              break;
            }
          if (grad_zero) ++acc.singular;
          if (hoth && hoth->eval(x.data()) == 0) ++acc.common;
        }
      } while (n > 1 && detail::next_point(x, q, 1));
    }
    partial[t] = acc;
  });
  Acc total;
  for (const auto& a : partial) {
    total.zeros += a.zeros;
    total.singular += a.singular;
    total.common += a.common;
  }
  rep.n_affine = total.zeros;
  rep.s1 = total.singular;
  if (H) rep.s2 = total.common;

  if (G.is_homogeneous() && G.degree() >= 1) {
    EnumOptions popts = opts;
    const auto proj = count_zeros(G, CountMode::projective, popts);
    rep.n_projective = proj.n_projective;
    if (*rep.n_affine !=
        static_cast<std::int64_t>(q - 1) * *rep.n_projective + 1)
      throw std::logic_error(
          "homogeneous count identity N_affine = (q-1) N_proj + 1 failed");
  }
  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return rep;
}

// S1: points with F = 0 and grad F = 0.
inline std::int64_t count_singular(const MPoly& F, const EnumOptions& opts = {}) {
  return *count_full(F, nullptr, opts).s1;
}

// S2: points with G = 0 and H = 0.
inline std::int64_t count_common_zeros(const MPoly& G, const MPoly& H,
                                       const EnumOptions& opts = {}) {
  return *count_full(G, &H, opts).s2;
}

// First point in lexicographic order with G = 0, grad G != 0 and, when H is
// given, H != 0. The returned witness is re-verified with the naive
// evaluator.
inline std::optional<Witness> find_nonsingular(const MPoly& G, const MPoly* H,
                                               const EnumOptions& opts = {}) {
  if (G.is_zero()) throw std::invalid_argument("find_nonsingular: zero G");
  if (H && (!H->field()->same(*G.field()) || H->nvars() != G.nvars()))
    throw std::invalid_argument("find_nonsingular: field/dimension mismatch");
  const std::uint32_t q = G.field()->q();
  const std::uint32_t n = G.nvars();
  if (detail::pow_u64_checked(q, n, opts.budget_evals) > opts.budget_evals)
    throw BudgetExceeded("witness scan exceeds the evaluation budget");

  const CompiledPoly hot(G);
  std::vector<CompiledPoly> partials;
  const auto grad = gradient(G);
  for (const auto& gp : grad.partials) partials.emplace_back(gp);
  std::optional<CompiledPoly> hoth;
  if (H) hoth.emplace(*H);

  const auto verify_witness = [&](const std::vector<felt>& x) {
    Witness w;
    w.point = x;
    w.value = G.evaluate(x);
    for (std::uint32_t i = 0; i < n; ++i)
      w.gradient.push_back(G.derivative(i).evaluate(x));
    bool nonzero = false;
    for (auto gv : w.gradient) nonzero = nonzero || gv != 0;
    if (w.value != 0 || !nonzero)
      throw std::logic_error("witness failed independent verification");
    if (H) {
      w.h_value = H->evaluate(x);
      if (*w.h_value == 0)
        throw std::logic_error("witness failed independent verification");
    }
    return w;
  };

  if (opts.random_start) {
    // seeded wrap-around scan; first hit from the starting point wins
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < n; ++i) total *= q;
    Rng rng(*opts.random_start);
    const std::uint64_t start = rng.below(total);
    std::vector<felt> x(n);
    std::uint64_t rest = start;
    for (std::uint32_t i = n; i-- > 0;) {
      x[i] = static_cast<felt>(rest % q);
      rest /= q;
    }
    for (std::uint64_t step = 0; step < total; ++step) {
      bool hit = hot.eval(x.data()) == 0;
      if (hit) {
        bool grad_nonzero = false;
        for (const auto& pc : partials)
          if (pc.eval(x.data()) != 0) {
            grad_nonzero = true;
            break;
          }
        hit = grad_nonzero && (!hoth || hoth->eval(x.data()) != 0);
      }
      if (hit) return verify_witness(x);
      if (!detail::next_point(x, q, 0)) std::fill(x.begin(), x.end(), 0);
    }
    return std::nullopt;
  }

  const std::uint32_t nslots = std::max(1u, opts.threads);
  std::vector<std::optional<std::vector<felt>>> found(nslots);
  std::atomic<std::uint32_t> best{nslots};

  detail::parallel_chunks(q, opts.threads, [&](std::uint32_t t,
                                               std::uint32_t lo,
                                               std::uint32_t hi) {
    std::vector<felt> x(n, 0);
    for (std::uint32_t x0 = lo; x0 < hi; ++x0) {
      if (best.load(std::memory_order_relaxed) < t) return;  // cannot win
      x[0] = x0;
      std::fill(x.begin() + 1, x.end(), 0);
      do {
        if (hot.eval(x.data()) != 0) continue;
        bool grad_nonzero = false;
        for (const auto& pc : partials)
          if (pc.eval(x.data()) != 0) {
            grad_nonzero = true;
            break;
          }
        if (!grad_nonzero) continue;
        if (hoth && hoth->eval(x.data()) == 0) continue;
        found[t] = x;
        std::uint32_t cur = best.load(std::memory_order_relaxed);
        while (t < cur &&
               !best.compare_exchange_weak(cur, t, std::memory_order_relaxed)) {
        }
        return;
      } while (n > 1 && detail::next_point(x, q, 1));
    }
  });

  for (const auto& slot : found) {
    if (!slot) continue;
    // independent re-verification through the naive path
    return verify_witness(*slot);
  }
  return std::nullopt;
}

// Non-singular zeros of a plane curve. Affine mode counts (x, y) with P = 0
// and a nonzero affine gradient; projective mode homogenizes to deg P and
// counts representatives with a nonzero homogeneous gradient.
inline std::int64_t count_nonsingular_curve(const MPoly& P, CountMode mode,
                                            const EnumOptions& opts = {}) {
  if (P.is_zero())
    throw std::invalid_argument("count_nonsingular_curve: zero polynomial");
  if (P.nvars() != 2)
    throw std::invalid_argument("count_nonsingular_curve: need 2 variables");
  const std::uint32_t q = P.field()->q();

  if (mode == CountMode::affine) {
    if (static_cast<std::uint64_t>(q) * q > opts.budget_evals)
      throw BudgetExceeded("curve enumeration exceeds the budget");
    const CompiledPoly hot(P);
    const CompiledPoly px(P.derivative(0));
    const CompiledPoly py(P.derivative(1));
    std::vector<std::int64_t> partial(opts.threads ? opts.threads : 1, 0);
    detail::parallel_chunks(
        q, opts.threads, [&](std::uint32_t t, std::uint32_t lo, std::uint32_t hi) {
          std::int64_t count = 0;
          std::vector<felt> x(2, 0);
          for (std::uint32_t x0 = lo; x0 < hi; ++x0) {
            x[0] = x0;
            for (felt y = 0; y < q; ++y) {
              x[1] = y;
              if (hot.eval(x.data()) != 0) continue;
              if (px.eval(x.data()) != 0 || py.eval(x.data()) != 0) ++count;
            }
          }
          partial[t] = count;
        });
    std::int64_t total = 0;
    for (auto c : partial) total += c;
    return total;
  }

  const std::uint32_t d = static_cast<std::uint32_t>(std::max(P.degree(), 0));
  if (d == 0) return 0;  // nonzero constant: no zeros at all
  const MPoly F = homogenize(P, d);
  const CompiledPoly hot(F);
  std::vector<CompiledPoly> partials;
  for (std::uint32_t i = 0; i < 3; ++i) partials.emplace_back(F.derivative(i));
  std::uint64_t total_pts = static_cast<std::uint64_t>(q) * q + q + 1;
  if (total_pts > opts.budget_evals)
    throw BudgetExceeded("curve enumeration exceeds the budget");

  std::int64_t total = 0;
  std::vector<felt> x(3, 0);
  for (std::uint32_t block = 0; block < 3; ++block) {
    std::fill(x.begin(), x.end(), 0);
    x[block] = 1;
    if (block + 1 >= 3) {
      if (hot.eval(x.data()) == 0)
        for (const auto& pc : partials)
          if (pc.eval(x.data()) != 0) {
            ++total;
            break;
          }
      continue;
    }
    std::fill(x.begin() + block + 1, x.end(), 0);
    do {
      if (hot.eval(x.data()) == 0) {
        for (const auto& pc : partials)
          if (pc.eval(x.data()) != 0) {
            ++total;
            break;
          }
      }
    } while (detail::next_point(x, q, block + 1));
  }
  return total;
}

}  // namespace nonsing
