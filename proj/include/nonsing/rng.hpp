#pragma once

// Deterministic, platform-independent random stream (splitmix64). Standard
// library distributions are implementation-defined, so seeded suites use
// this instead. Per-instance streams are split by hashing (seed, index), so
// results do not depend on scheduling.

#include <cstdint>
#include <stdexcept>

#include "nonsing/field.hpp"

namespace nonsing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng for_instance(std::uint64_t seed, std::uint64_t index) {
    Rng r(mix(seed) ^ mix(0x9e3779b97f4a7c15ull * (index + 1)));
    r.next();
    return r;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased value in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = ~0ull - ~0ull % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

  felt element(const FieldSpec& f) { return static_cast<felt>(below(f.q())); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
    return z ^ (z >> 33);
  }

  std::uint64_t state_;
};

}  // namespace nonsing
