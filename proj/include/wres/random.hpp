#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wres/multiindex.hpp"
#include "wres/rational.hpp"

namespace wres {

/* splitmix64: tiny, seedable, and identical on every platform, which
 * keeps sampled test cases and reports byte-for-byte reproducible. */
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : s_(seed) {}

  uint64_t next() {
    uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /* Uniform in [0, n); modulo bias is irrelevant at these sizes. */
  uint64_t below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("SplitMix64: empty range");
    return next() % n;
  }

  long range(long lo, long hi) {  // inclusive bounds
    return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  Rational small_rational() {
    return {range(-3, 3), range(1, 4)};
  }

  Rational small_nonzero_rational() {
    for (;;) {
      Rational r = small_rational();
      if (!r.is_zero()) return r;
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    if (v.empty()) throw std::invalid_argument("SplitMix64: pick from empty vector");
    return v[static_cast<size_t>(below(v.size()))];
  }

 private:
  uint64_t s_;
};

}  // namespace wres
