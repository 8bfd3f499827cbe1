#pragma once

#include "pca/nat.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace pca {

// Deterministic sampler.  Draws come from a seeded mt19937_64 and are
// reduced by modulo rather than a distribution adaptor, so the same seed
// yields the same samples on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t below(std::uint64_t n) {  // uniform-ish in [0, n)
    return n == 0 ? 0 : gen_() % n;
  }

  Nat nat_below(const Nat& n) {
    if (n <= 1) return Nat(0);
    // Build a value with as many 64-bit limbs as n has, then reduce.
    Nat acc = 0;
    unsigned bits = msb_bits(n);
    for (unsigned got = 0; got < bits + 64; got += 64) {
      acc <<= 64;
      acc += Nat(gen_());
    }
    return acc % n;
  }

  bool coin() { return (gen_() & 1u) != 0; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(below(xs.size()))];
  }

 private:
  static unsigned msb_bits(const Nat& n) {
    return n == 0 ? 1 : static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
  }
  std::mt19937_64 gen_;
};

}  // namespace pca
