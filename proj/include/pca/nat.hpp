#pragma once

// Carrier naturals and the evaluation fuel meter.
//
// Naturals are arbitrary precision with a hard bit cap.  Sequence codes grow
// roughly like 2^length bits under the cons-cell pairing, so a fixed-width
// integer would die long before the windows the test suites need (the nested
// singleton tower already passes 2^64 at height nine).  Exceeding the cap is
// a fatal error, never a silent wrap.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pca {

using Nat = boost::multiprecision::cpp_int;

// Anything wider than this is treated as a runaway encoding.
inline constexpr unsigned nat_cap_bits = 1u << 22;  // ~4M bits

struct coding_overflow : std::runtime_error {
  explicit coding_overflow(const std::string& what) : std::runtime_error(what) {}
};

inline void check_width(const Nat& n, const char* where) {
  if (msb(n == 0 ? Nat(1) : n) >= nat_cap_bits)
    throw coding_overflow(std::string("coding window exceeded in ") + where);
}

inline std::uint64_t to_u64(const Nat& n, const char* where) {
  if (n > Nat(UINT64_MAX))
    throw coding_overflow(std::string("value too large for ") + where);
  return n.convert_to<std::uint64_t>();
}

// Shared evaluation budget.  Every oracle answer, base reduction step and
// dialogue round draws one unit; sub-evaluations share the caller's meter,
// so an outcome at a given budget is reproducible.
struct Fuel {
  std::uint64_t remaining = 0;

  explicit Fuel(std::uint64_t budget) : remaining(budget) {}

  // True if the unit was available; false means the budget is exhausted.
  bool tick() {
    if (remaining == 0) return false;
    --remaining;
    return true;
  }

  bool take(std::uint64_t units) {
    if (remaining < units) {
      remaining = 0;
      return false;
    }
    remaining -= units;
    return true;
  }

  // Coding work on a wide number costs in proportion to its width, roughly a
  // unit per byte.  Without this a dialogue whose probes double in size every
  // round stays within any flat tick budget while the arithmetic underneath
  // grows past all bounds.
  bool take_width(const Nat& n) {
    std::uint64_t bits = n == 0 ? 1 : static_cast<std::uint64_t>(msb(n)) + 1;
    return take(bits / 8 + 1);
  }
};

}  // namespace pca
