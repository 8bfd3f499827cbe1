#pragma once

// Three-valued evaluation result.  Undefined is a definite answer ("this
// application has no value"); OutOfFuel only says the budget ran out first.

#include "pca/nat.hpp"

#include <ostream>
#include <string>

namespace pca {

struct Outcome {
  enum class Kind { Value, Undefined, OutOfFuel };

  Kind kind = Kind::Undefined;
  Nat value;  // meaningful only when kind == Value

  static Outcome val(Nat v) { return {Kind::Value, std::move(v)}; }
  static Outcome undefined() { return {Kind::Undefined, Nat(0)}; }
  static Outcome out_of_fuel() { return {Kind::OutOfFuel, Nat(0)}; }

  bool is_value() const { return kind == Kind::Value; }
  bool is_undefined() const { return kind == Kind::Undefined; }
  bool is_out_of_fuel() const { return kind == Kind::OutOfFuel; }

  friend bool operator==(const Outcome& a, const Outcome& b) {
    if (a.kind != b.kind) return false;
    return a.kind != Kind::Value || a.value == b.value;
  }
  friend bool operator!=(const Outcome& a, const Outcome& b) { return !(a == b); }
};

inline std::string to_string(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Value: return "result " + o.value.str();
    case Outcome::Kind::Undefined: return "undefined";
    default: return "out-of-fuel";
  }
}

inline std::ostream& operator<<(std::ostream& os, const Outcome& o) {
  return os << to_string(o);
}

}  // namespace pca
