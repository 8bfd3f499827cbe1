#pragma once

// Sequence coding for dialogue protocols.
//
// A scheme packs finite sequences of naturals into naturals and tags values
// as either a query for more input or a final result.  The dialogue and
// model layers are written against this interface so the same machinery can
// run over plain naturals (Cantor cells) or over a base algebra's own tuple
// representation.

#include "pca/nat.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace pca {

struct Tagged {
  // Exhausted: untagging itself ran out of fuel (possible for schemes whose
  // untag evaluates inside a base algebra); callers must surface it as
  // out-of-fuel, never as "malformed".
  enum class Kind { Query, Result, Neither, Exhausted };
  Kind kind = Kind::Neither;
  Nat payload;

  static Tagged query(Nat b) { return {Kind::Query, std::move(b)}; }
  static Tagged result(Nat c) { return {Kind::Result, std::move(c)}; }
  static Tagged neither() { return {Kind::Neither, Nat(0)}; }
  static Tagged exhausted() { return {Kind::Exhausted, Nat(0)}; }

  bool is_query() const { return kind == Kind::Query; }
  bool is_result() const { return kind == Kind::Result; }

  friend bool operator==(const Tagged& a, const Tagged& b) {
    if (a.kind != b.kind) return false;
    return a.payload == b.payload || (a.kind != Kind::Query && a.kind != Kind::Result);
  }
};

class CodingScheme {
 public:
  virtual ~CodingScheme() = default;

  virtual Nat encode(const std::vector<Nat>& seq) const = 0;
  // Decoding may cost fuel (schemes that live over a reduction engine).
  // nullopt means the natural is not a sequence code for this scheme.
  virtual std::optional<std::vector<Nat>> decode(const Nat& code, Fuel& fuel) const = 0;

  virtual Nat q() const = 0;  // "more input, please" marker
  virtual Nat r() const = 0;  // "final result" marker

  virtual Nat tag_query(const Nat& b) const = 0;
  virtual Nat tag_result(const Nat& c) const = 0;
  virtual Tagged untag(const Nat& v, Fuel& fuel) const = 0;

  // Value an oracle answers off protocol when it has to answer something:
  // a query at the query marker itself, which never resolves.
  Nat stall_value() const { return tag_query(q()); }
};

using SchemePtr = std::shared_ptr<const CodingScheme>;

// Cons-cell coding over the Cantor pairing.
//   nil        = 0
//   cons(a, t) = 1 + pair(a, t),  pair(x, y) = (x+y)(x+y+1)/2 + y
// Every natural decodes, so decode never fails here.
class CantorScheme final : public CodingScheme {
 public:
  static Nat pair(const Nat& x, const Nat& y);
  static void unpair(const Nat& z, Nat& x, Nat& y);
  static Nat cons(const Nat& a, const Nat& t);

  Nat encode(const std::vector<Nat>& seq) const override;
  std::optional<std::vector<Nat>> decode(const Nat& code, Fuel& fuel) const override;

  Nat q() const override { return Nat(0); }
  Nat r() const override { return Nat(1); }

  Nat tag_query(const Nat& b) const override;
  Nat tag_result(const Nat& c) const override;
  Tagged untag(const Nat& v, Fuel& fuel) const override;
};

const SchemePtr& cantor_scheme();

// Structural sanity for a scheme: distinct markers, round trips on a small
// window, tags that untag back to themselves.  Throws std::invalid_argument
// on violation; model constructors call this once per scheme.
void validate_scheme(const CodingScheme& scheme, std::uint64_t fuel_budget = 1u << 20);

// Fuel-free conveniences for the Cantor scheme (decoding it never blocks).
Nat cantor_encode(const std::vector<Nat>& seq);
std::vector<Nat> cantor_decode(const Nat& code);

// The nested singleton tower: t(0) = 0, t(n+1) = encode(<t(n)>).
Nat iterated_singleton(unsigned n);

}  // namespace pca
