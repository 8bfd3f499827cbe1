#include "pca/coding.hpp"

#include <stdexcept>

namespace pca {

void validate_scheme(const CodingScheme& scheme, std::uint64_t fuel_budget) {
  auto bad = [](const char* what) { throw std::invalid_argument(std::string("coding scheme: ") + what); };
  if (scheme.q() == scheme.r()) bad("query and result markers coincide");
  std::vector<std::vector<Nat>> window = {{}, {scheme.q()}, {scheme.r()}, {scheme.q(), scheme.r()}};
  for (const auto& seq : window) {
    Fuel fuel(fuel_budget);
    auto back = scheme.decode(scheme.encode(seq), fuel);
    if (!back || *back != seq) bad("sequence round trip failed");
  }
  for (const Nat& x : {scheme.q(), scheme.r()}) {
    Fuel fuel(fuel_budget);
    if (!(scheme.untag(scheme.tag_query(x), fuel) == Tagged::query(x))) bad("query tag does not untag");
    if (!(scheme.untag(scheme.tag_result(x), fuel) == Tagged::result(x))) bad("result tag does not untag");
  }
}

Nat CantorScheme::pair(const Nat& x, const Nat& y) {
  Nat s = x + y;
  check_width(s, "pair");
  Nat z = s * (s + 1) / 2 + y;
  check_width(z, "pair");
  return z;
}

void CantorScheme::unpair(const Nat& z, Nat& x, Nat& y) {
  // Largest w with w(w+1)/2 <= z, via integer sqrt of 8z+1.
  Nat w = (sqrt(Nat(8) * z + 1) - 1) / 2;
  while (w * (w + 1) / 2 > z) --w;          // guard sqrt rounding
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  y = z - w * (w + 1) / 2;
  x = w - y;
}

Nat CantorScheme::cons(const Nat& a, const Nat& t) {
  Nat c = pair(a, t) + 1;
  check_width(c, "cons");
  return c;
}

Nat CantorScheme::encode(const std::vector<Nat>& seq) const {
  Nat code = 0;
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) code = cons(*it, code);
  return code;
}

std::optional<std::vector<Nat>> CantorScheme::decode(const Nat& code, Fuel& fuel) const {
  // Splitting a code costs in proportion to its width; exhaustion leaves the
  // meter at zero so callers can tell a resource limit from a malformed code.
  if (!fuel.take_width(code)) return std::nullopt;
  std::vector<Nat> seq;
  Nat rest = code;
  while (rest != 0) {
    Nat head, tail;
    unpair(rest - 1, head, tail);
    seq.push_back(std::move(head));
    rest = std::move(tail);
  }
  return seq;
}

Nat CantorScheme::tag_query(const Nat& b) const { return encode({q(), b}); }
Nat CantorScheme::tag_result(const Nat& c) const { return encode({r(), c}); }

Tagged CantorScheme::untag(const Nat& v, Fuel& fuel) const {
  auto seq = decode(v, fuel);
  if (!seq || seq->size() != 2) return Tagged::neither();
  if ((*seq)[0] == q()) return Tagged::query((*seq)[1]);
  if ((*seq)[0] == r()) return Tagged::result((*seq)[1]);
  return Tagged::neither();
}

const SchemePtr& cantor_scheme() {
  static const SchemePtr scheme = std::make_shared<CantorScheme>();
  return scheme;
}

Nat cantor_encode(const std::vector<Nat>& seq) { return cantor_scheme()->encode(seq); }

std::vector<Nat> cantor_decode(const Nat& code) {
  // Unmetered: callers with a live meter charge for the code's width at
  // their own entry.
  Fuel unmetered(UINT64_MAX);
  return *cantor_scheme()->decode(code, unmetered);
}

Nat iterated_singleton(unsigned n) {
  Nat t = 0;
  for (unsigned i = 0; i < n; ++i) t = cantor_encode({t});
  return t;
}

}  // namespace pca
