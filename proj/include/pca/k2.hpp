#pragma once

// The function-space models: application by dialogue, strategy compilation,
// and the combinators that make them (partial) combinatory algebras.
//
// Three protocols share this module.  K2 and K2P run the tagged protocol
// (values are ⟨q,b⟩ queries or ⟨r,c⟩ results) over total respectively partial
// functions; K2ORIG runs the sequential 0 / y+1 protocol where the oracle is
// read positionally.  The E-tower counterexample lives in K2ORIG.

#include "pca/coding.hpp"
#include "pca/nat.hpp"
#include "pca/outcome.hpp"
#include "pca/partialfn.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace pca {

enum class ModelTag { K2, K2P, K2Orig };

struct K2Model {
  ModelTag tag = ModelTag::K2;
  SchemePtr scheme;
  std::string name;
};

K2Model make_k2();
K2Model make_k2p();
K2Model make_k2orig();
// Tagged-protocol model over a caller-supplied scheme (validated once here).
K2Model make_k2_with_scheme(const SchemePtr& scheme, bool partial);

// αβ as an application node: eval(αβ, a) runs the a-dialogue of α against β.
// The node itself always exists; in the total models it carries a totality
// claim that is never checked globally — per-point evaluation is the
// observable surrogate.
PartialFn k2_apply(const K2Model& m, const PartialFn& alpha, const PartialFn& beta);

// A bisequential strategy body: a computation consulting two oracles.  The
// same body runs against live functions (direct execution) or against
// recorded answer feeds (inside a compiled element, where feed exhaustion
// makes the element emit the corresponding query).
class StrategyRun {
 public:
  virtual ~StrategyRun() = default;
  virtual Nat ask_first(const Nat& point) = 0;
  virtual Nat ask_second(const Nat& point) = 0;
  virtual Fuel& fuel() = 0;
};

struct Move {
  enum class Kind { Result, Stuck, Undefined, OutOfFuel };
  Kind kind = Kind::Stuck;
  Nat value;  // Result only

  static Move result(Nat v) { return {Kind::Result, std::move(v)}; }
  static Move stuck() { return {Kind::Stuck, Nat(0)}; }
  static Move undefined() { return {Kind::Undefined, Nat(0)}; }
  static Move out_of_fuel() { return {Kind::OutOfFuel, Nat(0)}; }
};

using StrategyBody = std::function<Move(StrategyRun&)>;
// Point-indexed family a ↦ G_a.
using StrategyFamily = std::function<StrategyBody(const Nat&)>;

// Direct execution against live oracles: the reference interpreter that
// compiled elements are checked against.  Stuck maps to Undefined.
Outcome run_strategy(const StrategyBody& body, const PartialFn& first,
                     const PartialFn& second, Fuel& fuel);

// Compile a body into one element φ_G with φ(φ_Gα, β) = G(α,β): interrogate
// φ_Gα against β with no point prefix and the body's value falls out.  Every
// history that no run of G generates is off protocol; the total model answers
// it with the stall value ⟨q,q⟩ (keeping compiled elements total), the
// partial model leaves it undefined.
PartialFn compile_strategy(const StrategyBody& body, const K2Model& m, std::string name);
// Point-indexed version: ((φ_Gα)β)(a) = G_a(α,β).
PartialFn compile_strategy_family(const StrategyFamily& family, const K2Model& m,
                                  std::string name);

// k, s, σ for the tagged models (for K2Orig, see make_k_prime_s_prime).
//   (kα)β ≡ α pointwise; ((sα)β)γ ≡ (αγ)(βγ) pointwise; σα â ≡ widehat(α(a)).
PartialFn make_k(const K2Model& m);
PartialFn make_s(const K2Model& m);
PartialFn make_sigma(const K2Model& m);

// The value S^{αβ}(code) of the machine underlying s, exposed for direct
// inspection: code is read as ⟨a⟩∗u with u split into alternating segments of
// α-answers and β-answers; the machine re-emits whichever query the
// simulation of ((αγ)(βγ))(a) needs next.  Codes no run generates (including
// anything that fails to parse) yield the stall value ⟨q,q⟩.
Outcome s_machine(const PartialFn& alpha, const PartialFn& beta, const Nat& code,
                  const SchemePtr& scheme, Fuel& fuel);

// The nested singleton tower E_0 = ⟨⟩, E_{n+1} = ⟨E_n⟩: grade of a tower
// element, nullopt for everything else.
std::optional<unsigned> tower_grade(const Nat& x);

// Sequential-protocol k and s overridden to grade the tower (value n at E_n):
// the explicit members of the window family B.
std::pair<PartialFn, PartialFn> make_k_prime_s_prime();

// Window surrogate for B membership: α(E_n) = n for all n ≤ n_window.
struct BWindowReport {
  bool member = false;
  bool inconclusive = false;           // a probe ran out of fuel first
  std::optional<unsigned> failed_at;   // least failing grade when !member
};
BWindowReport in_counterexample_B(const PartialFn& alpha, unsigned n_window,
                                  std::uint64_t fuel_budget);

}  // namespace pca
