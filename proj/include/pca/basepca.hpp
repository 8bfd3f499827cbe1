#pragma once

// A small computable base algebra.
//
// Terms are built from nine constants plus numerals and application:
//   K S PAIR FST SND SUCC PRED IFZ FIX #n
// Reduction is deterministic weak-head normal order, one fuel unit per step.
// Partial applications of constants are values; a constant applied to an
// argument of the wrong shape is stuck, which evaluation reports as
// Undefined.  Terms are in bijection with the naturals, and application
// strictly increases the code, but programs are passed around as term
// handles: codes of deeply nested terms overflow any fixed window, so codes
// are only materialised at interfaces that genuinely need numbers.

#include "pca/coding.hpp"
#include "pca/nat.hpp"
#include "pca/outcome.hpp"
#include "pca/report.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pca {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { K, S, Pair, Fst, Snd, Succ, Pred, Ifz, Fix, Num, App, Var };
  Kind kind = Kind::K;
  Nat num;             // Kind::Num
  TermPtr fun, arg;    // Kind::App
  std::string var;     // Kind::Var, only before bracket compilation
};

TermPtr t_const(Term::Kind k);
TermPtr t_num(Nat n);
TermPtr t_app(TermPtr f, TermPtr a);
TermPtr t_var(std::string name);

// Left-nested application of several arguments.
TermPtr t_apps(TermPtr f, std::initializer_list<TermPtr> args);

bool term_eq(const TermPtr& a, const TermPtr& b);
bool term_closed(const TermPtr& t);

// Bijective numbering.  Constants take 0..8 in declaration order; for c >= 9
// an even offset is a numeral and an odd offset a Cantor-paired application.
Nat term_encode(const TermPtr& t);
TermPtr term_decode(const Nat& code);

std::string print_term(const TermPtr& t);
// Accepts the constant names, #n numerals, juxtaposition, parentheses and
// the abstraction sugar "\x y. body" (compiled away, result is closed).
TermPtr parse_term(const std::string& src);  // throws std::runtime_error

// Bracket abstraction; body may use t_var(x).  Guarantees the classical
// shape: the compiled term is a value, and applying it substitutes the
// argument in one weak-head sequence.
TermPtr lam(const std::string& x, TermPtr body);
TermPtr lam(const std::vector<std::string>& xs, TermPtr body);
TermPtr lam(std::initializer_list<const char*> xs, TermPtr body);

// Application is strict (the S rule forces both components, so the (s) axiom
// holds on the nose), which makes a bare IFZ branch evaluate eagerly.  delay
// suspends a term behind one argument without the vacuous-K shortcut; ite
// selects between two suspended branches and pokes the winner.  Use ite for
// every conditional whose branches may recurse or get stuck.  guarded closes
// the branches over the listed variables instead, selecting between the two
// resulting combinator values and re-applying the winner: same semantics,
// but the branch bodies stay out of the suspension, which keeps the encoded
// form narrow — the shape for conditionals inside programs that live as
// element codes.
TermPtr delay(const TermPtr& body);
TermPtr ite(TermPtr n, TermPtr when_zero, TermPtr when_nonzero);
TermPtr guarded(TermPtr n, std::initializer_list<const char*> vs, TermPtr when_zero,
                TermPtr when_nonzero);

enum class RStatus { Ok, Stuck, Fuel };

struct Reduced {
  RStatus status = RStatus::Stuck;
  TermPtr term;  // meaningful when status == Ok
};

Reduced reduce_whnf(TermPtr t, Fuel& fuel);

// Shape probes; each reduces as much as needed and no more.
struct ForcedNat { RStatus status; Nat value; };
struct ForcedPair { RStatus status; TermPtr first, second; };
struct ForcedBool { RStatus status; bool value; };
struct ForcedTuple { RStatus status; std::vector<TermPtr> items; };

ForcedNat force_numeral(TermPtr t, Fuel& fuel);
ForcedPair force_pair(TermPtr t, Fuel& fuel);
ForcedBool force_bool(TermPtr t, Fuel& fuel);   // PAIR #0/#1 payload convention
ForcedTuple force_tuple(TermPtr t, Fuel& fuel); // length-prefixed PAIR spine

// Application at each level.
Reduced apply_terms(TermPtr f, TermPtr a, Fuel& fuel);

class PcaInterface {
 public:
  virtual ~PcaInterface() = default;
  virtual Outcome apply(const Nat& a, const Nat& b, Fuel& fuel) const = 0;
  virtual Nat k() const = 0;
  virtual Nat s() const = 0;
  virtual std::string show(const Nat& a) const = 0;
};

class CodePca final : public PcaInterface {
 public:
  Outcome apply(const Nat& a, const Nat& b, Fuel& fuel) const override;
  Nat k() const override { return term_encode(t_const(Term::Kind::K)); }
  Nat s() const override { return term_encode(t_const(Term::Kind::S)); }
  std::string show(const Nat& a) const override { return print_term(term_decode(a)); }
};

const CodePca& code_pca();

// Derived combinators and data plumbing over the base algebra.  Everything
// here is an ordinary closed term; host-side builders construct numeral and
// tuple values directly.
struct Kit {
  TermPtr i;                 // identity
  TermPtr top, bot;          // Booleans: PAIR #1 (\x y. x) and PAIR #0 (\x y. y)
  TermPtr cond;              // \v a b. IFZ (FST v) b a
  TermPtr fix;               // the FIX constant; fix f x steps to f (fix f) x
  TermPtr app_el;            // \x y. x y
  TermPtr tup_head, tup_tail, tup_cons, tup_single, tup_append;
  TermPtr add, monus;        // tail-recursive numeral arithmetic

  TermPtr numeral(const Nat& n) const;
  TermPtr tuple(const std::vector<TermPtr>& items) const;
  TermPtr pair2(TermPtr a, TermPtr b) const;  // the two-component tuple [a, b]
  Nat q_code() const;  // code of bot
  Nat r_code() const;  // code of top
};

const Kit& derived_kit();

// The base algebra's own sequence coding: sequences of element codes become
// tuple terms, q and r are the Booleans, and tagged values are PAIR cells
// p bot u (query) / p top u (result).  Untagging reduces the payload to
// weak head normal form, so results are compared up to evaluation.
class PcaTupleScheme final : public CodingScheme {
 public:
  Nat encode(const std::vector<Nat>& seq) const override;
  std::optional<std::vector<Nat>> decode(const Nat& code, Fuel& fuel) const override;
  Nat q() const override;
  Nat r() const override;
  Nat tag_query(const Nat& b) const override;
  Nat tag_result(const Nat& c) const override;
  Tagged untag(const Nat& v, Fuel& fuel) const override;
};

const SchemePtr& pca_tuple_scheme();

// Axiom suites.
CheckReport check_pca_axioms(const PcaInterface& pca, unsigned samples, std::uint64_t seed,
                             std::uint64_t fuel_budget);
CheckReport check_kit_laws(unsigned samples, std::uint64_t seed, std::uint64_t fuel_budget);

// Translation witnesses between an external sequence coding and the
// algebra's own tuples.  For the algebra's native scheme the witnesses are
// identities.  For the Cantor scheme the witnesses are compiled programs,
// verified on a window of numeral and constant entries: entries whose codes
// denote applications would need reflection the algebra does not have, and
// the tuple-to-code direction additionally needs numeral entries.
struct CompatReport {
  TermPtr seq_to_tuple, tuple_to_seq, marker_map;  // a, b, c witnesses
  CheckReport report;
};

CompatReport check_compatible(const CodingScheme& scheme, std::uint64_t fuel_budget);

}  // namespace pca
