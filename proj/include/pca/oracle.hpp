#pragma once

// Relativized application over the base algebra.  A program a applied to a
// point b may consult an external partial function f: the probe is the tuple
// [b, answers so far], the program answers [⊥,v] to ask for f(v) and [⊤,c]
// to finish with value c.  On top of this sit the reducibility checks (does
// a program compute g given f?), binary joins f ⊔ g with their in-model
// witnesses, and a finite membership surrogate for downward closure.

#include "pca/basepca.hpp"
#include "pca/partialfn.hpp"
#include "pca/report.hpp"

#include <cstdint>
#include <vector>

namespace pca {

struct OracleModel {
  const PcaInterface* base = nullptr;
  PartialFn f;
};

OracleModel make_oracle_model(PartialFn f);  // over the code algebra

struct OracleRun {
  Outcome outcome;
  Trace trace;  // the f-queries with their answers
};

OracleRun oracle_apply(const OracleModel& m, const Nat& a, const Nat& b, Fuel& fuel);

// The section x ↦ a ·^f x as an evaluable function.
PartialFn oracle_section(const OracleModel& m, const Nat& a);

// Does program a compute g given m.f?  Outcome-equality on the sample.
CheckReport check_represents_in_oracle(const OracleModel& m, const Nat& a, const PartialFn& g,
                                       const std::vector<Nat>& points,
                                       std::uint64_t fuel_budget);

// Ready-made programs for the reducibility corpus.
Nat identity_program();    // returns its point, no queries
Nat echo_program();        // queries the point itself, returns the answer
Nat left_lift_program();   // queries [⊤, point]: computes f from f⊔g
Nat right_lift_program();  // queries [⊥, point]: computes g from f⊔g

// [⊤,x] (left) or [⊥,x] as a code — the points a join actually answers at.
Nat pair_point(bool left, const Nat& x);

// (f⊔g)([⊤,x]) ≃ f(x), (f⊔g)([⊥,x]) ≃ g(x), undefined elsewhere.
PartialFn join(const PartialFn& f, const PartialFn& g, const Kit& kit);

// Element whose bar, applied to γ1 and then γ2 in the partial-function
// model over the base algebra's own tuples, is γ1 ⊔ γ2 pointwise.  Kept as
// a term handle: the compiled program nests too deep for its code to fit
// the numeral width window, and nothing downstream needs the number.
TermPtr join_witness_element(const Kit& kit);

// ā: x ↦ a·x over a base algebra.
PartialFn make_bar(const PcaInterface& pca, const Nat& a);
PartialFn make_bar(const TermPtr& a);  // same, for programs kept as handles

struct MembershipReport {
  bool member = false;
  bool inconclusive = false;
};

// Is f below some member of B: does a member agree with f at every sampled
// point where f has a value?
MembershipReport downward_closure_member(const std::vector<PartialFn>& members,
                                         const PartialFn& f, const std::vector<Nat>& points,
                                         std::uint64_t fuel_budget);

}  // namespace pca
