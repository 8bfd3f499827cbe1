#pragma once

// Applicative-morphism calculus on finite samples.
//
// A morphism goes from the base algebra into a target algebra whose elements
// are either dialogue-model functions or base-algebra terms.  Membership in
// an image set is checked observationally against a declared finite window,
// so every checker here is a sound refuter, never a verifier: a pass means
// "no counterexample on the sample".

#include "pca/basepca.hpp"
#include "pca/k2.hpp"
#include "pca/oracle.hpp"
#include "pca/partialfn.hpp"
#include "pca/report.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pca {

// An element of whichever algebra a morphism targets.  Exactly one member is
// engaged: dialogue-model elements carry a function, base-algebra elements a
// term handle (big programs never materialise as numbers).
struct Elem {
  PartialFn fn;
  TermPtr term;

  static Elem of_fn(PartialFn f) { return {std::move(f), nullptr}; }
  static Elem of_term(TermPtr t) { return {PartialFn(), std::move(t)}; }
  bool is_fn() const { return fn.valid(); }
};

enum class Tri { Yes, No, Unknown };

struct AppliedElem {
  Outcome::Kind status = Outcome::Kind::Undefined;
  Elem value;  // engaged only when status == Value
};

class ElementAlgebra {
 public:
  virtual ~ElementAlgebra() = default;
  virtual AppliedElem apply(const Elem& f, const Elem& x, Fuel& fuel) const = 0;
  // Observational equality; Unknown when fuel ran out before it settled.
  virtual Tri equal(const Elem& a, const Elem& b, std::uint64_t fuel_budget) const = 0;
  virtual std::string show(const Elem& e) const = 0;
};

using AlgebraPtr = std::shared_ptr<const ElementAlgebra>;

// Dialogue-model elements compared pointwise on the given sample.
AlgebraPtr k2_algebra(const K2Model& m, std::vector<Nat> obs_points);
// Base-algebra terms compared structurally after weak-head reduction.
AlgebraPtr code_algebra();

struct Morphism {
  std::string name;
  const PcaInterface* source = nullptr;
  AlgebraPtr target;
  // a ↦ finite window into the image set; `generate` supplies the canonical
  // window for keys outside `sample` (may be empty).
  std::map<Nat, std::vector<Elem>> sample;
  std::function<std::vector<Elem>(const Nat&)> generate;
  Nat source_top, source_bot;
  Elem target_top, target_bot;
  std::optional<Elem> realizer_candidate, decider_candidate;

  std::vector<Elem> window(const Nat& a) const;
};

// r b b′ lands in the window of aa′, for all sampled pairs with aa′ defined.
CheckReport check_realizer(const Morphism& g, const Elem& r,
                           const std::vector<std::pair<Nat, Nat>>& pairs,
                           std::uint64_t fuel_budget);

// s b lands in the second morphism's window, for every key and member.
CheckReport check_preorder(const Morphism& g, const Morphism& g2, const Elem& s,
                           const std::vector<Nat>& keys, std::uint64_t fuel_budget);

// d maps the window of ⊤ to the target ⊤ and the window of ⊥ to the target ⊥.
CheckReport check_decider(const Morphism& g, const Elem& d, std::uint64_t fuel_budget);

// r_f b lands in the window of f(a) whenever f(a) is defined on the sample.
CheckReport check_represents(const Morphism& g, const Elem& r_f, const PartialFn& f,
                             const std::vector<Nat>& points, std::uint64_t fuel_budget);

// The constant function â.
PartialFn gamma_hat(const Nat& a);

// a ↦ {â} into a dialogue model, with its realizer and decider candidates.
Morphism gamma_hat_morphism(const K2Model& m, std::vector<Nat> obs_points);
// The identity view of the base algebra.
Morphism identity_morphism();
// a ↦ programs computing the constant a — the composite of â with "elements
// that represent", over the identity view.
Morphism epsilon_gamma_morphism();

// The realizer behind a ↦ {â}.  The total variant answers every probe: the
// two protocol rows, result-r on off-pattern singletons, a stall elsewhere.
// The partial variant keeps only the protocol rows.
PartialFn make_rho(bool total, const SchemePtr& scheme);

// Is beta a member of the retraction image of alpha: does beta applied to â
// behave as the constant function at alpha(a), for every sampled a in
// alpha's domain?
MembershipReport epsilon_retract_member(const K2Model& m, const PartialFn& beta,
                                        const PartialFn& alpha,
                                        const std::vector<Nat>& dom_sample,
                                        const std::vector<Nat>& obs_points,
                                        std::uint64_t fuel_budget);

// The adjunction between the constant-function view and "codes whose bar is
// the function": exhibits b with b̄ â = ā on samples, finds a in the sampled
// code window of ā, and documents on one explicit constant function that the
// reverse direction fails on the window.
CheckReport epsilon_prime_adjunction(unsigned samples, std::uint64_t seed,
                                     std::uint64_t fuel_budget);

// Elements realizing a decidable morphism's structure on the target side:
// application, Boolean decision, pair projections, tuple append, singleton.
struct DeltaData {
  TermPtr r, d, pi0, pi1, c, s;
};

DeltaData identity_delta();

// F a b v ≃ If d(r π₀ (a v)) then r π₁ (a v) else F a b (c v (r b (r π₁ (a v)))),
// tied with the fixed-point combinator.  F a b is always defined.
TermPtr build_F_realizer(const DeltaData& dd);

// The defining equation, left and right sides evaluated independently on
// sampled (a, b, v).
CheckReport check_F_recursion(const TermPtr& F, const DeltaData& dd, unsigned samples,
                              std::uint64_t seed, std::uint64_t fuel_budget);

// Walks the interrogation of b by a at point y: at every prefix v the run
// F a b (s x) agrees with F a b v, queries replay the supplied chain, and
// the result step equals r π₁ (a v).
CheckReport claim_check(const TermPtr& F, const DeltaData& dd, const TermPtr& a,
                        const TermPtr& b, const Nat& y,
                        const std::vector<Nat>& interrogation, std::uint64_t fuel_budget);

// Preorder witnesses for the two directions of "constants compose with
// representing elements like the identity".  The forward witness applies its
// argument to an arbitrary element ξ; callers flag the choice in reports.
TermPtr preorder_witness_apply_to(const Nat& xi);  // ⟨v⟩ v ξ
TermPtr preorder_witness_constant();               // K

// The one-sided greatness witness ⟨z x⟩ s (r′ (r′ τ z) (t x)), built and
// checked as a closed term only.
TermPtr greatness_witness_term(const TermPtr& s_el, const TermPtr& r_prime,
                               const TermPtr& tau, const TermPtr& t_el);

}  // namespace pca
