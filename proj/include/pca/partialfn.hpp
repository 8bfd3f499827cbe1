#pragma once

// Partial functions on naturals with budgeted evaluation.
//
// A PartialFn owns an immutable body: a finite table, a host builtin, a base
// algebra program, or an application node that runs a dialogue when probed.
// Evaluation is deterministic in (point, budget).  Bodies that are expensive
// to probe memoize per point; a memo hit charges exactly the fuel the cold
// run consumed, so caching never changes an outcome.

#include "pca/nat.hpp"
#include "pca/outcome.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pca {

class PartialFn {
 public:
  enum class Kind { Table, Native, Program, AppNode };

  struct MemoEntry {
    // Cost and outcome of a completed cold run (Value or Undefined).
    std::optional<std::pair<std::uint64_t, Outcome>> settled;
    // Largest budget known to end in OutOfFuel.
    std::uint64_t exhausted_at = 0;
  };

  struct Body {
    Kind kind = Kind::Native;
    std::string name;
    bool totality_claim = false;
    bool memoize = false;
    std::map<Nat, Nat> table;  // Kind::Table only
    std::function<Outcome(const Nat&, Fuel&)> run;
    mutable std::map<Nat, MemoEntry> memo;  // guarded by single-session use
  };

  PartialFn() = default;
  explicit PartialFn(std::shared_ptr<const Body> b) : body_(std::move(b)) {}

  bool valid() const { return body_ != nullptr; }
  Kind kind() const { return body_->kind; }
  const std::string& name() const { return body_->name; }
  bool totality_claim() const { return body_->totality_claim; }
  const std::map<Nat, Nat>& table() const { return body_->table; }
  const Body& body() const { return *body_; }

  friend Outcome eval(const PartialFn& f, const Nat& x, Fuel& fuel);

 private:
  std::shared_ptr<const Body> body_;
};

// Evaluate with a shared meter (sub-evaluations draw from the same budget).
Outcome eval(const PartialFn& f, const Nat& x, Fuel& fuel);
// Evaluate with a fresh budget.
Outcome eval(const PartialFn& f, const Nat& x, std::uint64_t fuel_budget);

PartialFn make_table(std::map<Nat, Nat> entries, std::string name);
PartialFn make_native(std::string name, std::function<Outcome(const Nat&, Fuel&)> run,
                      bool totality_claim, bool memoize = false);
PartialFn make_builtin(const std::string& spec);  // "succ" | "id" | "const:<n>" | "primechar"
PartialFn make_constant(const Nat& value);        // the everywhere-constant function

// Total extension: Undefined points of f become the given default value.
PartialFn extend_total(const PartialFn& f, const Nat& default_value);

struct AgreeReport {
  struct Mismatch {
    Nat point;
    Outcome left, right;
  };
  std::vector<Mismatch> mismatches;
  std::uint64_t inconclusive = 0;  // points where either side ran out of fuel
  std::uint64_t compared = 0;

  bool agree() const { return mismatches.empty(); }
};

// Compare observable behaviour on finitely many points, fresh budget each.
// A point where either side runs out of fuel counts as inconclusive, not as
// disagreement, unless the other side disagrees outright.
AgreeReport agree_on(const PartialFn& f, const PartialFn& g, const std::vector<Nat>& points,
                     std::uint64_t fuel_budget);

struct TraceStep {
  Nat query;
  Nat answer;
};

struct Trace {
  std::optional<Nat> point;
  std::vector<TraceStep> steps;
  Outcome final = Outcome::undefined();
};

// The canonical textual rendering (also the CLI --trace format):
//   point P
//   step 1: ask B -> A
//   ...
//   result C | undefined | out-of-fuel
std::string render_trace(const Trace& t);

// Check the recorded answers against an oracle: every step's query must
// evaluate to its recorded answer.  Inconclusive (out of fuel) is a failure
// here; replay is only meaningful when the oracle can actually answer.
bool replay_trace(const Trace& t, const PartialFn& oracle, std::uint64_t fuel_budget);

// Oracle file format, one definition per file:
//   # comment
//   12 7          table entry (decimal, single space)
//   @builtin succ|id|const:<n>|primechar
//   @prog <term>  base algebra program as fallback
// Table entries win over the fallback directive; at most one directive.
PartialFn load_oracle_file(const std::string& path);

}  // namespace pca
