#pragma once

// Dialogues between a strategy and an oracle.
//
// A strategy is a partial function on coded histories: given the sequence of
// answers received so far it emits either a tagged query (a point to ask the
// oracle) or a tagged result.  Interrogation runs that loop.  Sequential
// trees are the pictorial form of the same data: internal nodes carry the
// point asked next, edges carry answers, leaves carry results (or nothing,
// for positions where the strategy has no output).

#include "pca/coding.hpp"
#include "pca/nat.hpp"
#include "pca/outcome.hpp"
#include "pca/partialfn.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pca {

struct SeqTree;
using SeqTreePtr = std::shared_ptr<const SeqTree>;

struct SeqTree {
  enum class Kind { Leaf, Branch, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Nat> label;            // Leaf: result when present
  Nat point;                           // Branch: the point asked here
  std::map<Nat, SeqTreePtr> children;  // Branch: continuations by answer
  SeqTreePtr otherwise;                // Branch: default for unlisted answers, may be null
};

SeqTreePtr tree_leaf(std::optional<Nat> label);
SeqTreePtr tree_branch(Nat point, std::map<Nat, SeqTreePtr> children,
                       SeqTreePtr otherwise = nullptr);
SeqTreePtr tree_unknown();

// How a walk over a tree against an oracle ended.
struct TreeWalk {
  enum class End { Result, UnlabeledLeaf, OffTree, Unknown, OracleUndefined, OutOfFuel };
  End end = End::Unknown;
  Nat result;
  std::vector<std::pair<Nat, Nat>> path;  // (point, answer) per round
};

TreeWalk walk_tree(const SeqTreePtr& tree, const PartialFn& oracle, Fuel& fuel);
// Result -> value, OutOfFuel -> out-of-fuel, everything else -> undefined.
Outcome eval_tree(const SeqTreePtr& tree, const PartialFn& oracle, Fuel& fuel);

// The strategy a tree denotes.  Histories outside the tree stall (answer a
// query at the query marker, which never resolves) when totalize is set and
// are undefined otherwise.  Unlabeled leaves and unexplored nodes are
// undefined in both modes, so only fully labeled trees totalize honestly.
PartialFn tree_to_fn(const SeqTreePtr& tree, const SchemePtr& scheme, bool totalize,
                     const std::string& name);

// Rebuild a tree by probing a strategy: answers are drawn from `alphabet`,
// exploration stops at `depth`, each probe gets a fresh fuel budget.  A
// query for a point already answered on the current path is fed the known
// answer without adding a node.  Anything unsettled becomes an Unknown node.
struct TreeBuild {
  SeqTreePtr tree;
  bool truncated = false;  // some node is Unknown
};
TreeBuild fn_to_tree(const PartialFn& f, const SchemePtr& scheme,
                     const std::vector<Nat>& alphabet, unsigned depth,
                     std::uint64_t probe_budget);

// Run the query loop of strategy against oracle.  With a point, histories
// are prefixed by it, which is exactly application at that point.  Coding
// width exhaustion is reported as out-of-fuel (the meter is drained), since
// both are resource limits rather than facts about the dialogue.
Outcome interrogate(const PartialFn& strategy, const PartialFn& oracle,
                    const SchemePtr& scheme, Fuel& fuel);
Outcome interrogate_at(const PartialFn& strategy, const PartialFn& oracle, const Nat& point,
                       const SchemePtr& scheme, Fuel& fuel);
Outcome interrogate_traced(const PartialFn& strategy, const PartialFn& oracle,
                           std::optional<Nat> point, const SchemePtr& scheme, Fuel& fuel,
                           Trace& trace);

std::string render_tree(const SeqTreePtr& tree);

}  // namespace pca
