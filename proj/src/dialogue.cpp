#include "pca/dialogue.hpp"

#include <sstream>

namespace pca {

SeqTreePtr tree_leaf(std::optional<Nat> label) {
  auto t = std::make_shared<SeqTree>();
  t->kind = SeqTree::Kind::Leaf;
  t->label = std::move(label);
  return t;
}

SeqTreePtr tree_branch(Nat point, std::map<Nat, SeqTreePtr> children, SeqTreePtr otherwise) {
  auto t = std::make_shared<SeqTree>();
  t->kind = SeqTree::Kind::Branch;
  t->point = std::move(point);
  t->children = std::move(children);
  t->otherwise = std::move(otherwise);
  return t;
}

SeqTreePtr tree_unknown() {
  auto t = std::make_shared<SeqTree>();
  t->kind = SeqTree::Kind::Unknown;
  return t;
}

TreeWalk walk_tree(const SeqTreePtr& tree, const PartialFn& oracle, Fuel& fuel) {
  TreeWalk w;
  const SeqTree* cur = tree.get();
  for (;;) {
    switch (cur->kind) {
      case SeqTree::Kind::Leaf:
        if (cur->label) {
          w.end = TreeWalk::End::Result;
          w.result = *cur->label;
        } else {
          w.end = TreeWalk::End::UnlabeledLeaf;
        }
        return w;
      case SeqTree::Kind::Unknown:
        w.end = TreeWalk::End::Unknown;
        return w;
      case SeqTree::Kind::Branch: {
        if (!fuel.tick()) {
          w.end = TreeWalk::End::OutOfFuel;
          return w;
        }
        Outcome a = eval(oracle, cur->point, fuel);
        if (a.is_out_of_fuel()) {
          w.end = TreeWalk::End::OutOfFuel;
          return w;
        }
        if (!a.is_value()) {
          w.end = TreeWalk::End::OracleUndefined;
          return w;
        }
        w.path.emplace_back(cur->point, a.value);
        auto it = cur->children.find(a.value);
        if (it != cur->children.end()) {
          cur = it->second.get();
        } else if (cur->otherwise) {
          cur = cur->otherwise.get();
        } else {
          w.end = TreeWalk::End::OffTree;
          return w;
        }
        break;
      }
    }
  }
}

Outcome eval_tree(const SeqTreePtr& tree, const PartialFn& oracle, Fuel& fuel) {
  TreeWalk w = walk_tree(tree, oracle, fuel);
  switch (w.end) {
    case TreeWalk::End::Result: return Outcome::val(w.result);
    case TreeWalk::End::OutOfFuel: return Outcome::out_of_fuel();
    default: return Outcome::undefined();
  }
}

PartialFn tree_to_fn(const SeqTreePtr& tree, const SchemePtr& scheme, bool totalize,
                     const std::string& name) {
  return make_native(
      name,
      [tree, scheme, totalize](const Nat& x, Fuel& fuel) -> Outcome {
        auto off = [&]() -> Outcome {
          return totalize ? Outcome::val(scheme->stall_value()) : Outcome::undefined();
        };
        auto history = scheme->decode(x, fuel);
        if (!history) {
          if (fuel.remaining == 0) return Outcome::out_of_fuel();
          return off();
        }
        const SeqTree* cur = tree.get();
        for (const Nat& answer : *history) {
          if (cur->kind != SeqTree::Kind::Branch) return off();
          auto it = cur->children.find(answer);
          if (it != cur->children.end()) cur = it->second.get();
          else if (cur->otherwise) cur = cur->otherwise.get();
          else return off();
        }
        switch (cur->kind) {
          case SeqTree::Kind::Branch: return Outcome::val(scheme->tag_query(cur->point));
          case SeqTree::Kind::Leaf:
            return cur->label ? Outcome::val(scheme->tag_result(*cur->label))
                              : Outcome::undefined();
          default: return Outcome::undefined();  // unexplored: no move known
        }
      },
      totalize);
}

namespace {
SeqTreePtr explore(const PartialFn& f, const SchemePtr& scheme, const std::vector<Nat>& alphabet,
                   unsigned depth, std::uint64_t probe_budget, std::vector<Nat>& history,
                   std::map<Nat, Nat>& known, bool& truncated) {
  // Forced re-feeds below extend the shared history; undo them on the way out.
  struct Restore {
    std::vector<Nat>& h;
    std::size_t mark;
    ~Restore() { h.resize(mark); }
  } restore{history, history.size()};

  // A strategy may re-ask answered points; each feed is a fresh history, so
  // cap the chain to keep exploration finite.
  for (unsigned feeds = 0; feeds <= 64; ++feeds) {
    Fuel fuel(probe_budget);
    Outcome move = eval(f, scheme->encode(history), fuel);
    if (move.is_out_of_fuel()) {
      truncated = true;
      return tree_unknown();
    }
    if (!move.is_value()) return tree_leaf(std::nullopt);
    Tagged t = scheme->untag(move.value, fuel);
    switch (t.kind) {
      case Tagged::Kind::Exhausted:
        truncated = true;
        return tree_unknown();
      case Tagged::Kind::Neither:
        return tree_leaf(std::nullopt);
      case Tagged::Kind::Result:
        return tree_leaf(t.payload);
      case Tagged::Kind::Query: {
        auto it = known.find(t.payload);
        if (it != known.end()) {
          history.push_back(it->second);
          break;  // no branching: the answer is forced on this path
        }
        if (depth == 0) {
          truncated = true;
          return tree_unknown();
        }
        std::map<Nat, SeqTreePtr> children;
        for (const Nat& a : alphabet) {
          history.push_back(a);
          known.emplace(t.payload, a);
          children[a] = explore(f, scheme, alphabet, depth - 1, probe_budget, history, known,
                                truncated);
          known.erase(t.payload);
          history.pop_back();
        }
        return tree_branch(t.payload, std::move(children));
      }
    }
  }
  truncated = true;
  return tree_unknown();
}
}  // namespace

TreeBuild fn_to_tree(const PartialFn& f, const SchemePtr& scheme,
                     const std::vector<Nat>& alphabet, unsigned depth,
                     std::uint64_t probe_budget) {
  TreeBuild out;
  std::vector<Nat> history;
  std::map<Nat, Nat> known;
  out.tree = explore(f, scheme, alphabet, depth, probe_budget, history, known, out.truncated);
  return out;
}

namespace {
Outcome run_dialogue(const PartialFn& strategy, const PartialFn& oracle,
                     const std::optional<Nat>& point, const SchemePtr& scheme, Fuel& fuel,
                     Trace* trace) {
  std::vector<Nat> history;
  if (point) history.push_back(*point);
  try {
    for (;;) {
      if (!fuel.tick()) return Outcome::out_of_fuel();
      Nat probe = scheme->encode(history);
      if (!fuel.take_width(probe)) return Outcome::out_of_fuel();
      Outcome move = eval(strategy, probe, fuel);
      if (!move.is_value()) return move;
      Tagged t = scheme->untag(move.value, fuel);
      switch (t.kind) {
        case Tagged::Kind::Exhausted: return Outcome::out_of_fuel();
        case Tagged::Kind::Neither: return Outcome::undefined();
        case Tagged::Kind::Result: return Outcome::val(t.payload);
        case Tagged::Kind::Query: {
          Outcome answer = eval(oracle, t.payload, fuel);
          if (!answer.is_value()) return answer;
          if (trace) trace->steps.push_back({t.payload, answer.value});
          history.push_back(answer.value);
          break;
        }
      }
    }
  } catch (const coding_overflow&) {
    // History outgrew the coding width: a resource limit, not an answer.
    fuel.remaining = 0;
    return Outcome::out_of_fuel();
  }
}
}  // namespace

Outcome interrogate(const PartialFn& strategy, const PartialFn& oracle, const SchemePtr& scheme,
                    Fuel& fuel) {
  return run_dialogue(strategy, oracle, std::nullopt, scheme, fuel, nullptr);
}

Outcome interrogate_at(const PartialFn& strategy, const PartialFn& oracle, const Nat& point,
                       const SchemePtr& scheme, Fuel& fuel) {
  return run_dialogue(strategy, oracle, point, scheme, fuel, nullptr);
}

Outcome interrogate_traced(const PartialFn& strategy, const PartialFn& oracle,
                           std::optional<Nat> point, const SchemePtr& scheme, Fuel& fuel,
                           Trace& trace) {
  trace.point = point;
  trace.steps.clear();
  Outcome out = run_dialogue(strategy, oracle, point, scheme, fuel, &trace);
  trace.final = out;
  return out;
}

namespace {
void render(const SeqTreePtr& t, std::string indent, std::ostringstream& os) {
  switch (t->kind) {
    case SeqTree::Kind::Leaf:
      if (t->label) os << "result " << t->label->str() << "\n";
      else os << "undefined\n";
      return;
    case SeqTree::Kind::Unknown:
      os << "unexplored\n";
      return;
    case SeqTree::Kind::Branch:
      os << "ask " << t->point.str() << "\n";
      for (const auto& [answer, child] : t->children) {
        os << indent << "  " << answer.str() << " => ";
        render(child, indent + "  ", os);
      }
      if (t->otherwise) {
        os << indent << "  * => ";
        render(t->otherwise, indent + "  ", os);
      }
      return;
  }
}
}  // namespace

std::string render_tree(const SeqTreePtr& tree) {
  std::ostringstream os;
  render(tree, "", os);
  std::string s = os.str();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace pca
