#include "pca/oracle.hpp"

#include <stdexcept>
#include <utility>

namespace pca {

namespace {

using K = Term::Kind;

TermPtr C(K k) { return t_const(k); }
TermPtr V(const char* v) { return t_var(v); }

// Component i of a tuple term: FST (SND^(i+1) t).
TermPtr comp(TermPtr t, unsigned i) {
  for (unsigned j = 0; j <= i; ++j) t = t_app(C(K::Snd), std::move(t));
  return t_app(C(K::Fst), std::move(t));
}

// Guarded conditional: the untaken branch would be stuck (a component read
// past the end of the current round's tuple), so it must stay suspended.
TermPtr ifz(TermPtr n, TermPtr zero, TermPtr nonzero) {
  return ite(std::move(n), std::move(zero), std::move(nonzero));
}

// PRED (FST t) - 0 for a one-entry tuple, nonzero for longer ones.
TermPtr len_above_one(TermPtr t) {
  return t_app(C(K::Pred), t_app(C(K::Fst), std::move(t)));
}

// λf g x. f (g x), hand-rolled as S(KS)K which is three levels shallower than
// the compiled abstraction.  Partially applied it is still a value, so
// composites can sit in a conditional slot with no suspension around them.
const TermPtr& bcomb() {
  static const TermPtr b =
      t_apps(C(K::S), {t_app(C(K::K), C(K::S)), C(K::K)});
  return b;
}

TermPtr compose(TermPtr f, TermPtr g) {
  return t_apps(bcomb(), {std::move(f), std::move(g)});
}

TermPtr tag_with(bool result) {
  const Kit& kit = derived_kit();
  return lam("y", kit.pair2(result ? kit.top : kit.bot, V("y")));
}

TermPtr pick(unsigned i) { return lam("t", comp(V("t"), i)); }

// Interrogation programs share one skeleton: on the opening probe [b] emit a
// query, on [b, answer] emit the final result.  Both hands are closed
// programs from the probe tuple to the untagged payload.  These terms get
// encoded as elements and code width doubles per application level, so the
// hands are composed at the top of the tree rather than compiled into a
// monolithic body, and the conditional is a bare primitive selection between
// the two tagged values.
TermPtr two_round_program(TermPtr query_prog, TermPtr result_prog) {
  TermPtr qp = compose(tag_with(false), std::move(query_prog));
  TermPtr rp = compose(tag_with(true), std::move(result_prog));
  TermPtr sel = t_apps(C(K::Ifz), {len_above_one(V("t")), std::move(qp), std::move(rp)});
  return lam("t", t_app(std::move(sel), V("t")));
}

const TermPtr& echo_term() {
  static const TermPtr t = two_round_program(pick(0), pick(1));
  return t;
}

const TermPtr& left_lift_term() {
  static const TermPtr t = two_round_program(compose(tag_with(true), pick(0)), pick(1));
  return t;
}

const TermPtr& right_lift_term() {
  static const TermPtr t = two_round_program(compose(tag_with(false), pick(0)), pick(1));
  return t;
}

const TermPtr& identity_term() {
  static const TermPtr t =
      lam("t", derived_kit().pair2(derived_kit().top, comp(V("t"), 0)));
  return t;
}

std::string short_nat(const Nat& a) {
  std::string s = a.str();
  return s.size() <= 12 ? s : s.substr(0, 12) + "~";
}

}  // namespace

OracleModel make_oracle_model(PartialFn f) { return {&code_pca(), std::move(f)}; }

OracleRun oracle_apply(const OracleModel& m, const Nat& a, const Nat& b, Fuel& fuel) {
  const SchemePtr& tuples = pca_tuple_scheme();
  Trace tr;
  tr.point = b;
  auto finish = [&](Outcome o) {
    tr.final = o;
    return OracleRun{std::move(o), std::move(tr)};
  };
  std::vector<Nat> u{b};
  try {
    for (;;) {
      if (!fuel.tick()) return finish(Outcome::out_of_fuel());
      Outcome w = m.base->apply(a, tuples->encode(u), fuel);
      if (!w.is_value()) return finish(w);
      Tagged t = tuples->untag(w.value, fuel);
      switch (t.kind) {
        case Tagged::Kind::Result:
          return finish(Outcome::val(t.payload));
        case Tagged::Kind::Query: {
          Outcome ans = eval(m.f, t.payload, fuel);
          if (!ans.is_value()) return finish(ans);
          tr.steps.push_back({t.payload, ans.value});
          u.push_back(ans.value);
          break;
        }
        case Tagged::Kind::Exhausted:
          return finish(Outcome::out_of_fuel());
        default:
          return finish(Outcome::undefined());
      }
    }
  } catch (const coding_overflow&) {
    fuel.remaining = 0;
    return finish(Outcome::out_of_fuel());
  }
}

PartialFn oracle_section(const OracleModel& m, const Nat& a) {
  OracleModel copy = m;
  Nat program = a;
  auto run = [copy, program](const Nat& x, Fuel& fuel) {
    return oracle_apply(copy, program, x, fuel).outcome;
  };
  std::string name = "rel:" + short_nat(a) + "[" + m.f.name() + "]";
  return make_native(std::move(name), std::move(run), /*totality_claim=*/false,
                     /*memoize=*/true);
}

CheckReport check_represents_in_oracle(const OracleModel& m, const Nat& a, const PartialFn& g,
                                       const std::vector<Nat>& points,
                                       std::uint64_t fuel_budget) {
  CheckReport report;
  report.property = "represents[" + g.name() + " from " + m.f.name() + "]";
  for (const Nat& x : points) {
    ++report.cases;
    Fuel lf(fuel_budget);
    Outcome lhs = oracle_apply(m, a, x, lf).outcome;
    Fuel rf(fuel_budget);
    Outcome rhs = eval(g, x, rf);
    if (lhs.is_out_of_fuel() || rhs.is_out_of_fuel()) {
      ++report.inconclusive;
      continue;
    }
    if (lhs != rhs)
      report.fail("at " + x.str() + ": program " + to_string(lhs) + ", target " +
                  to_string(rhs));
  }
  return report;
}

Nat identity_program() { return term_encode(identity_term()); }
Nat echo_program() { return term_encode(echo_term()); }
Nat left_lift_program() { return term_encode(left_lift_term()); }
Nat right_lift_program() { return term_encode(right_lift_term()); }

Nat pair_point(bool left, const Nat& x) {
  const Kit& kit = derived_kit();
  return term_encode(kit.pair2(left ? kit.top : kit.bot, term_decode(x)));
}

PartialFn join(const PartialFn& f, const PartialFn& g, const Kit&) {
  const SchemePtr& tuples = pca_tuple_scheme();
  PartialFn left = f, right = g;
  auto run = [tuples, left, right](const Nat& y, Fuel& fuel) {
    Tagged t = tuples->untag(y, fuel);
    switch (t.kind) {
      case Tagged::Kind::Result:
        return eval(left, t.payload, fuel);
      case Tagged::Kind::Query:
        return eval(right, t.payload, fuel);
      case Tagged::Kind::Exhausted:
        return Outcome::out_of_fuel();
      default:
        return Outcome::undefined();
    }
  };
  std::string name = "join(" + f.name() + "," + g.name() + ")";
  return make_native(std::move(name), std::move(run), /*totality_claim=*/false);
}

TermPtr join_witness_element(const Kit& kit) {
  // The element is interrogated twice over.  Probes are tuples [z] or [z,w]
  // where z is itself a tuple [y] or [y,w2] and y = [flag, x] is the point
  // the join is asked at.  The left branch queries the first argument, the
  // right branch routes through a result-tagged query so the second
  // argument is asked by the outer dialogue.
  TermPtr t = V("t");
  TermPtr z = comp(t, 0);
  TermPtr y = comp(z, 0);
  TermPtr flag_num = t_app(C(K::Fst), comp(y, 0));
  TermPtr x = comp(y, 1);
  TermPtr w = comp(t, 1);
  TermPtr w2 = comp(z, 1);
  TermPtr left_open = kit.pair2(kit.bot, x);                    // ask gamma1 at x
  TermPtr right_open = kit.pair2(kit.top, kit.pair2(kit.bot, x));  // outer asks gamma2
  TermPtr body = ifz(
      len_above_one(t),
      ifz(len_above_one(z),
          ifz(std::move(flag_num), std::move(right_open), std::move(left_open)),
          kit.pair2(kit.top, kit.pair2(kit.top, std::move(w2)))),
      kit.pair2(kit.top, kit.pair2(kit.top, std::move(w))));
  return lam("t", body);
}

PartialFn make_bar(const PcaInterface& pca, const Nat& a) {
  const PcaInterface* base = &pca;
  Nat code = a;
  auto run = [base, code](const Nat& x, Fuel& fuel) { return base->apply(code, x, fuel); };
  return make_native("bar:" + short_nat(a), std::move(run), /*totality_claim=*/false,
                     /*memoize=*/true);
}

PartialFn make_bar(const TermPtr& a) {
  TermPtr program = a;
  auto run = [program](const Nat& x, Fuel& fuel) {
    try {
      Reduced r = apply_terms(program, term_decode(x), fuel);
      switch (r.status) {
        case RStatus::Ok:
          return Outcome::val(term_encode(r.term));
        case RStatus::Stuck:
          return Outcome::undefined();
        default:
          return Outcome::out_of_fuel();
      }
    } catch (const coding_overflow&) {
      fuel.remaining = 0;
      return Outcome::out_of_fuel();
    }
  };
  return make_native("bar:" + print_term(a).substr(0, 24), std::move(run),
                     /*totality_claim=*/false, /*memoize=*/true);
}

MembershipReport downward_closure_member(const std::vector<PartialFn>& members,
                                         const PartialFn& f, const std::vector<Nat>& points,
                                         std::uint64_t fuel_budget) {
  MembershipReport out;
  bool any_inconclusive = false;
  for (const PartialFn& g : members) {
    bool fits = true;
    bool conclusive = true;
    for (const Nat& x : points) {
      Fuel ff(fuel_budget);
      Outcome fv = eval(f, x, ff);
      if (fv.is_out_of_fuel()) {
        conclusive = false;
        continue;
      }
      if (!fv.is_value()) continue;  // f silent here; any g is compatible
      Fuel gf(fuel_budget);
      Outcome gv = eval(g, x, gf);
      if (gv.is_out_of_fuel()) {
        conclusive = false;
        continue;
      }
      if (gv != fv) {
        fits = false;
        break;
      }
    }
    if (fits && conclusive) {
      out.member = true;
      return out;
    }
    if (fits && !conclusive) any_inconclusive = true;
  }
  out.inconclusive = any_inconclusive;
  return out;
}

}  // namespace pca
