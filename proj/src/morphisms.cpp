#include "pca/morphisms.hpp"

#include "pca/rng.hpp"

#include <algorithm>
#include <utility>

namespace pca {

namespace {

using K = Term::Kind;

TermPtr C(K k) { return t_const(k); }
TermPtr V(const char* v) { return t_var(v); }

TermPtr comp(TermPtr t, unsigned i) {
  for (unsigned j = 0; j <= i; ++j) t = t_app(C(K::Snd), std::move(t));
  return t_app(C(K::Fst), std::move(t));
}

std::string trim_show(std::string s) {
  if (s.size() > 32) s = s.substr(0, 32) + "~";
  return s;
}

// An arbitrary natural names a term; the corresponding carrier point is the
// code of its value, when it has one.
std::optional<Nat> value_code(const Nat& raw, std::uint64_t budget) {
  Fuel fuel(budget);
  Reduced r = reduce_whnf(term_decode(raw), fuel);
  if (r.status != RStatus::Ok) return std::nullopt;
  return term_encode(r.term);
}

// ---- target algebras -------------------------------------------------------

class K2Algebra final : public ElementAlgebra {
 public:
  K2Algebra(K2Model m, std::vector<Nat> obs) : model_(std::move(m)), obs_(std::move(obs)) {}

  AppliedElem apply(const Elem& f, const Elem& x, Fuel&) const override {
    // Application of dialogue elements is total; partiality lives pointwise.
    return {Outcome::Kind::Value, Elem::of_fn(k2_apply(model_, f.fn, x.fn))};
  }

  Tri equal(const Elem& a, const Elem& b, std::uint64_t fuel_budget) const override {
    AgreeReport r = agree_on(a.fn, b.fn, obs_, fuel_budget);
    if (!r.agree()) return Tri::No;
    return r.inconclusive > 0 ? Tri::Unknown : Tri::Yes;
  }

  std::string show(const Elem& e) const override { return trim_show(e.fn.name()); }

 private:
  K2Model model_;
  std::vector<Nat> obs_;
};

class CodeAlgebra final : public ElementAlgebra {
 public:
  AppliedElem apply(const Elem& f, const Elem& x, Fuel& fuel) const override {
    Reduced r = apply_terms(f.term, x.term, fuel);
    switch (r.status) {
      case RStatus::Ok:
        return {Outcome::Kind::Value, Elem::of_term(r.term)};
      case RStatus::Stuck:
        return {Outcome::Kind::Undefined, {}};
      default:
        return {Outcome::Kind::OutOfFuel, {}};
    }
  }

  Tri equal(const Elem& a, const Elem& b, std::uint64_t fuel_budget) const override {
    Fuel fuel(fuel_budget);
    Reduced ra = reduce_whnf(a.term, fuel);
    Reduced rb = reduce_whnf(b.term, fuel);
    if (ra.status == RStatus::Fuel || rb.status == RStatus::Fuel) return Tri::Unknown;
    if (ra.status != RStatus::Ok || rb.status != RStatus::Ok) return Tri::No;
    return term_eq(ra.term, rb.term) ? Tri::Yes : Tri::No;
  }

  std::string show(const Elem& e) const override { return trim_show(print_term(e.term)); }
};

// Membership of a candidate in a finite window, observationally.
Tri member_of(const AlgebraPtr& alg, const Elem& cand, const std::vector<Elem>& window,
              std::uint64_t fuel_budget) {
  bool unknown = false;
  for (const Elem& m : window) {
    Tri t = alg->equal(cand, m, fuel_budget);
    if (t == Tri::Yes) return Tri::Yes;
    if (t == Tri::Unknown) unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::No;
}

}  // namespace

AlgebraPtr k2_algebra(const K2Model& m, std::vector<Nat> obs_points) {
  return std::make_shared<const K2Algebra>(m, std::move(obs_points));
}

AlgebraPtr code_algebra() { return std::make_shared<const CodeAlgebra>(); }

std::vector<Elem> Morphism::window(const Nat& a) const {
  auto it = sample.find(a);
  if (it != sample.end()) return it->second;
  if (generate) return generate(a);
  return {};
}

// ---- checkers --------------------------------------------------------------

CheckReport check_realizer(const Morphism& g, const Elem& r,
                           const std::vector<std::pair<Nat, Nat>>& pairs,
                           std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "realizer[" + g.name + "]";
  for (const auto& [a, a2] : pairs) {
    ++rep.cases;
    Fuel sf(fuel_budget);
    Outcome prod = g.source->apply(a, a2, sf);
    if (prod.is_out_of_fuel()) {
      ++rep.inconclusive;
      continue;
    }
    if (!prod.is_value()) {
      ++rep.skipped;  // pair outside the application's domain
      continue;
    }
    std::vector<Elem> image = g.window(prod.value);
    if (image.empty()) {
      ++rep.skipped;
      continue;
    }
    for (const Elem& b : g.window(a)) {
      for (const Elem& b2 : g.window(a2)) {
        Fuel fuel(fuel_budget);
        AppliedElem rb = g.target->apply(r, b, fuel);
        AppliedElem rbb = rb.status == Outcome::Kind::Value
                              ? g.target->apply(rb.value, b2, fuel)
                              : rb;
        if (rbb.status == Outcome::Kind::OutOfFuel) {
          ++rep.inconclusive;
          continue;
        }
        if (rbb.status != Outcome::Kind::Value) {
          rep.fail("r b b' undefined at (" + a.str() + "," + a2.str() + ")");
          continue;
        }
        Tri in = member_of(g.target, rbb.value, image, fuel_budget);
        if (in == Tri::Unknown)
          ++rep.inconclusive;
        else if (in == Tri::No)
          rep.fail("at (" + a.str() + "," + a2.str() + "): r b b' = " +
                   g.target->show(rbb.value) + " misses the image window");
      }
    }
  }
  return rep;
}

CheckReport check_preorder(const Morphism& g, const Morphism& g2, const Elem& s,
                           const std::vector<Nat>& keys, std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "preorder[" + g.name + " => " + g2.name + "]";
  for (const Nat& a : keys) {
    ++rep.cases;
    std::vector<Elem> image = g2.window(a);
    if (image.empty()) {
      ++rep.skipped;
      continue;
    }
    for (const Elem& b : g.window(a)) {
      Fuel fuel(fuel_budget);
      AppliedElem sb = g.target->apply(s, b, fuel);
      if (sb.status == Outcome::Kind::OutOfFuel) {
        ++rep.inconclusive;
        continue;
      }
      if (sb.status != Outcome::Kind::Value) {
        rep.fail("s b undefined at " + a.str());
        continue;
      }
      Tri in = member_of(g2.target, sb.value, image, fuel_budget);
      if (in == Tri::Unknown)
        ++rep.inconclusive;
      else if (in == Tri::No)
        rep.fail("at " + a.str() + ": s b = " + g2.target->show(sb.value) +
                 " misses the image window");
    }
  }
  return rep;
}

CheckReport check_decider(const Morphism& g, const Elem& d, std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "decider[" + g.name + "]";
  const std::pair<const Nat*, const Elem*> rows[2] = {{&g.source_top, &g.target_top},
                                                      {&g.source_bot, &g.target_bot}};
  for (const auto& [src, want] : rows) {
    for (const Elem& b : g.window(*src)) {
      ++rep.cases;
      Fuel fuel(fuel_budget);
      AppliedElem db = g.target->apply(d, b, fuel);
      if (db.status == Outcome::Kind::OutOfFuel) {
        ++rep.inconclusive;
        continue;
      }
      if (db.status != Outcome::Kind::Value) {
        rep.fail("d b undefined on the window of " + src->str());
        continue;
      }
      Tri eq = g.target->equal(db.value, *want, fuel_budget);
      if (eq == Tri::Unknown)
        ++rep.inconclusive;
      else if (eq == Tri::No)
        rep.fail("d b = " + g.target->show(db.value) + " is not the Boolean of " + src->str());
    }
  }
  return rep;
}

CheckReport check_represents(const Morphism& g, const Elem& r_f, const PartialFn& f,
                             const std::vector<Nat>& points, std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "represents[" + f.name() + " along " + g.name + "]";
  for (const Nat& a : points) {
    ++rep.cases;
    Outcome fa = eval(f, a, fuel_budget);
    if (fa.is_out_of_fuel()) {
      ++rep.inconclusive;
      continue;
    }
    if (!fa.is_value()) {
      ++rep.skipped;  // outside dom(f); the law only quantifies over it
      continue;
    }
    std::vector<Elem> image = g.window(fa.value);
    if (image.empty()) {
      ++rep.skipped;
      continue;
    }
    for (const Elem& b : g.window(a)) {
      Fuel fuel(fuel_budget);
      AppliedElem rb = g.target->apply(r_f, b, fuel);
      if (rb.status == Outcome::Kind::OutOfFuel) {
        ++rep.inconclusive;
        continue;
      }
      if (rb.status != Outcome::Kind::Value) {
        rep.fail("r_f b undefined at " + a.str());
        continue;
      }
      Tri in = member_of(g.target, rb.value, image, fuel_budget);
      if (in == Tri::Unknown)
        ++rep.inconclusive;
      else if (in == Tri::No)
        rep.fail("at " + a.str() + ": r_f b = " + g.target->show(rb.value) +
                 " misses the window of f(a)=" + fa.value.str());
    }
  }
  return rep;
}

// ---- canonical morphisms ---------------------------------------------------

PartialFn gamma_hat(const Nat& a) { return make_constant(a); }

Morphism gamma_hat_morphism(const K2Model& m, std::vector<Nat> obs_points) {
  Morphism g;
  g.name = "hat->" + m.name;
  g.source = &code_pca();
  g.target = k2_algebra(m, std::move(obs_points));
  g.generate = [](const Nat& a) { return std::vector<Elem>{Elem::of_fn(gamma_hat(a))}; };
  const Kit& kit = derived_kit();
  g.source_top = kit.r_code();
  g.source_bot = kit.q_code();
  g.target_top = Elem::of_fn(gamma_hat(g.source_top));
  g.target_bot = Elem::of_fn(gamma_hat(g.source_bot));
  g.realizer_candidate = Elem::of_fn(make_rho(m.tag != ModelTag::K2P, m.scheme));
  Nat top = g.source_top, bot = g.source_bot;
  StrategyFamily fam = [top, bot](const Nat&) -> StrategyBody {
    return [top, bot](StrategyRun& run) {
      Nat a0 = run.ask_first(Nat(0));
      return Move::result(a0 == top ? top : bot);
    };
  };
  g.decider_candidate = Elem::of_fn(compile_strategy_family(fam, m, "read-constant"));
  return g;
}

Morphism identity_morphism() {
  Morphism g;
  g.name = "identity";
  g.source = &code_pca();
  g.target = code_algebra();
  g.generate = [](const Nat& a) { return std::vector<Elem>{Elem::of_term(term_decode(a))}; };
  const Kit& kit = derived_kit();
  g.source_top = kit.r_code();
  g.source_bot = kit.q_code();
  g.target_top = Elem::of_term(kit.top);
  g.target_bot = Elem::of_term(kit.bot);
  g.realizer_candidate = Elem::of_term(kit.app_el);
  g.decider_candidate = Elem::of_term(kit.i);
  return g;
}

Morphism epsilon_gamma_morphism() {
  Morphism g;
  g.name = "represent-constants";
  g.source = &code_pca();
  g.target = code_algebra();
  g.generate = [](const Nat& a) {
    return std::vector<Elem>{Elem::of_term(t_app(t_const(K::K), term_decode(a)))};
  };
  const Kit& kit = derived_kit();
  g.source_top = kit.r_code();
  g.source_bot = kit.q_code();
  g.target_top = Elem::of_term(kit.top);
  g.target_bot = Elem::of_term(kit.bot);
  return g;
}

// ---- the constant-function realizer ----------------------------------------

PartialFn make_rho(bool total, const SchemePtr& scheme) {
  SchemePtr sc = scheme;
  const PcaInterface* base = &code_pca();
  auto run = [sc, base, total](const Nat& p, Fuel& fuel) -> Outcome {
    auto off = [&]() {
      return total ? Outcome::val(sc->stall_value()) : Outcome::undefined();
    };
    try {
      auto seq = sc->decode(p, fuel);
      if (!seq) return fuel.remaining == 0 ? Outcome::out_of_fuel() : off();
      if (seq->empty() || seq->size() > 2) return off();
      auto inner = sc->decode((*seq)[0], fuel);
      if (!inner) {
        if (fuel.remaining == 0) return Outcome::out_of_fuel();
        // A lone unparsable entry is the off-pattern singleton row.
        return seq->size() == 1 && total ? Outcome::val(sc->tag_result(sc->r())) : off();
      }
      if (seq->size() == 1) {
        if (inner->size() == 1) return Outcome::val(sc->tag_result(sc->stall_value()));
        if (inner->size() == 2) return Outcome::val(sc->stall_value());
        return total ? Outcome::val(sc->tag_result(sc->r())) : Outcome::undefined();
      }
      // Probe ⟨⟨x,b⟩,a⟩: answer the application a·b one level down.
      if (inner->size() != 2) return off();
      Outcome ab = base->apply((*seq)[1], (*inner)[1], fuel);
      if (ab.is_out_of_fuel()) return ab;
      if (!ab.is_value())
        return total ? Outcome::val(sc->tag_result(sc->stall_value())) : Outcome::undefined();
      return Outcome::val(sc->tag_result(sc->tag_result(ab.value)));
    } catch (const coding_overflow&) {
      fuel.remaining = 0;
      return Outcome::out_of_fuel();
    }
  };
  return make_native(total ? "rho" : "rho-partial", std::move(run), total, /*memoize=*/true);
}

// ---- retraction and adjunction ---------------------------------------------

MembershipReport epsilon_retract_member(const K2Model& m, const PartialFn& beta,
                                        const PartialFn& alpha,
                                        const std::vector<Nat>& dom_sample,
                                        const std::vector<Nat>& obs_points,
                                        std::uint64_t fuel_budget) {
  MembershipReport out;
  out.member = true;
  for (const Nat& a : dom_sample) {
    Outcome va = eval(alpha, a, fuel_budget);
    if (va.is_out_of_fuel()) {
      out.inconclusive = true;
      continue;
    }
    if (!va.is_value()) continue;  // membership only constrains the domain
    PartialFn lhs = k2_apply(m, beta, gamma_hat(a));
    AgreeReport r = agree_on(lhs, gamma_hat(va.value), obs_points, fuel_budget);
    if (!r.agree()) {
      out.member = false;
      return out;
    }
    if (r.inconclusive > 0) out.inconclusive = true;
  }
  return out;
}

CheckReport epsilon_prime_adjunction(unsigned samples, std::uint64_t seed,
                                     std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "bar-adjunction";
  const Kit& kit = derived_kit();
  K2Model m = make_k2_with_scheme(pca_tuple_scheme(), /*partial=*/true);

  // b with b̄ â = ā: ask the constant oracle once, then apply its answer to
  // the point the dialogue started at.
  TermPtr t = V("t");
  TermPtr body = ite(t_app(C(K::Pred), t_app(C(K::Fst), t)),
                     kit.pair2(kit.bot, t_num(0)),
                     kit.pair2(kit.top, t_app(comp(t, 1), comp(t, 0))));
  PartialFn bbar = make_bar(lam("t", body));

  Rng rng(seed);
  // Carrier points: codes of values.  Raw draws may name stuck terms, which
  // live outside the algebra.
  std::vector<Nat> pool;
  for (unsigned i = 0; pool.size() < samples && i < samples * 6; ++i)
    if (auto v = value_code(Nat(rng.below(500)), 20000)) pool.push_back(*v);

  for (const Nat& a : pool) {
    ++rep.cases;
    Nat x(9);
    for (int tries = 0; tries < 12; ++tries)
      if (auto v = value_code(Nat(rng.below(500)), 20000)) { x = *v; break; }
    PartialFn lhs = k2_apply(m, bbar, gamma_hat(a));
    Outcome l = eval(lhs, x, fuel_budget);
    Fuel rf(fuel_budget);
    Outcome r = code_pca().apply(a, x, rf);
    if (l.is_out_of_fuel() || r.is_out_of_fuel()) {
      ++rep.inconclusive;
      continue;
    }
    if (l != r)
      rep.fail("bar(b)·hat(" + a.str() + ") at " + x.str() + ": " + to_string(l) + " vs " +
               to_string(r));
  }

  // Candidate scans below only need to refute: a candidate that diverges on
  // the window is inconclusive, which already fails the match, so a small
  // budget suffices and keeps looping codes cheap.
  std::uint64_t scan = std::min<std::uint64_t>(fuel_budget, 20000);

  // The sampled code window of ā contains a itself.
  std::vector<Nat> xs;
  for (unsigned i = 0; i < 8; ++i) xs.push_back(Nat(i));
  for (unsigned i = 0; i < 5 && i < pool.size(); ++i) {
    ++rep.cases;
    const Nat& a = pool[i];
    bool found = false;
    for (const Nat& c : pool) {
      AgreeReport ar = agree_on(make_bar(code_pca(), c), make_bar(code_pca(), a), xs, scan);
      if (ar.agree() && ar.inconclusive == 0 && c == a) {
        found = true;
        break;
      }
    }
    if (!found) rep.fail("code window of bar(" + a.str() + ") misses " + a.str());
  }

  // One explicit constant function that is not the bar of any small code:
  // the identity direction is genuinely one-sided.
  ++rep.cases;
  PartialFn target = gamma_hat(term_encode(t_num(5)));
  bool any = false;
  for (unsigned c = 0; c < 200; ++c) {
    AgreeReport ar = agree_on(make_bar(code_pca(), Nat(c)), target, xs, scan);
    if (ar.agree() && ar.inconclusive == 0) {
      any = true;
      break;
    }
  }
  if (any) rep.fail("constant function unexpectedly matched a small bar code");

  return rep;
}

// ---- the interrogation-replay realizer --------------------------------------

DeltaData identity_delta() {
  const Kit& kit = derived_kit();
  DeltaData dd;
  dd.r = kit.app_el;
  dd.d = kit.i;
  dd.pi0 = kit.tup_head;
  dd.pi1 = lam("t", comp(V("t"), 1));
  dd.c = kit.tup_append;
  dd.s = kit.tup_single;
  return dd;
}

TermPtr build_F_realizer(const DeltaData& dd) {
  // F a b v: read a's verdict on the interrogation so far; a result is
  // projected out, a query is answered through b and appended, then recurse.
  auto av = t_app(V("a"), V("v"));
  auto head = t_apps(dd.r, {dd.pi0, av});
  auto payload = t_apps(dd.r, {dd.pi1, av});
  auto answer = t_apps(dd.r, {V("b"), payload});
  auto extended = t_apps(dd.c, {V("v"), answer});
  auto recurse = t_apps(V("z"), {V("a"), V("b"), extended});
  auto body = ite(t_app(C(K::Fst), t_app(dd.d, head)), recurse, payload);
  return t_app(C(K::Fix), lam({"z", "a", "b", "v"}, body));
}

namespace {

Reduced whnf_budget(const TermPtr& t, std::uint64_t fuel_budget) {
  Fuel fuel(fuel_budget);
  return reduce_whnf(t, fuel);
}

}  // namespace

CheckReport check_F_recursion(const TermPtr& F, const DeltaData& dd, unsigned samples,
                              std::uint64_t seed, std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "interrogation-realizer-recursion";
  const Kit& kit = derived_kit();
  Rng rng(seed);

  // Interrogator pool: one that asks about its point and finishes, one that
  // answers immediately, a stuck numeral, a bare constant.
  TermPtr t = V("t");
  TermPtr asker = lam("t", ite(t_app(C(K::Pred), t_app(C(K::Fst), t)),
                               kit.pair2(kit.bot, comp(t, 0)),
                               kit.pair2(kit.top, comp(t, 1))));
  TermPtr replier = lam("t", kit.pair2(kit.top, t_app(C(K::Succ), comp(t, 0))));
  std::vector<TermPtr> as = {asker, replier, t_num(3), C(K::K)};
  std::vector<TermPtr> bs = {C(K::Succ), t_app(C(K::K), t_num(9)), kit.i};

  for (unsigned i = 0; i < samples; ++i) {
    ++rep.cases;
    TermPtr a = as[rng.below(as.size())];
    TermPtr b = bs[rng.below(bs.size())];
    TermPtr y = t_num(rng.below(20));
    TermPtr v = rng.coin() ? kit.tuple({y}) : kit.tuple({y, t_num(rng.below(20))});
    if (rng.below(8) == 0) v = t_num(7);  // junk interrogation

    TermPtr lhs = t_apps(F, {a, b, v});
    TermPtr av = t_app(a, v);
    TermPtr payload = t_apps(dd.r, {dd.pi1, av});
    // Same guarded conditional the realizer itself is built from, so the
    // one-step unfolding compares like for like.
    TermPtr rhs = ite(t_app(C(K::Fst), t_app(dd.d, t_apps(dd.r, {dd.pi0, av}))),
                      t_apps(F, {a, b, t_apps(dd.c, {v, t_apps(dd.r, {b, payload})})}),
                      payload);

    Reduced rl = whnf_budget(lhs, fuel_budget);
    Reduced rr = whnf_budget(rhs, fuel_budget);
    if (rl.status == RStatus::Fuel || rr.status == RStatus::Fuel) {
      ++rep.inconclusive;
      continue;
    }
    if (rl.status != rr.status) {
      rep.fail("case " + std::to_string(i) + ": sides disagree on definedness");
      continue;
    }
    if (rl.status == RStatus::Ok && !term_eq(rl.term, rr.term))
      rep.fail("case " + std::to_string(i) + ": values differ: " +
               trim_show(print_term(rl.term)) + " vs " + trim_show(print_term(rr.term)));
  }
  return rep;
}

CheckReport claim_check(const TermPtr& F, const DeltaData& dd, const TermPtr& a,
                        const TermPtr& b, const Nat& y,
                        const std::vector<Nat>& interrogation, std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "interrogation-replay[y=" + y.str() + "]";
  const Kit& kit = derived_kit();

  TermPtr x = term_decode(y);
  Reduced ref = whnf_budget(t_apps(F, {a, b, t_app(dd.s, x)}), fuel_budget);
  if (ref.status == RStatus::Fuel) {
    ++rep.cases;
    ++rep.inconclusive;
    return rep;
  }

  std::vector<TermPtr> entries{x};
  TermPtr v = kit.tuple(entries);
  for (std::size_t k = 0;; ++k) {
    // The run from the full prefix matches the run from the seed.
    ++rep.cases;
    Reduced at_v = whnf_budget(t_apps(F, {a, b, v}), fuel_budget);
    if (at_v.status == RStatus::Fuel) {
      ++rep.inconclusive;
      return rep;
    }
    if (at_v.status != ref.status ||
        (at_v.status == RStatus::Ok && !term_eq(at_v.term, ref.term))) {
      rep.fail("prefix of length " + std::to_string(k) + " diverges from the seeded run");
      return rep;
    }

    Fuel fuel(fuel_budget);
    Reduced w = reduce_whnf(t_app(a, v), fuel);
    if (w.status == RStatus::Fuel) {
      ++rep.inconclusive;
      return rep;
    }
    if (w.status != RStatus::Ok) {
      rep.fail("chain ended undefined at step " + std::to_string(k));
      return rep;
    }
    ForcedTuple tag = force_tuple(w.term, fuel);
    if (tag.status != RStatus::Ok || tag.items.size() != 2) {
      rep.fail("verdict at step " + std::to_string(k) + " is not a tagged pair");
      return rep;
    }
    ForcedBool flag = force_bool(tag.items[0], fuel);
    if (flag.status != RStatus::Ok) {
      rep.fail("verdict flag at step " + std::to_string(k) + " is not boolean");
      return rep;
    }

    if (flag.value) {
      // Result step: the run must be exactly the projected payload.
      ++rep.cases;
      if (k < interrogation.size()) {
        rep.fail("result arrived before the declared interrogation was consumed");
        return rep;
      }
      Reduced g = whnf_budget(t_apps(dd.r, {dd.pi1, t_app(a, v)}), fuel_budget);
      if (g.status == RStatus::Fuel)
        ++rep.inconclusive;
      else if (g.status != RStatus::Ok || ref.status != RStatus::Ok ||
               !term_eq(g.term, ref.term))
        rep.fail("result step does not project the final payload");
      return rep;
    }

    if (k >= interrogation.size()) {
      rep.fail("interrogation longer than the declared chain");
      return rep;
    }
    // Query step: b's answer extends the prefix and must replay the chain.
    TermPtr answer = t_apps(dd.r, {b, t_apps(dd.r, {dd.pi1, t_app(a, v)})});
    Reduced aw = whnf_budget(answer, fuel_budget);
    if (aw.status == RStatus::Fuel) {
      ++rep.inconclusive;
      return rep;
    }
    ++rep.cases;
    if (aw.status != RStatus::Ok || term_encode(aw.term) != interrogation[k]) {
      rep.fail("query " + std::to_string(k) + " answers off the declared chain");
      return rep;
    }
    entries.push_back(aw.term);

    Fuel ef(fuel_budget);
    Reduced ext = reduce_whnf(t_apps(dd.c, {v, aw.term}), ef);
    if (ext.status == RStatus::Fuel) {
      ++rep.inconclusive;
      return rep;
    }
    ForcedTuple items = force_tuple(ext.term, ef);
    if (items.status != RStatus::Ok || items.items.size() != entries.size()) {
      rep.fail("extended prefix has the wrong shape");
      return rep;
    }
    for (std::size_t j = 0; j < entries.size(); ++j) {
      Reduced ij = reduce_whnf(items.items[j], ef);
      if (ij.status != RStatus::Ok || !term_eq(ij.term, entries[j])) {
        rep.fail("extended prefix entry " + std::to_string(j) + " is wrong");
        return rep;
      }
    }
    v = kit.tuple(entries);
  }
}

TermPtr preorder_witness_apply_to(const Nat& xi) {
  return lam("v", t_app(V("v"), term_decode(xi)));
}

TermPtr preorder_witness_constant() { return t_const(K::K); }

TermPtr greatness_witness_term(const TermPtr& s_el, const TermPtr& r_prime,
                               const TermPtr& tau, const TermPtr& t_el) {
  TermPtr inner = t_apps(r_prime, {t_apps(r_prime, {tau, V("z")}), t_app(t_el, V("x"))});
  return lam({"z", "x"}, t_app(s_el, inner));
}

}  // namespace pca
