#include "pca/k2.hpp"

#include "pca/dialogue.hpp"

#include <stdexcept>
#include <vector>

namespace pca {
namespace {

// Thrown by replay feeds when the recorded answers run out: the compiled
// element's emission for this probe is the query carried here.
struct NeedFirst {
  Nat point;
};
struct NeedSecond {
  Nat point;
};
// Thrown by live feeds when an oracle value fails to settle.
struct LiveUndefined {};
struct LiveOutOfFuel {};
// Thrown inside the s machine when the recorded third-stage answers run out.
struct NeedGamma {
  Nat point;
};

class ReplayRun final : public StrategyRun {
 public:
  ReplayRun(std::vector<Nat> first, std::vector<Nat> second, Fuel& fuel)
      : first_(std::move(first)), second_(std::move(second)), fuel_(fuel) {}

  Nat ask_first(const Nat& point) override {
    if (fpos_ == first_.size()) throw NeedFirst{point};
    return first_[fpos_++];
  }
  Nat ask_second(const Nat& point) override {
    if (spos_ == second_.size()) throw NeedSecond{point};
    return second_[spos_++];
  }
  Fuel& fuel() override { return fuel_; }

  bool first_consumed() const { return fpos_ == first_.size(); }
  bool second_consumed() const { return spos_ == second_.size(); }

 private:
  std::vector<Nat> first_, second_;
  std::size_t fpos_ = 0, spos_ = 0;
  Fuel& fuel_;
};

class LiveRun final : public StrategyRun {
 public:
  LiveRun(const PartialFn& first, const PartialFn& second, Fuel& fuel)
      : first_(first), second_(second), fuel_(fuel) {}

  Nat ask_first(const Nat& point) override { return force(first_, point); }
  Nat ask_second(const Nat& point) override { return force(second_, point); }
  Fuel& fuel() override { return fuel_; }

 private:
  Nat force(const PartialFn& f, const Nat& point) {
    Outcome o = eval(f, point, fuel_);
    if (o.is_value()) return o.value;
    if (o.is_undefined()) throw LiveUndefined{};
    throw LiveOutOfFuel{};
  }
  const PartialFn& first_;
  const PartialFn& second_;
  Fuel& fuel_;
};

Nat encode_with_head(const SchemePtr& scheme, const Nat& head, const std::vector<Nat>& rest) {
  std::vector<Nat> seq;
  seq.reserve(rest.size() + 1);
  seq.push_back(head);
  for (const auto& x : rest) seq.push_back(x);
  return scheme->encode(seq);
}

// One compiled element for both entry points; `indexed` controls whether the
// outer point is read off the probe (family) or the whole second component is
// the second-stage history (plain).
PartialFn compile_core(StrategyFamily family, bool indexed, const K2Model& m,
                       std::string name) {
  if (m.tag == ModelTag::K2Orig)
    throw std::invalid_argument("compile targets the tagged protocols only");
  const SchemePtr scheme = m.scheme;
  const bool total = m.tag == ModelTag::K2;
  auto run_probe = [family = std::move(family), indexed, scheme, total](
                       const Nat& code, Fuel& fuel) -> Outcome {
    auto off = [&]() -> Outcome {
      return total ? Outcome::val(scheme->stall_value()) : Outcome::undefined();
    };
    try {
      auto seq = scheme->decode(code, fuel);
      if (!seq) return fuel.remaining == 0 ? Outcome::out_of_fuel() : off();
      if (seq->empty()) return off();
      auto inner = scheme->decode((*seq)[0], fuel);
      if (!inner) return fuel.remaining == 0 ? Outcome::out_of_fuel() : off();

      Nat index(0);
      std::vector<Nat> second_hist;
      if (indexed) {
        if (inner->empty()) return off();
        index = (*inner)[0];
        second_hist.assign(inner->begin() + 1, inner->end());
      } else {
        second_hist = *inner;
      }
      std::vector<Nat> first_hist(seq->begin() + 1, seq->end());

      ReplayRun run(std::move(first_hist), std::move(second_hist), fuel);
      try {
        Move mv = family(index)(run);
        switch (mv.kind) {
          case Move::Kind::Result:
            // A result ends the whole dialogue, so a probe carrying answers
            // the strategy never asked for is off protocol.
            if (!run.first_consumed() || !run.second_consumed()) return off();
            return Outcome::val(scheme->tag_result(scheme->tag_result(mv.value)));
          case Move::Kind::Stuck:
          case Move::Kind::Undefined:
            return off();
          case Move::Kind::OutOfFuel:
            return Outcome::out_of_fuel();
        }
        return off();
      } catch (const NeedFirst& e) {
        return Outcome::val(scheme->tag_query(e.point));
      } catch (const NeedSecond& e) {
        // Asking the second oracle ends this element's own dialogue, so all
        // first-stage answers must be spent; the second-stage history may
        // legitimately sit half-read (it is replayed from scratch every time
        // the outer dialogue extends it).
        if (!run.first_consumed()) return off();
        return Outcome::val(scheme->tag_result(scheme->tag_query(e.point)));
      }
    } catch (const coding_overflow&) {
      fuel.remaining = 0;
      return Outcome::out_of_fuel();
    }
  };
  return make_native(std::move(name), std::move(run_probe), total, /*memoize=*/true);
}

// ---- s machine -------------------------------------------------------------

struct MachineOut {
  enum class Kind { Value, OffProtocol, Undefined, OutOfFuel };
  Kind kind = Kind::OffProtocol;
  Nat value;
};

// The value S^{αβ}(⟨a⟩∗u), with α and β consulted through `run`.  u is read
// positionally: its entries answer, in order, the third-oracle queries the
// simulation of ((αγ)(βγ))(a) makes.  A history no run generates — parse
// failure, a malformed value, or leftover entries after the final answer —
// is reported as OffProtocol and priced by the caller.
MachineOut s_machine_core(StrategyRun& run, const Nat& code, const SchemePtr& scheme) {
  Fuel& fuel = run.fuel();
  auto seq = scheme->decode(code, fuel);
  if (!seq)
    return fuel.remaining == 0 ? MachineOut{MachineOut::Kind::OutOfFuel, Nat(0)}
                               : MachineOut{MachineOut::Kind::OffProtocol, Nat(0)};
  if (seq->empty()) return {MachineOut::Kind::OffProtocol, Nat(0)};
  const Nat point = (*seq)[0];
  const std::vector<Nat> feed(seq->begin() + 1, seq->end());
  std::size_t fed = 0;

  auto gamma = [&](const Nat& w) -> Nat {
    if (fed < feed.size()) return feed[fed++];
    throw NeedGamma{w};
  };

  // Full dialogue of one oracle against the recorded third-stage answers.
  auto dialogue = [&](bool first, const Nat& at) -> MachineOut {
    std::vector<Nat> answers;
    for (;;) {
      if (!fuel.tick()) return {MachineOut::Kind::OutOfFuel, Nat(0)};
      Nat probe = encode_with_head(scheme, at, answers);
      if (!fuel.take_width(probe)) return {MachineOut::Kind::OutOfFuel, Nat(0)};
      Nat v = first ? run.ask_first(probe) : run.ask_second(probe);
      Tagged t = scheme->untag(v, fuel);
      switch (t.kind) {
        case Tagged::Kind::Query:
          answers.push_back(gamma(t.payload));
          break;
        case Tagged::Kind::Result:
          return {MachineOut::Kind::Value, t.payload};
        case Tagged::Kind::Neither:
          return {MachineOut::Kind::OffProtocol, Nat(0)};
        case Tagged::Kind::Exhausted:
          return {MachineOut::Kind::OutOfFuel, Nat(0)};
      }
    }
  };

  try {
    std::vector<Nat> second_values;
    for (;;) {
      if (!fuel.tick()) return {MachineOut::Kind::OutOfFuel, Nat(0)};
      Nat head = encode_with_head(scheme, point, second_values);
      if (!fuel.take_width(head)) return {MachineOut::Kind::OutOfFuel, Nat(0)};
      MachineOut first_val = dialogue(true, head);
      if (first_val.kind != MachineOut::Kind::Value) return first_val;
      Tagged t = scheme->untag(first_val.value, fuel);
      switch (t.kind) {
        case Tagged::Kind::Query: {
          MachineOut second_val = dialogue(false, t.payload);
          if (second_val.kind != MachineOut::Kind::Value) return second_val;
          second_values.push_back(second_val.value);
          break;
        }
        case Tagged::Kind::Result:
          // Final answer: every recorded third-stage answer must be spent.
          if (fed != feed.size()) return {MachineOut::Kind::OffProtocol, Nat(0)};
          return {MachineOut::Kind::Value, scheme->tag_result(t.payload)};
        case Tagged::Kind::Neither:
          return {MachineOut::Kind::OffProtocol, Nat(0)};
        case Tagged::Kind::Exhausted:
          return {MachineOut::Kind::OutOfFuel, Nat(0)};
      }
    }
  } catch (const NeedGamma& g) {
    return {MachineOut::Kind::Value, scheme->tag_query(g.point)};
  }
}

// ---- sequential protocol hosts ----------------------------------------------

// Emissions of the sequential-protocol machines.  At each nesting level a 0
// means "read one more value of the function being applied"; k+1 shifts the
// whole alphabet one level down.
constexpr unsigned kReadHere = 0;

// Thrown when a simulation needs one more recorded value at some level:
// 0 = this level's function, 1 = one level down, 2 = two levels down.
struct OrigNeed {
  unsigned level;
};

Nat orig_probe_list(const std::vector<Nat>& xs, Fuel& fuel) {
  // cantor_encode with the meter charged for the code it builds
  if (!fuel.take(xs.size() + 1)) throw LiveOutOfFuel{};
  Nat code = cantor_encode(xs);
  if (!fuel.take_width(code)) throw LiveOutOfFuel{};
  return code;
}

// k for the sequential protocol: at point ⟨x⟩∗σ, read x+1 values of the
// argument function, then announce value (read_x)+1.  The +2 below is that
// announcement shifted once more for the protocol's own y+1 signalling.
Outcome k_orig_value(const Nat& probe, Fuel& fuel) {
  if (!fuel.take_width(probe)) return Outcome::out_of_fuel();
  auto seq = cantor_decode(probe);
  if (seq.empty()) return Outcome::val(Nat(1));
  auto at = cantor_decode(seq[0]);
  if (at.empty()) return Outcome::val(Nat(1));
  const Nat& x = at[0];
  const Nat read = Nat(seq.size()) - 1;
  if (!fuel.take(seq.size())) return Outcome::out_of_fuel();
  if (read <= x) return Outcome::val(Nat(0));
  if (read == x + 1) return Outcome::val(seq[to_u64(x, "sequential k index") + 1] + 2);
  return Outcome::val(Nat(1));
}

// σ for the sequential protocol: value is arg(other(0)) two levels up.
Outcome sigma_orig_value(const Nat& probe, Fuel& fuel) {
  if (!fuel.take_width(probe)) return Outcome::out_of_fuel();
  auto seq = cantor_decode(probe);
  if (!fuel.take(seq.size() + 1)) return Outcome::out_of_fuel();
  if (seq.empty()) return Outcome::val(Nat(2));
  auto at = cantor_decode(seq[0]);
  if (at.empty()) return Outcome::val(Nat(2));
  if (at.size() < 2) return Outcome::val(Nat(1));  // read other(0)
  const Nat& b0 = at[1];
  if (Nat(seq.size()) - 1 <= b0) return Outcome::val(Nat(0));  // read arg up to b0
  return Outcome::val(seq[to_u64(b0, "sequential sigma index") + 1] + 2);
}

// s for the sequential protocol.  The probe carries three positional
// prefixes: probe = ⟨c⟩∗ā with c = ⟨e⟩∗b̄ and e = ⟨x⟩∗ū, where ā, b̄, ū are
// initial values of the three functions the triple application reads.  The
// machine replays the computation of ((αγ)(βγ))(x) against those prefixes
// and emits which one is too short, or the final value shifted by 3.
Outcome s_orig_value(const Nat& probe, Fuel& fuel) {
  if (!fuel.take_width(probe)) return Outcome::out_of_fuel();
  auto seq = cantor_decode(probe);
  if (seq.empty()) return Outcome::val(Nat(3));
  auto c = cantor_decode(seq[0]);
  if (c.empty()) return Outcome::val(Nat(3));
  auto e = cantor_decode(c[0]);
  if (e.empty()) return Outcome::val(Nat(3));
  if (!fuel.take(seq.size() + c.size() + e.size())) return Outcome::out_of_fuel();

  const Nat x = e[0];
  const std::vector<Nat> gamma_pre(e.begin() + 1, e.end());
  const std::vector<Nat> beta_pre(c.begin() + 1, c.end());
  const std::vector<Nat> alpha_pre(seq.begin() + 1, seq.end());

  // One relativized application (αγ)(point) or (βγ)(point), reading the
  // applied function through its recorded prefix.
  auto against_gamma = [&](const std::vector<Nat>& pre, unsigned level,
                           const Nat& at) -> Nat {
    std::vector<Nat> hist{at};
    for (std::size_t i = 0;; ++i) {
      if (!fuel.tick()) throw LiveOutOfFuel{};
      Nat pos = orig_probe_list(hist, fuel);
      if (pos >= Nat(pre.size())) throw OrigNeed{level};
      Nat v = pre[to_u64(pos, "sequential s index")];
      if (v != 0) return v - 1;
      if (i >= gamma_pre.size()) throw OrigNeed{2};
      hist.push_back(gamma_pre[i]);
    }
  };

  try {
    std::vector<Nat> outer;  // values of (βγ) at 0, 1, ...
    for (;;) {
      if (!fuel.tick()) throw LiveOutOfFuel{};
      std::vector<Nat> at{x};
      for (const auto& d : outer) at.push_back(d);
      Nat point = orig_probe_list(at, fuel);
      Nat z = against_gamma(alpha_pre, 0, point);
      if (z == 0) {
        outer.push_back(against_gamma(beta_pre, 1, Nat(outer.size())));
      } else {
        return Outcome::val(z - 1 + 3);
      }
    }
  } catch (const OrigNeed& n) {
    return Outcome::val(Nat(n.level));
  } catch (const LiveOutOfFuel&) {
    return Outcome::out_of_fuel();
  } catch (const coding_overflow&) {
    fuel.remaining = 0;
    return Outcome::out_of_fuel();
  }
}

Outcome with_tower_override(const Nat& probe, Fuel& fuel,
                            Outcome (*base)(const Nat&, Fuel&)) {
  if (auto g = tower_grade(probe)) return Outcome::val(Nat(*g));
  return base(probe, fuel);
}

const char* model_name(ModelTag tag) {
  switch (tag) {
    case ModelTag::K2: return "k2";
    case ModelTag::K2P: return "k2p";
    default: return "k2orig";
  }
}

}  // namespace

K2Model make_k2() { return make_k2_with_scheme(cantor_scheme(), false); }
K2Model make_k2p() { return make_k2_with_scheme(cantor_scheme(), true); }

K2Model make_k2orig() {
  static const bool checked = (validate_scheme(*cantor_scheme()), true);
  (void)checked;
  return {ModelTag::K2Orig, cantor_scheme(), "k2orig"};
}

K2Model make_k2_with_scheme(const SchemePtr& scheme, bool partial) {
  // Validate each distinct scheme once per process.
  static std::vector<const CodingScheme*> seen;
  bool found = false;
  for (const auto* s : seen) found = found || s == scheme.get();
  if (!found) {
    validate_scheme(*scheme);
    seen.push_back(scheme.get());
  }
  ModelTag tag = partial ? ModelTag::K2P : ModelTag::K2;
  return {tag, scheme, model_name(tag)};
}

PartialFn k2_apply(const K2Model& m, const PartialFn& alpha, const PartialFn& beta) {
  std::string name = "(" + alpha.name() + " " + beta.name() + ")";
  if (m.tag != ModelTag::K2Orig) {
    const SchemePtr scheme = m.scheme;
    auto run = [alpha, beta, scheme](const Nat& point, Fuel& fuel) -> Outcome {
      return interrogate_at(alpha, beta, point, scheme, fuel);
    };
    return make_native(std::move(name), std::move(run),
                       /*totality_claim=*/m.tag == ModelTag::K2, /*memoize=*/true);
  }
  // Sequential protocol: read β positionally until α speaks (y+1 means y).
  auto run = [alpha, beta](const Nat& point, Fuel& fuel) -> Outcome {
    try {
      std::vector<Nat> hist{point};
      for (std::size_t n = 0;; ++n) {
        if (!fuel.tick()) return Outcome::out_of_fuel();
        Nat probe = cantor_encode(hist);
        if (!fuel.take_width(probe)) return Outcome::out_of_fuel();
        Outcome va = eval(alpha, probe, fuel);
        if (!va.is_value()) return va;
        if (va.value != 0) return Outcome::val(va.value - 1);
        Outcome vb = eval(beta, Nat(n), fuel);
        if (!vb.is_value()) return vb;
        hist.push_back(vb.value);
      }
    } catch (const coding_overflow&) {
      fuel.remaining = 0;
      return Outcome::out_of_fuel();
    }
  };
  return make_native(std::move(name), std::move(run), /*totality_claim=*/true,
                     /*memoize=*/true);
}

Outcome run_strategy(const StrategyBody& body, const PartialFn& first,
                     const PartialFn& second, Fuel& fuel) {
  LiveRun run(first, second, fuel);
  try {
    Move mv = body(run);
    switch (mv.kind) {
      case Move::Kind::Result: return Outcome::val(mv.value);
      case Move::Kind::Stuck:
      case Move::Kind::Undefined: return Outcome::undefined();
      case Move::Kind::OutOfFuel: return Outcome::out_of_fuel();
    }
    return Outcome::undefined();
  } catch (const LiveUndefined&) {
    return Outcome::undefined();
  } catch (const LiveOutOfFuel&) {
    return Outcome::out_of_fuel();
  } catch (const coding_overflow&) {
    fuel.remaining = 0;
    return Outcome::out_of_fuel();
  }
}

PartialFn compile_strategy(const StrategyBody& body, const K2Model& m, std::string name) {
  return compile_core([body](const Nat&) { return body; }, /*indexed=*/false, m,
                      std::move(name));
}

PartialFn compile_strategy_family(const StrategyFamily& family, const K2Model& m,
                                  std::string name) {
  return compile_core(family, /*indexed=*/true, m, std::move(name));
}

PartialFn make_k(const K2Model& m) {
  if (m.tag == ModelTag::K2Orig)
    return make_native("k", k_orig_value, /*totality_claim=*/true, /*memoize=*/true);
  return compile_strategy_family(
      [](const Nat& point) -> StrategyBody {
        return [point](StrategyRun& run) { return Move::result(run.ask_first(point)); };
      },
      m, "k");
}

PartialFn make_sigma(const K2Model& m) {
  if (m.tag == ModelTag::K2Orig)
    return make_native("sigma", sigma_orig_value, /*totality_claim=*/true,
                       /*memoize=*/true);
  return compile_strategy_family(
      [](const Nat&) -> StrategyBody {
        return [](StrategyRun& run) {
          Nat b0 = run.ask_second(Nat(0));
          return Move::result(run.ask_first(b0));
        };
      },
      m, "sigma");
}

PartialFn make_s(const K2Model& m) {
  if (m.tag == ModelTag::K2Orig)
    return make_native("s", s_orig_value, /*totality_claim=*/true, /*memoize=*/true);
  const SchemePtr scheme = m.scheme;
  const bool total = m.tag == ModelTag::K2;
  return compile_strategy_family(
      [scheme, total](const Nat& code) -> StrategyBody {
        return [scheme, total, code](StrategyRun& run) -> Move {
          MachineOut out = s_machine_core(run, code, scheme);
          switch (out.kind) {
            case MachineOut::Kind::Value: return Move::result(out.value);
            case MachineOut::Kind::OffProtocol:
              // The machine's published value on such histories is the stall
              // query; the partial model simply leaves them undefined.
              return total ? Move::result(scheme->stall_value()) : Move::stuck();
            case MachineOut::Kind::Undefined: return Move::undefined();
            case MachineOut::Kind::OutOfFuel: return Move::out_of_fuel();
          }
          return Move::stuck();
        };
      },
      m, "s");
}

Outcome s_machine(const PartialFn& alpha, const PartialFn& beta, const Nat& code,
                  const SchemePtr& scheme, Fuel& fuel) {
  LiveRun run(alpha, beta, fuel);
  try {
    MachineOut out = s_machine_core(run, code, scheme);
    switch (out.kind) {
      case MachineOut::Kind::Value: return Outcome::val(out.value);
      case MachineOut::Kind::OffProtocol: return Outcome::val(scheme->stall_value());
      case MachineOut::Kind::Undefined: return Outcome::undefined();
      case MachineOut::Kind::OutOfFuel: return Outcome::out_of_fuel();
    }
    return Outcome::undefined();
  } catch (const LiveUndefined&) {
    return Outcome::undefined();
  } catch (const LiveOutOfFuel&) {
    return Outcome::out_of_fuel();
  } catch (const coding_overflow&) {
    fuel.remaining = 0;
    return Outcome::out_of_fuel();
  }
}

std::optional<unsigned> tower_grade(const Nat& x) {
  Nat cur = x;
  unsigned grade = 0;
  while (cur != 0) {
    Nat head, tail;
    CantorScheme::unpair(cur - 1, head, tail);
    if (tail != 0) return std::nullopt;
    cur = head;  // strictly smaller, so this terminates
    ++grade;
  }
  return grade;
}

std::pair<PartialFn, PartialFn> make_k_prime_s_prime() {
  auto kprime = make_native(
      "kprime",
      [](const Nat& probe, Fuel& fuel) {
        return with_tower_override(probe, fuel, k_orig_value);
      },
      /*totality_claim=*/true, /*memoize=*/true);
  auto sprime = make_native(
      "sprime",
      [](const Nat& probe, Fuel& fuel) {
        return with_tower_override(probe, fuel, s_orig_value);
      },
      /*totality_claim=*/true, /*memoize=*/true);
  return {std::move(kprime), std::move(sprime)};
}

BWindowReport in_counterexample_B(const PartialFn& alpha, unsigned n_window,
                                  std::uint64_t fuel_budget) {
  BWindowReport report;
  for (unsigned n = 0; n <= n_window; ++n) {
    Outcome o = eval(alpha, iterated_singleton(n), fuel_budget);
    if (o.is_out_of_fuel()) {
      report.inconclusive = true;
      report.failed_at = n;
      return report;
    }
    if (o != Outcome::val(Nat(n))) {
      report.failed_at = n;
      return report;
    }
  }
  report.member = true;
  return report;
}

}  // namespace pca
