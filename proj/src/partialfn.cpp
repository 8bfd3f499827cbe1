#include "pca/partialfn.hpp"

#include <sstream>

namespace pca {

namespace {

Outcome run_cold(const PartialFn::Body& body, const Nat& x, Fuel& fuel) {
  if (!fuel.tick()) return Outcome::out_of_fuel();
  if (body.kind == PartialFn::Kind::Table) {
    auto it = body.table.find(x);
    return it == body.table.end() ? Outcome::undefined() : Outcome::val(it->second);
  }
  return body.run(x, fuel);
}

}  // namespace

Outcome eval(const PartialFn& f, const Nat& x, Fuel& fuel) {
  const auto& body = f.body();
  if (!body.memoize) return run_cold(body, x, fuel);

  auto& entry = body.memo[x];
  if (entry.settled) {
    // Replay the recorded cost so a warm run is indistinguishable from cold.
    if (!fuel.take(entry.settled->first)) return Outcome::out_of_fuel();
    return entry.settled->second;
  }
  if (fuel.remaining <= entry.exhausted_at) {
    fuel.remaining = 0;
    return Outcome::out_of_fuel();
  }

  std::uint64_t before = fuel.remaining;
  Outcome out = run_cold(body, x, fuel);
  if (out.is_out_of_fuel()) {
    if (before > entry.exhausted_at) entry.exhausted_at = before;
  } else {
    entry.settled = {before - fuel.remaining, out};
  }
  return out;
}

Outcome eval(const PartialFn& f, const Nat& x, std::uint64_t fuel_budget) {
  Fuel fuel(fuel_budget);
  return eval(f, x, fuel);
}

PartialFn make_table(std::map<Nat, Nat> entries, std::string name) {
  auto body = std::make_shared<PartialFn::Body>();
  body->kind = PartialFn::Kind::Table;
  body->name = std::move(name);
  body->table = std::move(entries);
  return PartialFn(std::move(body));
}

PartialFn make_native(std::string name, std::function<Outcome(const Nat&, Fuel&)> run,
                      bool totality_claim, bool memoize) {
  auto body = std::make_shared<PartialFn::Body>();
  body->kind = PartialFn::Kind::Native;
  body->name = std::move(name);
  body->run = std::move(run);
  body->totality_claim = totality_claim;
  body->memoize = memoize;
  return PartialFn(std::move(body));
}

namespace {

bool nat_is_prime(const Nat& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (Nat d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

PartialFn make_builtin(const std::string& spec) {
  if (spec == "succ")
    return make_native("succ", [](const Nat& x, Fuel&) { return Outcome::val(x + 1); }, true);
  if (spec == "id")
    return make_native("id", [](const Nat& x, Fuel&) { return Outcome::val(x); }, true);
  if (spec == "primechar")
    return make_native(
        "primechar",
        [](const Nat& x, Fuel&) { return Outcome::val(Nat(nat_is_prime(x) ? 1 : 0)); }, true);
  if (spec.rfind("const:", 0) == 0) {
    Nat c(spec.substr(6));
    return make_constant(c);
  }
  throw std::runtime_error("unknown builtin: " + spec);
}

PartialFn make_constant(const Nat& value) {
  return make_native("const:" + value.str(),
                     [value](const Nat&, Fuel&) { return Outcome::val(value); }, true);
}

PartialFn extend_total(const PartialFn& f, const Nat& default_value) {
  return make_native(
      f.name() + "+default:" + default_value.str(),
      [f, default_value](const Nat& x, Fuel& fuel) {
        Outcome out = eval(f, x, fuel);
        return out.is_undefined() ? Outcome::val(default_value) : out;
      },
      true);
}

AgreeReport agree_on(const PartialFn& f, const PartialFn& g, const std::vector<Nat>& points,
                     std::uint64_t fuel_budget) {
  AgreeReport report;
  for (const Nat& x : points) {
    ++report.compared;
    Outcome a = eval(f, x, fuel_budget);
    Outcome b = eval(g, x, fuel_budget);
    if (a == b) continue;
    if (a.is_out_of_fuel() || b.is_out_of_fuel())
      ++report.inconclusive;
    else
      report.mismatches.push_back({x, a, b});
  }
  return report;
}

std::string render_trace(const Trace& t) {
  std::ostringstream os;
  if (t.point) os << "point " << *t.point << "\n";
  for (size_t i = 0; i < t.steps.size(); ++i)
    os << "step " << (i + 1) << ": ask " << t.steps[i].query << " -> " << t.steps[i].answer
       << "\n";
  os << to_string(t.final) << "\n";
  return os.str();
}

bool replay_trace(const Trace& t, const PartialFn& oracle, std::uint64_t fuel_budget) {
  for (const auto& step : t.steps) {
    Outcome out = eval(oracle, step.query, fuel_budget);
    if (!out.is_value() || out.value != step.answer) return false;
  }
  return true;
}

}  // namespace pca
