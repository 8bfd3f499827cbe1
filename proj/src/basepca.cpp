#include "pca/basepca.hpp"

#include "pca/rng.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace pca {

namespace {
TermPtr mk(Term t) { return std::make_shared<const Term>(std::move(t)); }

const TermPtr& konst(Term::Kind k) {
  static const TermPtr cache[] = {
      mk({Term::Kind::K}),    mk({Term::Kind::S}),    mk({Term::Kind::Pair}),
      mk({Term::Kind::Fst}),  mk({Term::Kind::Snd}),  mk({Term::Kind::Succ}),
      mk({Term::Kind::Pred}), mk({Term::Kind::Ifz}),  mk({Term::Kind::Fix}),
  };
  return cache[static_cast<int>(k)];
}
}  // namespace

TermPtr t_const(Term::Kind k) { return konst(k); }

TermPtr t_num(Nat n) {
  check_width(n, "numeral");
  Term t;
  t.kind = Term::Kind::Num;
  t.num = std::move(n);
  return mk(std::move(t));
}

TermPtr t_app(TermPtr f, TermPtr a) {
  Term t;
  t.kind = Term::Kind::App;
  t.fun = std::move(f);
  t.arg = std::move(a);
  return mk(std::move(t));
}

TermPtr t_var(std::string name) {
  Term t;
  t.kind = Term::Kind::Var;
  t.var = std::move(name);
  return mk(std::move(t));
}

TermPtr t_apps(TermPtr f, std::initializer_list<TermPtr> args) {
  TermPtr out = std::move(f);
  for (const auto& a : args) out = t_app(out, a);
  return out;
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Num: return a->num == b->num;
    case Term::Kind::App: return term_eq(a->fun, b->fun) && term_eq(a->arg, b->arg);
    case Term::Kind::Var: return a->var == b->var;
    default: return true;
  }
}

bool term_closed(const TermPtr& t) {
  if (t->kind == Term::Kind::Var) return false;
  if (t->kind == Term::Kind::App) return term_closed(t->fun) && term_closed(t->arg);
  return true;
}

Nat term_encode(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      throw std::logic_error("term_encode: open term");
    case Term::Kind::Num: {
      Nat c = 9 + 2 * t->num;
      check_width(c, "term code");
      return c;
    }
    case Term::Kind::App: {
      Nat c = 10 + 2 * CantorScheme::pair(term_encode(t->fun), term_encode(t->arg));
      check_width(c, "term code");
      return c;
    }
    default:
      return Nat(static_cast<int>(t->kind));
  }
}

TermPtr term_decode(const Nat& code) {
  if (code < 9) return t_const(static_cast<Term::Kind>(static_cast<int>(code)));
  Nat m = code - 9;
  if (m % 2 == 0) return t_num(m / 2);
  Nat x, y;
  CantorScheme::unpair((m - 1) / 2, x, y);
  return t_app(term_decode(x), term_decode(y));
}

namespace {
const char* const kConstName[] = {"K", "S", "PAIR", "FST", "SND", "SUCC", "PRED", "IFZ", "FIX"};

std::string print_atom(const TermPtr& t) {
  if (t->kind == Term::Kind::App) return "(" + print_term(t) + ")";
  return print_term(t);
}
}  // namespace

std::string print_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Num: return "#" + t->num.str();
    case Term::Kind::Var: return t->var;
    case Term::Kind::App: return print_term(t->fun) + " " + print_atom(t->arg);
    default: return kConstName[static_cast<int>(t->kind)];
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {
struct Parser {
  const std::string& src;
  std::size_t pos = 0;
  std::vector<std::string> bound;

  explicit Parser(const std::string& s) : src(s) {}

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  [[noreturn]] void err(const std::string& what) {
    throw std::runtime_error("parse error at offset " + std::to_string(pos) + ": " + what);
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    if (pos == start) err("expected identifier");
    return src.substr(start, pos - start);
  }

  TermPtr expr() {
    if (peek() == '\\') {
      ++pos;
      std::vector<std::string> vars;
      while (peek() != '.') vars.push_back(ident());
      if (vars.empty()) err("lambda needs at least one variable");
      ++pos;  // '.'
      for (const auto& v : vars) bound.push_back(v);
      TermPtr body = expr();
      bound.resize(bound.size() - vars.size());
      return lam(vars, body);
    }
    TermPtr head = atom();
    for (;;) {
      char c = peek();
      if (c == '\0' || c == ')' || c == '.') break;
      head = t_app(head, atom());
    }
    return head;
  }

  TermPtr atom() {
    char c = peek();
    if (c == '(') {
      ++pos;
      TermPtr inner = expr();
      if (peek() != ')') err("expected ')'");
      ++pos;
      return inner;
    }
    if (c == '#') {
      ++pos;
      std::size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      if (pos == start) err("expected digits after '#'");
      return t_num(Nat(src.substr(start, pos - start)));
    }
    if (c == '\\') err("abstraction must be parenthesised here");
    std::string name = ident();
    for (int k = 0; k < 9; ++k)
      if (name == kConstName[k]) return t_const(static_cast<Term::Kind>(k));
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (*it == name) return t_var(name);
    err("unbound identifier '" + name + "'");
  }
};
}  // namespace

TermPtr parse_term(const std::string& src) {
  Parser p(src);
  TermPtr t = p.expr();
  if (!p.at_end()) p.err("trailing input");
  return t;
}

// ---------------------------------------------------------------------------
// Bracket abstraction

namespace {
bool free_in(const std::string& x, const TermPtr& t) {
  if (t->kind == Term::Kind::Var) return t->var == x;
  if (t->kind == Term::Kind::App) return free_in(x, t->fun) || free_in(x, t->arg);
  return false;
}
}  // namespace

TermPtr lam(const std::string& x, TermPtr body) {
  if (body->kind == Term::Kind::Var && body->var == x)
    return t_apps(t_const(Term::Kind::S), {t_const(Term::Kind::K), t_const(Term::Kind::K)});
  if (!free_in(x, body)) return t_app(t_const(Term::Kind::K), std::move(body));
  // eta: x applied last to an x-free head feeds through unchanged, and the
  // distributed form forces only components that are defined anyway
  if (body->arg->kind == Term::Kind::Var && body->arg->var == x &&
      !free_in(x, body->fun))
    return body->fun;
  // body is an application with x free somewhere
  return t_apps(t_const(Term::Kind::S), {lam(x, body->fun), lam(x, body->arg)});
}

TermPtr lam(const std::vector<std::string>& xs, TermPtr body) {
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = lam(*it, std::move(body));
  return body;
}

TermPtr lam(std::initializer_list<const char*> xs, TermPtr body) {
  return lam(std::vector<std::string>(xs.begin(), xs.end()), std::move(body));
}

// Bracket abstraction over a dummy argument, distributing through every
// application on a path to a variable.  The result applied to anything
// evaluates body at that moment and not before; a plain K body would already
// evaluate body while outer lambdas feed their variables.  Closed subtrees
// are safe behind a single K: nothing reaches inside them until the poke.
TermPtr delay(const TermPtr& body) {
  if (body->kind == Term::Kind::App && !term_closed(body))
    return t_apps(t_const(Term::Kind::S), {delay(body->fun), delay(body->arg)});
  return t_app(t_const(Term::Kind::K), body);
}

TermPtr ite(TermPtr n, TermPtr when_zero, TermPtr when_nonzero) {
  return t_app(t_apps(t_const(Term::Kind::Ifz),
                      {std::move(n), delay(when_zero), delay(when_nonzero)}),
               t_num(0));
}

// Conditional for programs whose codes must stay narrow.  Code width doubles
// at every application level above a subtree, so a suspension distributed
// along the branch bodies costs two-to-the-depth times their width.  Closing
// the branches up over the named variables turns them into combinator values
// that never reduce on their own, which makes the bare primitive conditional
// eager-safe: the machine picks one value, and only the re-application to
// the variables pokes it.  The variable list must cover every free variable
// of both branches.
TermPtr guarded(TermPtr n, std::initializer_list<const char*> vs, TermPtr when_zero,
                TermPtr when_nonzero) {
  std::vector<std::string> names(vs.begin(), vs.end());
  TermPtr z = lam(names, std::move(when_zero));
  TermPtr nz = lam(names, std::move(when_nonzero));
  if (!term_closed(z) || !term_closed(nz))
    throw std::logic_error("guarded: branch has a free variable outside the list");
  TermPtr sel =
      t_apps(t_const(Term::Kind::Ifz), {std::move(n), std::move(z), std::move(nz)});
  for (const auto& v : names) sel = t_app(std::move(sel), t_var(v));
  return sel;
}

// ---------------------------------------------------------------------------
// Weak-head reduction

Reduced reduce_whnf(TermPtr t, Fuel& fuel) {
  TermPtr cur = std::move(t);
  std::vector<TermPtr> args;  // back() is the next argument
  auto rebuild = [&]() {
    TermPtr out = cur;
    while (!args.empty()) {
      out = t_app(out, args.back());
      args.pop_back();
    }
    return out;
  };
  auto pop = [&]() {
    TermPtr a = args.back();
    args.pop_back();
    return a;
  };
  for (;;) {
    while (cur->kind == Term::Kind::App) {
      args.push_back(cur->arg);
      cur = cur->fun;
    }
    switch (cur->kind) {
      case Term::Kind::Var:
        throw std::logic_error("reduce_whnf: open term");
      case Term::Kind::Num:
        if (args.empty()) return {RStatus::Ok, cur};
        return {RStatus::Stuck, nullptr};
      case Term::Kind::K: {
        if (args.size() < 2) return {RStatus::Ok, rebuild()};
        if (!fuel.tick()) return {RStatus::Fuel, nullptr};
        TermPtr a = pop();
        pop();
        cur = std::move(a);
        break;
      }
      case Term::Kind::S: {
        if (args.size() < 3) return {RStatus::Ok, rebuild()};
        if (!fuel.tick()) return {RStatus::Fuel, nullptr};
        TermPtr a = pop(), b = pop(), c = pop();
        // Strict: sxyz is defined precisely when (xz)(yz) is, so both
        // components are forced before the application itself.
        Reduced ac = reduce_whnf(t_app(std::move(a), c), fuel);
        if (ac.status != RStatus::Ok) return {ac.status, nullptr};
        Reduced bc = reduce_whnf(t_app(std::move(b), std::move(c)), fuel);
        if (bc.status != RStatus::Ok) return {bc.status, nullptr};
        args.push_back(bc.term);
        cur = ac.term;
        break;
      }
      case Term::Kind::Pair:
        if (args.size() <= 2) return {RStatus::Ok, rebuild()};
        return {RStatus::Stuck, nullptr};
      case Term::Kind::Fst:
      case Term::Kind::Snd: {
        if (args.empty()) return {RStatus::Ok, rebuild()};
        if (!fuel.tick()) return {RStatus::Fuel, nullptr};
        bool first = cur->kind == Term::Kind::Fst;
        Reduced p = reduce_whnf(pop(), fuel);
        if (p.status != RStatus::Ok) return {p.status, nullptr};
        const Term* cell = p.term.get();
        if (cell->kind != Term::Kind::App || cell->fun->kind != Term::Kind::App ||
            cell->fun->fun->kind != Term::Kind::Pair)
          return {RStatus::Stuck, nullptr};
        cur = first ? cell->fun->arg : cell->arg;
        break;
      }
      case Term::Kind::Succ:
      case Term::Kind::Pred: {
        if (args.empty()) return {RStatus::Ok, rebuild()};
        if (!fuel.tick()) return {RStatus::Fuel, nullptr};
        bool up = cur->kind == Term::Kind::Succ;
        ForcedNat n = force_numeral(pop(), fuel);
        if (n.status != RStatus::Ok) return {n.status, nullptr};
        cur = t_num(up ? n.value + 1 : (n.value == 0 ? Nat(0) : Nat(n.value - 1)));
        break;
      }
      case Term::Kind::Ifz: {
        if (args.size() < 3) return {RStatus::Ok, rebuild()};
        if (!fuel.tick()) return {RStatus::Fuel, nullptr};
        TermPtr v = pop(), a = pop(), b = pop();
        ForcedNat n = force_numeral(std::move(v), fuel);
        if (n.status != RStatus::Ok) return {n.status, nullptr};
        cur = n.value == 0 ? std::move(a) : std::move(b);
        break;
      }
      case Term::Kind::Fix: {
        if (args.size() < 2) return {RStatus::Ok, rebuild()};
        if (!fuel.tick()) return {RStatus::Fuel, nullptr};
        TermPtr f = pop();
        // argument stays queued: FIX f x steps to f (FIX f) x
        args.push_back(t_app(t_const(Term::Kind::Fix), f));
        cur = std::move(f);
        break;
      }
      default:
        throw std::logic_error("reduce_whnf: unreachable");
    }
  }
}

ForcedNat force_numeral(TermPtr t, Fuel& fuel) {
  Reduced r = reduce_whnf(std::move(t), fuel);
  if (r.status != RStatus::Ok) return {r.status, Nat(0)};
  if (r.term->kind != Term::Kind::Num) return {RStatus::Stuck, Nat(0)};
  return {RStatus::Ok, r.term->num};
}

ForcedPair force_pair(TermPtr t, Fuel& fuel) {
  Reduced r = reduce_whnf(std::move(t), fuel);
  if (r.status != RStatus::Ok) return {r.status, nullptr, nullptr};
  const Term* cell = r.term.get();
  if (cell->kind != Term::Kind::App || cell->fun->kind != Term::Kind::App ||
      cell->fun->fun->kind != Term::Kind::Pair)
    return {RStatus::Stuck, nullptr, nullptr};
  return {RStatus::Ok, cell->fun->arg, cell->arg};
}

ForcedBool force_bool(TermPtr t, Fuel& fuel) {
  ForcedPair p = force_pair(std::move(t), fuel);
  if (p.status != RStatus::Ok) return {p.status, false};
  ForcedNat tag = force_numeral(p.first, fuel);
  if (tag.status != RStatus::Ok) return {tag.status, false};
  if (tag.value == 0) return {RStatus::Ok, false};
  if (tag.value == 1) return {RStatus::Ok, true};
  return {RStatus::Stuck, false};
}

ForcedTuple force_tuple(TermPtr t, Fuel& fuel) {
  ForcedPair top = force_pair(std::move(t), fuel);
  if (top.status != RStatus::Ok) return {top.status, {}};
  ForcedNat len = force_numeral(top.first, fuel);
  if (len.status != RStatus::Ok) return {len.status, {}};
  if (len.value > 1000000) return {RStatus::Stuck, {}};
  std::vector<TermPtr> items;
  TermPtr spine = top.second;
  for (Nat i = 0; i < len.value; ++i) {
    ForcedPair cell = force_pair(spine, fuel);
    if (cell.status != RStatus::Ok) return {cell.status, {}};
    items.push_back(cell.first);
    spine = cell.second;
  }
  return {RStatus::Ok, std::move(items)};
}

Reduced apply_terms(TermPtr f, TermPtr a, Fuel& fuel) {
  return reduce_whnf(t_app(std::move(f), std::move(a)), fuel);
}

Outcome CodePca::apply(const Nat& a, const Nat& b, Fuel& fuel) const {
  if (!fuel.take_width(a) || !fuel.take_width(b)) return Outcome::out_of_fuel();
  Reduced r = apply_terms(term_decode(a), term_decode(b), fuel);
  switch (r.status) {
    case RStatus::Ok: {
      Nat code = term_encode(r.term);
      if (!fuel.take_width(code)) return Outcome::out_of_fuel();
      return Outcome::val(code);
    }
    case RStatus::Stuck: return Outcome::undefined();
    default: return Outcome::out_of_fuel();
  }
}

const CodePca& code_pca() {
  static const CodePca pca;
  return pca;
}

// ---------------------------------------------------------------------------
// Derived kit

TermPtr Kit::numeral(const Nat& n) const { return t_num(n); }

TermPtr Kit::tuple(const std::vector<TermPtr>& items) const {
  TermPtr spine = t_num(0);
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    spine = t_apps(t_const(Term::Kind::Pair), {*it, spine});
  return t_apps(t_const(Term::Kind::Pair), {t_num(items.size()), spine});
}

TermPtr Kit::pair2(TermPtr a, TermPtr b) const { return tuple({std::move(a), std::move(b)}); }

Nat Kit::q_code() const { return term_encode(bot); }
Nat Kit::r_code() const { return term_encode(top); }

const Kit& derived_kit() {
  static const Kit kit = [] {
    using K = Term::Kind;
    auto C = [](K k) { return t_const(k); };
    auto V = [](const char* v) { return t_var(v); };
    Kit kt;
    kt.i = t_apps(C(K::S), {C(K::K), C(K::K)});
    kt.top = t_apps(C(K::Pair), {t_num(1), lam({"x", "y"}, V("x"))});
    kt.bot = t_apps(C(K::Pair), {t_num(0), lam({"x", "y"}, V("y"))});
    kt.cond = lam({"v", "a", "b"},
                  t_apps(C(K::Ifz), {t_app(C(K::Fst), V("v")), V("b"), V("a")}));
    kt.fix = C(K::Fix);
    kt.app_el = lam({"x", "y"}, t_app(V("x"), V("y")));
    kt.tup_head = lam("t", t_app(C(K::Fst), t_app(C(K::Snd), V("t"))));
    kt.tup_tail = lam("t", t_apps(C(K::Pair), {t_app(C(K::Pred), t_app(C(K::Fst), V("t"))),
                                               t_app(C(K::Snd), t_app(C(K::Snd), V("t")))}));
    kt.tup_cons =
        lam({"x", "t"},
            t_apps(C(K::Pair), {t_app(C(K::Succ), t_app(C(K::Fst), V("t"))),
                                t_apps(C(K::Pair), {V("x"), t_app(C(K::Snd), V("t"))})}));
    kt.tup_single =
        lam("x", t_apps(C(K::Pair), {t_num(1), t_apps(C(K::Pair), {V("x"), t_num(0)})}));
    // go n spine x rebuilds the spine with x planted after n entries
    TermPtr go = t_app(
        C(K::Fix),
        lam({"g", "n", "l", "x"},
            ite(V("n"), t_apps(C(K::Pair), {V("x"), t_num(0)}),
                t_apps(C(K::Pair),
                       {t_app(C(K::Fst), V("l")),
                        t_apps(V("g"), {t_app(C(K::Pred), V("n")),
                                        t_app(C(K::Snd), V("l")), V("x")})}))));
    kt.tup_append =
        lam({"t", "x"},
            t_apps(C(K::Pair),
                   {t_app(C(K::Succ), t_app(C(K::Fst), V("t"))),
                    t_apps(go, {t_app(C(K::Fst), V("t")), t_app(C(K::Snd), V("t")), V("x")})}));
    kt.add = t_app(C(K::Fix),
                   lam({"g", "a", "b"},
                       ite(V("a"), V("b"),
                           t_apps(V("g"), {t_app(C(K::Pred), V("a")),
                                           t_app(C(K::Succ), V("b"))}))));
    kt.monus = t_app(C(K::Fix),
                     lam({"g", "a", "b"},
                         ite(V("b"), V("a"),
                             t_apps(V("g"), {t_app(C(K::Pred), V("a")),
                                             t_app(C(K::Pred), V("b"))}))));
    return kt;
  }();
  return kit;
}

// ---------------------------------------------------------------------------
// The algebra's own sequence coding

Nat PcaTupleScheme::encode(const std::vector<Nat>& seq) const {
  std::vector<TermPtr> items;
  items.reserve(seq.size());
  for (const auto& c : seq) items.push_back(term_decode(c));
  return term_encode(derived_kit().tuple(items));
}

std::optional<std::vector<Nat>> PcaTupleScheme::decode(const Nat& code, Fuel& fuel) const {
  // On exhaustion this returns nullopt with the meter drained to zero, so a
  // caller that treats nullopt as "malformed" still ends the enclosing
  // computation out-of-fuel rather than settling on a wrong value.
  if (!fuel.take_width(code)) return std::nullopt;
  ForcedTuple t = force_tuple(term_decode(code), fuel);
  if (t.status != RStatus::Ok) return std::nullopt;
  std::vector<Nat> out;
  out.reserve(t.items.size());
  for (const auto& item : t.items) out.push_back(term_encode(item));
  return out;
}

Nat PcaTupleScheme::q() const { return derived_kit().q_code(); }
Nat PcaTupleScheme::r() const { return derived_kit().r_code(); }

Nat PcaTupleScheme::tag_query(const Nat& b) const {
  return term_encode(derived_kit().pair2(derived_kit().bot, term_decode(b)));
}

Nat PcaTupleScheme::tag_result(const Nat& c) const {
  return term_encode(derived_kit().pair2(derived_kit().top, term_decode(c)));
}

Tagged PcaTupleScheme::untag(const Nat& v, Fuel& fuel) const {
  if (!fuel.take_width(v)) return Tagged::exhausted();
  ForcedTuple t = force_tuple(term_decode(v), fuel);
  if (t.status == RStatus::Fuel) return Tagged::exhausted();
  if (t.status != RStatus::Ok || t.items.size() != 2) return Tagged::neither();
  ForcedBool flag = force_bool(t.items[0], fuel);
  if (flag.status == RStatus::Fuel) return Tagged::exhausted();
  if (flag.status != RStatus::Ok) return Tagged::neither();
  // Normalise the payload so tagged results compare by value.
  Reduced payload = reduce_whnf(t.items[1], fuel);
  if (payload.status == RStatus::Fuel) return Tagged::exhausted();
  if (payload.status != RStatus::Ok) return Tagged::neither();
  Nat code = term_encode(payload.term);
  return flag.value ? Tagged::result(code) : Tagged::query(code);
}

const SchemePtr& pca_tuple_scheme() {
  static const SchemePtr scheme = std::make_shared<const PcaTupleScheme>();
  return scheme;
}

// ---------------------------------------------------------------------------
// Axiom suites

namespace {
// Value-level sample pool: whnf codes only, so the k law can compare codes
// exactly.
std::vector<Nat> value_pool(Rng& rng, unsigned extra, std::uint64_t budget) {
  std::vector<Nat> pool;
  for (int c = 0; c < 9; ++c) pool.emplace_back(c);
  for (int m = 0; m < 8; ++m) pool.push_back(Nat(9 + 2 * m));
  const Kit& kit = derived_kit();
  for (TermPtr t : {kit.i, kit.top, kit.bot, kit.tup_head, kit.app_el,
                    t_app(t_const(Term::Kind::K), t_num(3)),
                    t_app(t_const(Term::Kind::Pair), t_num(7))})
    pool.push_back(term_encode(t));
  for (unsigned j = 0; j < extra; ++j) {
    Nat cand = rng.nat_below(Nat(5000));
    Fuel fuel(budget);
    Reduced r = reduce_whnf(term_decode(cand), fuel);
    if (r.status == RStatus::Ok) pool.push_back(term_encode(r.term));
  }
  return pool;
}
}  // namespace

CheckReport check_pca_axioms(const PcaInterface& pca, unsigned samples, std::uint64_t seed,
                             std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "base axioms (k, s)";
  Rng rng(seed);
  std::vector<Nat> pool = value_pool(rng, 24, fuel_budget);
  for (unsigned n = 0; n < samples; ++n) {
    const Nat& x = rng.pick(pool);
    const Nat& y = rng.pick(pool);
    const Nat& z = rng.pick(pool);
    ++rep.cases;
    auto show = [&](const Nat& c) { return pca.show(c); };
    {
      Fuel fuel(fuel_budget);
      Outcome kx = pca.apply(pca.k(), x, fuel);
      if (!kx.is_value()) {
        if (kx.is_out_of_fuel()) ++rep.inconclusive;
        else rep.fail("k " + show(x) + " undefined");
        continue;
      }
      Outcome kxy = pca.apply(kx.value, y, fuel);
      if (kxy.is_out_of_fuel()) { ++rep.inconclusive; continue; }
      if (!kxy.is_value() || kxy.value != x) {
        rep.fail("k law broke at x=" + show(x) + " y=" + show(y));
        continue;
      }
    }
    {
      Fuel fuel(fuel_budget);
      Outcome sx = pca.apply(pca.s(), x, fuel);
      Outcome sxy = sx.is_value() ? pca.apply(sx.value, y, fuel) : sx;
      if (sxy.is_out_of_fuel()) { ++rep.inconclusive; continue; }
      if (!sx.is_value() || !sxy.is_value()) {
        rep.fail("s partial application undefined at x=" + show(x) + " y=" + show(y));
        continue;
      }
      Outcome lhs = pca.apply(sxy.value, z, fuel);
      Fuel fuel2(fuel_budget);
      Outcome xz = pca.apply(x, z, fuel2);
      Outcome yz = xz.is_out_of_fuel() ? xz : pca.apply(y, z, fuel2);
      Outcome rhs = (xz.is_value() && yz.is_value()) ? pca.apply(xz.value, yz.value, fuel2)
                  : (xz.is_out_of_fuel() || yz.is_out_of_fuel()) ? Outcome::out_of_fuel()
                                                                 : Outcome::undefined();
      if (lhs.is_out_of_fuel() || rhs.is_out_of_fuel()) { ++rep.inconclusive; continue; }
      if (!(lhs == rhs)) {
        rep.fail("s law broke at x=" + show(x) + " y=" + show(y) + " z=" + show(z) + ": " +
                 to_string(lhs) + " vs " + to_string(rhs));
      }
    }
  }
  return rep;
}

namespace {
// Apply f to each argument in turn, weak-head reducing at the end.
Reduced apply_chain(TermPtr f, const std::vector<TermPtr>& as, Fuel& fuel) {
  for (const auto& a : as) f = t_app(std::move(f), a);
  return reduce_whnf(std::move(f), fuel);
}

bool whnf_code_is(Reduced r, const TermPtr& expected, Fuel& fuel, CheckReport& rep,
                  const std::string& what) {
  if (r.status == RStatus::Fuel) { ++rep.inconclusive; return false; }
  Reduced e = reduce_whnf(expected, fuel);
  if (e.status == RStatus::Fuel) { ++rep.inconclusive; return false; }
  if (r.status != RStatus::Ok || e.status != RStatus::Ok || !term_eq(r.term, e.term)) {
    rep.fail(what);
    return false;
  }
  return true;
}
}  // namespace

CheckReport check_kit_laws(unsigned samples, std::uint64_t seed, std::uint64_t fuel_budget) {
  CheckReport rep;
  rep.property = "derived combinator laws";
  Rng rng(seed);
  const Kit& kit = derived_kit();
  using K = Term::Kind;
  // A term with no weak head normal form, for the branch-suspension checks.
  TermPtr omega =
      t_apps(t_const(K::Fix), {lam({"g", "x"}, t_app(t_var("g"), t_var("x"))), t_num(0)});

  for (unsigned n = 0; n < samples; ++n) {
    Fuel fuel(fuel_budget);
    Nat a = rng.nat_below(Nat(200)), b = rng.nat_below(Nat(200));
    TermPtr na = t_num(a), nb = t_num(b);
    ++rep.cases;
    // Conditional on elements selects the right branch.
    whnf_code_is(apply_chain(kit.cond, {kit.top, na, nb}, fuel), na, fuel,
                 rep, "cond top picked the wrong branch");
    whnf_code_is(apply_chain(kit.cond, {kit.bot, na, nb}, fuel), nb, fuel,
                 rep, "cond bot picked the wrong branch");
    // A suspended dead branch is never run, even a divergent one.
    whnf_code_is(apply_chain(lam("v", ite(t_var("v"), na, omega)), {t_num(0)}, fuel),
                 na, fuel, rep, "guarded zero branch not taken");
    whnf_code_is(apply_chain(lam("v", ite(t_var("v"), omega, nb)), {t_num(3)}, fuel),
                 nb, fuel, rep, "guarded nonzero branch not taken");
    // Arithmetic helpers against host arithmetic.
    whnf_code_is(apply_chain(kit.add, {na, nb}, fuel), t_num(a + b), fuel, rep,
                 "add mismatch at " + a.str() + "+" + b.str());
    whnf_code_is(apply_chain(kit.monus, {na, nb}, fuel), t_num(a > b ? a - b : Nat(0)), fuel,
                 rep, "monus mismatch at " + a.str() + "-" + b.str());
    // Identity and explicit application.
    whnf_code_is(apply_chain(kit.i, {nb}, fuel), nb, fuel, rep, "identity failed");
    whnf_code_is(apply_chain(kit.app_el, {t_const(K::Succ), na}, fuel), t_num(a + 1), fuel,
                 rep, "app element failed");
  }

  // Tuple plumbing on a few concrete shapes, entries forced pointwise.
  std::vector<std::vector<Nat>> shapes = {{}, {5}, {3, 1}, {7, 0, 2, 9}};
  for (const auto& entries : shapes) {
    ++rep.cases;
    Fuel fuel(fuel_budget);
    std::vector<TermPtr> items;
    for (const auto& e : entries) items.push_back(t_num(e));
    TermPtr tup = kit.tuple(items);
    auto expect_tuple = [&](Reduced got, std::vector<Nat> want, const std::string& what) {
      if (got.status == RStatus::Fuel) { ++rep.inconclusive; return; }
      if (got.status != RStatus::Ok) { rep.fail(what + ": stuck"); return; }
      ForcedTuple ft = force_tuple(got.term, fuel);
      if (ft.status == RStatus::Fuel) { ++rep.inconclusive; return; }
      if (ft.status != RStatus::Ok || ft.items.size() != want.size()) {
        rep.fail(what + ": wrong shape");
        return;
      }
      for (std::size_t j = 0; j < want.size(); ++j) {
        ForcedNat v = force_numeral(ft.items[j], fuel);
        if (v.status == RStatus::Fuel) { ++rep.inconclusive; return; }
        if (v.status != RStatus::Ok || v.value != want[j]) {
          rep.fail(what + ": entry " + std::to_string(j) + " wrong");
          return;
        }
      }
    };
    expect_tuple(apply_chain(kit.tup_append, {tup, t_num(11)}, fuel),
                 [&] { auto w = entries; w.push_back(11); return w; }(), "append");
    expect_tuple(apply_chain(kit.tup_cons, {t_num(11), tup}, fuel),
                 [&] { std::vector<Nat> w{11}; for (auto& e : entries) w.push_back(e); return w; }(),
                 "cons");
    if (!entries.empty()) {
      whnf_code_is(apply_chain(kit.tup_head, {tup}, fuel), t_num(entries[0]), fuel, rep, "head");
      expect_tuple(apply_chain(kit.tup_tail, {tup}, fuel),
                   std::vector<Nat>(entries.begin() + 1, entries.end()), "tail");
    }
    expect_tuple(apply_chain(kit.tup_single, {t_num(4)}, fuel), {Nat(4)}, "single");
  }

  // fix f x agrees with f (fix f) x.
  {
    ++rep.cases;
    Fuel fuel(fuel_budget);
    TermPtr f = lam({"g", "x"}, ite(t_var("x"), t_num(42),
                                    t_app(t_var("g"), t_app(t_const(K::Pred), t_var("x")))));
    Reduced lhs = apply_chain(kit.fix, {f, t_num(6)}, fuel);
    Reduced rhs = apply_chain(f, {t_app(kit.fix, f), t_num(6)}, fuel);
    if (lhs.status == RStatus::Fuel || rhs.status == RStatus::Fuel) ++rep.inconclusive;
    else if (lhs.status != RStatus::Ok || rhs.status != RStatus::Ok ||
             !term_eq(lhs.term, rhs.term))
      rep.fail("fix unfolding law failed");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Compatibility witnesses

namespace {
struct TranslatorPrograms {
  TermPtr seq_to_tuple, tuple_to_seq, marker_map;
};

// Closed programs translating between Cantor-coded sequences and tuples.
// Arithmetic is done with the tail-recursive kit helpers; an impossible
// case (an application code, an odd pairing residue) selects FST #0, which
// is stuck, so failure is divergence-free and honest.
const TranslatorPrograms& cantor_translators() {
  static const TranslatorPrograms progs = [] {
    using K = Term::Kind;
    const Kit& kit = derived_kit();
    auto C = [](K k) { return t_const(k); };
    auto V = [](const char* v) { return t_var(v); };
    TermPtr stuck = t_app(C(K::Fst), t_num(0));
    // halve: #2m -> #m, odd -> stuck
    TermPtr halve = t_app(
        C(K::Fix),
        lam({"g", "m"},
            ite(V("m"), t_num(0),
                ite(t_app(C(K::Pred), V("m")), stuck,
                    t_app(C(K::Succ),
                          t_app(V("g"), t_app(C(K::Pred), t_app(C(K::Pred), V("m")))))))));
    // elem_of: constant codes 0..8 by case split, then numerals by halving
    TermPtr elem_body = t_app(halve, t_apps(kit.monus, {V("e"), t_num(9)}));
    const K order[9] = {K::K, K::S, K::Pair, K::Fst, K::Snd, K::Succ, K::Pred, K::Ifz, K::Fix};
    for (int j = 8; j >= 0; --j) {
      TermPtr scrut = V("e");
      for (int p = 0; p < j; ++p) scrut = t_app(C(K::Pred), scrut);
      elem_body = t_apps(C(K::Ifz), {scrut, C(order[j]), elem_body});
    }
    TermPtr elem_of = lam("e", elem_body);
    // unpair z = PAIR x y by incremental descent along the diagonal
    TermPtr up = t_app(
        C(K::Fix),
        lam({"g", "w", "t"},
            ite(t_apps(kit.monus, {V("t"), V("w")}),
                t_apps(C(K::Pair), {t_apps(kit.monus, {V("w"), V("t")}), V("t")}),
                t_apps(V("g"), {t_app(C(K::Succ), V("w")),
                                t_apps(kit.monus, {V("t"), t_app(C(K::Succ), V("w"))})}))));
    TermPtr unpair = lam("z", t_apps(up, {t_num(0), V("z")}));
    // seq_to_tuple: peel cons cells, mapping each entry through elem_of
    TermPtr a_prog = t_app(
        C(K::Fix),
        lam({"g", "c"},
            ite(V("c"), t_apps(C(K::Pair), {t_num(0), t_num(0)}),
                t_apps(kit.tup_cons,
                       {t_app(elem_of, t_app(C(K::Fst),
                                             t_app(unpair, t_app(C(K::Pred), V("c"))))),
                        t_app(V("g"), t_app(C(K::Snd),
                                            t_app(unpair, t_app(C(K::Pred), V("c")))))}))));
    // tri n = n(n+1)/2 by accumulation; cpair x y = tri(x+y) + y
    TermPtr triloop = t_app(
        C(K::Fix),
        lam({"g", "n", "acc"},
            ite(V("n"), V("acc"),
                t_apps(V("g"), {t_app(C(K::Pred), V("n")),
                                t_apps(kit.add, {V("n"), V("acc")})}))));
    TermPtr tri = lam("n", t_apps(triloop, {V("n"), t_num(0)}));
    TermPtr cpair =
        lam({"x", "y"}, t_apps(kit.add, {t_app(tri, t_apps(kit.add, {V("x"), V("y")})), V("y")}));
    // code_of: numeral entries only -- #n has code 9 + 2n
    TermPtr code_of = lam("x", t_apps(kit.add, {t_apps(kit.add, {V("x"), V("x")}), t_num(9)}));
    // tuple_to_seq: rebuild the Cantor cons chain
    TermPtr b_prog = t_app(
        C(K::Fix),
        lam({"g", "t"},
            ite(t_app(C(K::Fst), V("t")), t_num(0),
                t_app(C(K::Succ),
                      t_apps(cpair, {t_app(code_of, t_app(kit.tup_head, V("t"))),
                                     t_app(V("g"), t_app(kit.tup_tail, V("t")))})))));
    // marker_map sends the query marker (code 0, i.e. K) to bot and the
    // result marker (code 1, i.e. S) to top, by how K and S consume args
    TermPtr c_prog = lam("v", t_apps(V("v"), {t_app(C(K::K), kit.i),
                                              t_app(C(K::K), t_app(C(K::K), kit.top)),
                                              t_num(0), kit.bot}));
    return TranslatorPrograms{lam("c", t_apps(a_prog, {V("c")})), b_prog, c_prog};
  }();
  return progs;
}
}  // namespace

CompatReport check_compatible(const CodingScheme& scheme, std::uint64_t fuel_budget) {
  CompatReport out;
  const Kit& kit = derived_kit();
  out.report.property = "sequence coding compatibility";

  if (dynamic_cast<const PcaTupleScheme*>(&scheme) != nullptr) {
    // The algebra's own tuples: identity witnesses.
    out.seq_to_tuple = out.tuple_to_seq = out.marker_map = kit.i;
    std::vector<std::vector<Nat>> window = {
        {}, {0}, {1}, {9}, {11}, {0, 9}, {5, 11}, {9, 9, 0}, {11, 1, 9, 5}};
    for (const auto& seq : window) {
      ++out.report.cases;
      Fuel fuel(fuel_budget);
      std::vector<TermPtr> items;
      for (const auto& c : seq) items.push_back(term_decode(c));
      TermPtr coded = term_decode(scheme.encode(seq));
      Reduced a = apply_terms(out.seq_to_tuple, coded, fuel);
      if (a.status != RStatus::Ok || !term_eq(a.term, kit.tuple(items)))
        out.report.fail("identity seq->tuple failed");
      Reduced b = apply_terms(out.tuple_to_seq, kit.tuple(items), fuel);
      if (b.status != RStatus::Ok || term_encode(b.term) != scheme.encode(seq))
        out.report.fail("identity tuple->seq failed");
    }
    ++out.report.cases;
    Fuel fuel(fuel_budget);
    Reduced cq = apply_terms(out.marker_map, term_decode(scheme.q()), fuel);
    Reduced cr = apply_terms(out.marker_map, term_decode(scheme.r()), fuel);
    if (cq.status != RStatus::Ok || term_encode(cq.term) != kit.q_code() ||
        cr.status != RStatus::Ok || term_encode(cr.term) != kit.r_code())
      out.report.fail("identity marker map failed");
    return out;
  }

  if (dynamic_cast<const CantorScheme*>(&scheme) == nullptr) {
    out.report.fail("no witnesses known for this coding scheme");
    return out;
  }

  const TranslatorPrograms& progs = cantor_translators();
  out.seq_to_tuple = progs.seq_to_tuple;
  out.tuple_to_seq = progs.tuple_to_seq;
  out.marker_map = progs.marker_map;

  // Windows: the unfold direction handles constant and numeral entries; the
  // rebuild direction needs numeral entries (constants cannot be reflected
  // back into their codes from inside the algebra).  Sequence codes grow
  // quickly with length, and the in-algebra unpairing walks the diagonal,
  // so long windows are priced out; lengths up to three stay comfortably
  // inside the budget.
  std::vector<std::vector<Nat>> a_window = {{},      {0},    {5},       {9},      {11},
                                            {1, 9},  {0, 0}, {11, 5},   {9, 11},  {0, 1, 0},
                                            {1, 1, 1}};
  for (const auto& seq : a_window) {
    ++out.report.cases;
    Fuel fuel(fuel_budget);
    Reduced got = apply_terms(progs.seq_to_tuple, t_num(scheme.encode(seq)), fuel);
    if (got.status == RStatus::Fuel) { ++out.report.inconclusive; continue; }
    if (got.status != RStatus::Ok) { out.report.fail("seq->tuple stuck"); continue; }
    ForcedTuple ft = force_tuple(got.term, fuel);
    if (ft.status == RStatus::Fuel) { ++out.report.inconclusive; continue; }
    if (ft.status != RStatus::Ok || ft.items.size() != seq.size()) {
      out.report.fail("seq->tuple wrong shape");
      continue;
    }
    bool ok = true;
    for (std::size_t j = 0; j < seq.size() && ok; ++j) {
      Reduced item = reduce_whnf(ft.items[j], fuel);
      if (item.status == RStatus::Fuel) { ++out.report.inconclusive; ok = false; break; }
      if (item.status != RStatus::Ok || term_encode(item.term) != seq[j]) {
        out.report.fail("seq->tuple entry mismatch");
        ok = false;
      }
    }
  }

  std::vector<std::vector<Nat>> b_window = {{}, {9}, {11}, {13}, {9, 9}, {11, 9}, {9, 9, 9}};
  for (const auto& seq : b_window) {
    ++out.report.cases;
    Fuel fuel(fuel_budget);
    std::vector<TermPtr> items;
    for (const auto& c : seq) items.push_back(term_decode(c));
    Reduced got = apply_terms(progs.tuple_to_seq, kit.tuple(items), fuel);
    if (got.status == RStatus::Fuel) { ++out.report.inconclusive; continue; }
    if (got.status != RStatus::Ok || got.term->kind != Term::Kind::Num ||
        got.term->num != scheme.encode(seq))
      out.report.fail("tuple->seq mismatch");
  }

  {
    ++out.report.cases;
    Fuel fuel(fuel_budget);
    Reduced cq = apply_terms(progs.marker_map, term_decode(scheme.q()), fuel);
    Reduced cr = apply_terms(progs.marker_map, term_decode(scheme.r()), fuel);
    if (cq.status != RStatus::Ok || term_encode(cq.term) != kit.q_code() ||
        cr.status != RStatus::Ok || term_encode(cr.term) != kit.r_code())
      out.report.fail("marker map failed on q/r");
  }
  return out;
}

}  // namespace pca
