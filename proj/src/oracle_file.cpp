#include "pca/basepca.hpp"
#include "pca/partialfn.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pca {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

PartialFn program_fn(const std::string& src, const std::string& name) {
  TermPtr prog = parse_term(src);
  auto run = [prog](const Nat& x, Fuel& fuel) {
    ForcedNat n = force_numeral(t_app(prog, t_num(x)), fuel);
    switch (n.status) {
      case RStatus::Ok:
        return Outcome::val(n.value);
      case RStatus::Stuck:
        return Outcome::undefined();
      default:
        return Outcome::out_of_fuel();
    }
  };
  return make_native(name, std::move(run), /*totality_claim=*/false, /*memoize=*/true);
}

}  // namespace

PartialFn load_oracle_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open oracle file: " + path);

  size_t slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);

  std::map<Nat, Nat> table;
  PartialFn fallback;
  std::string line;
  unsigned lineno = 0;
  auto err = [&](const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (body.rfind("@builtin", 0) == 0) {
      if (fallback.valid()) err("more than one directive");
      std::string spec = trim(body.substr(8));
      if (spec.empty()) err("@builtin needs a name");
      try {
        fallback = make_builtin(spec);
      } catch (const std::exception& e) {
        err(e.what());
      }
      continue;
    }
    if (body.rfind("@prog", 0) == 0) {
      if (fallback.valid()) err("more than one directive");
      std::string src = trim(body.substr(5));
      if (src.empty()) err("@prog needs a term");
      try {
        fallback = program_fn(src, name + ":prog");
      } catch (const std::exception& e) {
        err(e.what());
      }
      continue;
    }
    std::istringstream fields(body);
    std::string xs, ys, extra;
    fields >> xs >> ys;
    if (fields >> extra) err("table entry wants exactly two numbers");
    if (!all_digits(xs) || !all_digits(ys)) err("table entry wants exactly two numbers");
    table[Nat(xs)] = Nat(ys);
  }

  if (!fallback.valid()) return make_table(std::move(table), std::move(name));
  if (table.empty()) return fallback;

  // Explicit entries shadow the fallback rule.
  PartialFn base = fallback;
  auto run = [table, base](const Nat& x, Fuel& fuel) {
    auto it = table.find(x);
    if (it != table.end()) return Outcome::val(it->second);
    return eval(base, x, fuel);
  };
  return make_native(std::move(name), std::move(run), /*totality_claim=*/false);
}

}  // namespace pca
