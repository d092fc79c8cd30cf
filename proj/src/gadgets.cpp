#include "vassred/gadgets.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "vassred/error.hpp"

namespace vassred {

namespace {

void require_distinct(const std::vector<std::string>& names, const char* what) {
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second)
      throw Error(std::string(what) + ": counter '" + n + "' bound to more than one role");
}

Stmt loop(std::vector<Stmt> body) { return Loop{std::move(body)}; }

// Small helper to write gadget bodies by counter name.
class Body {
 public:
  explicit Body(std::vector<std::string> counters) : counters_(std::move(counters)) {}
  std::size_t idx(const std::string& n) const {
    return static_cast<std::size_t>(std::find(counters_.begin(), counters_.end(), n) -
                                    counters_.begin());
  }
  Stmt inc(const std::string& n) const { return Command::inc(idx(n)); }
  Stmt dec(const std::string& n) const { return Command::dec(idx(n)); }
  Stmt add(const std::string& n, Value k) const { return Command::add(idx(n), k); }
  Stmt sub(const std::string& n, Value k) const { return Command::sub(idx(n), k); }
  Stmt zero(const std::string& n) const { return Command::zero_test(idx(n)); }

 private:
  std::vector<std::string> counters_;
};

std::vector<Stmt> zero_macro_body(const Body& w, const ZeroMacroRoles& r) {
  return {
      loop({w.dec(r.partner), w.inc(r.tested), w.dec(r.d)}),
      loop({w.dec(r.budget), w.inc(r.partner), w.dec(r.d)}),
      loop({w.dec(r.partner), w.inc(r.budget), w.dec(r.d)}),
      loop({w.dec(r.tested), w.inc(r.partner), w.dec(r.d)}),
      w.sub(r.b, 2),
  };
}

Value mul(Value a, Value b) {
  if (a != 0 && b > std::numeric_limits<Value>::max() / a)
    throw ResourceLimit("ratio value exceeds 64-bit range");
  return a * b;
}

}  // namespace

RatioSpec RatioSpec::make(Value B, std::string b, std::string c, std::string d,
                          std::vector<std::string> counters, RatioMode mode, bool strict) {
  if (B < 2 || B % 2 != 0) throw Error("ratio B must be even and at least 2");
  if (strict && B % 4 != 0) throw Error("ratio B must be a positive multiple of 4");
  require_distinct({b, c, d}, "ratio");
  for (const auto* n : {&b, &c, &d})
    if (std::find(counters.begin(), counters.end(), *n) == counters.end())
      throw Error("ratio counter '" + *n + "' is not in the counter set");
  return RatioSpec{B, std::move(b), std::move(c), std::move(d), std::move(counters), mode};
}

bool RatioSpec::contains(const Valuation& v) const {
  auto get = [&](const std::string& n) -> Value {
    auto it = v.find(n);
    return it == v.end() ? 0 : it->second;
  };
  for (const auto& [name, value] : v)
    if (std::find(counters.begin(), counters.end(), name) == counters.end()) return false;
  const Value vb = get(b), vc = get(c), vd = get(d);
  if (vb != B || vc == 0) return false;
  if (vd / vb != vc || vd % vb != 0) return false;
  for (const auto& name : counters)
    if (name != b && name != c && name != d && get(name) != 0) return false;
  return true;
}

Valuation RatioSpec::point(Value c0) const {
  if (c0 == 0) throw Error("ratio requires c > 0");
  Valuation v;
  for (const auto& name : counters) v[name] = 0;
  v[b] = B;
  v[c] = c0;
  v[d] = mul(B, c0);
  return v;
}

std::vector<Valuation> RatioSpec::slice(Value lo, Value hi) const {
  if (lo == 0 || lo > hi) throw Error("ratio slice must be a nonempty range of positive c");
  std::vector<Valuation> out;
  for (Value c0 = lo; c0 <= hi; ++c0) out.push_back(point(c0));
  return out;
}

Program build_multiplier_direct(Value B, const MultiplierRoles& roles,
                                const std::vector<std::string>& extra_counters, bool strict) {
  if (B < 2 || B % 2 != 0 || (strict && B % 4 != 0))
    throw Error(strict ? "multiplier B must be a positive multiple of 4"
                       : "multiplier B must be even and at least 2");
  std::vector<std::string> counters{roles.b, roles.c, roles.d};
  if (roles.z) counters.push_back(*roles.z);
  require_distinct(counters, "multiplier");
  for (const auto& e : extra_counters)
    if (std::find(counters.begin(), counters.end(), e) == counters.end()) counters.push_back(e);
  const Body w(counters);
  std::vector<Stmt> body{w.add(roles.b, B), w.add(roles.d, B), w.inc(roles.c),
                         loop({w.add(roles.d, B), w.inc(roles.c)})};
  Roles r{{"b", roles.b}, {"c", roles.c}, {"d", roles.d}};
  if (roles.z) r.emplace("z", *roles.z);
  return Program(counters, std::move(body), std::move(r));
}

Program build_linear_amplifier(Value l, const AmplifierRoles& roles) {
  if (l < 1) throw Error("amplifier factor must be at least 1");
  std::vector<std::string> counters{roles.b,     roles.c,     roles.d,
                                    roles.b_out, roles.c_out, roles.d_out};
  require_distinct(counters, "amplifier");
  const Value twice = mul(2, l);
  const Body w(counters);
  const auto& [b, c, d, b2, c2, d2] = roles;
  std::vector<Stmt> body{
      loop({
          loop({w.dec(c), w.inc(c2), w.dec(d), w.add(d2, l)}),
          loop({w.dec(c2), w.inc(c), w.dec(d), w.add(d2, l)}),
          w.sub(b, 2),
          w.add(b2, twice),
      }),
      loop({w.sub(c, 1), w.inc(c2), w.sub(d, 2), w.add(d2, twice)}),
      w.sub(b, 2),
      w.add(b2, twice),
  };
  Roles r{{"b", b}, {"c", c}, {"d", d}, {"b2", b2}, {"c2", c2}, {"d2", d2}};
  return Program(counters, std::move(body), std::move(r));
}

Program build_zero_macro(const ZeroMacroRoles& roles) {
  const auto& [x, y, c, d, b] = roles;
  std::vector<std::string> counters{x, y, c, b, d};
  require_distinct(counters, "zero-test macro");
  const Body w(counters);
  Roles r{{"x", x}, {"y", y}, {"c", c}, {"b", b}, {"d", d}};
  return Program(counters, zero_macro_body(w, roles), std::move(r));
}

Program build_set_c_to_zero(const EliminationRoles& roles) {
  const auto& [x, y, b, c, d] = roles;
  std::vector<std::string> counters{x, y, c, b, d};
  require_distinct(counters, "set-c-to-zero");
  const Body w(counters);
  std::vector<Stmt> body{loop({w.dec(c), w.sub(d, 2)})};
  for (auto& s : zero_macro_body(w, {c, y, x, d, b})) body.push_back(std::move(s));
  Roles r{{"x", x}, {"y", y}, {"c", c}, {"b", b}, {"d", d}};
  return Program(counters, std::move(body), std::move(r));
}

Program build_zeroloop(const std::string& x) {
  const Body w({x});
  std::vector<Stmt> body{loop({w.dec(x)}), loop({w.zero(x)})};
  return Program({x}, std::move(body), Roles{{"x", x}}, true);
}

}  // namespace vassred
