#include "vassred/constructions.hpp"

#include <algorithm>
#include <set>

#include "vassred/error.hpp"
#include "vassred/fastgrow.hpp"

namespace vassred {

namespace {

Program lowered(const Program& p) { return p.lowered() ? p : lower(p); }

// Emits `loop { dec f; inc e; dec d }` and returns its span.
FlushSpan flush(Assembler& a, const std::string& f, const std::string& e, const std::string& d) {
  const Line h = a.begin_loop();
  a.dec(f);
  a.inc(e);
  a.dec(d);
  a.end_loop(h);
  return {h, f, e, d};
}

MacroSpan zero_macro(Assembler& a, const ZeroMacroRoles& r) {
  MacroSpan m;
  m.first = a.here();
  m.tested = r.tested;
  m.loops[0] = flush(a, r.partner, r.tested, r.d);
  m.loops[1] = flush(a, r.budget, r.partner, r.d);
  m.loops[2] = flush(a, r.partner, r.budget, r.d);
  m.loops[3] = flush(a, r.tested, r.partner, r.d);
  m.last = a.sub(r.b, 2);
  return m;
}

}  // namespace

Elimination eliminate_zero_tests_with_layout(const Program& input, const EliminationRoles& roles) {
  const Program p = lowered(input);
  const auto& [x, y, b, c, d] = roles;
  if (x == y) throw Error("zero-tested counters must be distinct");
  for (const auto* n : {&x, &y})
    if (!p.has_counter(*n)) throw Error("zero-tested counter '" + *n + "' is not in the program");
  std::set<std::string> fresh{b, c, d};
  if (fresh.size() != 3) throw Error("counters b, c, d must be distinct");
  for (const auto& n : fresh)
    if (p.has_counter(n) || n == x || n == y)
      throw Error("counter '" + n + "' is not fresh for the program");

  const auto code = p.commands();
  const std::size_t ix = p.counter_index(x), iy = p.counter_index(y);
  for (const auto& cmd : code)
    if (cmd.op == Op::ZeroTest && cmd.counter != ix && cmd.counter != iy)
      throw Error("zero test on counter '" + p.counters()[cmd.counter] +
                  "', which is not one of the two designated counters");

  Assembler a(p.counters());
  for (const auto& n : {b, c, d}) a.counter(n);
  Elimination out;
  auto& layout = out.layout;
  std::vector<Line> gotos;  // lines whose targets still refer to p

  for (const auto& cmd : code) {
    layout.checkpoints.push_back(a.here());
    const bool coupled = cmd.uses_counter() && cmd.op != Op::ZeroTest &&
                         (cmd.counter == ix || cmd.counter == iy);
    switch (cmd.op) {
      case Op::ZeroTest:
        layout.macros.push_back(
            cmd.counter == ix ? zero_macro(a, {x, y, c, d, b}) : zero_macro(a, {y, x, c, d, b}));
        break;
      case Op::Goto:
        gotos.push_back(a.emit(cmd));
        break;
      default:
        a.emit(cmd);
        if (coupled) {
          if (cmd.op == Op::Inc) a.dec(c);
          if (cmd.op == Op::Dec) a.inc(c);
          if (cmd.op == Op::Add) a.sub(c, cmd.amount);
          if (cmd.op == Op::Sub) a.add(c, cmd.amount);
        }
        break;
    }
  }

  layout.set_c_first = a.here();
  layout.checkpoints.push_back(layout.set_c_first);
  const Line drain = a.begin_loop();
  a.dec(c);
  a.sub(d, 2);
  a.end_loop(drain);
  layout.set_c_macro = zero_macro(a, {c, y, x, d, b});

  // Original line l now starts at checkpoints[l - 1].
  for (std::size_t i = 0, k = 0; i < code.size(); ++i) {
    if (code[i].op != Op::Goto) continue;
    a.patch(gotos[k++], layout.checkpoints[code[i].target1 - 1],
            layout.checkpoints[code[i].target2 - 1]);
  }

  Roles r{{"x", x}, {"y", y}, {"b", b}, {"c", c}, {"d", d}};
  out.program = a.finish(std::move(r));
  layout.checkpoints.push_back(static_cast<Line>(out.program.size() + 1));
  return out;
}

Program eliminate_zero_tests(const Program& p, const EliminationRoles& roles) {
  return eliminate_zero_tests_with_layout(p, roles).program;
}

Valuation extend_with_zero(Valuation v, const std::vector<std::string>& fresh) {
  for (const auto& n : fresh) v[n] = 0;
  return v;
}

std::set<Valuation> extend_with_zero(const std::set<Valuation>& vs,
                                     const std::vector<std::string>& fresh) {
  std::set<Valuation> out;
  for (const auto& v : vs) out.insert(extend_with_zero(v, fresh));
  return out;
}

AmplifierSpec AmplifierSpec::linear(Value l, const AmplifierRoles& roles) {
  return {build_linear_amplifier(l, roles), roles.b,     roles.c,    roles.d,
          roles.b_out,                      roles.c_out, roles.d_out};
}

Program lifting_program(const AmplifierSpec& a, bool doubled) {
  const Program& p = a.program;
  if (p.has_zero_tests()) throw Error("an amplifier must not contain zero tests");
  for (const auto* n : {&a.b, &a.c, &a.d, &a.b_out, &a.c_out, &a.d_out})
    if (!p.has_counter(*n)) throw Error("amplifier counter '" + *n + "' is not in the program");

  const Program m = build_multiplier_direct(4, {a.b, a.c, a.d, std::nullopt});
  const Program l = build_linear_amplifier(1, {a.b_out, a.c_out, a.d_out, a.b, a.c, a.d});
  Assembler q(p.counters());
  q.append(m);
  if (doubled) {
    const Line h = q.begin_loop();
    q.append(p);
    q.zero_test(a.d);
    q.append(l);
    q.zero_test(a.d_out);
    q.end_loop(h);
    q.append(p);
    q.zero_test(a.d);
  } else {
    const Line head = q.append(p);
    q.zero_test(a.d);
    const Line fork = q.jump(0, 0);
    const Line body = q.append(l);
    q.zero_test(a.d_out);
    q.jump(head, head);
    q.patch(fork, body, q.here());
  }
  return q.finish({}, true);
}

AmplifierSpec lift_amplifier(const AmplifierSpec& a, const LiftOptions& options) {
  const Program q = lifting_program(a, options.doubled);
  Program t = eliminate_zero_tests(q, {a.d, a.d_out, options.b, options.c, options.d});
  Roles r{{"b", options.b},   {"c", options.c},   {"d", options.d},
          {"b2", a.b_out},    {"c2", a.c_out},    {"d2", a.d_out}};
  return {t.with_roles(std::move(r)), options.b, options.c, options.d,
          a.b_out,                    a.c_out,   a.d_out};
}

Program eliminate_b(const Program& input, const std::string& b, Value n) {
  const Program p = lowered(input);
  if (p.has_zero_tests()) throw Error("eliminate-b requires a program without zero tests");
  const std::size_t ib = p.counter_index(b);
  if (n > 4096) throw ResourceLimit("eliminate-b bound too large");
  const auto code = p.commands();
  const Line len = static_cast<Line>(code.size());
  const Line copies = static_cast<Line>(n + 1);
  const Line trap = copies * (len + 1) + 1;
  const Line exit = trap + 1;
  auto at = [&](Line line, Line copy) { return copy * (len + 1) + line; };

  std::vector<std::string> counters;
  std::vector<std::size_t> remap(p.counters().size(), 0);
  for (std::size_t i = 0; i < p.counters().size(); ++i) {
    if (i == ib) continue;
    remap[i] = counters.size();
    counters.push_back(p.counters()[i]);
  }

  std::vector<Stmt> body;
  body.reserve(static_cast<std::size_t>(exit));
  for (Line i = 0; i < copies; ++i) {
    for (Line l = 1; l <= len; ++l) {
      Command cmd = code[l - 1];
      if (cmd.uses_counter() && cmd.counter == ib) {
        const bool up = cmd.increments();
        const Value k = cmd.amount;
        const bool inside = up ? i + k <= n : k <= i;
        const Line target = inside ? at(l + 1, static_cast<Line>(up ? i + k : i - k)) : trap;
        body.emplace_back(Command::jump(target, target));
        continue;
      }
      if (cmd.op == Op::Goto) {
        cmd.target1 = at(cmd.target1, i);
        cmd.target2 = at(cmd.target2, i);
      } else if (cmd.uses_counter()) {
        cmd.counter = remap[cmd.counter];
      }
      body.emplace_back(cmd);
    }
    body.emplace_back(Command::jump(exit, exit));
  }
  body.emplace_back(Command::jump(trap, trap));
  body.emplace_back(Command::nop());

  Roles roles;
  for (const auto& [r, c] : p.roles())
    if (c != b) roles.emplace(r, c);
  return Program(std::move(counters), std::move(body), std::move(roles));
}

std::string level_counter(char role, unsigned j) {
  return std::string(1, role) + "_" + std::to_string(j);
}

AmplifierSpec build_fk_amplifier(unsigned k) {
  if (k < 1) throw Error("k must be at least 1");
  AmplifierSpec a = AmplifierSpec::linear(
      2, {level_counter('b', 1), level_counter('c', 1), level_counter('d', 1),
          level_counter('b', 0), level_counter('c', 0), level_counter('d', 0)});
  for (unsigned j = 2; j <= k; ++j) {
    LiftOptions o;
    o.b = level_counter('b', j);
    o.c = level_counter('c', j);
    o.d = level_counter('d', j);
    a = lift_amplifier(a, o);
  }
  return a;
}

Program build_fk_multiplier(unsigned k, Value n) {
  if (n < 4 || n % 4 != 0) throw Error("n must be a positive multiple of 4");
  const AmplifierSpec a = build_fk_amplifier(k);
  Assembler asm_(a.program.counters());
  asm_.append(build_multiplier_direct(n, {a.b, a.c, a.d, std::nullopt}));
  asm_.append(a.program);
  const Program composed = asm_.finish();
  const Program m = eliminate_b(composed, a.b, n);
  return m.with_roles({{"z", a.d}, {"b", a.b_out}, {"c", a.c_out}, {"d", a.d_out}});
}

ReductionOutput reduce_halting(const Program& input, const ReductionOptions& options) {
  const Program p0 = lowered(input);
  const unsigned k = options.k;
  if (k < 1) throw Error("k must be at least 1");
  if (options.reuse && k < 3) throw Error("counter reuse needs k >= 3");
  auto pick = [&](const std::string& given, const char* role) {
    if (!given.empty()) return given;
    if (auto it = p0.roles().find(role); it != p0.roles().end()) return it->second;
    return std::string(role);
  };
  const std::string x0 = pick(options.x, "x"), y0 = pick(options.y, "y");
  if (!p0.has_counter(x0) || !p0.has_counter(y0))
    throw Error("the zero-tested counters '" + x0 + "' and '" + y0 + "' must be program counters");

  ReductionOutput out;
  out.n = std::max<std::size_t>(4, (p0.size() + 3) / 4 * 4);
  const BigNat fk = f_value(k, out.n, options.max_bits);
  out.m = BigNat(fk / 2 - 1).str();

  const Program mult = build_fk_multiplier(k, out.n);
  const std::string z = mult.role("z"), b = mult.role("b"), c = mult.role("c"),
                    d = mult.role("d");

  // Rename p's counters into C' when reusing, otherwise require disjointness.
  std::map<std::string, std::string> rename;
  if (options.reuse) {
    std::vector<std::string> spare;
    for (const auto& n : mult.counters())
      if (n != z && n != b && n != c && n != d) spare.push_back(n);
    if (p0.counters().size() > spare.size())
      throw Error("program has more counters than can be reused");
    for (std::size_t i = 0; i < p0.counters().size(); ++i)
      rename.emplace(p0.counters()[i], spare[i]);
  } else {
    for (const auto& n : p0.counters())
      if (mult.has_counter(n))
        throw Error("program counter '" + n + "' collides with a multiplier counter");
  }
  const Program p = rename_counters(p0.with_roles({}), rename);
  const std::string x = rename.count(x0) ? rename.at(x0) : x0;
  const std::string y = rename.count(y0) ? rename.at(y0) : y0;

  out.with_zeroloop = compose(p, build_zeroloop(x).with_roles({}));
  out.transformed = eliminate_zero_tests(out.with_zeroloop, {x, y, b, c, d});
  out.multiplier = mult;

  Assembler a(mult.counters());
  a.append(mult);
  a.append(out.transformed);
  out.program = a.finish({{"z", z}, {"b", b}, {"c", c}, {"d", d}});
  out.target = {z, d};
  out.counter_count = out.program.counters().size();

  auto& pv = out.provenance;
  pv["construction"] = "reduce";
  pv["k"] = std::to_string(k);
  pv["n"] = std::to_string(out.n);
  pv["m"] = out.m;
  pv["B"] = fk.str();
  pv["reuse"] = options.reuse ? "true" : "false";
  pv["x"] = x;
  pv["y"] = y;
  pv["counters"] = std::to_string(out.counter_count);
  return out;
}

Program finalize_full_zero(const Program& input, const CounterSet& zero) {
  const Program p = lowered(input);
  if (p.has_zero_tests()) throw Error("finalize requires a program without zero tests");
  for (const auto& n : zero) p.counter_index(n);
  Assembler a(p.counters());
  a.append(p);
  for (const auto& u : p.counters()) {
    if (zero.count(u)) continue;
    const Line h = a.begin_loop();
    a.dec(u);
    a.end_loop(h);
  }
  return a.finish(p.roles());
}

}  // namespace vassred
