#include <doctest.h>

#include <algorithm>

#include "brute.hpp"
#include "vassred/constructions.hpp"
#include "vassred/error.hpp"
#include "vassred/fastgrow.hpp"
#include "vassred/verify.hpp"

using namespace vassred;

namespace {

const EliminationRoles kRoles{"x", "y", "b", "c", "d"};

std::vector<Valuation> slice(const Program& t, Value B, Value lo, Value hi) {
  return RatioSpec::make(B, t.role("b"), t.role("c"), t.role("d"), t.counters()).slice(lo, hi);
}

// Oracle side of the elimination equality, by brute force on p.
std::set<Valuation> oracle_side(const Program& p, std::size_t m) {
  const auto r = brute::finals(p, {}, {}, 60, m);
  REQUIRE(r.complete);
  return extend_with_zero(r.finals, {"b", "c", "d"});
}

Valuation drop(Valuation v, const std::string& name) {
  v.erase(name);
  return v;
}

}  // namespace

TEST_CASE("eliminate_zero_tests: shape and errors") {
  const Program p = parse("counters x y w\ninc x\nzero? x\nzero? y\n");
  const auto e = eliminate_zero_tests_with_layout(p, kRoles);
  const Program& t = e.program;
  CHECK(t.counters() == std::vector<std::string>{"x", "y", "w", "b", "c", "d"});
  CHECK_FALSE(t.has_zero_tests());
  CHECK_FALSE(t.oracle());
  CHECK(e.layout.macros.size() == 2);
  CHECK(e.layout.macros[0].tested == "x");
  CHECK(e.layout.macros[1].tested == "y");
  CHECK(e.layout.checkpoints.size() == p.size() + 2);
  CHECK(e.layout.checkpoints.back() == t.size() + 1);
  CHECK(find_flush_loops(t).size() == 12);  // three macros of four loops

  CHECK_THROWS_AS(eliminate_zero_tests(parse("counters x y w\nzero? w\n"), kRoles), Error);
  CHECK_THROWS_AS(eliminate_zero_tests(parse("counters x y b\nzero? x\n"), kRoles), Error);
  CHECK_THROWS_AS(eliminate_zero_tests(parse("counters x\nzero? x\n"), kRoles), Error);
  CHECK_THROWS_AS(eliminate_zero_tests(p, {"x", "y", "b", "b", "d"}), Error);
}

TEST_CASE("eliminate_zero_tests: step 1 couples x and y updates with c") {
  const Program t = lower(eliminate_zero_tests(parse("counters x y\ninc x\ndec y\nadd x 3\n"), kRoles));
  const auto code = t.commands();
  const auto ic = t.counter_index("c");
  // inc x; dec c; dec y; inc c; add x 3; sub c 3
  CHECK(code[0] == Command::inc(t.counter_index("x")));
  CHECK(code[1] == Command::dec(ic));
  CHECK(code[2] == Command::dec(t.counter_index("y")));
  CHECK(code[3] == Command::inc(ic));
  CHECK(code[4] == Command::add(t.counter_index("x"), 3));
  CHECK(code[5] == Command::sub(ic, 3));
}

TEST_CASE("eliminate_zero_tests: equality with the oracle set on small programs") {
  SUBCASE("single zero? x, m = 1") {
    const Program p = parse("counters x y\nzero? x\n");
    const Program t = eliminate_zero_tests(p, kRoles);
    const auto rhs = computed_set(t, slice(t, 4, 1, 3), {"d"}, {400, {}, {}});
    CHECK(rhs.exhaustive);
    CHECK(rhs.finals == oracle_side(p, 1));
    CHECK(rhs.finals == std::set<Valuation>{{{"x", 0}, {"y", 0}, {"b", 0}, {"c", 0}, {"d", 0}}});
  }
  SUBCASE("no zero tests, m = 0 with the ratio of 2") {
    const Program p = parse("counters x y\ninc x\ngoto 3 4\ninc y\nnop\n");
    const Program t = eliminate_zero_tests(p, kRoles);
    const auto rhs = computed_set(t, slice(t, 2, 1, 3), {"d"}, {400, {}, {}});
    CHECK(rhs.exhaustive);
    CHECK(rhs.finals == oracle_side(p, 0));
    CHECK(rhs.finals.size() == 2);
  }
  SUBCASE("a test that never passes gives empty sets") {
    const Program p = parse("counters x y\ninc x\nzero? x\n");
    const Program t = eliminate_zero_tests(p, kRoles);
    const auto rhs = computed_set(t, slice(t, 4, 1, 3), {"d"}, {400, {}, {}});
    CHECK(rhs.exhaustive);
    CHECK(rhs.finals.empty());
    CHECK(oracle_side(p, 1).empty());
  }
  SUBCASE("wrong m gives nothing") {
    const Program p = parse("counters x y\nzero? x\nzero? y\n");
    const Program t = eliminate_zero_tests(p, kRoles);
    for (Value B : {2, 4, 8}) {
      const auto rhs = computed_set(t, slice(t, B, 1, 2), {"d"}, {400, {}, {}});
      CHECK(rhs.exhaustive);
      CHECK(rhs.finals.empty() == (B != 6));
    }
    const auto rhs = computed_set(t, slice(t, 6, 1, 2), {"d"}, {400, {}, {}});
    CHECK(rhs.finals == oracle_side(p, 2));
  }
}

TEST_CASE("extend_with_zero") {
  CHECK(extend_with_zero(Valuation{{"x", 1}}, {"b", "c"}) ==
        Valuation{{"x", 1}, {"b", 0}, {"c", 0}});
}

TEST_CASE("lift_amplifier: counters and size overhead") {
  const AmplifierRoles roles{"b1", "c1", "d1", "b2", "c2", "d2"};
  std::vector<std::size_t> overhead;
  for (Value l = 1; l <= 3; ++l) {
    const auto a = AmplifierSpec::linear(l, roles);
    const auto lifted = lift_amplifier(a, {"b", "c", "d"});
    CHECK(lifted.program.counters().size() == a.program.counters().size() + 3);
    CHECK_FALSE(lifted.program.has_zero_tests());
    CHECK(lifted.b == "b");
    CHECK(lifted.d_out == "d2");
    CHECK(lifted.program.role("c2") == "c2");
    overhead.push_back(lower(lifted.program).size() - lower(a.program).size());
  }
  // Same P shape, same overhead.
  CHECK(overhead[0] == overhead[1]);
  CHECK(overhead[1] == overhead[2]);
  CHECK_THROWS_AS(lift_amplifier(AmplifierSpec::linear(1, roles), {"b1", "c", "d"}), Error);
}

TEST_CASE("lifting program: the loop body occurs once, the doubled form twice") {
  const auto a = AmplifierSpec::linear(2, {"b1", "c1", "d1", "b2", "c2", "d2"});
  const auto count_tests = [](const Program& q) {
    const auto code = lower(q).commands();
    return std::count_if(code.begin(), code.end(), [](const Command& c) { return c.op == Op::ZeroTest; });
  };
  const Program q = lifting_program(a);
  const Program q2 = lifting_program(a, true);
  CHECK(q.oracle());
  CHECK(count_tests(q) == 2);
  CHECK(count_tests(q2) == 3);
  CHECK(lower(q2).size() > lower(q).size() + lower(a.program).size() - 5);
}

TEST_CASE("lift of L_2 from the ratio of 4 matches the brute-force oracle of Q") {
  const auto base = AmplifierSpec::linear(2, {"b1", "c1", "d1", "b2", "c2", "d2"});
  const auto lifted = lift_amplifier(base, {"b", "c", "d"});
  const Program q = lower(lifting_program(base));
  const auto i1 = q.counter_index("d1"), i2 = q.counter_index("d2");
  for (Value c0 : {Value{1}, Value{2}, Value{8}}) {
    // The lifted program's budget c0 bounds d1 + d2 along the simulated run.
    const auto oracle = brute::finals(q, {}, {}, 400, 1, std::nullopt,
                                      [&](const std::vector<Value>& v) { return v[i1] + v[i2] > c0; });
    REQUIRE(oracle.complete);
    const auto got = computed_set(lifted.program, {{{"b", 4}, {"c", c0}, {"d", 4 * c0}}}, {"d"},
                                  {100000, {}, {}});
    CHECK(got.exhaustive);
    CHECK(got.finals == extend_with_zero(oracle.finals, {"b", "c", "d"}));
    if (c0 == 8) CHECK(got.finals.size() == 1);
  }
}

TEST_CASE("eliminate_b: listed examples") {
  SUBCASE("add b 2; sub b 2 with bound 2") {
    const Program e = eliminate_b(parse("counters b\nadd b 2\nsub b 2\n"), "b", 2);
    CHECK(e.counters().empty());
    std::vector<Run> runs;
    const auto r = enumerate_runs(e, {}, 100, [&](const Run& run) { runs.push_back(run); });
    CHECK(r.exhaustive);
    REQUIRE(runs.size() == 1);
    // Copy 0's exit goto (line 3), then the shared exit nop (line 11).
    const auto& run = runs[0];
    REQUIRE(run.size() >= 3);
    CHECK(run[run.size() - 3].line == 3);
    CHECK(run[run.size() - 2].line == 11);
  }
  SUBCASE("add b 2 with bound 1 has no complete run") {
    const Program e = eliminate_b(parse("counters b\nadd b 2\n"), "b", 1);
    const auto cs = computed_set(e, {{}}, {}, {100, {}, {}});
    CHECK(cs.exhaustive);
    CHECK(cs.finals.empty());
  }
  CHECK_THROWS_AS(eliminate_b(parse("counters x\ninc x\n"), "b", 2), Error);
}

TEST_CASE("eliminate_b preserves the other counters on runs within the bound") {
  const Program p = parse(
      "counters b x y\nloop\n  inc b\n  inc x\nend\nloop\n  dec b\n  inc y\nend\ndec x\n");
  for (Value n : {1, 2, 3}) {
    const Program e = eliminate_b(p, "b", n);
    const auto ib = lower(p).counter_index("b");
    const auto want = brute::finals(p, {}, {}, 40, std::nullopt, std::nullopt,
                                    [&](const std::vector<Value>& v) { return v[ib] > n; });
    REQUIRE(want.complete);
    std::set<Valuation> projected;
    for (const auto& v : want.finals) projected.insert(drop(v, "b"));
    const auto got = computed_set(e, {{}}, {}, {1000, {}, {}});
    CHECK(got.exhaustive);
    CHECK(got.finals == projected);
  }
}

TEST_CASE("build_fk_multiplier: counters, roles and soundness") {
  for (unsigned k = 1; k <= 4; ++k) {
    const Program m = build_fk_multiplier(k, 4);
    CHECK(m.counters().size() == 3 * k + 2);
    CHECK_FALSE(m.has_zero_tests());
    CHECK(m.role("z") == level_counter('d', k));
    CHECK(m.role("c") == "c_0");
  }
  const Program m = build_fk_multiplier(1, 4);
  const auto cs = computed_set(m, {{}}, {"d_1"}, {100000, Value{40}, {}});
  const auto ratio = RatioSpec::make(8, "b_0", "c_0", "d_0", m.counters());
  CHECK(check_ratio_membership(cs, ratio).status == Status::Pass);
  CHECK(cs.finals.count(ratio.point(1)));
  CHECK(cs.finals.count(ratio.point(2)));
  CHECK_THROWS_AS(build_fk_multiplier(0, 4), Error);
  CHECK_THROWS_AS(build_fk_multiplier(1, 6), Error);
}

TEST_CASE("build_fk_multiplier: size is linear in n") {
  for (unsigned k = 1; k <= 2; ++k) {
    std::vector<long> sizes;
    for (Value n = 4; n <= 16; n += 4) sizes.push_back(static_cast<long>(build_fk_multiplier(k, n).size()));
    CHECK(sizes[1] - sizes[0] == sizes[2] - sizes[1]);
    CHECK(sizes[2] - sizes[1] == sizes[3] - sizes[2]);
  }
}

TEST_CASE("reduce_halting") {
  const Program halts = parse("counters x y\nzero? x\n");
  ReductionOptions o;
  const auto red = reduce_halting(halts, o);
  CHECK(red.n == 4);
  CHECK(red.m == "3");
  CHECK(red.counter_count == 3 * 1 + 4);
  CHECK(red.target == CounterSet{"d_0", "d_1"});
  CHECK_FALSE(red.program.has_zero_tests());
  CHECK(red.provenance.at("B") == "8");

  Bounds b{100000, Value{128}, std::size_t{2000000}};
  CHECK(witness_run(red.program, {{}}, red.target, b).run.has_value());

  const auto blocked = reduce_halting(parse("counters x y\ninc x\nzero? x\n"), o);
  CHECK_FALSE(witness_run(blocked.program, {{}}, blocked.target, b).run.has_value());

  ReductionOptions reuse;
  reuse.k = 3;
  reuse.reuse = true;
  CHECK(reduce_halting(halts, reuse).counter_count == 3 * 3 + 2);
  reuse.reuse = false;
  CHECK(reduce_halting(halts, reuse).counter_count == 3 * 3 + 4);
  reuse.k = 2;
  reuse.reuse = true;
  CHECK_THROWS_AS(reduce_halting(halts, reuse), Error);

  CHECK_THROWS_AS(reduce_halting(parse("counters u v\nzero? u\n"), o), Error);
  o.x = "u";
  o.y = "v";
  CHECK(reduce_halting(parse("counters u v\nzero? u\n"), o).counter_count == 7);
  o.max_bits = 2;
  CHECK_THROWS_AS(reduce_halting(parse("counters u v\nzero? u\n"), o), ResourceLimit);
}

TEST_CASE("finalize_full_zero") {
  const Program f = finalize_full_zero(parse("counters y\ninc y\n"), {});
  CHECK(f.counters() == std::vector<std::string>{"y"});
  CHECK(computed_set(f, {{}}, {"y"}, {100, {}, {}}).finals == std::set<Valuation>{{{"y", 0}}});

  const Program ex = parse("counters x y z\nloop\n  dec x\n  inc y\n  add z 2\nend\ninc z\n");
  const Program g = finalize_full_zero(ex, {"x"});
  CHECK(g.counters() == ex.counters());
  const auto all = computed_set(g, {{{"x", 3}}}, {"x", "y", "z"}, {1000, {}, {}});
  CHECK(all.exhaustive);
  CHECK(all.finals == std::set<Valuation>{{{"x", 0}, {"y", 0}, {"z", 0}}});
  const auto w = witness_run(g, {{{"x", 3}}}, {"x", "y", "z"}, {1000, {}, {}});
  REQUIRE(w.run);
  CHECK(w.run->size() > 0);
  CHECK_THROWS_AS(finalize_full_zero(parse("counters x\nzero? x\n"), {}), Error);
}
