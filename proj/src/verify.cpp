#include "vassred/verify.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "vassred/error.hpp"
#include "vassred/fastgrow.hpp"

namespace vassred {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

Status overall(const std::vector<CheckReport>& reports) {
  Status s = Status::Pass;
  for (const auto& r : reports) {
    if (r.status == Status::Fail) return Status::Fail;
    if (r.status == Status::Inconclusive) s = Status::Inconclusive;
  }
  return s;
}

namespace {

std::string show(const Valuation& v) {
  std::string out;
  for (const auto& [k, x] : v) out += (out.empty() ? "" : " ") + k + "=" + std::to_string(x);
  return out;
}

Run final_only(const Valuation& v) { return Run{RunStep{0, v, 0}}; }

CheckReport fail(std::string id, std::string detail, Run witness) {
  return {std::move(id), Status::Fail, std::move(detail), std::move(witness), std::nullopt};
}

}  // namespace

CheckReport check_ratio_membership(const ComputedSet& set, const RatioSpec& ratio,
                                   std::string id) {
  const std::set<std::string> a(set.counters.begin(), set.counters.end());
  const std::set<std::string> b(ratio.counters.begin(), ratio.counters.end());
  if (a != b) throw Error("computed set and ratio range over different counters");
  for (const auto& v : set.finals)
    if (!ratio.contains(v))
      return fail(std::move(id), "final outside the ratio of " + std::to_string(ratio.B) + ": " +
                                     show(v),
                  final_only(v));
  CheckReport r{std::move(id), Status::Pass,
                std::to_string(set.finals.size()) + " finals in the ratio of " +
                    std::to_string(ratio.B),
                std::nullopt, std::nullopt};
  if (!set.exhaustive) r.truncation = "exploration truncated; membership checked on the finals found";
  return r;
}

CheckReport check_set_equality(const ComputedSet& lhs, const ComputedSet& rhs, std::string id) {
  auto missing = [](const ComputedSet& from, const ComputedSet& in) -> std::optional<Valuation> {
    for (const auto& v : from.finals)
      if (!in.finals.count(v)) return v;
    return std::nullopt;
  };
  // A final found anywhere is genuine, so it must appear in an exhaustive side.
  if (rhs.exhaustive)
    if (auto v = missing(lhs, rhs))
      return fail(std::move(id), "left final missing on the right: " + show(*v), final_only(*v));
  if (lhs.exhaustive)
    if (auto v = missing(rhs, lhs))
      return fail(std::move(id), "right final missing on the left: " + show(*v), final_only(*v));
  CheckReport r{std::move(id), Status::Pass,
                std::to_string(lhs.finals.size()) + " finals on each side", std::nullopt,
                std::nullopt};
  if (!lhs.exhaustive || !rhs.exhaustive) {
    r.status = Status::Inconclusive;
    r.detail = std::to_string(lhs.finals.size()) + " vs " + std::to_string(rhs.finals.size()) +
               " finals, consistent so far";
    r.truncation = std::string(lhs.exhaustive ? "right" : rhs.exhaustive ? "left" : "both") +
                   " side truncated";
  }
  return r;
}

InvariantPredicate ratio_invariant(const EliminationRoles& r) {
  return {{r.b, r.c, r.d, r.x, r.y},
          [](const std::vector<Value>& v) { return v[0] > 0 && v[2] == v[0] * (v[1] + v[3] + v[4]); },
          "b > 0 and d = b*(c+x+y)"};
}

namespace {

class InvariantMonitor : public RunMonitor {
 public:
  InvariantMonitor(const Program& p, const InvariantPredicate& pred,
                   const std::optional<std::vector<Line>>& checkpoints)
      : pred_(pred), check_(p.size() + 2, !checkpoints.has_value()) {
    for (const auto& n : pred.counters) index_.push_back(p.counter_index(n));
    if (checkpoints)
      for (Line l : *checkpoints)
        if (l < check_.size()) check_[l] = true;
  }
  std::size_t slots() const override { return 2; }  // violated, failed
  void start(Line line, std::span<const Value> values, std::span<Value> ann) const override {
    if (check_[line] && !holds(values)) ann[0] = 1;
  }
  // Backward gotos change no counter and leave from a line that was
  // observed already, or from inside a gadget loop where the predicate is
  // not meant to hold.  Only forward arrivals count.
  void step(Line from, Line to, std::span<const Value>, std::span<const Value> after,
            std::span<Value> ann) const override {
    if (ann[1] || !check_[to] || to <= from) return;
    const bool h = holds(after);
    if (h && ann[0]) ann[1] = 1;
    if (!h) ann[0] = 1;
  }

 private:
  bool holds(std::span<const Value> values) const {
    std::vector<Value> v;
    v.reserve(index_.size());
    for (auto i : index_) v.push_back(values[i]);
    return pred_.holds(v);
  }
  const InvariantPredicate& pred_;
  std::vector<std::size_t> index_;
  std::vector<bool> check_;
};

}  // namespace

CheckReport monitor_invariant(const Program& input, const std::vector<Valuation>& starts,
                              const InvariantPredicate& predicate, const Bounds& bounds,
                              const std::optional<std::vector<Line>>& checkpoints,
                              std::string id) {
  const Program p = input.lowered() ? input : lower(input);
  const InvariantMonitor monitor(p, predicate, checkpoints);
  ExploreOptions o;
  o.bounds = bounds;
  o.monitor = &monitor;
  const Exploration ex(p, starts, o);
  for (std::size_t n = 0; n < ex.size(); ++n)
    if (ex.annotation(n)[1])
      return fail(std::move(id), "'" + predicate.description + "' recovered after a violation",
                  ex.trace(n));
  CheckReport r{std::move(id), Status::Pass,
                std::to_string(ex.size()) + " configurations, no recovery of '" +
                    predicate.description + "'",
                std::nullopt, std::nullopt};
  if (!ex.exhaustive()) {
    r.status = Status::Inconclusive;
    r.truncation = "run tree truncated by bounds";
  }
  return r;
}

namespace {

std::optional<FlushSpan> flush_at(const std::vector<Command>& code, const Program& p, Line h) {
  if (h < 1 || h + 4 > code.size()) return std::nullopt;
  const auto& g = code[h - 1];
  const auto& f = code[h];
  const auto& e = code[h + 1];
  const auto& d = code[h + 2];
  const auto& t = code[h + 3];
  if (g.op != Op::Goto || g.target1 != h + 1 || g.target2 != h + 5) return std::nullopt;
  if (f.op != Op::Dec || e.op != Op::Inc || d.op != Op::Dec) return std::nullopt;
  if (t.op != Op::Goto || t.target1 != h || t.target2 != h) return std::nullopt;
  if (f.counter == e.counter || f.counter == d.counter || e.counter == d.counter)
    return std::nullopt;
  return FlushSpan{h, p.counters()[f.counter], p.counters()[e.counter], p.counters()[d.counter]};
}

}  // namespace

std::vector<FlushSpan> find_flush_loops(const Program& input) {
  const Program p = input.lowered() ? input : lower(input);
  const auto code = p.commands();
  std::vector<FlushSpan> out;
  for (Line h = 1; h + 4 <= code.size(); ++h)
    if (auto s = flush_at(code, p, h)) out.push_back(*s);
  return out;
}

std::vector<LoopExecution> instrument_maximality(const Program& input, const Run& run,
                                                 const std::vector<FlushSpan>& spans) {
  const Program p = input.lowered() ? input : lower(input);
  const auto code = p.commands();
  for (const auto& s : spans) {
    auto found = flush_at(code, p, s.header);
    if (!found || found->f != s.f || found->e != s.e || found->d != s.d)
      throw Error("no flush loop of the given shape at line " + std::to_string(s.header));
  }
  std::vector<LoopExecution> out;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const auto& s = spans[k];
    std::optional<LoopExecution> open;
    for (std::size_t i = 0; i < run.size(); ++i) {
      const Line at = run[i].line;
      const Line prev = i ? run[i - 1].line : 0;
      if (at == s.header && prev != s.header + 4) {
        open = LoopExecution{k, i, 0, 0, run[i].valuation.at(s.e) == 0};
      } else if (open && at == s.header + 1 && prev == s.header) {
        ++open->iterations;
      } else if (open && at == s.exit() && prev == s.header) {
        open->exit = i;
        open->maximal = open->maximal && run[i].valuation.at(s.f) == 0;
        out.push_back(*open);
        open.reset();
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LoopExecution& a, const LoopExecution& b) { return a.entry < b.entry; });
  return out;
}

namespace {

// Slots: executions of x/y macros, d and s at the open macro's entry, bad.
class AccountingMonitor : public RunMonitor {
 public:
  explicit AccountingMonitor(const Elimination& e) {
    const Program& p = e.program;
    const auto& r = p.roles();
    ix_ = p.counter_index(r.at("x"));
    iy_ = p.counter_index(r.at("y"));
    ic_ = p.counter_index(r.at("c"));
    id_ = p.counter_index(r.at("d"));
    first_.assign(p.size() + 2, -1);
    last_.assign(p.size() + 2, -1);
    spans_ = e.layout.macros;
    spans_.push_back(e.layout.set_c_macro);
    for (std::size_t i = 0; i < spans_.size(); ++i) {
      first_[spans_[i].first] = static_cast<int>(i);
      last_[spans_[i].last] = static_cast<int>(i);
    }
    set_c_ = spans_.size() - 1;
  }
  std::size_t slots() const override { return 4; }
  void start(Line line, std::span<const Value> v, std::span<Value> ann) const override {
    if (first_[line] >= 0) enter(v, ann);
  }
  void step(Line from, Line to, std::span<const Value>, std::span<const Value> after,
            std::span<Value> ann) const override {
    const int entering = first_[to];
    if (entering >= 0) {
      const auto& s = spans_[static_cast<std::size_t>(entering)];
      if (from < s.first || from > s.last) enter(after, ann);
    }
    const int leaving = last_[from];
    if (leaving >= 0 && to == from + 1) {
      if (ann[1] - after[id_] != 2 * ann[2]) ann[3] = 1;
      if (static_cast<std::size_t>(leaving) != set_c_) ++ann[0];
      ann[1] = ann[2] = 0;
    }
  }

 private:
  void enter(std::span<const Value> v, std::span<Value> ann) const {
    ann[1] = v[id_];
    ann[2] = v[ix_] + v[iy_] + v[ic_];
  }
  std::size_t ix_, iy_, ic_, id_, set_c_;
  std::vector<int> first_, last_;
  std::vector<MacroSpan> spans_;
};

}  // namespace

CheckReport check_macro_accounting(const Elimination& e, const std::vector<Valuation>& starts,
                                   std::size_t m, const Bounds& bounds, std::string id) {
  const AccountingMonitor monitor(e);
  ExploreOptions o;
  o.bounds = bounds;
  o.zero = {e.program.role("d")};
  o.monitor = &monitor;
  const Exploration ex(e.program, starts, o);
  const auto ib = e.program.counter_index(e.program.role("b"));
  const auto ic = e.program.counter_index(e.program.role("c"));
  for (auto n : ex.finals()) {
    const auto ann = ex.annotation(n);
    const auto v = ex.values(n);
    std::string why;
    if (ann[0] != m)
      why = std::to_string(ann[0]) + " x/y macro executions, expected " + std::to_string(m);
    else if (ann[3])
      why = "a macro execution did not decrease d by exactly 2s";
    else if (v[ib] != 0)
      why = "final b is not 0";
    else if (v[ic] != 0)
      why = "final c is not 0";
    if (!why.empty()) return fail(std::move(id), why, ex.trace(n));
  }
  CheckReport r{std::move(id), Status::Pass,
                std::to_string(ex.finals().size()) + " d-zeroing finals, each with " +
                    std::to_string(m) + " exact macro executions",
                std::nullopt, std::nullopt};
  if (!ex.exhaustive()) {
    r.status = Status::Inconclusive;
    r.truncation = "run space truncated by bounds";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Claim corpora

namespace {

using Reports = std::vector<CheckReport>;

CheckReport verdict(std::string id, bool ok, std::string detail, Run witness = {}) {
  if (ok) return {std::move(id), Status::Pass, std::move(detail), std::nullopt, std::nullopt};
  if (witness.empty()) witness = final_only({});
  return fail(std::move(id), std::move(detail), std::move(witness));
}

Bounds bounds_of(const ClaimOptions& o) {
  Bounds b;
  b.max_steps = o.max_steps;
  b.max_configs = o.max_configs;
  return b;
}

Reports claim_loop_example(const ClaimOptions& o) {
  const Program p = parse("counters x y z\nloop\n  dec x\n  inc y\n  add z 2\nend\ninc z\n");
  Reports out;
  const std::pair<Value, Valuation> cases[] = {
      {10, {{"x", 0}, {"y", 10}, {"z", 21}}},
      {0, {{"x", 0}, {"y", 0}, {"z", 1}}},
      {2, {{"x", 0}, {"y", 2}, {"z", 5}}},
  };
  for (const auto& [x0, expect] : cases) {
    const auto cs = computed_set(p, {{{"x", x0}}}, {"x"}, bounds_of(o));
    ComputedSet want = cs;
    want.finals = {expect};
    want.exhaustive = true;
    auto r = check_set_equality(cs, want, "loop-example/x=" + std::to_string(x0));
    out.push_back(std::move(r));
  }
  return out;
}

Reports claim_multiplier(const ClaimOptions& o) {
  Reports out;
  for (Value B : {4, 8}) {
    const auto m = build_multiplier_direct(B, {});
    Bounds b = bounds_of(o);
    b.max_steps = std::min<std::size_t>(b.max_steps, 200);
    const auto cs = computed_set(m, {{}}, {"z"}, b);
    const auto ratio = RatioSpec::make(B, "b", "c", "d", m.counters());
    out.push_back(check_ratio_membership(cs, ratio, "multiplier/B=" + std::to_string(B)));
    bool small = true;
    for (Value c = 1; c <= 3; ++c) small = small && cs.finals.count(ratio.point(c));
    out.push_back(verdict("multiplier/B=" + std::to_string(B) + "/attains", small,
                          "finals include c = 1, 2, 3"));
  }
  return out;
}

Reports claim_ackermann(const ClaimOptions&) {
  bool pow2 = true, one = true, scale = true;
  for (unsigned n = 1; n <= 10; ++n) pow2 = pow2 && ack(2, n) == (BigNat(1) << n);
  for (unsigned i = 1; i <= 4; ++i) one = one && ack(i, 1) == 2;
  for (unsigned i = 1; i <= 3; ++i)
    for (unsigned n = 1; n <= 5; ++n) scale = scale && f_value(i, 4 * n) == 4 * ack(i, n);
  return {verdict("ackermann-rescaling/A2", pow2, "A_2(n) = 2^n for n <= 10"),
          verdict("ackermann-rescaling/A(1)", one, "A_i(1) = 2 for i <= 4"),
          verdict("ackermann-rescaling/F", scale, "F_i(4n) = 4 A_i(n) for i <= 3, n <= 5")};
}

Reports claim_composition(const ClaimOptions& o) {
  const Program p = parse("counters x y\nloop\n  dec x\n  inc y\nend\n");
  const Program q = parse("counters y w\nloop\n  dec y\n  add w 2\nend\n");
  const Program pq = compose(p, q);
  const Program q_wide = compose(parse("counters x y w\n"), q);
  Reports out;
  for (Value x0 = 0; x0 <= 3; ++x0) {
    const auto first = computed_set(p, {{{"x", x0}}}, {"x"}, bounds_of(o));
    std::vector<Valuation> mid(first.finals.begin(), first.finals.end());
    auto lhs = computed_set(pq, {{{"x", x0}}}, {"x", "y"}, bounds_of(o));
    auto rhs = mid.empty() ? ComputedSet{} : computed_set(q_wide, mid, {"y"}, bounds_of(o));
    rhs.exhaustive = rhs.exhaustive && first.exhaustive;
    out.push_back(check_set_equality(lhs, rhs, "composition/x=" + std::to_string(x0)));
  }
  return out;
}

// Enumerates every complete run of `macro` from `starts`.
// `loops` are the flush loops whose joint maximality should match Δd = 2s.
CheckReport macro_equivalence(const std::string& id, const Program& macro,
                              const std::vector<Valuation>& starts,
                              const std::vector<FlushSpan>& loops, const std::string& dname,
                              const std::vector<std::string>& sum_of, std::size_t max_steps) {
  std::size_t executions = 0, exact = 0;
  std::optional<CheckReport> bad;
  bool exhaustive = true;
  for (const auto& start : starts) {
    const Value d0 = start.at(dname);
    Value s = 0;
    for (const auto& n : sum_of) s += start.count(n) ? start.at(n) : 0;
    const auto e = enumerate_runs(macro, start, max_steps, [&](const Run& run) {
      if (bad) return;
      ++executions;
      const Value paid = d0 - run.back().valuation.at(dname);
      bool maximal = true;
      for (const auto& ex : instrument_maximality(macro, run, loops))
        maximal = maximal && ex.maximal;
      if (paid > 2 * s)
        bad = fail(id, "d decreased by " + std::to_string(paid) + " > 2s", run);
      else if ((paid == 2 * s) != maximal)
        bad = fail(id, std::string("d decreased by ") + std::to_string(paid) + ", 2s = " +
                           std::to_string(2 * s) + ", loops " +
                           (maximal ? "maximal" : "not maximal"),
                   run);
      exact += paid == 2 * s;
    });
    exhaustive = exhaustive && e.exhaustive;
  }
  if (bad) return *bad;
  CheckReport r{id, Status::Pass,
                std::to_string(starts.size()) + " starts, " + std::to_string(executions) +
                    " executions, " + std::to_string(exact) + " maximal",
                std::nullopt, std::nullopt};
  if (!exhaustive) {
    r.status = Status::Inconclusive;
    r.truncation = "run enumeration hit the step bound";
  }
  return r;
}

Reports claim_zero_macro(const ClaimOptions& o) {
  Reports out;
  for (bool swap : {false, true}) {
    const ZeroMacroRoles roles = swap ? ZeroMacroRoles{"y", "x", "c", "d", "b"} : ZeroMacroRoles{};
    const Program macro = lower(build_zero_macro(roles));
    std::vector<Valuation> starts;
    for (Value t = 0; t <= 1; ++t)
      for (Value u = 0; u <= 3; ++u)
        for (Value c = 0; c <= 3; ++c)
          for (Value extra = 0; extra <= 1; ++extra) {
            const Value s = t + u + c;
            starts.push_back({{roles.tested, t},
                              {roles.partner, u},
                              {"c", c},
                              {"b", 2},
                              {"d", 2 * s + extra}});
          }
    out.push_back(macro_equivalence(std::string("zero-macro/") + (swap ? "y" : "x"), macro,
                                    starts, find_flush_loops(macro), "d", {"x", "y", "c"},
                                    o.max_steps));
  }
  return out;
}

Reports claim_set_c_to_zero(const ClaimOptions& o) {
  const Program s = lower(build_set_c_to_zero({}));
  auto loops = find_flush_loops(s);  // drain loop has another shape; four macro loops
  std::vector<Valuation> starts;
  for (Value x = 0; x <= 1; ++x)
    for (Value y = 0; y <= 1; ++y)
      for (Value c = 0; c <= 2; ++c)
        for (Value extra = 0; extra <= 1; ++extra)
          starts.push_back({{"x", x}, {"y", y}, {"c", c}, {"b", 2}, {"d", 2 * (x + y + c) + extra}});
  return {macro_equivalence("set-c-to-zero", s, starts, loops, "d", {"x", "y", "c"},
                            o.max_steps)};
}

struct CorpusEntry {
  const char* name;
  const char* text;
};

// Programs over x, y (and w) whose runs keep x + y <= 3.
const std::vector<CorpusEntry>& elimination_corpus() {
  static const std::vector<CorpusEntry> corpus = {
      {"test-x", "counters x y\nzero? x\n"},
      {"blocked", "counters x y\ninc x\nzero? x\n"},
      {"two-tests", "counters x y\ninc x\nzero? y\ndec x\nzero? x\n"},
      {"transfer", "counters x y\ninc x\ninc x\nloop\n  dec x\n  inc y\nend\nzero? x\n"},
      {"branch", "counters x y\ngoto 2 3\ninc y\nzero? y\n"},
      {"loop-test", "counters x y\nloop\n  inc x\n  zero? y\n  dec x\nend\nzero? x\n"},
      {"no-tests", "counters x y\ninc x\ngoto 3 4\ninc y\nnop\n"},
      {"extra", "counters x y w\ninc w\ninc x\nzero? y\ndec x\nzero? x\ninc w\n"},
  };
  return corpus;
}

const EliminationRoles kFresh{"x", "y", "b", "c", "d"};

std::vector<Valuation> ratio_slice(const Program& t, std::size_t m, const ClaimOptions& o) {
  const Value B = 2 * (static_cast<Value>(m) + 1);
  return RatioSpec::make(B, "b", "c", "d", t.counters(), RatioMode::Exact).slice(o.c_lo, o.c_hi);
}

Reports claim_zero_test_elimination(const ClaimOptions& o) {
  Reports out;
  for (const auto& entry : elimination_corpus()) {
    const Program p = parse(entry.text);
    const Program t = eliminate_zero_tests(p, kFresh);
    for (std::size_t m = 0; m <= 3; ++m) {
      auto lhs = oracle_computed_set(p, {{}}, {}, m, bounds_of(o));
      lhs.finals = extend_with_zero(lhs.finals, {"b", "c", "d"});
      lhs.counters = t.counters();
      lhs.zero_counters = {"d"};
      const auto rhs = computed_set(t, ratio_slice(t, m, o), {"d"}, bounds_of(o));
      out.push_back(check_set_equality(lhs, rhs,
                                       std::string("zero-test-elimination/") + entry.name +
                                           "/m=" + std::to_string(m)));
    }
  }
  return out;
}

Reports claim_macro_accounting(const ClaimOptions& o) {
  Reports out;
  for (const auto& entry : elimination_corpus()) {
    const auto e = eliminate_zero_tests_with_layout(parse(entry.text), kFresh);
    for (std::size_t m = 0; m <= 3; ++m)
      out.push_back(check_macro_accounting(e, ratio_slice(e.program, m, o), m, bounds_of(o),
                                           std::string("macro-accounting/") + entry.name +
                                               "/m=" + std::to_string(m)));
  }
  return out;
}

Reports claim_invariant(const ClaimOptions& o) {
  Reports out;
  for (const auto& entry : elimination_corpus()) {
    const auto e = eliminate_zero_tests_with_layout(parse(entry.text), kFresh);
    for (std::size_t m = 0; m <= 3; ++m)
      out.push_back(monitor_invariant(e.program, ratio_slice(e.program, m, o),
                                      ratio_invariant(kFresh), bounds_of(o), e.layout.checkpoints,
                                      std::string("invariant-monotone/") + entry.name +
                                          "/m=" + std::to_string(m)));
  }
  return out;
}

Reports claim_linear_amplifier(const ClaimOptions& o) {
  Reports out;
  for (Value l : {1, 2}) {
    const auto a = build_linear_amplifier(l, {});
    for (Value c0 = o.c_lo; c0 <= o.c_hi; ++c0) {
      const Valuation start{{"b", 4}, {"c", c0}, {"d", 4 * c0}};
      auto got = computed_set(a, {start}, {"d"}, bounds_of(o));
      ComputedSet want = got;
      want.exhaustive = true;
      want.finals = {{{"b", 0}, {"c", 0}, {"d", 0}, {"b2", 4 * l}, {"c2", c0}, {"d2", 4 * l * c0}}};
      out.push_back(check_set_equality(got, want, "linear-amplifier/l=" + std::to_string(l) +
                                                      "/c=" + std::to_string(c0)));
    }
  }
  return out;
}

// Finals of the lifted L_2 from the ratio of 4 with c = c0: Q does one
// zero test (B = 4 means m = 1), producing the ratio of 8 with c' = j, and
// its run keeps d_in + d_out <= 8j, so the budget c0 admits exactly 8j <= c0.
std::set<Valuation> expected_lift_finals(const std::vector<std::string>& counters, Value c0,
                                         const AmplifierSpec& a) {
  std::set<Valuation> out;
  for (Value j = 1; 8 * j <= c0; ++j) {
    Valuation v;
    for (const auto& n : counters) v[n] = 0;
    v[a.b_out] = 8;
    v[a.c_out] = j;
    v[a.d_out] = 8 * j;
    out.insert(v);
  }
  return out;
}

Reports claim_amplifier_lifting(const ClaimOptions& o) {
  Reports out;
  const auto base = AmplifierSpec::linear(2, {"b1", "c1", "d1", "b2", "c2", "d2"});
  const auto lifted = lift_amplifier(base, {"b", "c", "d"});
  const auto& counters = lifted.program.counters();
  const auto ratio = RatioSpec::make(8, lifted.b_out, lifted.c_out, lifted.d_out, counters);
  for (Value c0 : {Value{1}, Value{2}, Value{8}, Value{9}}) {
    const Valuation start{{"b", 4}, {"c", c0}, {"d", 4 * c0}};
    auto got = computed_set(lifted.program, {start}, {"d"}, bounds_of(o));
    const std::string tag = "amplifier-lifting/c=" + std::to_string(c0);
    out.push_back(check_ratio_membership(got, ratio, tag + "/ratio-8"));
    ComputedSet want = got;
    want.exhaustive = true;
    want.finals = expected_lift_finals(counters, c0, lifted);
    out.push_back(check_set_equality(got, want, tag + "/expected"));
  }
  out.push_back(verdict("amplifier-lifting/counters",
                        counters.size() == base.program.counters().size() + 3,
                        std::to_string(counters.size()) + " counters"));
  return out;
}

Reports claim_fk_multiplier(const ClaimOptions& o) {
  Reports out;
  for (unsigned k = 1; k <= 4; ++k) {
    const auto m = build_fk_multiplier(k, 4);
    out.push_back(verdict("fk-multiplier/counters/k=" + std::to_string(k),
                          m.counters().size() == 3 * k + 2,
                          std::to_string(m.counters().size()) + " counters"));
  }
  for (unsigned k = 1; k <= 2; ++k) {
    const auto m = build_fk_multiplier(k, 4);
    Bounds b = bounds_of(o);
    if (k == 1) b.max_counter_sum = 60;
    if (!b.max_configs) b.max_configs = 2000000;
    const auto cs = computed_set(m, {{}}, {m.role("z")}, b);
    const auto ratio = RatioSpec::make(f_value(k, 4).convert_to<Value>(), m.role("b"),
                                       m.role("c"), m.role("d"), m.counters());
    out.push_back(check_ratio_membership(cs, ratio, "fk-multiplier/ratio/k=" + std::to_string(k)));
    if (k == 1) {
      const bool hits = cs.finals.count(ratio.point(1)) && cs.finals.count(ratio.point(2));
      out.push_back(verdict("fk-multiplier/attains/k=1", hits, "finals include c = 1, 2"));
    }
  }
  return out;
}

struct Tri {
  std::optional<bool> value;  // nullopt: undecided within bounds
  std::string note;
};

Reports claim_reduction(const ClaimOptions& o) {
  static const std::vector<CorpusEntry> corpus = {
      {"test-x", "counters x y\nzero? x\n"},
      {"blocked", "counters x y\ninc x\nzero? x\n"},
      {"two-tests", "counters x y\ninc x\ndec x\nzero? x\nzero? y\n"},
      {"loop-test", "counters x y\nloop\n  zero? x\nend\n"},
      {"blocked-y", "counters x y\ninc y\nzero? y\n"},
      {"spin", "counters x y\ngoto 1 1\n"},
  };
  Reports out;
  for (const auto& entry : corpus) {
    const Program p = parse(entry.text);
    ReductionOptions ro;
    ro.k = 1;
    const auto red = reduce_halting(p, ro);
    const std::size_t m = std::stoul(red.m);
    Bounds b = bounds_of(o);
    std::string tag = std::string("reduction/") + entry.name;
    std::vector<std::string> truncated;

    // 1. p halts from 0 with at most m zero tests.
    Tri c1{false, ""};
    bool c1_exhaustive = true;
    for (std::size_t t = 0; t <= m && !*c1.value; ++t) {
      const auto w = witness_run(p, {{}}, {}, b, t);
      if (w.run) c1.value = true;
      c1_exhaustive = c1_exhaustive && w.exhaustive;
    }
    if (!*c1.value && !c1_exhaustive) {
      c1.value.reset();
      truncated.push_back("condition 1");
    }
    // 2. p L halts with exactly m tests; remember the largest x + y of a witness.
    Tri c2;
    Value witness_sum = 0;
    {
      const auto w = witness_run(red.with_zeroloop, {{}}, {}, b, m);
      if (w.run) {
        c2.value = true;
        const auto& x = red.provenance.at("x");
        const auto& y = red.provenance.at("y");
        for (const auto& st : *w.run) witness_sum = std::max(witness_sum, st.valuation.at(x) + st.valuation.at(y));
      } else if (w.exhaustive) {
        c2.value = false;
      } else {
        truncated.push_back("condition 2");
      }
    }
    // 3. (p L)* has a d-zeroing run from the ratio slice.
    Tri c3;
    bool c3_slice_exhaustive = false;
    {
      const auto& t = red.transformed;
      const auto starts = RatioSpec::make(2 * (static_cast<Value>(m) + 1), t.role("b"),
                                          t.role("c"), t.role("d"), t.counters())
                              .slice(o.c_lo, o.c_hi);
      const auto w = witness_run(t, starts, {t.role("d")}, b);
      if (w.run)
        c3.value = true;
      else if (w.exhaustive)
        c3_slice_exhaustive = true;
      else
        truncated.push_back("condition 3");
    }
    // 4. the full reduction has a {z, d}-zeroing run from 0.
    Tri c4;
    {
      Bounds b4 = b;
      b4.max_counter_sum = 8 * (m + 1) * (o.c_hi + 1);
      if (!b4.max_configs) b4.max_configs = 3000000;
      const auto w = witness_run(red.program, {{}}, red.target, b4);
      if (w.run)
        c4.value = true;
      else
        truncated.push_back("condition 4");
    }

    std::vector<std::string> mismatch;
    auto clash = [&](const char* what, const std::optional<bool>& a, const std::optional<bool>& bb) {
      if (a && bb && *a != *bb) mismatch.push_back(what);
    };
    clash("1 vs 2", c1.value, c2.value);
    clash("1 vs 3", c1.value, c3.value);
    clash("2 vs 3", c2.value, c3.value);
    clash("1 vs 4", c1.value, c4.value);
    clash("2 vs 4", c2.value, c4.value);
    if (c3_slice_exhaustive && c2.value.value_or(false) && witness_sum <= o.c_hi)
      mismatch.push_back("3 empty on a slice that covers a halting run");

    auto show3 = [](const std::optional<bool>& v) { return v ? (*v ? "yes" : "no") : "?"; };
    std::string detail = std::string("m=") + red.m + " conditions: " + show3(c1.value) + " " +
                         show3(c2.value) + " " +
                         (c3.value ? "yes" : c3_slice_exhaustive ? "no(slice)" : "?") + " " +
                         show3(c4.value);
    if (!mismatch.empty()) {
      std::string what;
      for (const auto& s : mismatch) what += (what.empty() ? "" : ", ") + s;
      out.push_back(fail(tag, detail + "; mismatch " + what, final_only({})));
      continue;
    }
    CheckReport r{tag, Status::Pass, detail, std::nullopt, std::nullopt};
    if (!truncated.empty()) {
      r.status = Status::Inconclusive;
      std::string t;
      for (const auto& s : truncated) t += (t.empty() ? "" : ", ") + s;
      r.truncation = "undecided within bounds: " + t;
    }
    out.push_back(std::move(r));
  }
  return out;
}

using ClaimFn = Reports (*)(const ClaimOptions&);

const std::vector<std::pair<std::string, ClaimFn>>& registry() {
  static const std::vector<std::pair<std::string, ClaimFn>> r = {
      {"loop-example", claim_loop_example},
      {"multiplier", claim_multiplier},
      {"ackermann-rescaling", claim_ackermann},
      {"composition", claim_composition},
      {"zero-macro", claim_zero_macro},
      {"set-c-to-zero", claim_set_c_to_zero},
      {"zero-test-elimination", claim_zero_test_elimination},
      {"macro-accounting", claim_macro_accounting},
      {"invariant-monotone", claim_invariant},
      {"linear-amplifier", claim_linear_amplifier},
      {"amplifier-lifting", claim_amplifier_lifting},
      {"fk-multiplier", claim_fk_multiplier},
      {"reduction", claim_reduction},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& claim_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

std::vector<CheckReport> run_claim(const std::string& id, const ClaimOptions& options) {
  if (options.c_lo < 1 || options.c_lo > options.c_hi) throw Error("bad c slice");
  std::vector<CheckReport> out;
  for (const auto& [name, fn] : registry()) {
    if (id != "all" && id != name) continue;
    auto r = fn(options);
    out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  if (out.empty() && id != "all") throw Error("unknown claim '" + id + "'");
  return out;
}

}  // namespace vassred
