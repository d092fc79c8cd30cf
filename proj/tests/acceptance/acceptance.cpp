// Acceptance run: one PASS/FAIL line per criterion.  Exits 0 once every
// criterion has been evaluated; --strict makes any FAIL a nonzero exit.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "brute.hpp"
#include "vassred/constructions.hpp"
#include "vassred/engine.hpp"
#include "vassred/fastgrow.hpp"
#include "vassred/gadgets.hpp"
#include "vassred/ir.hpp"
#include "vassred/verify.hpp"

using namespace vassred;

namespace {

// Time limits, seconds.
constexpr double kLimit1 = 1, kLimit2 = 1, kLimit3 = 10, kLimit4 = 60, kLimit5 = 5, kLimit6 = 60,
                 kLimitBuild7 = 1, kLimit8 = 1, kLimit9 = 300;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
  std::ostringstream o;
  o.precision(3);
  o << s << "s";
  return o.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Valuation zeros(const std::vector<std::string>& counters) {
  Valuation v;
  for (const auto& c : counters) v[c] = 0;
  return v;
}

// Ratio membership written out from the definition, independent of RatioSpec.
bool in_ratio(const Valuation& v, Value B, const std::string& b, const std::string& c,
              const std::string& d) {
  for (const auto& [name, x] : v)
    if (name != b && name != c && name != d && x != 0) return false;
  return v.at(b) == B && v.at(c) > 0 && v.at(d) == B * v.at(c);
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Program p = parse(read_file(std::string(VASSRED_TEST_DATA) + "/loop_example.cp"));
  const auto cs = computed_set(p, {{{"x", 10}}}, {"x"}, {100, {}, {}});
  const double t = seconds_since(t0);
  Outcome o;
  o.require(cs.exhaustive, "not exhaustive");
  o.require(cs.finals == std::set<Valuation>{{{"x", 0}, {"y", 10}, {"z", 21}}}, "wrong finals");
  o.require(t < kLimit1, "too slow");
  if (o.pass) o.detail = "finals {x=0 y=10 z=21}, exhaustive, " + fmt(t);
  return o;
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::size_t total = 0;
  for (Value B : {4, 8}) {
    const Program m = build_multiplier_direct(B, {});
    const auto cs = computed_set(m, {{}}, {"z"}, {200, {}, {}});
    total += cs.finals.size();
    for (const auto& v : cs.finals)
      o.require(in_ratio(v, B, "b", "c", "d"), "final outside the ratio of " + std::to_string(B));
    o.require(check_ratio_membership(cs, RatioSpec::make(B, "b", "c", "d", m.counters())).status !=
                  Status::Fail,
              "library membership check failed");
    for (Value c = 1; c <= 3; ++c) {
      Valuation v = zeros(m.counters());
      v["b"] = B;
      v["c"] = c;
      v["d"] = B * c;
      o.require(cs.finals.count(v) == 1, "missing c=" + std::to_string(c));
    }
  }
  const double t = seconds_since(t0);
  o.require(t < kLimit2, "too slow");
  if (o.pass) o.detail = std::to_string(total) + " finals for B=4,8, all in the ratio, c=1..3 attained, " + fmt(t);
  return o;
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const Program macro = lower(build_zero_macro({}));
  const auto loops = find_flush_loops(macro);
  Outcome o;
  o.require(loops.size() == 4, "macro does not have four flush loops");
  std::size_t starts = 0, executions = 0, maximal = 0;
  for (Value x = 0; x <= 1; ++x)
    for (Value y = 0; y <= 3; ++y)
      for (Value c = 0; c <= 3; ++c)
        for (Value extra = 0; extra <= 1; ++extra) {
          const Value s = x + y + c;
          const Value d0 = 2 * s + extra;
          ++starts;
          const auto e = enumerate_runs(
              macro, {{"x", x}, {"y", y}, {"c", c}, {"b", 2}, {"d", d0}}, 10000,
              [&](const Run& run) {
                ++executions;
                const Value d1 = run.back().valuation.at("d");
                o.require(d1 <= d0, "d increased");
                const Value paid = d0 - d1;
                o.require(paid <= 2 * s, "paid more than 2s");
                bool all = true;
                for (const auto& ex : instrument_maximality(macro, run, loops)) all = all && ex.maximal;
                o.require((paid == 2 * s) == all, "maximality does not match d paid = 2s");
                maximal += all;
              });
          o.require(e.exhaustive, "enumeration truncated");
        }
  const double t = seconds_since(t0);
  o.require(starts >= 20, "fewer than 20 starts");
  o.require(t < kLimit3, "too slow");
  if (o.pass)
    o.detail = std::to_string(starts) + " starts, " + std::to_string(executions) + " executions (" +
               std::to_string(maximal) + " maximal), exhaustive, " + fmt(t);
  return o;
}

struct Entry {
  const char* name;
  const char* text;
};

// Oracle programs of at most 8 commands, zero-testing x and y.
const std::vector<Entry> kEliminationCorpus = {
    {"test-x", "counters x y\nzero? x\n"},
    {"test-y", "counters x y\ninc y\ndec y\nzero? y\n"},
    {"blocked", "counters x y\ninc x\nzero? x\n"},
    {"two-tests", "counters x y\ninc x\nzero? y\ndec x\nzero? x\n"},
    {"transfer", "counters x y\ninc x\ninc x\nloop\n  dec x\n  inc y\nend\nzero? x\n"},
    {"branch", "counters x y\ngoto 2 3\ninc y\nzero? y\n"},
    {"loop-test", "counters x y\nloop\n  inc x\n  zero? y\n  dec x\nend\nzero? x\n"},
    {"no-tests", "counters x y\ninc x\ngoto 3 4\ninc y\nnop\n"},
    {"extra", "counters x y w\ninc w\ninc x\nzero? y\ndec x\nzero? x\ninc w\n"},
    {"add-sub", "counters x y\nadd x 2\nzero? y\nsub x 2\nzero? x\nzero? x\n"},
};

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::size_t instances = 0, nonempty = 0;
  for (const auto& entry : kEliminationCorpus) {
    const Program p = parse(entry.text);
    o.require(lower(p).size() <= 8, std::string(entry.name) + " has more than 8 commands");
    const Program t = eliminate_zero_tests(p, {});
    for (std::size_t m = 0; m <= 3; ++m) {
      ++instances;
      const std::string tag = std::string(entry.name) + " m=" + std::to_string(m);
      const auto oracle = brute::finals(p, {}, {}, 60, m);
      o.require(oracle.complete, tag + ": oracle incomplete");
      const auto lhs_engine = oracle_computed_set(p, {{}}, {}, m, {1000, {}, {}});
      o.require(lhs_engine.exhaustive && lhs_engine.finals == oracle.finals,
                tag + ": engine oracle set differs from brute force");
      const auto lhs = extend_with_zero(oracle.finals, {"b", "c", "d"});
      const Value B = 2 * (static_cast<Value>(m) + 1);
      const auto starts = RatioSpec::make(B, "b", "c", "d", t.counters()).slice(1, 3);
      const auto rhs = computed_set(t, starts, {"d"}, {100000, {}, {}});
      o.require(rhs.exhaustive, tag + ": transformed side truncated");
      o.require(rhs.finals == lhs, tag + ": sets differ");
      nonempty += !lhs.empty();
    }
  }
  const double t = seconds_since(t0);
  o.require(t < kLimit4, "too slow");
  if (o.pass)
    o.detail = std::to_string(instances) + " instances equal (" + std::to_string(nonempty) +
               " nonempty), both sides exhaustive, " + fmt(t);
  return o;
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  for (Value l : {1, 2}) {
    const Program a = build_linear_amplifier(l, {});
    for (Value c0 = 1; c0 <= 3; ++c0) {
      const Valuation start{{"b", 4}, {"c", c0}, {"d", 4 * c0}};
      const auto cs = computed_set(a, {start}, {"d"}, {10000, {}, {}});
      const std::set<Valuation> want{
          {{"b", 0}, {"c", 0}, {"d", 0}, {"b2", l * 4}, {"c2", c0}, {"d2", l * 4 * c0}}};
      const std::string tag = "l=" + std::to_string(l) + " c=" + std::to_string(c0);
      o.require(cs.exhaustive, tag + ": truncated");
      o.require(cs.finals == want, tag + ": wrong set");
      const auto br = brute::finals(a, start, {"d"}, 200);
      o.require(br.complete && br.finals == want, tag + ": brute force disagrees");
    }
  }
  const double t = seconds_since(t0);
  o.require(t < kLimit5, "too slow");
  if (o.pass) o.detail = "6 instances equal {(0,0,0,4l,c0,4l*c0)}, exhaustive, " + fmt(t);
  return o;
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const auto base = AmplifierSpec::linear(2, {"b1", "c1", "d1", "b2", "c2", "d2"});
  const auto lifted = lift_amplifier(base, {"b", "c", "d"});
  const Program& a = lifted.program;
  const Program q = lower(lifting_program(base));
  const auto i1 = q.counter_index("d1"), i2 = q.counter_index("d2");
  const Value F = f_value(2, 4).convert_to<Value>();
  std::string summary;
  // The literal slice {1, 2}, then the smallest slice where finals exist.
  for (Value c0 : {Value{1}, Value{2}, Value{8}, Value{9}}) {
    const std::string tag = "c0=" + std::to_string(c0);
    const auto cs = computed_set(a, {{{"b", 4}, {"c", c0}, {"d", 4 * c0}}}, {"d"}, {100000, {}, {}});
    for (const auto& v : cs.finals) o.require(in_ratio(v, F, "b2", "c2", "d2"), tag + ": final outside the ratio of 8");
    // Expected finals: brute force on Q with one zero test, keeping d1 + d2
    // within the budget c0 that the simulation provides.
    const auto oracle = brute::finals(q, {}, {}, 400, 1, std::nullopt,
                                      [&](const std::vector<Value>& v) { return v[i1] + v[i2] > c0; });
    o.require(oracle.complete, tag + ": oracle incomplete");
    const auto want = extend_with_zero(oracle.finals, {"b", "c", "d"});
    o.require(cs.exhaustive ? cs.finals == want : std::includes(want.begin(), want.end(), cs.finals.begin(), cs.finals.end()),
              tag + ": finals differ from the expected c' values");
    summary += " " + tag + ":" + std::to_string(cs.finals.size());
    for (const auto& v : cs.finals) summary += "(c'=" + std::to_string(v.at("c2")) + ")";
  }
  const double t = seconds_since(t0);
  o.require(t < kLimit6, "too slow");
  if (o.pass) o.detail = "finals per slice" + summary + ", all in the ratio of 8, " + fmt(t);
  return o;
}

Outcome criterion7() {
  Outcome o;
  double slowest = 0;
  std::vector<long> by_k;
  std::string sizes;
  for (unsigned k = 1; k <= 4; ++k) {
    std::vector<long> by_n;
    for (Value n = 4; n <= 16; n += 4) {
      const auto t0 = std::chrono::steady_clock::now();
      const Program m = build_fk_multiplier(k, n);
      slowest = std::max(slowest, seconds_since(t0));
      o.require(m.counters().size() == 3 * k + 2, "k=" + std::to_string(k) + ": counter count is not 3k+2");
      by_n.push_back(static_cast<long>(m.size()));
    }
    for (std::size_t i = 2; i < by_n.size(); ++i)
      o.require(by_n[i] - 2 * by_n[i - 1] + by_n[i - 2] == 0,
                "k=" + std::to_string(k) + ": size not linear in n");
    by_k.push_back(by_n[0]);
    sizes += (sizes.empty() ? "" : ",") + std::to_string(by_n[0]);
  }
  std::string second;
  bool affine = true;
  for (std::size_t i = 2; i < by_k.size(); ++i) {
    const long dd = by_k[i] - 2 * by_k[i - 1] + by_k[i - 2];
    second += (second.empty() ? "" : ",") + std::to_string(dd);
    affine = affine && dd == 0;
  }
  o.require(slowest < kLimitBuild7, "a build took over 1s");
  o.require(affine, "size not affine in k: sizes at n=4 " + sizes + ", second differences " + second);
  if (o.pass) o.detail = "3k+2 counters, linear in n, affine in k (" + sizes + ")";
  else o.detail += " (counters 3k+2 and linear in n hold)";
  return o;
}

std::uint64_t naive_ack(unsigned i, std::uint64_t n) {
  if (i == 1) return 2 * n;
  std::uint64_t v = 1;
  for (std::uint64_t k = 0; k < n; ++k) v = naive_ack(i - 1, v);
  return v;
}

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  for (unsigned n = 1; n <= 10; ++n) o.require(ack(2, n) == (BigNat(1) << n), "A_2(n) != 2^n");
  for (unsigned i = 1; i <= 4; ++i) o.require(ack(i, 1) == 2, "A_i(1) != 2");
  for (unsigned i = 1; i <= 3; ++i)
    for (unsigned n = 1; n <= 5; ++n) {
      o.require(f_value(i, 4 * n) == 4 * ack(i, n), "F_i(4n) != 4 A_i(n)");
      if (i < 3 || n <= 4) o.require(ack(i, n) == naive_ack(i, n), "A disagrees with naive recursion");
    }
  const double t = seconds_since(t0);
  o.require(t < kLimit8, "too slow");
  if (o.pass) o.detail = "all identities hold, " + fmt(t);
  return o;
}

Outcome criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const auto reports = run_claim("reduction");
  std::size_t pass = 0, inconclusive = 0;
  for (const auto& r : reports) {
    o.require(r.status != Status::Fail, r.id + ": " + r.detail);
    if (r.status == Status::Inconclusive) {
      ++inconclusive;
      o.require(r.truncation.has_value(), r.id + ": inconclusive without a truncation report");
    }
    pass += r.status == Status::Pass;
  }
  const double t = seconds_since(t0);
  o.require(t < kLimit9, "too slow");
  if (o.pass)
    o.detail = std::to_string(reports.size()) + " programs, " + std::to_string(pass) + " agree on all four, " +
               std::to_string(inconclusive) + " inconclusive with truncation reports, no mismatch, " + fmt(t);
  return o;
}

struct Invocation {
  std::string out;
  int code;
};

Invocation invoke(const std::string& args) {
  const std::string cmd = std::string("'") + VASSRED_CLI + "' " + args + " 2>&1";
  Invocation r{"", -1};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  r.code = pclose(pipe);
  return r;
}

Outcome criterion10() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "vassred_acceptance";
  fs::remove_all(root);
  fs::create_directories(root / "in");
  {
    std::ofstream(root / "in" / "zx.cp") << "counters x y\ninc x\ndec x\nzero? x\nzero? y\n";
    std::ofstream(root / "in" / "bb.cp") << "counters b x\nadd b 2\ninc x\nsub b 2\n";
  }
  const std::string in = (root / "in").string();
  const std::string data = VASSRED_TEST_DATA;
  // Commands writing into "@/" get a fresh directory per repetition.
  const std::vector<std::string> commands = {
      "build multiplier --B 8 -o @/m8.cp",
      "build amplifier --l 2 -o @/l2.cp",
      "build fk-multiplier --k 2 --n 4 -o @/fk.cp",
      "build fk-multiplier --k 3 --n 8 -o @/fk3.cp",
      "build zeroloop -o @/zl.cp",
      "transform eliminate-zt " + in + "/zx.cp -o @/t.cp",
      "transform lift " + data + "/l2.cp -o @/lift.cp",
      "transform eliminate-b " + in + "/bb.cp --b b --bound 2 -o @/eb.cp",
      "transform finalize " + data + "/loop_example.cp --zero x -o @/fin.cp",
      "reduce " + in + "/zx.cp --k 1 -o @/red.cp",
      "reduce " + in + "/zx.cp --k 3 --reuse -o @/red3.cp",
      "export " + data + "/loop_example.cp --format vass --zero x -o @/ex.vass",
      "run " + data + "/loop_example.cp --start x=10 --zero x --max-steps 100 --json",
      "witness " + data + "/loop_example_sugar.cp --start x=3 --zero x",
      "check loop-example --json",
      "check zero-macro",
      "check zero-test-elimination --json",
      "check macro-accounting",
      "check amplifier-lifting --json",
  };
  std::size_t files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::array<std::string, 2> outputs;
    std::array<std::map<std::string, std::string>, 2> written;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / ("rep" + std::to_string(rep)) / std::to_string(i);
      fs::create_directories(dir);
      std::string args = commands[i];
      for (auto at = args.find("@/"); at != std::string::npos; at = args.find("@/"))
        args.replace(at, 1, dir.string());
      const auto r = invoke(args);
      o.require(r.code == 0, "'" + commands[i] + "' failed: " + r.out.substr(0, 200));
      outputs[rep] = r.out;
      for (const auto& f : fs::directory_iterator(dir))
        written[rep][f.path().filename().string()] = read_file(f.path().string());
    }
    o.require(outputs[0] == outputs[1], "'" + commands[i] + "' output differs between runs");
    o.require(written[0] == written[1], "'" + commands[i] + "' files differ between runs");
    files += written[0].size();
  }
  if (o.pass)
    o.detail = std::to_string(commands.size()) + " commands run twice, stdout and " + std::to_string(files) +
               " written files byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::string(argv[1]) == "--strict";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"loop example reproduction", criterion1},
      {"multiplier soundness", criterion2},
      {"zero-test macro equivalence", criterion3},
      {"zero-test elimination equality", criterion4},
      {"linear amplifier", criterion5},
      {"amplifier lifting at depth 1", criterion6},
      {"fk-multiplier counters and sizes", criterion7},
      {"fast-growing values", criterion8},
      {"reduction conditions agree", criterion9},
      {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " [" << criteria[i].first
              << "] " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return strict && failed ? 1 : 0;
}
