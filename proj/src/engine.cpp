#include "vassred/engine.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "vassred/error.hpp"

namespace vassred {

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

Value checked_add(Value a, Value b) {
  if (a > std::numeric_limits<Value>::max() - b)
    throw ResourceLimit("counter value exceeds 64-bit range");
  return a + b;
}

// Calls emit(to, values, tested) for every successor of the command at
// `line`.  `work` is scratch storage of the same length as `values`.
template <class Emit>
void successors(const std::vector<Command>& code, Line line, std::span<const Value> values,
                bool allow_zero_tests, std::vector<Value>& work, Emit&& emit) {
  const Command& c = code[line - 1];
  auto copy = [&] { std::copy(values.begin(), values.end(), work.begin()); };
  switch (c.op) {
    case Op::Inc:
    case Op::Add:
      copy();
      work[c.counter] = checked_add(work[c.counter], c.amount);
      emit(line + 1, work, false);
      break;
    case Op::Dec:
    case Op::Sub:
      if (values[c.counter] < c.amount) break;
      copy();
      work[c.counter] -= c.amount;
      emit(line + 1, work, false);
      break;
    case Op::Goto:
      copy();
      emit(c.target1, work, false);
      if (c.target2 != c.target1) {
        copy();
        emit(c.target2, work, false);
      }
      break;
    case Op::ZeroTest:
      if (!allow_zero_tests) throw Error("zero test in a program not flagged oracle");
      if (values[c.counter] != 0) break;
      copy();
      emit(line + 1, work, true);
      break;
    case Op::Nop:
      copy();
      emit(line + 1, work, false);
      break;
  }
}

struct KeyHash {
  const std::vector<Value>* arena;
  std::size_t width;
  std::size_t operator()(std::uint32_t idx) const {
    const Value* p = arena->data() + static_cast<std::size_t>(idx) * width;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < width; ++i) {
      h ^= p[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct KeyEq {
  const std::vector<Value>* arena;
  std::size_t width;
  bool operator()(std::uint32_t a, std::uint32_t b) const {
    const Value* pa = arena->data() + static_cast<std::size_t>(a) * width;
    const Value* pb = arena->data() + static_cast<std::size_t>(b) * width;
    return std::equal(pa, pa + width, pb);
  }
};

}  // namespace

std::vector<Value> to_values(const Program& p, const Valuation& v) {
  std::vector<Value> out(p.counters().size(), 0);
  for (const auto& [name, value] : v) out[p.counter_index(name)] = value;
  return out;
}

Valuation to_valuation(const Program& p, std::span<const Value> values) {
  Valuation v;
  for (std::size_t i = 0; i < p.counters().size(); ++i) v.emplace(p.counters()[i], values[i]);
  return v;
}

std::vector<Configuration> step(const Program& p, const Configuration& conf) {
  const auto code = p.commands();
  if (conf.line < 1 || conf.line > code.size()) throw Error("configuration line out of range");
  if (conf.values.size() != p.counters().size())
    throw Error("configuration does not match the program's counters");
  std::vector<Configuration> out;
  std::vector<Value> work(conf.values.size());
  successors(code, conf.line, conf.values, p.oracle(), work,
             [&](Line to, const std::vector<Value>& vals, bool tested) {
               out.push_back({to, vals, conf.zero_tests + (tested ? 1 : 0)});
             });
  return out;
}

void RunMonitor::start(Line, std::span<const Value>, std::span<Value>) const {}

Exploration::Exploration(const Program& p, const std::vector<Valuation>& starts,
                         ExploreOptions options)
    : program_(p.lowered() ? p : lower(p)), options_(std::move(options)) {
  code_ = program_.commands();
  if (program_.has_zero_tests() && !options_.zero_tests)
    throw Error("program performs zero tests; an exact zero-test count is required");
  for (const auto& name : options_.zero) zero_index_.push_back(program_.counter_index(name));
  if (options_.bounds.max_steps == 0) throw Error("max-steps must be positive");
  const std::size_t slots = options_.monitor ? options_.monitor->slots() : 0;
  width_ = 2 + program_.counters().size() + slots;
  run(starts);
}

std::optional<std::size_t> Exploration::parent(std::size_t node) const {
  if (parent_[node] == kNoParent) return std::nullopt;
  return parent_[node];
}

Valuation Exploration::valuation(std::size_t node) const {
  return to_valuation(program_, values(node));
}

Run Exploration::trace(std::size_t node) const {
  Run run;
  for (std::optional<std::size_t> n = node; n; n = parent(*n))
    run.push_back({line(*n), valuation(*n), zero_tests(*n)});
  std::reverse(run.begin(), run.end());
  return run;
}

void Exploration::run(const std::vector<Valuation>& starts) {
  const std::size_t n = program_.counters().size();
  const Line halt = halt_line();
  const auto& bounds = options_.bounds;
  const RunMonitor* monitor = options_.monitor;

  std::unordered_set<std::uint32_t, KeyHash, KeyEq> seen(1024, KeyHash{&arena_, width_},
                                                         KeyEq{&arena_, width_});
  bool stop = false;

  auto is_final = [&](const Value* key) {
    if (key[0] != halt) return false;
    if (options_.zero_tests && key[1] != *options_.zero_tests) return false;
    return std::all_of(zero_index_.begin(), zero_index_.end(),
                       [&](std::size_t i) { return key[2 + i] == 0; });
  };

  // Appends the candidate in `scratch` unless already known or pruned.
  std::vector<Value> scratch(width_);
  auto offer = [&](std::uint32_t from, std::uint32_t depth, bool beyond_steps) {
    if (options_.zero_tests && scratch[1] > *options_.zero_tests) return;
    const auto idx = static_cast<std::uint32_t>(parent_.size());
    arena_.insert(arena_.end(), scratch.begin(), scratch.end());
    if (seen.find(idx) != seen.end()) {
      arena_.resize(arena_.size() - width_);
      return;
    }
    bool pruned = beyond_steps;
    if (bounds.max_configs && parent_.size() >= *bounds.max_configs) pruned = true;
    if (bounds.max_counter_sum) {
      Value sum = 0;
      for (std::size_t i = 0; i < n; ++i) sum = checked_add(sum, scratch[2 + i]);
      if (sum > *bounds.max_counter_sum) pruned = true;
    }
    if (pruned) {
      arena_.resize(arena_.size() - width_);
      exhaustive_ = false;
      return;
    }
    seen.insert(idx);
    parent_.push_back(from);
    depth_.push_back(depth);
    if (is_final(scratch.data())) {
      finals_.push_back(idx);
      if (options_.stop_at_first_final) stop = true;
    }
  };

  for (const auto& start : starts) {
    const auto values = to_values(program_, start);
    scratch[0] = 1;
    scratch[1] = 0;
    std::copy(values.begin(), values.end(), scratch.begin() + 2);
    std::fill(scratch.begin() + 2 + n, scratch.end(), 0);
    if (monitor)
      monitor->start(1, values, std::span<Value>(scratch.data() + 2 + n, width_ - 2 - n));
    offer(kNoParent, 0, false);
    if (stop) return;
  }

  std::vector<Value> current(width_);
  std::vector<Value> work(n);
  for (std::size_t i = 0; i < parent_.size() && !stop; ++i) {
    std::copy_n(arena_.data() + i * width_, width_, current.begin());
    const Line at = static_cast<Line>(current[0]);
    if (at == halt) continue;
    const std::uint32_t depth = depth_[i] + 1;
    const bool beyond = depth > bounds.max_steps;
    std::span<const Value> vals(current.data() + 2, n);
    successors(code_, at, vals, true, work,
               [&](Line to, const std::vector<Value>& next, bool tested) {
                 if (stop) return;
                 scratch[0] = to;
                 scratch[1] = current[1] + (tested ? 1 : 0);
                 std::copy(next.begin(), next.end(), scratch.begin() + 2);
                 std::copy(current.begin() + 2 + static_cast<std::ptrdiff_t>(n), current.end(),
                           scratch.begin() + 2 + static_cast<std::ptrdiff_t>(n));
                 if (monitor)
                   monitor->step(at, to, vals, next,
                                 std::span<Value>(scratch.data() + 2 + n, width_ - 2 - n));
                 offer(static_cast<std::uint32_t>(i), depth, beyond);
               });
  }
}

namespace {

ComputedSet collect(const Exploration& ex, const CounterSet& zero) {
  ComputedSet out;
  out.counters = ex.program().counters();
  out.zero_counters = zero;
  out.exhaustive = ex.exhaustive();
  for (auto node : ex.finals()) out.finals.insert(ex.valuation(node));
  return out;
}

}  // namespace

ComputedSet computed_set(const Program& p, const std::vector<Valuation>& starts,
                         const CounterSet& zero, const Bounds& bounds) {
  if (p.has_zero_tests())
    throw Error("computed_set requires a program without zero tests");
  ExploreOptions options;
  options.bounds = bounds;
  options.zero = zero;
  return collect(Exploration(p, starts, options), zero);
}

ComputedSet oracle_computed_set(const Program& p, const std::vector<Valuation>& starts,
                                const CounterSet& zero, std::size_t zero_tests,
                                const Bounds& bounds) {
  ExploreOptions options;
  options.bounds = bounds;
  options.zero = zero;
  options.zero_tests = zero_tests;
  return collect(Exploration(p, starts, options), zero);
}

Witness witness_run(const Program& p, const std::vector<Valuation>& starts,
                    const CounterSet& zero, const Bounds& bounds,
                    std::optional<std::size_t> zero_tests) {
  ExploreOptions options;
  options.bounds = bounds;
  options.zero = zero;
  options.zero_tests = zero_tests;
  options.stop_at_first_final = true;
  Exploration ex(p, starts, options);
  Witness w;
  if (!ex.finals().empty()) {
    w.run = ex.trace(ex.finals().front());
    w.exhaustive = true;
  } else {
    w.exhaustive = ex.exhaustive();
  }
  return w;
}

RunEnumeration enumerate_runs(const Program& p, const Valuation& start, std::size_t max_steps,
                              const std::function<void(const Run&)>& visit) {
  const Program low = p.lowered() ? p : lower(p);
  const auto code = low.commands();
  const Line halt = static_cast<Line>(code.size() + 1);
  RunEnumeration result;
  Run trace;

  std::function<void(Line, const std::vector<Value>&, std::size_t)> dfs =
      [&](Line line, const std::vector<Value>& values, std::size_t tests) {
        trace.push_back({line, to_valuation(low, values), tests});
        if (line == halt) {
          ++result.complete_runs;
          visit(trace);
        } else {
          std::vector<std::pair<Line, std::vector<Value>>> next;
          std::vector<std::size_t> tested;
          std::vector<Value> work(values.size());
          successors(code, line, values, low.oracle(), work,
                     [&](Line to, const std::vector<Value>& v, bool t) {
                       next.emplace_back(to, v);
                       tested.push_back(t ? 1 : 0);
                     });
          if (trace.size() - 1 >= max_steps) {
            if (!next.empty()) result.exhaustive = false;
          } else {
            for (std::size_t k = 0; k < next.size(); ++k)
              dfs(next[k].first, next[k].second, tests + tested[k]);
          }
        }
        trace.pop_back();
      };
  dfs(1, to_values(low, start), 0);
  return result;
}

}  // namespace vassred
