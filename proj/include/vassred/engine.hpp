#ifndef VASSRED_ENGINE_HPP
#define VASSRED_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vassred/ir.hpp"

namespace vassred {

/// Total assignment of values to counters, keyed by counter name.  Start
/// valuations may omit counters, which then default to 0.
using Valuation = std::map<std::string, Value>;
using CounterSet = std::set<std::string>;

/// Truncation of the (possibly infinite) run space.  Every bound that
/// actually cuts off a configuration clears the `exhaustive` flag of the
/// result.
struct Bounds {
  std::size_t max_steps = 1000;
  std::optional<Value> max_counter_sum;
  std::optional<std::size_t> max_configs;
};

/// One state of an execution.  `values` follows the program's counter order.
struct Configuration {
  Line line = 1;
  std::vector<Value> values;
  std::size_t zero_tests = 0;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct RunStep {
  Line line = 1;
  Valuation valuation;
  std::size_t zero_tests = 0;
  friend bool operator==(const RunStep&, const RunStep&) = default;
};

/// A run from its start configuration to its last configuration; a complete
/// run ends on the halting line (program length + 1).
using Run = std::vector<RunStep>;

struct ComputedSet {
  std::vector<std::string> counters;
  CounterSet zero_counters;
  std::set<Valuation> finals;
  bool exhaustive = true;
};

/// Successor configurations of `conf`, in order (first goto target first).
/// Throws Error on a zero test unless the program is oracle-flagged.
std::vector<Configuration> step(const Program& p, const Configuration& conf);

/// Finals of the X-zeroing complete runs from `starts`.  Breadth-first by
/// step count with configuration memoisation.  The program must not contain
/// zero tests; surface programs are lowered first.
ComputedSet computed_set(const Program& p, const std::vector<Valuation>& starts,
                         const CounterSet& zero, const Bounds& bounds);

/// As computed_set, restricted to runs doing exactly `zero_tests` zero tests.
ComputedSet oracle_computed_set(const Program& p, const std::vector<Valuation>& starts,
                                const CounterSet& zero, std::size_t zero_tests,
                                const Bounds& bounds);

struct Witness {
  std::optional<Run> run;
  /// True when the search space was fully explored (or a run was found).
  bool exhaustive = true;
};

/// A shortest X-zeroing complete run, if any exists within the bounds.
/// `zero_tests` restricts oracle programs to runs with exactly that many
/// tests.
Witness witness_run(const Program& p, const std::vector<Valuation>& starts,
                    const CounterSet& zero, const Bounds& bounds,
                    std::optional<std::size_t> zero_tests = std::nullopt);

/// Observer that extends every configuration with `slots()` annotation words.
/// Annotations take part in memoisation, so a monitor sees every run of the
/// program, not only every configuration.
class RunMonitor {
 public:
  virtual ~RunMonitor() = default;
  virtual std::size_t slots() const = 0;
  virtual void start(Line line, std::span<const Value> values, std::span<Value> ann) const;
  /// `ann` arrives holding the source annotation and may be updated in place.
  virtual void step(Line from, Line to, std::span<const Value> before,
                    std::span<const Value> after, std::span<Value> ann) const = 0;
};

struct ExploreOptions {
  Bounds bounds;
  CounterSet zero;
  /// Oracle mode: runs exceeding the count are discarded, finals require
  /// exactly this many zero tests.
  std::optional<std::size_t> zero_tests;
  const RunMonitor* monitor = nullptr;
  /// Stop as soon as the first final configuration is discovered.
  bool stop_at_first_final = false;
};

/// The memoised configuration graph of one bounded exploration.  Nodes are
/// numbered in breadth-first discovery order; node depth is the length of a
/// shortest run reaching it.
class Exploration {
 public:
  Exploration(const Program& p, const std::vector<Valuation>& starts, ExploreOptions options);

  const Program& program() const { return program_; }
  std::size_t size() const { return parent_.size(); }
  Line halt_line() const { return static_cast<Line>(code_.size() + 1); }

  Line line(std::size_t node) const { return static_cast<Line>(key(node)[0]); }
  std::size_t zero_tests(std::size_t node) const { return static_cast<std::size_t>(key(node)[1]); }
  std::span<const Value> values(std::size_t node) const {
    return key(node).subspan(2, program_.counters().size());
  }
  std::span<const Value> annotation(std::size_t node) const {
    return key(node).subspan(2 + program_.counters().size());
  }
  std::size_t depth(std::size_t node) const { return depth_[node]; }
  std::optional<std::size_t> parent(std::size_t node) const;

  /// Halted, X-zeroing (and zero-test matching) nodes in discovery order.
  const std::vector<std::size_t>& finals() const { return finals_; }
  bool exhaustive() const { return exhaustive_; }

  Valuation valuation(std::size_t node) const;
  Run trace(std::size_t node) const;

 private:
  std::span<const Value> key(std::size_t node) const {
    return {arena_.data() + node * width_, width_};
  }
  void run(const std::vector<Valuation>& starts);

  Program program_;
  std::vector<Command> code_;
  ExploreOptions options_;
  std::vector<std::size_t> zero_index_;
  std::size_t width_ = 0;
  std::vector<Value> arena_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::size_t> finals_;
  bool exhaustive_ = true;
};

struct RunEnumeration {
  std::size_t complete_runs = 0;
  bool exhaustive = true;
};

/// Depth-first enumeration of every complete run (no memoisation) from one
/// start valuation; `visit` receives each run.  Intended for gadgets whose
/// run trees are small.
RunEnumeration enumerate_runs(const Program& p, const Valuation& start, std::size_t max_steps,
                              const std::function<void(const Run&)>& visit);

/// Valuation over all of `p`'s counters; throws Error on unknown names.
std::vector<Value> to_values(const Program& p, const Valuation& v);
Valuation to_valuation(const Program& p, std::span<const Value> values);

}  // namespace vassred

#endif  // VASSRED_ENGINE_HPP
