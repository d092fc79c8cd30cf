#ifndef VASSRED_VERIFY_HPP
#define VASSRED_VERIFY_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vassred/constructions.hpp"
#include "vassred/engine.hpp"
#include "vassred/gadgets.hpp"

namespace vassred {

enum class Status { Pass, Fail, Inconclusive };

std::string to_string(Status s);

/// Outcome of one bounded check.  A failing report always carries a
/// counterexample: a run, or for set-level checks the offending final as a
/// one-step run.
struct CheckReport {
  std::string id;
  Status status = Status::Pass;
  std::string detail;
  std::optional<Run> counterexample;
  /// Set when some exploration was cut off by its bounds.
  std::optional<std::string> truncation;
};

/// A finite slice of a ratio set: c ranging over [lo, hi].
struct SliceSpec {
  RatioSpec ratio;
  Value lo = 1, hi = 3;
  std::vector<Valuation> starts() const { return ratio.slice(lo, hi); }
};

/// Every final lies in the ratio set.  Throws Error if the set's counters
/// differ from the ratio's counter set.
CheckReport check_ratio_membership(const ComputedSet& set, const RatioSpec& ratio,
                                   std::string id = "ratio-membership");

/// Pass iff both sides are exhaustive and equal.  With truncation the check
/// is inconclusive unless a final of a truncated side is missing from an
/// exhaustive side, which is a definite mismatch.
CheckReport check_set_equality(const ComputedSet& lhs, const ComputedSet& rhs,
                               std::string id = "set-equality");

/// A valuation predicate over named counters.
struct InvariantPredicate {
  std::vector<std::string> counters;
  /// Receives the values of `counters`, in that order.
  std::function<bool(const std::vector<Value>&)> holds;
  std::string description;
};

/// b > 0 and d = b * (c + x + y).
InvariantPredicate ratio_invariant(const EliminationRoles& roles);

/// Explores the bounded run tree of `p` from `starts` and fails on the first
/// run in which the predicate, once false at a checkpoint, is true again at
/// a later checkpoint.  Checkpoints default to every line and are observed
/// at the start and on forward steps.
CheckReport monitor_invariant(const Program& p, const std::vector<Valuation>& starts,
                              const InvariantPredicate& predicate, const Bounds& bounds,
                              const std::optional<std::vector<Line>>& checkpoints = std::nullopt,
                              std::string id = "invariant");

/// One execution of a flush loop within a run.
struct LoopExecution {
  std::size_t span = 0;      // index into the spans argument
  std::size_t entry = 0;     // run index of the header on entry
  std::size_t exit = 0;      // run index of the line after the loop
  Value iterations = 0;
  bool maximal = false;      // e = 0 on entry and f = 0 on exit
};

/// Flush loops of a lowered program, found by shape.
std::vector<FlushSpan> find_flush_loops(const Program& p);

/// Per-execution maximality verdicts for the given flush loops along `run`.
/// Throws Error if a span does not have the flush-loop shape in `p`.
std::vector<LoopExecution> instrument_maximality(const Program& p, const Run& run,
                                                 const std::vector<FlushSpan>& spans);

/// Outcome of executing one Zero? macro in a run.
struct MacroExecution {
  Value d_paid = 0;  // initial minus final d
  Value sum = 0;     // x + y + c at entry
  bool maximal = false;
};

/// Accounting of a transformed program's d-zeroing runs: exactly `m`
/// executions of the x/y macros, each paying exactly 2s (also the final
/// Zero?(c)), and final b = c = 0.
CheckReport check_macro_accounting(const Elimination& e, const std::vector<Valuation>& starts,
                                   std::size_t m, const Bounds& bounds,
                                   std::string id = "macro-accounting");

/// Identifiers understood by run_claim, in order.
const std::vector<std::string>& claim_ids();

struct ClaimOptions {
  /// Slice of c values for ratio starts.
  Value c_lo = 1, c_hi = 3;
  std::size_t max_steps = 100000;
  std::optional<std::size_t> max_configs;
};

/// Runs the named claim over its fixed corpus; "all" runs every claim.
/// Throws Error on an unknown id.
std::vector<CheckReport> run_claim(const std::string& id, const ClaimOptions& options = {});

/// Worst status of a batch (fail > inconclusive > pass).
Status overall(const std::vector<CheckReport>& reports);

}  // namespace vassred

#endif  // VASSRED_VERIFY_HPP
