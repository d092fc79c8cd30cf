#ifndef VASSRED_CONSTRUCTIONS_HPP
#define VASSRED_CONSTRUCTIONS_HPP

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "vassred/engine.hpp"
#include "vassred/gadgets.hpp"
#include "vassred/ir.hpp"

namespace vassred {

/// A lowered flush loop `header: goto header+1 header+5; dec f; inc e;
/// dec d; goto header header`.
struct FlushSpan {
  Line header = 0;
  std::string f, e, d;
  Line exit() const { return header + 5; }
};

/// One Zero? macro inside a transformed program: lines [first, last], the
/// last being `sub b 2`.
struct MacroSpan {
  Line first = 0, last = 0;
  std::string tested;
  std::array<FlushSpan, 4> loops;
};

/// Where the pieces of P* ended up.
struct EliminationLayout {
  /// Macros replacing zero tests, in line order.
  std::vector<MacroSpan> macros;
  /// Set-c-to-zero: drain loop header and its trailing Zero?(c) macro.
  Line set_c_first = 0;
  MacroSpan set_c_macro;
  /// First line of each original command (index = original line - 1),
  /// followed by the Set-c-to-zero entry and the halting line.
  std::vector<Line> checkpoints;
};

struct Elimination {
  Program program;
  EliminationLayout layout;
};

/// Zero-test elimination P -> P*.  `p` may zero-test only roles.x and
/// roles.y, which must be counters of `p`; roles.b/c/d must be fresh.  The
/// result has p's counters followed by b, c, d and no zero tests.
Elimination eliminate_zero_tests_with_layout(const Program& p, const EliminationRoles& roles);
Program eliminate_zero_tests(const Program& p, const EliminationRoles& roles);

/// Extends valuations over p's counters with b = c = d = 0.
Valuation extend_with_zero(Valuation v, const std::vector<std::string>& fresh);
std::set<Valuation> extend_with_zero(const std::set<Valuation>& vs,
                                     const std::vector<std::string>& fresh);

/// An amplifier: a zero-test-free program with input (b, c, d) and output
/// (b', c', d') counters.
struct AmplifierSpec {
  Program program;
  std::string b, c, d;
  std::string b_out, c_out, d_out;

  /// L_l over the given counters.
  static AmplifierSpec linear(Value l, const AmplifierRoles& roles);
};

struct LiftOptions {
  /// Fresh input counters of the lifted amplifier.
  std::string b = "b_", c = "c_", d = "d_";
  /// Emit the program P twice (loop body and tail) instead of the
  /// goto-restructured form with a single copy.
  bool doubled = false;
};

/// The program Q around `a` (multiplier, loop over `P; zero? d_in; L_1;
/// zero? d_out`, final `P; zero? d_in`).  Oracle-flagged.
Program lifting_program(const AmplifierSpec& a, bool doubled = false);

/// Amplifier lifting P -> P~ = (Q)*.  Inputs become the fresh counters,
/// outputs stay.
AmplifierSpec lift_amplifier(const AmplifierSpec& a, const LiftOptions& options = {});

/// Control-state cloning: removes counter `b` by running n+1 copies of `p`,
/// copy i standing for b = i.  Runs start in copy 0 (b = 0); moves leaving
/// [0, n] enter a trap.  Layout: copies of (|p| lines + exit goto), trap,
/// exit nop.
Program eliminate_b(const Program& p, const std::string& b, Value n);

/// Counter names used by build_fk_multiplier: level j has b_j, c_j, d_j.
std::string level_counter(char role, unsigned j);

/// A_k: L_2 lifted k-1 times.  Inputs b_k, c_k, d_k; outputs b_0, c_0, d_0.
AmplifierSpec build_fk_amplifier(unsigned k);

/// F_k(n)-multiplier with 3k+2 counters: M_n on A_k's inputs, composed with
/// A_k, then b_k eliminated.  Roles z = d_k, (b, c, d) = (b_0, c_0, d_0).
Program build_fk_multiplier(unsigned k, Value n);

struct ReductionOptions {
  unsigned k = 1;
  bool reuse = false;
  /// Zero-tested counters of the input; defaults to its x/y roles, else
  /// the names "x" and "y".
  std::string x, y;
  /// Refuse when F_k(n) needs more bits than this.
  std::size_t max_bits = std::size_t{1} << 20;
};

struct ReductionOutput {
  Program program;
  CounterSet target;
  std::size_t counter_count = 0;
  /// n (rounded), m = F_k(n)/2 - 1 in decimal, and the wiring.
  std::size_t n = 0;
  std::string m;
  std::map<std::string, std::string> provenance;
  /// The intermediate programs, for evidence checks.
  Program with_zeroloop;  // p L (after renaming)
  Program transformed;    // (p L)*
  Program multiplier;
};

/// Bounded-halting to {z, d}-reachability.
ReductionOutput reduce_halting(const Program& p, const ReductionOptions& options);

/// The x-zeroing-to-all-zero reduction: drain every counter outside X.
Program finalize_full_zero(const Program& p, const CounterSet& zero);

}  // namespace vassred

#endif  // VASSRED_CONSTRUCTIONS_HPP
