#ifndef VASSRED_GADGETS_HPP
#define VASSRED_GADGETS_HPP

#include <optional>
#include <string>
#include <vector>

#include "vassred/engine.hpp"
#include "vassred/ir.hpp"

namespace vassred {

/// `Exact` and `Relaxed` currently accept the same valuations; the flag is
/// carried so that call sites state which reading they rely on.
enum class RatioMode { Exact, Relaxed };

/// The ratio of B over counters (b, c, d): b = B, c > 0, d = b*c and every
/// other counter of `counters` is zero.
struct RatioSpec {
  Value B = 4;
  std::string b, c, d;
  std::vector<std::string> counters;
  RatioMode mode = RatioMode::Exact;

  /// Validates B (even, >= 2; a multiple of 4 when `strict`) and the counter
  /// bindings.
  static RatioSpec make(Value B, std::string b, std::string c, std::string d,
                        std::vector<std::string> counters, RatioMode mode = RatioMode::Exact,
                        bool strict = false);

  bool contains(const Valuation& v) const;
  /// The member with c = c0.
  Valuation point(Value c0) const;
  /// Members with c in [lo, hi].
  std::vector<Valuation> slice(Value lo, Value hi) const;
};

struct MultiplierRoles {
  std::string b = "b", c = "c", d = "d";
  std::optional<std::string> z = std::string("z");
};

/// `add b B; add d B; inc c; loop { add d B; inc c }`.  B must be a positive
/// multiple of 4, or any even B >= 2 when `strict` is false.
Program build_multiplier_direct(Value B, const MultiplierRoles& roles,
                                const std::vector<std::string>& extra_counters = {},
                                bool strict = true);

struct AmplifierRoles {
  std::string b = "b", c = "c", d = "d";
  std::string b_out = "b2", c_out = "c2", d_out = "d2";
};

/// Multiplies the ratio held in (b, c, d) by `l` into (b', c', d').
Program build_linear_amplifier(Value l, const AmplifierRoles& roles);

/// Counters of one zero-test macro: `tested` is checked for zero using
/// `partner` and `budget` as flush targets, paying with `d`.
struct ZeroMacroRoles {
  std::string tested = "x", partner = "y", budget = "c", d = "d", b = "b";
};

/// Four flush loops (partner->tested, budget->partner, partner->budget,
/// tested->partner), each decrementing d, followed by `sub b 2`.
Program build_zero_macro(const ZeroMacroRoles& roles);

/// The zero-tested counters x, y and the ratio counters b, c, d.
struct EliminationRoles {
  std::string x = "x", y = "y", b = "b", c = "c", d = "d";
};

/// `loop { dec c; sub d 2 }` followed by the zero-test macro on c (partner y,
/// budget x).
Program build_set_c_to_zero(const EliminationRoles& roles);

/// Oracle program `loop { dec x }; loop { zero? x }`.
Program build_zeroloop(const std::string& x);

}  // namespace vassred

#endif  // VASSRED_GADGETS_HPP
