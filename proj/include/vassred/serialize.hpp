#ifndef VASSRED_SERIALIZE_HPP
#define VASSRED_SERIALIZE_HPP

#include <map>
#include <string>

#include <json.hpp>

#include "vassred/engine.hpp"
#include "vassred/verify.hpp"

namespace vassred {

using Json = nlohmann::json;

// Canonical machine-readable forms.  Objects are key-sorted by the json
// library; arrays keep the (already canonical) order of the source.
//
//   valuation     {"<counter>": <value>, ...}
//   computed set  {"counters": [...], "exhaustive": bool,
//                  "finals": [valuation, ...], "zero": [...]}
//   run           [{"line": n, "valuation": {...}, "zero_tests": n}, ...]
//   report        {"counterexample": run|null, "detail": "...", "id": "...",
//                  "status": "pass"|"fail"|"inconclusive", "truncation": "..."|null}

Json to_json(const Valuation& v);
Json to_json(const ComputedSet& s);
Json to_json(const Run& r);
Json to_json(const CheckReport& r);
Json to_json(const std::map<std::string, std::string>& provenance);

/// Two-space indented text with a trailing newline.
std::string canonical(const Json& j);

/// Textual VASS of a lowered, zero-test-free program:
///   vass <dim>
///   counters <c1> ... <cd>
///   trans <s> <t> <v1> ... <vd>     (one per line and successor)
///   init 1
///   final <len+1> zero <i1> ...     (0-based coordinates of `zero`)
/// States are line numbers; the halting line is len+1.
std::string export_vass(const Program& p, const CounterSet& zero);

}  // namespace vassred

#endif  // VASSRED_SERIALIZE_HPP
