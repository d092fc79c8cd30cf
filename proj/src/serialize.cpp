#include "vassred/serialize.hpp"

#include <algorithm>
#include <sstream>

#include "vassred/error.hpp"

namespace vassred {

Json to_json(const Valuation& v) {
  Json j = Json::object();
  for (const auto& [k, x] : v) j[k] = x;
  return j;
}

Json to_json(const ComputedSet& s) {
  Json finals = Json::array();
  for (const auto& v : s.finals) finals.push_back(to_json(v));
  return {{"counters", s.counters},
          {"exhaustive", s.exhaustive},
          {"finals", std::move(finals)},
          {"zero", std::vector<std::string>(s.zero_counters.begin(), s.zero_counters.end())}};
}

Json to_json(const Run& r) {
  Json j = Json::array();
  for (const auto& st : r)
    j.push_back({{"line", st.line}, {"valuation", to_json(st.valuation)}, {"zero_tests", st.zero_tests}});
  return j;
}

Json to_json(const CheckReport& r) {
  return {{"counterexample", r.counterexample ? to_json(*r.counterexample) : Json()},
          {"detail", r.detail},
          {"id", r.id},
          {"status", to_string(r.status)},
          {"truncation", r.truncation ? Json(*r.truncation) : Json()}};
}

Json to_json(const std::map<std::string, std::string>& provenance) {
  Json j = Json::object();
  for (const auto& [k, v] : provenance) j[k] = v;
  return j;
}

std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string export_vass(const Program& input, const CounterSet& zero) {
  const Program p = input.lowered() ? input : lower(input);
  if (p.has_zero_tests()) throw Error("VASS export requires a program without zero tests");
  const auto& counters = p.counters();
  const auto code = p.commands();
  std::ostringstream out;
  out << "vass " << counters.size() << "\ncounters";
  for (const auto& c : counters) out << ' ' << c;
  out << '\n';
  auto trans = [&](Line s, Line t, std::size_t idx, long long delta) {
    out << "trans " << s << ' ' << t;
    for (std::size_t i = 0; i < counters.size(); ++i) out << ' ' << (i == idx ? delta : 0);
    out << '\n';
  };
  const std::size_t none = counters.size();
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Command& c = code[i];
    const Line s = static_cast<Line>(i + 1);
    const auto amount = static_cast<long long>(c.amount);
    switch (c.op) {
      case Op::Inc:
      case Op::Add: trans(s, s + 1, c.counter, amount); break;
      case Op::Dec:
      case Op::Sub: trans(s, s + 1, c.counter, -amount); break;
      case Op::Nop: trans(s, s + 1, none, 0); break;
      case Op::Goto:
        trans(s, c.target1, none, 0);
        if (c.target2 != c.target1) trans(s, c.target2, none, 0);
        break;
      case Op::ZeroTest: break;  // excluded above
    }
  }
  std::vector<std::size_t> idx;
  for (const auto& z : zero) idx.push_back(p.counter_index(z));
  std::sort(idx.begin(), idx.end());
  out << "init 1\nfinal " << code.size() + 1 << " zero";
  for (auto i : idx) out << ' ' << i;
  out << '\n';
  return out.str();
}

}  // namespace vassred
