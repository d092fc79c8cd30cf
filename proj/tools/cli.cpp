#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "vassred/constructions.hpp"
#include "vassred/engine.hpp"
#include "vassred/error.hpp"
#include "vassred/fastgrow.hpp"
#include "vassred/gadgets.hpp"
#include "vassred/ir.hpp"
#include "vassred/serialize.hpp"
#include "vassred/verify.hpp"

namespace vassred::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

Value parse_value(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s[0] == '-') throw Error("not a nonnegative integer: '" + s + "'");
  return v;
}

Valuation parse_valuation(const std::string& s) {
  Valuation v;
  for (const auto& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("expected counter=value, got '" + item + "'");
    v[item.substr(0, eq)] = parse_value(item.substr(eq + 1));
  }
  return v;
}

CounterSet parse_set(const std::string& s) {
  const auto items = split(s, ',');
  return {items.begin(), items.end()};
}

Program read_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string show(const Valuation& v) {
  std::string out;
  for (const auto& [k, x] : v) out += (out.empty() ? "" : " ") + k + "=" + std::to_string(x);
  return out;
}

Json provenance_json(const Program& p, const std::string& construction,
                     const std::map<std::string, std::string>& parameters) {
  Json roles = Json::object();
  for (const auto& [r, c] : p.roles()) roles[r] = c;
  const Program l = p.lowered() ? p : lower(p);
  return {{"construction", construction},
          {"parameters", to_json(parameters)},
          {"roles", roles},
          {"counters", p.counters()},
          {"counter_count", p.counters().size()},
          {"lines", l.size()}};
}

// Writes the program (and its sidecar) or prints it.
void emit(std::ostream& out, const Program& p, const Json& provenance, const std::string& path) {
  if (path.empty()) {
    out << pretty(p);
    return;
  }
  write_file(path, pretty(p));
  write_file(path + ".json", canonical(provenance));
  out << canonical(provenance);
}

struct ExploreFlags {
  std::string file;
  std::vector<std::string> starts;
  std::string zero;
  std::size_t max_steps = 1000;
  std::optional<Value> max_sum;
  std::optional<std::size_t> max_configs;
  std::optional<std::size_t> zt;
  std::optional<Value> ratio;
  Value c_lo = 1, c_hi = 3;
  bool oracle = false;
  bool json = false;

  void attach(CLI::App* app) {
    app->add_option("FILE", file, "program file")->required();
    app->add_option("--start", starts, "start valuation k=v,... (repeatable; default all zero)");
    app->add_option("--ratio", ratio, "start from the ratio of B over the b/c/d roles");
    app->add_option("--c-lo", c_lo, "smallest c of the ratio slice");
    app->add_option("--c-hi", c_hi, "largest c of the ratio slice");
    app->add_option("--zero", zero, "counters required to end at zero (comma list)");
    app->add_option("--max-steps", max_steps, "bound on run length");
    app->add_option("--max-sum", max_sum, "bound on the counter sum");
    app->add_option("--max-configs", max_configs, "bound on explored configurations");
    app->add_flag("--oracle", oracle, "allow zero tests");
    app->add_option("--zt", zt, "exact number of zero tests (oracle mode)");
    app->add_flag("--json", json, "canonical JSON output");
  }
  Program program() const {
    Program p = read_program(file);
    return oracle && !p.oracle() ? p.with_oracle(true) : p;
  }
  std::vector<Valuation> start_set(const Program& p) const {
    std::vector<Valuation> out;
    for (const auto& s : starts) out.push_back(parse_valuation(s));
    if (ratio) {
      const auto r = RatioSpec::make(*ratio, p.role("b"), p.role("c"), p.role("d"), p.counters());
      for (auto& v : r.slice(c_lo, c_hi)) out.push_back(std::move(v));
    }
    if (out.empty()) out.emplace_back();
    return out;
  }
  Bounds bounds() const { return {max_steps, max_sum, max_configs}; }
};

int cmd_run(const ExploreFlags& f, std::ostream& out) {
  const Program p = f.program();
  const auto starts = f.start_set(p);
  const auto zero = parse_set(f.zero);
  const ComputedSet cs = f.zt ? oracle_computed_set(p, starts, zero, *f.zt, f.bounds())
                              : computed_set(p, starts, zero, f.bounds());
  if (f.json) {
    out << canonical(to_json(cs));
  } else {
    for (const auto& v : cs.finals) out << "final " << show(v) << "\n";
    out << "finals " << cs.finals.size() << "\nexhaustive " << (cs.exhaustive ? "true" : "false")
        << "\n";
  }
  return cs.exhaustive ? kOk : kInconclusive;
}

int cmd_witness(const ExploreFlags& f, std::ostream& out) {
  const Program p = f.program();
  const auto w = witness_run(p, f.start_set(p), parse_set(f.zero), f.bounds(), f.zt);
  if (f.json) {
    out << canonical({{"exhaustive", w.exhaustive}, {"run", w.run ? to_json(*w.run) : Json()}});
  } else if (w.run) {
    for (const auto& st : *w.run) out << st.line << ": " << show(st.valuation) << "\n";
  } else {
    out << (w.exhaustive ? "no run\n" : "no run within bounds\n");
  }
  if (w.run) return kOk;
  return w.exhaustive ? kFail : kInconclusive;
}

std::string check_table(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  std::size_t width = 0;
  for (const auto& r : reports) width = std::max(width, r.id.size());
  for (const auto& r : reports) {
    std::string status = to_string(r.status);
    status.resize(12, ' ');
    std::string id = r.id;
    id.resize(width + 2, ' ');
    out << status << id << r.detail;
    if (r.truncation) out << " [" << *r.truncation << "]";
    out << "\n";
  }
  out << "overall " << to_string(overall(reports)) << " (" << reports.size() << " checks)\n";
  return out.str();
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counter programs, zero-test elimination gadgets and the hardness reduction"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* parse_cmd = app.add_subcommand("parse", "print the canonical form of a program");
  std::string parse_file;
  bool parse_lower = false, parse_expand = false;
  parse_cmd->add_option("FILE", parse_file)->required();
  parse_cmd->add_flag("--lower", parse_lower, "lower loops to gotos first");
  parse_cmd->add_flag("--expand-arith", parse_expand, "lower add/sub to unit steps");

  ExploreFlags run_flags, witness_flags;
  auto* run_cmd = app.add_subcommand("run", "computed set under bounds");
  run_flags.attach(run_cmd);
  auto* witness_cmd = app.add_subcommand("witness", "a shortest zeroing run");
  witness_flags.attach(witness_cmd);

  auto* build = app.add_subcommand("build", "emit a gadget program");
  build->require_subcommand(1);
  std::string build_out;
  build->add_option("-o,--output", build_out, "write FILE and FILE.json");
  Value mult_B = 4, amp_l = 1, fk_n = 4;
  unsigned fk_k = 1;
  std::string zl_x = "x";
  auto* b_mult = build->add_subcommand("multiplier", "M_B");
  b_mult->add_option("--B", mult_B)->required();
  auto* b_amp = build->add_subcommand("amplifier", "L_l");
  b_amp->add_option("--l", amp_l)->required();
  auto* b_fk = build->add_subcommand("fk-multiplier", "F_k(n)-multiplier");
  b_fk->add_option("--k", fk_k)->required();
  b_fk->add_option("--n", fk_n)->required();
  auto* b_zl = build->add_subcommand("zeroloop", "the oracle program L");
  b_zl->add_option("--x", zl_x);
  for (auto* s : {b_mult, b_amp, b_fk, b_zl}) s->add_option("-o,--output", build_out);

  auto* transform = app.add_subcommand("transform", "rewrite a program");
  transform->require_subcommand(1);
  std::string t_file, t_out, t_x = "x", t_y = "y", t_b = "b", t_c = "c", t_d = "d", t_zero;
  std::string lift_b = "b_", lift_c = "c_", lift_d = "d_";
  Value t_bound = 0;
  bool lift_doubled = false;
  auto* t_ezt = transform->add_subcommand("eliminate-zt", "replace zero tests on x, y");
  t_ezt->add_option("--x", t_x);
  t_ezt->add_option("--y", t_y);
  t_ezt->add_option("--b", t_b, "fresh ratio counter");
  t_ezt->add_option("--c", t_c, "fresh ratio counter");
  t_ezt->add_option("--d", t_d, "fresh ratio counter");
  auto* t_lift = transform->add_subcommand("lift", "amplifier lifting (roles b c d b2 c2 d2)");
  t_lift->add_option("--in-b", lift_b, "fresh input counter");
  t_lift->add_option("--in-c", lift_c, "fresh input counter");
  t_lift->add_option("--in-d", lift_d, "fresh input counter");
  t_lift->add_flag("--doubled", lift_doubled, "emit the amplifier twice");
  auto* t_eb = transform->add_subcommand("eliminate-b", "control-state cloning of a bounded counter");
  t_eb->add_option("--b", t_b)->required();
  t_eb->add_option("--bound", t_bound)->required();
  auto* t_fin = transform->add_subcommand("finalize", "drain every counter outside the zero set");
  t_fin->add_option("--zero", t_zero)->required();
  for (auto* s : {t_ezt, t_lift, t_eb, t_fin}) {
    s->add_option("FILE", t_file)->required();
    s->add_option("-o,--output", t_out);
  }

  auto* reduce = app.add_subcommand("reduce", "bounded halting to {z, d}-reachability");
  std::string r_file, r_out, r_x, r_y;
  unsigned r_k = 1;
  bool r_reuse = false;
  std::size_t r_bits = kDefaultMaxBits;
  reduce->add_option("FILE", r_file)->required();
  reduce->add_option("--k", r_k);
  reduce->add_flag("--reuse", r_reuse, "reuse multiplier counters (k >= 3)");
  reduce->add_option("--x", r_x);
  reduce->add_option("--y", r_y);
  reduce->add_option("--max-bits", r_bits);
  reduce->add_option("-o,--output", r_out);

  auto* check = app.add_subcommand("check", "run a claim's bounded checks (or 'all')");
  std::string c_id;
  ClaimOptions c_opts;
  bool c_json = false, c_list = false;
  check->add_option("CLAIM", c_id);
  check->add_flag("--list", c_list, "list claim ids");
  check->add_option("--c-lo", c_opts.c_lo);
  check->add_option("--c-hi", c_opts.c_hi);
  check->add_option("--max-steps", c_opts.max_steps);
  check->add_option("--max-configs", c_opts.max_configs);
  check->add_flag("--json", c_json);

  unsigned g_i = 1;
  std::string g_n;
  std::size_t g_bits = kDefaultMaxBits;
  auto* fk = app.add_subcommand("fk", "F_i(n)");
  auto* ackc = app.add_subcommand("ack", "A_i(n)");
  for (auto* s : {fk, ackc}) {
    s->add_option("--i", g_i)->required();
    s->add_option("--n", g_n)->required();
    s->add_option("--max-bits", g_bits);
  }

  auto* exp = app.add_subcommand("export", "textual VASS");
  std::string e_file, e_format = "vass", e_zero, e_out;
  exp->add_option("FILE", e_file)->required();
  exp->add_option("--format", e_format)->check(CLI::IsMember({"vass"}));
  exp->add_option("--zero", e_zero);
  exp->add_option("-o,--output", e_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*parse_cmd) {
      const Program p = read_program(parse_file);
      LowerOptions lo;
      lo.expand_arith = parse_expand;
      out << pretty(parse_lower || parse_expand ? lower(p, lo) : p);
      return kOk;
    }
    if (*run_cmd) return cmd_run(run_flags, out);
    if (*witness_cmd) return cmd_witness(witness_flags, out);
    if (*build) {
      if (*b_mult) {
        const Program p = build_multiplier_direct(mult_B, {});
        emit(out, p, provenance_json(p, "multiplier", {{"B", std::to_string(mult_B)}}), build_out);
      } else if (*b_amp) {
        const Program p = build_linear_amplifier(amp_l, {});
        emit(out, p, provenance_json(p, "amplifier", {{"l", std::to_string(amp_l)}}), build_out);
      } else if (*b_fk) {
        const Program p = build_fk_multiplier(fk_k, fk_n);
        emit(out, p,
             provenance_json(p, "fk-multiplier",
                             {{"k", std::to_string(fk_k)},
                              {"n", std::to_string(fk_n)},
                              {"B", f_value(fk_k, fk_n).str()}}),
             build_out);
      } else {
        const Program p = build_zeroloop(zl_x);
        emit(out, p, provenance_json(p, "zeroloop", {{"x", zl_x}}), build_out);
      }
      return kOk;
    }
    if (*transform) {
      const Program in = read_program(t_file);
      if (*t_ezt) {
        const Program p = eliminate_zero_tests(in, {t_x, t_y, t_b, t_c, t_d});
        emit(out, p,
             provenance_json(p, "eliminate-zt",
                             {{"source", t_file}, {"x", t_x}, {"y", t_y}, {"b", t_b}, {"c", t_c}, {"d", t_d}}),
             t_out);
      } else if (*t_lift) {
        const AmplifierSpec a{in,           in.role("b"),  in.role("c"), in.role("d"),
                              in.role("b2"), in.role("c2"), in.role("d2")};
        const auto lifted = lift_amplifier(a, {lift_b, lift_c, lift_d, lift_doubled});
        emit(out, lifted.program,
             provenance_json(lifted.program, "lift",
                             {{"source", t_file}, {"doubled", lift_doubled ? "true" : "false"}}),
             t_out);
      } else if (*t_eb) {
        const Program p = eliminate_b(in, t_b, t_bound);
        emit(out, p,
             provenance_json(p, "eliminate-b",
                             {{"source", t_file}, {"b", t_b}, {"bound", std::to_string(t_bound)}}),
             t_out);
      } else {
        const Program p = finalize_full_zero(in, parse_set(t_zero));
        emit(out, p, provenance_json(p, "finalize", {{"source", t_file}, {"zero", t_zero}}), t_out);
      }
      return kOk;
    }
    if (*reduce) {
      ReductionOptions o;
      o.k = r_k;
      o.reuse = r_reuse;
      o.x = r_x;
      o.y = r_y;
      o.max_bits = r_bits;
      const auto red = reduce_halting(read_program(r_file), o);
      auto params = red.provenance;
      params["source"] = r_file;
      Json prov = provenance_json(red.program, "reduce", params);
      prov["target"] = std::vector<std::string>(red.target.begin(), red.target.end());
      emit(out, red.program, prov, r_out);
      if (r_out.empty()) {
        out << "# target";
        for (const auto& t : red.target) out << ' ' << t;
        out << "\n";
      }
      return kOk;
    }
    if (*check) {
      if (c_list) {
        for (const auto& id : claim_ids()) out << id << "\n";
        return kOk;
      }
      if (c_id.empty()) throw Error("missing CLAIM (use --list)");
      const auto reports = run_claim(c_id, c_opts);
      if (c_json) {
        Json j = Json::array();
        for (const auto& r : reports) j.push_back(to_json(r));
        out << canonical(j);
      } else {
        out << check_table(reports);
      }
      switch (overall(reports)) {
        case Status::Pass: return kOk;
        case Status::Fail: return kFail;
        case Status::Inconclusive: return kInconclusive;
      }
    }
    if (*fk || *ackc) {
      const BigNat n(g_n);
      out << (*fk ? f_value(g_i, n, g_bits) : ack(g_i, n, g_bits)).str() << "\n";
      return kOk;
    }
    if (*exp) {
      const std::string text = export_vass(read_program(e_file), parse_set(e_zero));
      if (e_out.empty())
        out << text;
      else
        write_file(e_out, text);
      return kOk;
    }
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return kInconclusive;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {  // e.g. malformed big integers
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace vassred::cli
