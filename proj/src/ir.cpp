#include "vassred/ir.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>

#include "vassred/error.hpp"

namespace vassred {

bool operator==(const Loop& a, const Loop& b) { return a.body == b.body; }

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
  });
}

bool is_role_name(std::string_view s) {
  static const std::set<std::string_view> kRoles = {"z",  "b",  "c",  "d",  "b1", "c1",
                                                    "d1", "b2", "c2", "d2", "x",  "y"};
  return kRoles.count(s) != 0;
}

std::size_t surface_positions(const std::vector<Stmt>& body) {
  std::size_t n = 0;
  for (const auto& s : body) n += s.is_loop() ? 1 + surface_positions(s.loop().body) : 1;
  return n;
}

namespace {

template <class F>
void for_each_command(const std::vector<Stmt>& body, F&& f) {
  for (const auto& s : body) {
    if (s.is_loop())
      for_each_command(s.loop().body, f);
    else
      f(s.command());
  }
}

template <class F>
void for_each_command_mut(std::vector<Stmt>& body, F&& f) {
  for (auto& s : body) {
    if (s.is_loop())
      for_each_command_mut(s.loop().body, f);
    else
      f(s.command());
  }
}

void validate_roles(const std::vector<std::string>& counters, const Roles& roles) {
  std::set<std::string> bound;
  for (const auto& [role, counter] : roles) {
    if (!is_role_name(role)) throw Error("unknown role '" + role + "'");
    if (std::find(counters.begin(), counters.end(), counter) == counters.end())
      throw Error("role " + role + " bound to undeclared counter '" + counter + "'");
    if (!bound.insert(counter).second)
      throw Error("counter '" + counter + "' bound to more than one role");
  }
}

}  // namespace

Program::Program(std::vector<std::string> counters, std::vector<Stmt> body, Roles roles,
                 bool oracle)
    : counters_(std::move(counters)), body_(std::move(body)), roles_(std::move(roles)),
      oracle_(oracle) {
  std::set<std::string_view> seen;
  for (const auto& c : counters_) {
    if (!is_identifier(c)) throw Error("invalid counter name '" + c + "'");
    if (!seen.insert(c).second) throw Error("duplicate counter '" + c + "'");
  }
  validate_roles(counters_, roles_);
  const auto positions = surface_positions(body_);
  for_each_command(body_, [&](const Command& cmd) {
    if (cmd.uses_counter() && cmd.counter >= counters_.size())
      throw Error("command refers to counter index " + std::to_string(cmd.counter) +
                  " out of range");
    switch (cmd.op) {
      case Op::Inc:
      case Op::Dec:
        if (cmd.amount != 1) throw Error("inc/dec must have amount 1");
        break;
      case Op::Add:
      case Op::Sub:
        if (cmd.amount < 1) throw Error("add/sub amount must be positive");
        break;
      case Op::Goto:
        if (cmd.target1 < 1 || cmd.target1 > positions || cmd.target2 < 1 ||
            cmd.target2 > positions)
          throw Error("goto target out of range");
        break;
      case Op::ZeroTest:
        if (!oracle_) throw Error("zero test in a program not flagged oracle");
        break;
      case Op::Nop:
        break;
    }
  });
}

bool Program::lowered() const {
  return std::none_of(body_.begin(), body_.end(), [](const Stmt& s) { return s.is_loop(); });
}

bool Program::has_zero_tests() const {
  bool found = false;
  for_each_command(body_, [&](const Command& c) { found = found || c.op == Op::ZeroTest; });
  return found;
}

std::vector<Command> Program::commands() const {
  if (!lowered()) throw Error("program is not lowered");
  std::vector<Command> out;
  out.reserve(body_.size());
  for (const auto& s : body_) out.push_back(s.command());
  return out;
}

std::optional<std::size_t> Program::find_counter(std::string_view name) const {
  for (std::size_t i = 0; i < counters_.size(); ++i)
    if (counters_[i] == name) return i;
  return std::nullopt;
}

std::size_t Program::counter_index(std::string_view name) const {
  if (auto i = find_counter(name)) return *i;
  throw Error("unknown counter '" + std::string(name) + "'");
}

const std::string& Program::role(std::string_view role) const {
  auto it = roles_.find(std::string(role));
  if (it == roles_.end()) throw Error("role '" + std::string(role) + "' is not bound");
  return it->second;
}

Program Program::with_roles(Roles roles) const {
  return Program(counters_, body_, std::move(roles), oracle_);
}

Program Program::with_oracle(bool oracle) const {
  return Program(counters_, body_, roles_, oracle);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

std::optional<std::uint64_t> to_number(std::string_view s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct TargetRef {
  std::string label;  // empty when numeric
  Line number = 0;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program run() {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    std::vector<std::size_t> open_loops;  // source lines of open `loop`s
    stack_.emplace_back();
    bool header_seen = false;
    std::size_t last_line = 0;
    while (pos <= text_.size()) {
      auto nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view raw = text_.substr(pos, nl - pos);
      pos = nl + 1;
      ++lineno;
      last_line = lineno;
      if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      auto toks = tokenize(raw);
      if (toks.empty()) continue;

      if (!header_seen) {
        if (toks[0].text != "counters")
          throw ParseError(lineno, toks[0].column, "expected 'counters' header");
        for (std::size_t i = 1; i < toks.size(); ++i) {
          if (!is_identifier(toks[i].text))
            throw ParseError(lineno, toks[i].column,
                             "invalid counter name '" + std::string(toks[i].text) + "'");
          if (index_.count(std::string(toks[i].text)))
            throw ParseError(lineno, toks[i].column,
                             "duplicate counter '" + std::string(toks[i].text) + "'");
          index_.emplace(std::string(toks[i].text), counters_.size());
          counters_.emplace_back(toks[i].text);
        }
        header_seen = true;
        continue;
      }

      if (toks[0].text == "roles" && positions_ == 0 && pending_labels_.empty()) {
        parse_roles(lineno, toks);
        continue;
      }
      if (toks[0].text == "oracle" && toks.size() == 1 && positions_ == 0 &&
          pending_labels_.empty()) {
        oracle_ = true;
        continue;
      }

      std::size_t t = 0;
      while (t < toks.size() && toks[t].text.size() > 1 && toks[t].text.back() == ':') {
        auto name = toks[t].text.substr(0, toks[t].text.size() - 1);
        if (!is_identifier(name))
          throw ParseError(lineno, toks[t].column, "invalid label '" + std::string(name) + "'");
        if (labels_.count(std::string(name)) ||
            std::find(pending_labels_.begin(), pending_labels_.end(), name) !=
                pending_labels_.end())
          throw ParseError(lineno, toks[t].column, "duplicate label '" + std::string(name) + "'");
        pending_labels_.emplace_back(name);
        ++t;
      }
      if (t == toks.size()) continue;  // label-only line labels the next command

      const auto& kw = toks[t];
      const std::size_t argc = toks.size() - t - 1;
      auto arg = [&](std::size_t k) -> const Token& { return toks[t + 1 + k]; };
      auto expect_args = [&](std::size_t n) {
        if (argc != n)
          throw ParseError(lineno, kw.column,
                           "'" + std::string(kw.text) + "' expects " + std::to_string(n) +
                               " argument(s)");
      };

      if (kw.text == "end") {
        if (t != 0) throw ParseError(lineno, kw.column, "'end' cannot carry a label");
        expect_args(0);
        if (open_loops.empty()) throw ParseError(lineno, kw.column, "'end' without 'loop'");
        open_loops.pop_back();
        Loop loop{std::move(stack_.back())};
        stack_.pop_back();
        stack_.back().emplace_back(std::move(loop));
        continue;
      }

      const Line position = static_cast<Line>(++positions_);
      for (auto& l : pending_labels_) labels_.emplace(std::move(l), position);
      pending_labels_.clear();

      if (kw.text == "loop") {
        expect_args(0);
        open_loops.push_back(lineno);
        stack_.emplace_back();
        continue;
      }

      Command cmd;
      if (kw.text == "inc" || kw.text == "dec") {
        expect_args(1);
        const auto c = lookup(lineno, arg(0));
        cmd = kw.text == "inc" ? Command::inc(c) : Command::dec(c);
      } else if (kw.text == "add" || kw.text == "sub") {
        expect_args(2);
        const auto c = lookup(lineno, arg(0));
        auto k = to_number(arg(1).text);
        if (!k || *k == 0)
          throw ParseError(lineno, arg(1).column, "amount must be a positive integer");
        cmd = kw.text == "add" ? Command::add(c, *k) : Command::sub(c, *k);
      } else if (kw.text == "goto") {
        if (argc != 1 && argc != 2)
          throw ParseError(lineno, kw.column, "'goto' expects 1 or 2 targets");
        cmd = Command::jump(0, 0);
        targets_[position] = {target(lineno, arg(0)), target(lineno, arg(argc - 1))};
      } else if (kw.text == "zero?") {
        expect_args(1);
        cmd = Command::zero_test(lookup(lineno, arg(0)));
        oracle_ = true;
      } else if (kw.text == "nop") {
        expect_args(0);
        cmd = Command::nop();
      } else {
        throw ParseError(lineno, kw.column, "unknown command '" + std::string(kw.text) + "'");
      }
      stack_.back().emplace_back(cmd);
    }
    if (!header_seen) throw ParseError(last_line ? last_line : 1, 1, "missing 'counters' header");
    if (!open_loops.empty())
      throw ParseError(open_loops.back(), 1, "'loop' is never closed by 'end'");
    if (!pending_labels_.empty())
      throw ParseError(last_line, 1, "label '" + pending_labels_.front() + "' labels no command");

    auto body = std::move(stack_.front());
    Line position = 0;
    resolve(body, position);
    try {
      return Program(counters_, std::move(body), roles_, oracle_);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(1, 1, e.what());
    }
  }

 private:
  std::size_t lookup(std::size_t lineno, const Token& tok) const {
    auto it = index_.find(std::string(tok.text));
    if (it == index_.end())
      throw ParseError(lineno, tok.column, "undeclared counter '" + std::string(tok.text) + "'");
    return it->second;
  }

  TargetRef target(std::size_t lineno, const Token& tok) const {
    TargetRef ref;
    ref.line = lineno;
    ref.column = tok.column;
    if (auto n = to_number(tok.text)) {
      if (*n == 0 || *n > 0xffffffffULL)
        throw ParseError(lineno, tok.column, "goto target out of range");
      ref.number = static_cast<Line>(*n);
    } else if (is_identifier(tok.text)) {
      ref.label = std::string(tok.text);
    } else {
      throw ParseError(lineno, tok.column, "invalid goto target '" + std::string(tok.text) + "'");
    }
    return ref;
  }

  Line resolve_target(const TargetRef& ref) const {
    if (ref.label.empty()) {
      if (ref.number > positions_)
        throw ParseError(ref.line, ref.column,
                         "goto target " + std::to_string(ref.number) + " beyond last line " +
                             std::to_string(positions_));
      return ref.number;
    }
    auto it = labels_.find(ref.label);
    if (it == labels_.end())
      throw ParseError(ref.line, ref.column, "goto to unknown label '" + ref.label + "'");
    return it->second;
  }

  void resolve(std::vector<Stmt>& body, Line& position) {
    for (auto& s : body) {
      ++position;
      if (s.is_loop()) {
        resolve(s.loop().body, position);
        continue;
      }
      if (s.command().op != Op::Goto) continue;
      const auto& [t1, t2] = targets_.at(position);
      s.command().target1 = resolve_target(t1);
      s.command().target2 = resolve_target(t2);
    }
  }

  void parse_roles(std::size_t lineno, const std::vector<Token>& toks) {
    for (std::size_t i = 1; i < toks.size(); ++i) {
      auto eq = toks[i].text.find('=');
      if (eq == std::string_view::npos)
        throw ParseError(lineno, toks[i].column, "expected role=counter");
      std::string role(toks[i].text.substr(0, eq));
      std::string counter(toks[i].text.substr(eq + 1));
      if (!is_role_name(role))
        throw ParseError(lineno, toks[i].column, "unknown role '" + role + "'");
      if (!index_.count(counter))
        throw ParseError(lineno, toks[i].column + eq + 1,
                         "undeclared counter '" + counter + "'");
      if (roles_.count(role))
        throw ParseError(lineno, toks[i].column, "role '" + role + "' bound twice");
      for (const auto& [r, c] : roles_)
        if (c == counter)
          throw ParseError(lineno, toks[i].column,
                           "counter '" + counter + "' bound to roles " + r + " and " + role);
      roles_.emplace(std::move(role), std::move(counter));
    }
  }

  std::string_view text_;
  std::vector<std::string> counters_;
  std::unordered_map<std::string, std::size_t> index_;
  Roles roles_;
  bool oracle_ = false;
  std::size_t positions_ = 0;
  std::vector<std::vector<Stmt>> stack_;
  std::vector<std::string> pending_labels_;
  std::unordered_map<std::string, Line> labels_;
  std::unordered_map<Line, std::pair<TargetRef, TargetRef>> targets_;
};

void print_body(std::ostringstream& out, const Program& p, const std::vector<Stmt>& body,
                int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  for (const auto& s : body) {
    if (s.is_loop()) {
      out << indent << "loop\n";
      print_body(out, p, s.loop().body, depth + 1);
      out << indent << "end\n";
      continue;
    }
    const auto& c = s.command();
    out << indent;
    switch (c.op) {
      case Op::Inc: out << "inc " << p.counters()[c.counter]; break;
      case Op::Dec: out << "dec " << p.counters()[c.counter]; break;
      case Op::Add: out << "add " << p.counters()[c.counter] << ' ' << c.amount; break;
      case Op::Sub: out << "sub " << p.counters()[c.counter] << ' ' << c.amount; break;
      case Op::Goto: out << "goto " << c.target1 << ' ' << c.target2; break;
      case Op::ZeroTest: out << "zero? " << p.counters()[c.counter]; break;
      case Op::Nop: out << "nop"; break;
    }
    out << '\n';
  }
}

}  // namespace

Program parse(std::string_view text) { return Parser(text).run(); }

std::string pretty(const Program& p) {
  std::ostringstream out;
  out << "counters";
  for (const auto& c : p.counters()) out << ' ' << c;
  out << '\n';
  if (!p.roles().empty()) {
    out << "roles";
    for (const auto& [role, counter] : p.roles()) out << ' ' << role << '=' << counter;
    out << '\n';
  }
  if (p.oracle()) out << "oracle\n";
  print_body(out, p, p.body(), 0);
  return out.str();
}

// ---------------------------------------------------------------------------
// Lowering and composition

namespace {

// Surface position -> lowered line.  Index 0 unused.
void layout(const std::vector<Stmt>& body, Line& next, std::vector<Line>& map) {
  for (const auto& s : body) {
    map.push_back(next++);
    if (s.is_loop()) {
      layout(s.loop().body, next, map);
      ++next;  // trailer
    }
  }
}

void emit_lowered(const std::vector<Stmt>& body, const std::vector<Line>& map,
                  std::vector<Stmt>& out) {
  for (const auto& s : body) {
    if (!s.is_loop()) {
      Command c = s.command();
      if (c.op == Op::Goto) {
        c.target1 = map[c.target1];
        c.target2 = map[c.target2];
      }
      out.emplace_back(c);
      continue;
    }
    const Line header = static_cast<Line>(out.size() + 1);
    out.emplace_back(Command::jump(header + 1, 0));
    emit_lowered(s.loop().body, map, out);
    out.emplace_back(Command::jump(header, header));
    out[header - 1].command().target2 = static_cast<Line>(out.size() + 1);
  }
}

std::vector<Stmt> expand_arith(const std::vector<Stmt>& lowered) {
  std::vector<Line> start(lowered.size() + 2, 0);
  Line next = 1;
  for (std::size_t i = 0; i < lowered.size(); ++i) {
    start[i + 1] = next;
    const auto& c = lowered[i].command();
    next += (c.op == Op::Add || c.op == Op::Sub) ? static_cast<Line>(c.amount) : 1;
  }
  start[lowered.size() + 1] = next;
  std::vector<Stmt> out;
  for (const auto& s : lowered) {
    Command c = s.command();
    if (c.op == Op::Add || c.op == Op::Sub) {
      for (Value k = 0; k < c.amount; ++k)
        out.emplace_back(c.op == Op::Add ? Command::inc(c.counter) : Command::dec(c.counter));
      continue;
    }
    if (c.op == Op::Goto) {
      c.target1 = start[c.target1];
      c.target2 = start[c.target2];
    }
    out.emplace_back(c);
  }
  return out;
}

bool targets_end(const std::vector<Stmt>& lowered) {
  const auto end = static_cast<Line>(lowered.size() + 1);
  return std::any_of(lowered.begin(), lowered.end(), [&](const Stmt& s) {
    return s.command().op == Op::Goto && (s.command().target1 == end || s.command().target2 == end);
  });
}

}  // namespace

Program lower(const Program& p, LowerOptions options) {
  std::vector<Line> map{0};
  Line next = 1;
  layout(p.body(), next, map);
  std::vector<Stmt> out;
  emit_lowered(p.body(), map, out);
  if (targets_end(out)) out.emplace_back(Command::nop());
  if (options.expand_arith) {
    out = expand_arith(out);
    if (targets_end(out)) out.emplace_back(Command::nop());
  }
  return Program(p.counters(), std::move(out), p.roles(), p.oracle());
}

namespace {

void remap(std::vector<Stmt>& body, const std::vector<std::size_t>& counter_map, Line shift) {
  for_each_command_mut(body, [&](Command& c) {
    if (c.uses_counter()) c.counter = counter_map[c.counter];
    if (c.op == Op::Goto) {
      c.target1 += shift;
      c.target2 += shift;
    }
  });
}

}  // namespace

Program compose(const Program& p, const Program& q) {
  auto counters = p.counters();
  std::vector<std::size_t> counter_map;
  for (const auto& name : q.counters()) {
    auto it = std::find(counters.begin(), counters.end(), name);
    counter_map.push_back(static_cast<std::size_t>(it - counters.begin()));
    if (it == counters.end()) counters.push_back(name);
  }
  auto tail = q.body();
  remap(tail, counter_map, static_cast<Line>(p.size()));
  auto body = p.body();
  for (auto& s : tail) body.push_back(std::move(s));

  Roles roles = p.roles();
  std::set<std::string> bound;
  for (const auto& [r, c] : roles) bound.insert(c);
  for (const auto& [r, c] : q.roles())
    if (!roles.count(r) && !bound.count(c)) {
      roles.emplace(r, c);
      bound.insert(c);
    }
  return Program(std::move(counters), std::move(body), std::move(roles),
                 p.oracle() || q.oracle());
}

Program rename_counters(const Program& p, const std::map<std::string, std::string>& mapping) {
  auto counters = p.counters();
  for (auto& c : counters)
    if (auto it = mapping.find(c); it != mapping.end()) c = it->second;
  Roles roles;
  for (const auto& [r, c] : p.roles()) {
    auto it = mapping.find(c);
    roles.emplace(r, it == mapping.end() ? c : it->second);
  }
  return Program(std::move(counters), p.body(), std::move(roles), p.oracle());
}

// ---------------------------------------------------------------------------
// Assembler

Assembler::Assembler(const std::vector<std::string>& counters) {
  for (const auto& c : counters) counter(c);
}

std::size_t Assembler::counter(std::string_view name) {
  for (std::size_t i = 0; i < counters_.size(); ++i)
    if (counters_[i] == name) return i;
  counters_.emplace_back(name);
  return counters_.size() - 1;
}

Line Assembler::emit(Command c) {
  code_.push_back(c);
  return static_cast<Line>(code_.size());
}

void Assembler::patch(Line at, Line l1, Line l2) {
  if (at < 1 || at > code_.size() || code_[at - 1].op != Op::Goto)
    throw Error("patch target is not a goto");
  code_[at - 1].target1 = l1;
  code_[at - 1].target2 = l2;
}

Line Assembler::append(const Program& p) {
  const Program low = p.lowered() ? p : lower(p);
  const Line first = here();
  const Line shift = first - 1;
  std::vector<std::size_t> counter_map;
  for (const auto& name : low.counters()) counter_map.push_back(counter(name));
  for (const auto& s : low.body()) {
    Command c = s.command();
    if (c.uses_counter()) c.counter = counter_map[c.counter];
    if (c.op == Op::Goto) {
      c.target1 += shift;
      c.target2 += shift;
    }
    code_.push_back(c);
  }
  return first;
}

Line Assembler::begin_loop() { return jump(here() + 1, 0); }

void Assembler::end_loop(Line header) {
  jump(header, header);
  patch(header, header + 1, here());
}

Program Assembler::finish(Roles roles, bool oracle) {
  std::vector<Stmt> body;
  body.reserve(code_.size() + 1);
  bool zero_tests = false;
  for (const auto& c : code_) {
    zero_tests = zero_tests || c.op == Op::ZeroTest;
    body.emplace_back(c);
  }
  if (targets_end(body)) body.emplace_back(Command::nop());
  return Program(counters_, std::move(body), std::move(roles), oracle || zero_tests);
}

}  // namespace vassred
