#ifndef VASSRED_IR_HPP
#define VASSRED_IR_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vassred {

/// 1-based program line.  In a lowered program of length n, line n+1 is the
/// halting position.
using Line = std::uint32_t;

/// Counter value.  Counters are nonnegative; arithmetic that would leave the
/// 64-bit range raises ResourceLimit.
using Value = std::uint64_t;

enum class Op : std::uint8_t { Inc, Dec, Add, Sub, Goto, ZeroTest, Nop };

/// One primitive command.  `counter` indexes the enclosing program's counter
/// list; `amount` is the step for Inc/Dec/Add/Sub (always 1 for Inc/Dec);
/// goto targets are line numbers (surface positions before lowering).
struct Command {
  Op op = Op::Nop;
  std::size_t counter = 0;
  Value amount = 0;
  Line target1 = 0;
  Line target2 = 0;

  static Command inc(std::size_t c) { return {Op::Inc, c, 1, 0, 0}; }
  static Command dec(std::size_t c) { return {Op::Dec, c, 1, 0, 0}; }
  static Command add(std::size_t c, Value k) { return {Op::Add, c, k, 0, 0}; }
  static Command sub(std::size_t c, Value k) { return {Op::Sub, c, k, 0, 0}; }
  static Command jump(Line l1, Line l2) { return {Op::Goto, 0, 0, l1, l2}; }
  static Command zero_test(std::size_t c) { return {Op::ZeroTest, c, 0, 0, 0}; }
  static Command nop() { return {}; }

  bool uses_counter() const {
    return op != Op::Goto && op != Op::Nop;
  }
  bool increments() const { return op == Op::Inc || op == Op::Add; }
  bool decrements() const { return op == Op::Dec || op == Op::Sub; }

  friend bool operator==(const Command&, const Command&) = default;
};

struct Stmt;

/// Surface `loop ... end` block: repeat the body a nondeterministic number
/// of times.
struct Loop {
  std::vector<Stmt> body;
  friend bool operator==(const Loop& a, const Loop& b);
};

struct Stmt {
  std::variant<Command, Loop> node;

  Stmt(Command c) : node(std::move(c)) {}  // NOLINT(google-explicit-constructor)
  Stmt(Loop l) : node(std::move(l)) {}     // NOLINT(google-explicit-constructor)

  bool is_loop() const { return std::holds_alternative<Loop>(node); }
  const Command& command() const { return std::get<Command>(node); }
  Command& command() { return std::get<Command>(node); }
  const Loop& loop() const { return std::get<Loop>(node); }
  Loop& loop() { return std::get<Loop>(node); }

  friend bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }
};

/// Role name -> counter name, e.g. {"b": "b_1", "z": "d_2"}.
using Roles = std::map<std::string, std::string>;

bool is_identifier(std::string_view s);
bool is_role_name(std::string_view s);

/// Number of surface positions occupied by a statement list: one per command
/// and one per loop header, counted in textual order.
std::size_t surface_positions(const std::vector<Stmt>& body);

/// An immutable counter program.  The body may contain surface loops; a
/// program without loops is lowered and its surface positions coincide with
/// its line numbers.
class Program {
 public:
  Program() = default;

  /// Validates every invariant and throws Error on violation: identifiers and
  /// uniqueness of counters, counter indices, positive Add/Sub amounts, goto
  /// targets within [1, positions], zero tests only when `oracle` is set, and
  /// role bindings.
  Program(std::vector<std::string> counters, std::vector<Stmt> body,
          Roles roles = {}, bool oracle = false);

  const std::vector<std::string>& counters() const { return counters_; }
  const std::vector<Stmt>& body() const { return body_; }
  const Roles& roles() const { return roles_; }
  bool oracle() const { return oracle_; }

  bool lowered() const;
  bool has_zero_tests() const;

  /// Number of surface positions (= number of lines once lowered).
  std::size_t size() const { return surface_positions(body_); }

  /// Flat command list; throws Error unless the program is lowered.
  std::vector<Command> commands() const;

  std::optional<std::size_t> find_counter(std::string_view name) const;
  /// Like find_counter but throws Error naming the missing counter.
  std::size_t counter_index(std::string_view name) const;
  bool has_counter(std::string_view name) const { return find_counter(name).has_value(); }

  /// Counter bound to `role`; throws Error when the role is unset.
  const std::string& role(std::string_view role) const;

  Program with_roles(Roles roles) const;
  Program with_oracle(bool oracle) const;

  friend bool operator==(const Program&, const Program&) = default;

 private:
  std::vector<std::string> counters_;
  std::vector<Stmt> body_;
  Roles roles_;
  bool oracle_ = false;
};

/// Parses the `.cp` text format.  Throws ParseError.
Program parse(std::string_view text);

/// Canonical text form; parse(pretty(p)) == p.
std::string pretty(const Program& p);

struct LowerOptions {
  /// Expand `add x k` / `sub x k` into k unit steps.
  bool expand_arith = false;
};

/// Replaces every loop by header/trailer gotos and appends a nop when a loop
/// closes the program.
Program lower(const Program& p, LowerOptions options = {});

/// Concatenation with goto re-numbering of the second operand.  Counter set
/// is the union (first operand's order, then new counters of the second);
/// roles of the first operand take precedence.
Program compose(const Program& p, const Program& q);

/// Renames counters (and role bindings).  Names absent from `mapping` are
/// kept; the result must still have pairwise distinct names.
Program rename_counters(const Program& p, const std::map<std::string, std::string>& mapping);

/// Emits lowered programs line by line.  Counters are referenced by name and
/// registered on first use; appended programs are re-numbered and their
/// counters matched by name.
class Assembler {
 public:
  Assembler() = default;
  explicit Assembler(const std::vector<std::string>& counters);

  std::size_t counter(std::string_view name);

  /// The line the next emitted command will occupy.
  Line here() const { return static_cast<Line>(code_.size() + 1); }

  Line emit(Command c);
  Line inc(std::string_view c) { return emit(Command::inc(counter(c))); }
  Line dec(std::string_view c) { return emit(Command::dec(counter(c))); }
  Line add(std::string_view c, Value k) { return emit(Command::add(counter(c), k)); }
  Line sub(std::string_view c, Value k) { return emit(Command::sub(counter(c), k)); }
  Line zero_test(std::string_view c) { return emit(Command::zero_test(counter(c))); }
  Line nop() { return emit(Command::nop()); }
  Line jump(Line l1, Line l2) { return emit(Command::jump(l1, l2)); }

  /// Re-targets a previously emitted goto.
  void patch(Line at, Line l1, Line l2);

  /// Appends `p` (lowered first if needed); returns the line of its first
  /// command.
  Line append(const Program& p);

  /// Lowered loop skeleton: begin_loop emits the header, end_loop the
  /// trailer and fixes the header's exit target.
  Line begin_loop();
  void end_loop(Line header);

  /// Appends a nop if some goto targets the line after the last command.
  Program finish(Roles roles = {}, bool oracle = false);

  const std::vector<std::string>& counters() const { return counters_; }

 private:
  std::vector<std::string> counters_;
  std::vector<Command> code_;
};

}  // namespace vassred

#endif  // VASSRED_IR_HPP
