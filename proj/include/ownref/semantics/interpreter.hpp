#pragma once

#include "ownref/frontend/ast.hpp"
#include "ownref/frontend/desugar.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace ownref::semantics {

struct Address {
  std::uint64_t id = 0;
  bool operator==(const Address&) const = default;
};

struct Value {
  std::variant<BigInt, Address> v;

  static Value integer(BigInt n) { return Value{std::move(n)}; }
  static Value address(Address a) { return Value{a}; }
  bool is_int() const { return std::holds_alternative<BigInt>(v); }
  const BigInt& as_int() const { return std::get<BigInt>(v); }
  Address as_addr() const { return std::get<Address>(v); }
  bool operator==(const Value& o) const;
  std::string to_string() const;
};

// Addresses index into `cells`; they are never reused.
struct Heap {
  std::vector<Value> cells;
  Address alloc(Value v);
  const Value* find(Address a) const;
  Value* find(Address a);
};

struct Register {
  std::string name;
  Value value;
};

// Runtime variables are indices; refreshed names are kept for traces.
using RegisterFile = std::vector<Register>;

// Lexical scope mapping source binders to runtime registers.
struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::string source;
  std::size_t reg;
  Env next;
};

std::optional<std::size_t> lookup(const Env& env, const std::string& x);
Env extend(Env env, std::string source, std::size_t reg);

// The `e` of an enclosing `•; e` hole.
struct SeqFrame {
  const Expr* next;
  Env env;
};

// E[let y = •^ℓ in e]
struct ReturnContext {
  std::vector<SeqFrame> context;
  const Expr* call;     // the LetCall node
  Env env;
};

struct Configuration {
  Heap heap;
  RegisterFile regs;
  std::vector<ReturnContext> stack;     // back() is the most recent call
  std::vector<SeqFrame> context;        // evaluation context of the current frame
  const Expr* expr = nullptr;
  Env env;
  // Set after R-Var: `expr` (a LetCall) reads as `let y = <returned> in e`.
  std::optional<std::size_t> returned;
};

struct Outcome {
  enum class Kind { Final, AssertFail, AliasFail, OutOfFuel, Stuck };
  Kind kind = Kind::Final;
  std::optional<Value> value;
  std::string reason;
  std::uint64_t steps = 0;

  std::string to_string() const;
};

const char* outcome_name(Outcome::Kind k);

struct RunOptions {
  std::uint64_t fuel = 1'000'000;
  std::uint64_t seed = 0;
  long long nondet_min = -128;
  long long nondet_max = 127;
  std::ostream* trace = nullptr;
};

class Machine {
public:
  Machine(const Program& p, const RunOptions& opts);

  // Applies one transition rule; returns an Outcome once none applies.
  std::optional<Outcome> step();
  Outcome run();

  const Configuration& config() const { return cfg_; }
  const std::string& last_rule() const { return last_rule_; }
  std::uint64_t steps() const { return steps_; }

  // Value of a source variable in the current scope.
  std::optional<Value> value_of(const std::string& x) const;
  std::map<std::string, Value> visible_registers() const;

private:
  const Program& prog_;
  RunOptions opts_;
  Configuration cfg_;
  std::mt19937_64 rng_;
  frontend::NameSupply names_;
  std::string last_rule_;
  std::uint64_t steps_ = 0;

  std::size_t fresh_register(const std::string& source, Value v);
  Outcome stuck(std::string why);
  void trace(const char* rule);
};

Outcome run(const Program& p, const RunOptions& opts);

// Splits a non-variable expression into its Seq-context and redex: e = E[redex].
std::pair<std::vector<const Expr*>, const Expr*> decompose(const Expr& e);

bool eval_formula(const std::map<std::string, Value>& regs, const logic::Formula& f,
                  std::string* warning = nullptr);

} // namespace ownref::semantics
