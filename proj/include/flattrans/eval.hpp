#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flattrans/ir.hpp"
#include "flattrans/nondet.hpp"

namespace flattrans {

/// Fully evaluated term: a constructor applied to values, or an unsaturated
/// partial call whose supplied arguments are values.
struct Value {
  enum class Kind : std::uint8_t { Constructor, PartialFunc, PartialCons };

  Kind kind = Kind::Constructor;
  std::string name;
  std::vector<Value> args;
  std::size_t missing = 0;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator<(const Value& a, const Value& b);
};

Value make_value(std::string constructor, std::vector<Value> args = {});
std::string to_string(const Value& v);

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalLimits {
  /// Maximum nesting of function calls.
  std::size_t max_depth = 256;
  /// Maximum evaluation steps per enumeration.
  std::size_t max_steps = 200'000;
};

/// Call-by-name evaluation without sharing. `Or` enumerates the left
/// alternative first; a case without a matching branch fails (no values).
/// `$` applies a partial call to one more argument unless the program
/// defines `$` itself. `env` maps free variables of `e` to closed
/// expressions. Throws EvalError for unbound variables, unknown functions,
/// free-variable declarations, and exceeded limits.
Choices<Value> eval(const Program& program, const Expr& e,
                    const std::map<VarIndex, Expr>& env = {}, EvalLimits limits = {});

/// True iff every call yields the same multiset of values under both
/// programs.
bool values_preserved(const Program& before, const Program& after, std::span<const Expr> calls,
                      EvalLimits limits = {});

/// True iff no let-bound expression can reach `Or` or `Free`, directly or
/// through the functions it calls.
bool has_deterministic_lets(const Program& program);

}  // namespace flattrans
