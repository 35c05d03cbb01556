#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flattrans/ir.hpp"
#include "flattrans/nondet.hpp"

namespace flattrans {

/// Where a rule is being applied: the first unused variable index of the
/// enclosing body, and the path of the subexpression inside it.
struct TransContext {
  VarIndex next_var = 0;
  PathView path;
};

/// One rule application. The rewrite introduces exactly the binders
/// next_var .. next_var + fresh_used - 1. `rule` names the rule that fired
/// and is filled in by `named`.
struct Rewrite {
  Expr expr;
  std::size_t fresh_used = 0;
  std::string rule;
};

/// Partial, non-deterministic rule: no values means the rule does not apply.
using Transformation = std::function<Choices<Rewrite>(const TransContext&, const Expr&)>;
/// Total deterministic rule returning nothing when it does not apply.
using DetTransformation = std::function<std::optional<Rewrite>(const TransContext&, const Expr&)>;

using SimpleRule = std::function<Choices<Expr>(const Expr&)>;

/// Lifts a context-free rule; every result uses no fresh variables.
Transformation make_t(SimpleRule rule);
DetTransformation make_t_det(std::function<std::optional<Expr>(const Expr&)> rule);

/// Parallel composition: t1's results, then t2's.
Transformation par(Transformation t1, Transformation t2);
/// Tries t1 and falls back on t2.
DetTransformation par_det(DetTransformation t1, DetTransformation t2);

/// Views a deterministic rule as a non-deterministic one with 0 or 1 values.
Transformation lift(DetTransformation t);

Transformation named(std::string name, Transformation t);
DetTransformation named_det(std::string name, DetTransformation t);

// (let x = e in e1) ? e2  =>  let x = e in (e1 ? e2)
// e1 ? (let x = e in e2)  =>  let x = e in (e1 ? e2)
Choices<Expr> or_float(const Expr& e);
// f $ x  =>  f x, for f a partial call with at least one missing argument
Choices<Expr> un_dollar(const Expr& e);
// case C of { ...; C -> e; ... }  =>  e, for constructors without arguments
Choices<Expr> case_cancel(const Expr& e);
/// Binds one non-variable argument of an application to a fresh variable.
/// One alternative per non-variable argument, leftmost first.
Choices<Rewrite> anf_step(const TransContext& ctx, const Expr& e);

std::optional<Rewrite> or_float_det(const TransContext& ctx, const Expr& e);
std::optional<Rewrite> un_dollar_det(const TransContext& ctx, const Expr& e);
std::optional<Rewrite> case_cancel_det(const TransContext& ctx, const Expr& e);
std::optional<Rewrite> anf_det(const TransContext& ctx, const Expr& e);

class UnknownRule : public std::runtime_error {
 public:
  explicit UnknownRule(std::string name)
      : std::runtime_error("unknown rule '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct RuleEntry {
  std::string name;
  Transformation rule;
  DetTransformation det_rule;
};

/// Built-in rules: "orFloat", "unDollar", "caseCancel", "anf".
const std::vector<RuleEntry>& builtin_rules();
const RuleEntry& find_rule(std::string_view name);

/// Parallel composition of the named rules, in the given order.
Transformation resolve_rules(std::span<const std::string> names);
DetTransformation resolve_det_rules(std::span<const std::string> names);

}  // namespace flattrans
