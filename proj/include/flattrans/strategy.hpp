#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flattrans/ir.hpp"
#include "flattrans/nondet.hpp"
#include "flattrans/transforms.hpp"

namespace flattrans {

inline constexpr std::size_t kDefaultFuel = 1'000'000;

enum class StrategyKind { Chaotic, Mixed, Deterministic };

std::optional<StrategyKind> parse_strategy(std::string_view name);
std::string_view strategy_name(StrategyKind kind);

struct TraceStep {
  std::string function_name;
  std::string rule_name;
  Path path;
  std::size_t step_index = 0;
};

struct FunctionStats {
  std::string name;
  std::size_t rewrites = 0;
  VarIndex next_var = 0;
};

struct RunReport {
  std::vector<FunctionStats> functions;
  std::chrono::nanoseconds elapsed{0};
  bool traced = false;
  std::vector<TraceStep> trace;

  std::size_t total_rewrites() const;
  const FunctionStats* find(std::string_view function_name) const;

  /// Appends `other` as the later part of a run: rewrites of functions with
  /// the same name are summed, next_var is taken from `other`, and its trace
  /// steps are renumbered to follow this one.
  void merge(const RunReport& other);
};

class FuelExhausted : public std::runtime_error {
 public:
  FuelExhausted(std::string function_name, std::size_t fuel);
  const std::string& function_name() const { return function_name_; }
  std::size_t fuel() const { return fuel_; }

 private:
  std::string function_name_;
  std::size_t fuel_;
};

struct StrategyOptions {
  std::size_t fuel = kDefaultFuel;
  bool trace = false;
  /// Label used in reports and traces.
  std::string function_name;
  /// First fresh variable; defaults to new_var of the input.
  std::optional<VarIndex> next_var;
};

struct StrategyResult {
  Expr expr;
  RunReport report;
};

struct SubExpr {
  Path path;
  Expr expr;
};

/// The whole expression first, then the subexpressions of each child in
/// child-index order.
Choices<SubExpr> sub_exp_of(const Expr& e);

/// `e` with the subexpression at `path` replaced. Throws InvalidPath.
Expr replace(const Expr& e, PathView path, Expr replacement);

/// One past the largest variable index in `e`; 0 when there is none.
VarIndex new_var(const Expr& e);

/// Repeatedly picks the first (subexpression, rule result) pair in
/// enumeration order and rewrites it, restarting from the root each time.
StrategyResult transform_chaotic(const Transformation& t, const Expr& e,
                                 const StrategyOptions& options = {});

/// Bottom-up passes with retry at each node until a pass rewrites nothing.
StrategyResult transform_det(const DetTransformation& t, const Expr& e,
                             const StrategyOptions& options = {});

/// As transform_det, taking the first value of a non-deterministic rule at
/// each node.
StrategyResult transform_mixed(const Transformation& t, const Expr& e,
                               const StrategyOptions& options = {});

struct Stage {
  StrategyKind strategy = StrategyKind::Mixed;
  std::vector<std::string> rules;
};

/// Parses `rule|rule; rule` into stages (`;` serial, `|` parallel). The
/// alias `simplify` stands for `orFloat; unDollar|caseCancel`. Throws
/// UnknownRule for names missing from the registry.
std::vector<Stage> parse_pipeline(std::string_view spec, StrategyKind strategy);

struct PipelineOptions {
  std::size_t fuel = kDefaultFuel;
  bool trace = false;
};

struct PipelineResult {
  Program program;
  RunReport report;
};

/// Applies each stage to every function body, in order. Fresh variables for
/// a function start above both its parameters and every index in its body.
PipelineResult apply_pipeline(std::span<const Stage> stages, const Program& program,
                              const PipelineOptions& options = {});

/// One line per step: `step<TAB>function<TAB>rule<TAB>path`.
std::string format_trace(std::span<const TraceStep> trace);

}  // namespace flattrans
