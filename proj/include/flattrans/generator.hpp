#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flattrans/ir.hpp"

namespace flattrans {

struct GeneratorOptions {
  std::uint64_t seed = 1;
  std::string module_name = "Gen";
  std::size_t functions = 8;
  /// Approximate total number of body nodes.
  std::size_t target_nodes = 400;
};

/// Seeded random program rich in redexes for every built-in rule.
///
/// Functions only call functions defined before them, so evaluation always
/// terminates. Generated programs also satisfy the conditions under which
/// rewrite counts do not depend on the strategy: let-bound expressions are
/// deterministic, the branches a case-cancel discards contain no redexes,
/// the selected branch of a cancelable case is a variable or application,
/// and case scrutinees never become constructors by rewriting.
Program generate_program(const GeneratorOptions& options);

struct ExprGenOptions {
  std::size_t max_depth = 5;
  /// Variables 0..params-1 are treated as parameters in scope.
  VarIndex params = 2;
  bool allow_free = true;
};

/// Random valid expression without any of the program-level restrictions,
/// biased toward redexes and near-misses of the built-in rules.
Expr generate_expr(std::mt19937_64& rng, const ExprGenOptions& options = {});

/// Closed calls `f(args)` with small constructor-term arguments, `per_function`
/// for each function.
std::vector<Expr> sample_calls(const Program& program, std::uint64_t seed,
                               std::size_t per_function);

}  // namespace flattrans
