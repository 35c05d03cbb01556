#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace flattrans {

using VarIndex = std::uint32_t;

/// Child indices from the root of an expression. The indexing scheme is the
/// one used by `sub_exp_of`: Comb args 0..n-1, Let bound 0 / body 1, Free
/// body 1, Or lhs 0 / rhs 1, Case scrutinee 0 / branch i body i+1.
using Path = std::vector<std::size_t>;
using PathView = std::span<const std::size_t>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Kind of an application node. Partial kinds carry the number of missing
/// arguments, which is always at least one.
class CombKind {
 public:
  enum class Tag : std::uint8_t { FuncCall, ConsCall, FuncPartCall, ConsPartCall };

  static CombKind func_call() { return CombKind(Tag::FuncCall, 0); }
  static CombKind cons_call() { return CombKind(Tag::ConsCall, 0); }
  static CombKind func_part_call(std::size_t missing);
  static CombKind cons_part_call(std::size_t missing);

  Tag tag() const { return tag_; }
  std::size_t missing() const { return missing_; }
  bool is_partial() const {
    return tag_ == Tag::FuncPartCall || tag_ == Tag::ConsPartCall;
  }

  bool operator==(const CombKind&) const = default;

 private:
  CombKind(Tag tag, std::size_t missing) : tag_(tag), missing_(missing) {}

  Tag tag_;
  std::size_t missing_;
};

struct ExprNode;

/// Immutable IR expression with structural sharing. Copying an Expr is
/// cheap; rewriting produces new nodes only along the rewritten spine.
class Expr {
 public:
  enum class Kind : std::uint8_t { Var, Comb, Or, Free, Let, Case };

  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  Kind kind() const;
  const ExprNode& node() const { return *node_; }

  template <class N>
  const N* get_if() const;

  bool is_var() const { return kind() == Kind::Var; }
  bool same_node(const Expr& other) const { return node_ == other.node_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct Var {
  VarIndex idx;
  bool operator==(const Var&) const = default;
};

struct Comb {
  CombKind kind;
  std::string name;
  std::vector<Expr> args;
  bool operator==(const Comb&) const = default;
};

struct Or {
  Expr lhs;
  Expr rhs;
  bool operator==(const Or&) const = default;
};

struct Free {
  std::vector<VarIndex> vars;
  Expr body;
  bool operator==(const Free&) const = default;
};

struct Let {
  VarIndex var;
  Expr bound;
  Expr body;
  bool operator==(const Let&) const = default;
};

struct Pattern {
  std::string name;
  std::vector<VarIndex> vars;
  bool operator==(const Pattern&) const = default;
};

struct Branch {
  Pattern pattern;
  Expr body;
  bool operator==(const Branch&) const = default;
};

struct Case {
  Expr scrutinee;
  std::vector<Branch> branches;
  bool operator==(const Case&) const = default;
};

struct ExprNode {
  std::variant<Var, Comb, Or, Free, Let, Case> value;
};

inline Expr::Kind Expr::kind() const {
  return static_cast<Kind>(node_->value.index());
}

template <class N>
const N* Expr::get_if() const {
  return std::get_if<N>(&node_->value);
}

inline bool operator==(const Expr& a, const Expr& b) {
  return a.node_ == b.node_ || a.node_->value == b.node_->value;
}

template <class F>
decltype(auto) visit(F&& f, const Expr& e) {
  return std::visit(std::forward<F>(f), e.node().value);
}

Expr make_var(VarIndex idx);
Expr make_comb(CombKind kind, std::string name, std::vector<Expr> args);
Expr make_func_call(std::string name, std::vector<Expr> args = {});
Expr make_cons_call(std::string name, std::vector<Expr> args = {});
Expr make_or(Expr lhs, Expr rhs);
Expr make_free(std::vector<VarIndex> vars, Expr body);
Expr make_let(VarIndex var, Expr bound, Expr body);
Expr make_case(Expr scrutinee, std::vector<Branch> branches);
Branch make_branch(std::string constructor, std::vector<VarIndex> vars, Expr body);

struct Function {
  std::string name;
  std::size_t arity = 0;
  Expr body;
  bool operator==(const Function&) const = default;
};

struct Program {
  std::string module_name;
  std::vector<Function> functions;

  const Function* find(std::string_view name) const;
  bool operator==(const Program&) const = default;
};

/// Raised when an expression or program breaks an IR invariant.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks distinct binders and non-overlapping, non-empty case branches.
/// Binders below `reserved` (function parameters) are also rejected.
void validate_body(const Expr& body, VarIndex reserved = 0);
void validate_program(const Program& program);

/// Immediate children in path-index order, paired with their child index.
std::vector<std::pair<std::size_t, Expr>> children(const Expr& e);

/// Subexpression at `path`; throws InvalidPath.
Expr subexpression_at(const Expr& e, PathView path);

bool is_anf(const Expr& e);

/// Paths of every non-variable expression in a Comb argument position.
std::vector<Path> anf_violations(const Expr& e);

/// Number of Comb argument positions holding a non-variable expression.
std::size_t non_var_arguments(const Expr& e);

std::size_t node_count(const Expr& e);

/// Largest variable index occurring anywhere in `e`, including binders.
std::optional<VarIndex> max_var(const Expr& e);

/// Renames every binder to base, base+1, ... in pre-order of binding
/// occurrence, where base is one past the largest free variable. Two
/// expressions are alpha-equivalent iff their canonical forms are equal.
Expr canonical_binders(const Expr& e);
bool alpha_equivalent(const Expr& a, const Expr& b);

std::string path_to_string(PathView path);

}  // namespace flattrans
