#include "flattrans/ir.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace flattrans {

CombKind CombKind::func_part_call(std::size_t missing) {
  if (missing < 1) {
    throw InvariantError("partial function call with no missing arguments");
  }
  return CombKind(Tag::FuncPartCall, missing);
}

CombKind CombKind::cons_part_call(std::size_t missing) {
  if (missing < 1) {
    throw InvariantError("partial constructor call with no missing arguments");
  }
  return CombKind(Tag::ConsPartCall, missing);
}

namespace {

Expr wrap(auto node) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{std::move(node)}));
}

}  // namespace

Expr make_var(VarIndex idx) { return wrap(Var{idx}); }

Expr make_comb(CombKind kind, std::string name, std::vector<Expr> args) {
  return wrap(Comb{kind, std::move(name), std::move(args)});
}

Expr make_func_call(std::string name, std::vector<Expr> args) {
  return make_comb(CombKind::func_call(), std::move(name), std::move(args));
}

Expr make_cons_call(std::string name, std::vector<Expr> args) {
  return make_comb(CombKind::cons_call(), std::move(name), std::move(args));
}

Expr make_or(Expr lhs, Expr rhs) { return wrap(Or{std::move(lhs), std::move(rhs)}); }

Expr make_free(std::vector<VarIndex> vars, Expr body) {
  return wrap(Free{std::move(vars), std::move(body)});
}

Expr make_let(VarIndex var, Expr bound, Expr body) {
  return wrap(Let{var, std::move(bound), std::move(body)});
}

Expr make_case(Expr scrutinee, std::vector<Branch> branches) {
  return wrap(Case{std::move(scrutinee), std::move(branches)});
}

Branch make_branch(std::string constructor, std::vector<VarIndex> vars, Expr body) {
  return Branch{Pattern{std::move(constructor), std::move(vars)}, std::move(body)};
}

const Function* Program::find(std::string_view name) const {
  auto it = std::find_if(functions.begin(), functions.end(),
                         [&](const Function& f) { return f.name == name; });
  return it == functions.end() ? nullptr : &*it;
}

namespace {

class BinderCheck {
 public:
  explicit BinderCheck(VarIndex reserved) : reserved_(reserved) {}

  void bind(VarIndex v) {
    if (v < reserved_) {
      throw InvariantError("binder " + std::to_string(v) +
                           " shadows a function parameter");
    }
    if (!seen_.insert(v).second) {
      throw InvariantError("variable " + std::to_string(v) + " is bound twice");
    }
  }

  void walk(const Expr& e) {
    visit(overloaded{
              [](const Var&) {},
              [&](const Comb& c) {
                for (const auto& a : c.args) walk(a);
              },
              [&](const Or& o) {
                walk(o.lhs);
                walk(o.rhs);
              },
              [&](const Free& f) {
                for (auto v : f.vars) bind(v);
                walk(f.body);
              },
              [&](const Let& l) {
                bind(l.var);
                walk(l.bound);
                walk(l.body);
              },
              [&](const Case& c) {
                if (c.branches.empty()) {
                  throw InvariantError("case expression without branches");
                }
                walk(c.scrutinee);
                std::unordered_set<std::string> names;
                for (const auto& b : c.branches) {
                  if (!names.insert(b.pattern.name).second) {
                    throw InvariantError("overlapping case branches for constructor '" +
                                         b.pattern.name + "'");
                  }
                  for (auto v : b.pattern.vars) bind(v);
                  walk(b.body);
                }
              },
          },
          e);
  }

 private:
  VarIndex reserved_;
  std::unordered_set<VarIndex> seen_;
};

}  // namespace

void validate_body(const Expr& body, VarIndex reserved) {
  BinderCheck(reserved).walk(body);
}

void validate_program(const Program& program) {
  std::unordered_set<std::string> names;
  for (const auto& f : program.functions) {
    if (!names.insert(f.name).second) {
      throw InvariantError("function '" + f.name + "' is defined twice");
    }
    try {
      validate_body(f.body, static_cast<VarIndex>(f.arity));
    } catch (const InvariantError& err) {
      throw InvariantError("in function '" + f.name + "': " + err.what());
    }
  }
}

std::vector<std::pair<std::size_t, Expr>> children(const Expr& e) {
  std::vector<std::pair<std::size_t, Expr>> out;
  visit(overloaded{
            [](const Var&) {},
            [&](const Comb& c) {
              for (std::size_t i = 0; i < c.args.size(); ++i) out.emplace_back(i, c.args[i]);
            },
            [&](const Or& o) {
              out.emplace_back(0, o.lhs);
              out.emplace_back(1, o.rhs);
            },
            [&](const Free& f) { out.emplace_back(1, f.body); },
            [&](const Let& l) {
              out.emplace_back(0, l.bound);
              out.emplace_back(1, l.body);
            },
            [&](const Case& c) {
              out.emplace_back(0, c.scrutinee);
              for (std::size_t i = 0; i < c.branches.size(); ++i) {
                out.emplace_back(i + 1, c.branches[i].body);
              }
            },
        },
        e);
  return out;
}

namespace {

[[noreturn]] void bad_path(PathView path, std::size_t depth) {
  throw InvalidPath("invalid path [" + path_to_string(path) + "] at position " +
                    std::to_string(depth));
}

const Expr* child_at(const Expr& e, std::size_t index) {
  return visit(overloaded{
                   [](const Var&) -> const Expr* { return nullptr; },
                   [&](const Comb& c) -> const Expr* {
                     return index < c.args.size() ? &c.args[index] : nullptr;
                   },
                   [&](const Or& o) -> const Expr* {
                     return index == 0 ? &o.lhs : index == 1 ? &o.rhs : nullptr;
                   },
                   [&](const Free& f) -> const Expr* { return index == 1 ? &f.body : nullptr; },
                   [&](const Let& l) -> const Expr* {
                     return index == 0 ? &l.bound : index == 1 ? &l.body : nullptr;
                   },
                   [&](const Case& c) -> const Expr* {
                     if (index == 0) return &c.scrutinee;
                     return index <= c.branches.size() ? &c.branches[index - 1].body : nullptr;
                   },
               },
               e);
}

}  // namespace

Expr subexpression_at(const Expr& e, PathView path) {
  const Expr* cur = &e;
  for (std::size_t d = 0; d < path.size(); ++d) {
    cur = child_at(*cur, path[d]);
    if (cur == nullptr) bad_path(path, d);
  }
  return *cur;
}

namespace {

void collect_violations(const Expr& e, Path& path, std::vector<Path>& out) {
  if (const auto* c = e.get_if<Comb>()) {
    for (std::size_t i = 0; i < c->args.size(); ++i) {
      if (c->args[i].is_var()) continue;
      path.push_back(i);
      out.push_back(path);
      path.pop_back();
    }
  }
  for (const auto& [i, child] : children(e)) {
    path.push_back(i);
    collect_violations(child, path, out);
    path.pop_back();
  }
}

}  // namespace

bool is_anf(const Expr& e) {
  if (const auto* c = e.get_if<Comb>()) {
    for (const auto& a : c->args) {
      if (!a.is_var()) return false;
    }
  }
  for (const auto& [i, child] : children(e)) {
    if (!is_anf(child)) return false;
  }
  return true;
}

std::vector<Path> anf_violations(const Expr& e) {
  std::vector<Path> out;
  Path path;
  collect_violations(e, path, out);
  return out;
}

std::size_t non_var_arguments(const Expr& e) {
  std::size_t n = 0;
  if (const auto* c = e.get_if<Comb>()) {
    n += static_cast<std::size_t>(std::count_if(
        c->args.begin(), c->args.end(), [](const Expr& a) { return !a.is_var(); }));
  }
  for (const auto& [i, child] : children(e)) n += non_var_arguments(child);
  return n;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& [i, child] : children(e)) n += node_count(child);
  return n;
}

std::optional<VarIndex> max_var(const Expr& e) {
  std::optional<VarIndex> best;
  auto see = [&](VarIndex v) {
    if (!best || v > *best) best = v;
  };
  visit(overloaded{
            [&](const Var& v) { see(v.idx); },
            [](const Comb&) {},
            [](const Or&) {},
            [&](const Free& f) {
              for (auto v : f.vars) see(v);
            },
            [&](const Let& l) { see(l.var); },
            [&](const Case& c) {
              for (const auto& b : c.branches) {
                for (auto v : b.pattern.vars) see(v);
              }
            },
        },
        e);
  for (const auto& [i, child] : children(e)) {
    if (auto m = max_var(child)) see(*m);
  }
  return best;
}

namespace {

void collect_binders(const Expr& e, std::unordered_set<VarIndex>& bound,
                     std::unordered_set<VarIndex>& used) {
  visit(overloaded{
            [&](const Var& v) { used.insert(v.idx); },
            [](const Comb&) {},
            [](const Or&) {},
            [&](const Free& f) { bound.insert(f.vars.begin(), f.vars.end()); },
            [&](const Let& l) { bound.insert(l.var); },
            [&](const Case& c) {
              for (const auto& b : c.branches) {
                bound.insert(b.pattern.vars.begin(), b.pattern.vars.end());
              }
            },
        },
        e);
  for (const auto& [i, child] : children(e)) collect_binders(child, bound, used);
}

class Renamer {
 public:
  explicit Renamer(VarIndex base) : next_(base) {}

  Expr rename(const Expr& e) {
    return visit(
        overloaded{
            [&](const Var& v) { return make_var(lookup(v.idx)); },
            [&](const Comb& c) {
              std::vector<Expr> args;
              args.reserve(c.args.size());
              for (const auto& a : c.args) args.push_back(rename(a));
              return make_comb(c.kind, c.name, std::move(args));
            },
            [&](const Or& o) {
              auto lhs = rename(o.lhs);
              return make_or(std::move(lhs), rename(o.rhs));
            },
            [&](const Free& f) {
              std::vector<VarIndex> vars;
              for (auto v : f.vars) vars.push_back(bind(v));
              return make_free(std::move(vars), rename(f.body));
            },
            [&](const Let& l) {
              auto var = bind(l.var);
              auto bound = rename(l.bound);
              return make_let(var, std::move(bound), rename(l.body));
            },
            [&](const Case& c) {
              auto scrutinee = rename(c.scrutinee);
              std::vector<Branch> branches;
              for (const auto& b : c.branches) {
                std::vector<VarIndex> vars;
                for (auto v : b.pattern.vars) vars.push_back(bind(v));
                branches.push_back(make_branch(b.pattern.name, std::move(vars), rename(b.body)));
              }
              return make_case(std::move(scrutinee), std::move(branches));
            },
        },
        e);
  }

 private:
  VarIndex bind(VarIndex v) {
    auto fresh = next_++;
    mapping_[v] = fresh;
    return fresh;
  }

  VarIndex lookup(VarIndex v) const {
    auto it = mapping_.find(v);
    return it == mapping_.end() ? v : it->second;
  }

  VarIndex next_;
  std::unordered_map<VarIndex, VarIndex> mapping_;
};

}  // namespace

Expr canonical_binders(const Expr& e) {
  std::unordered_set<VarIndex> bound;
  std::unordered_set<VarIndex> used;
  collect_binders(e, bound, used);
  VarIndex base = 0;
  for (auto v : used) {
    if (!bound.contains(v)) base = std::max(base, static_cast<VarIndex>(v + 1));
  }
  return Renamer(base).rename(e);
}

bool alpha_equivalent(const Expr& a, const Expr& b) {
  return canonical_binders(a) == canonical_binders(b);
}

std::string path_to_string(PathView path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out << ',';
    out << path[i];
  }
  return out.str();
}

}  // namespace flattrans
