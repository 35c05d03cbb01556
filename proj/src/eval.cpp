#include "flattrans/eval.hpp"

#include <algorithm>
#include <compare>
#include <memory>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace flattrans {

bool operator==(const Value& a, const Value& b) {
  return a.kind == b.kind && a.name == b.name && a.missing == b.missing && a.args == b.args;
}

namespace {

// Single recursive pass; comparing args with `<` both ways would be
// exponential in the depth of the values.
std::strong_ordering compare(const Value& a, const Value& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.missing <=> b.missing; c != 0) return c;
  for (std::size_t i = 0; i < a.args.size() && i < b.args.size(); ++i) {
    if (auto c = compare(a.args[i], b.args[i]); c != 0) return c;
  }
  return a.args.size() <=> b.args.size();
}

}  // namespace

bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

Value make_value(std::string constructor, std::vector<Value> args) {
  return Value{Value::Kind::Constructor, std::move(constructor), std::move(args), 0};
}

namespace {

void print_value(std::ostream& out, const Value& v) {
  if (v.kind == Value::Kind::Constructor && v.name == ":" && v.args.size() == 2) {
    // Proper lists print as [a,b,...].
    std::vector<const Value*> items;
    const Value* cur = &v;
    while (cur->kind == Value::Kind::Constructor && cur->name == ":" && cur->args.size() == 2) {
      items.push_back(&cur->args[0]);
      cur = &cur->args[1];
    }
    if (cur->kind == Value::Kind::Constructor && cur->name == "[]" && cur->args.empty()) {
      out << '[';
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out << ',';
        print_value(out, *items[i]);
      }
      out << ']';
      return;
    }
  }
  out << v.name;
  if (v.kind != Value::Kind::Constructor) out << '@' << v.missing;
  if (v.args.empty() && v.kind == Value::Kind::Constructor) return;
  out << '(';
  for (std::size_t i = 0; i < v.args.size(); ++i) {
    if (i > 0) out << ',';
    print_value(out, v.args[i]);
  }
  out << ')';
}

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

struct Thunk {
  Expr expr;
  Env env;
};

struct EnvNode {
  VarIndex var;
  Thunk thunk;
  Env next;
};

Env extend(Env env, VarIndex var, Thunk thunk) {
  return std::make_shared<const EnvNode>(EnvNode{var, std::move(thunk), std::move(env)});
}

/// Weak head normal form: constructor or partial call with unevaluated
/// arguments.
struct Whnf {
  Value::Kind kind;
  std::string name;
  std::vector<Thunk> args;
  std::size_t missing = 0;
};

class Machine {
 public:
  using WhnfSink = FunctionRef<bool(const Whnf&)>;
  using ValueSink = FunctionRef<bool(const Value&)>;

  Machine(const Program& program, EvalLimits limits) : program_(program), limits_(limits) {
    for (const auto& f : program_.functions) functions_.emplace(f.name, &f);
  }

  bool value(const Expr& e, const Env& env, ValueSink k) {
    return whnf(e, env, 0, [&](const Whnf& w) { return normalize(w, 0, k); });
  }

 private:
  void tick() {
    if (++steps_ > limits_.max_steps) throw EvalError("evaluation step limit exceeded");
  }

  const Function& function(const std::string& name) const {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw EvalError("unknown function '" + name + "'");
    return *it->second;
  }

  static const Thunk& lookup(const Env& env, VarIndex var) {
    for (const EnvNode* node = env.get(); node != nullptr; node = node->next.get()) {
      if (node->var == var) return node->thunk;
    }
    throw EvalError("unbound variable v" + std::to_string(var));
  }

  bool call(const Function& f, const std::vector<Thunk>& args, std::size_t depth, WhnfSink k) {
    if (args.size() != f.arity) {
      throw EvalError("function '" + f.name + "' expects " + std::to_string(f.arity) +
                      " arguments, got " + std::to_string(args.size()));
    }
    if (depth + 1 > limits_.max_depth) throw EvalError("evaluation depth limit exceeded");
    Env env;
    for (std::size_t i = 0; i < args.size(); ++i) {
      env = extend(std::move(env), static_cast<VarIndex>(i), args[i]);
    }
    return whnf(f.body, env, depth + 1, k);
  }

  bool apply(const Whnf& partial, Thunk arg, std::size_t depth, WhnfSink k) {
    if (partial.kind == Value::Kind::Constructor) {
      throw EvalError("cannot apply constructor '" + partial.name + "'");
    }
    auto args = partial.args;
    args.push_back(std::move(arg));
    if (partial.missing > 1) {
      return k(Whnf{partial.kind, partial.name, std::move(args), partial.missing - 1});
    }
    if (partial.kind == Value::Kind::PartialCons) {
      return k(Whnf{Value::Kind::Constructor, partial.name, std::move(args), 0});
    }
    return call(function(partial.name), args, depth, k);
  }

  std::vector<Thunk> thunks(const std::vector<Expr>& args, const Env& env) {
    std::vector<Thunk> out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(Thunk{a, env});
    return out;
  }

  bool whnf(const Expr& e, const Env& env, std::size_t depth, WhnfSink k) {
    tick();
    return visit(
        overloaded{
            [&](const Var& v) {
              const Thunk& t = lookup(env, v.idx);
              return whnf(t.expr, t.env, depth, k);
            },
            [&](const Comb& c) {
              switch (c.kind.tag()) {
                case CombKind::Tag::ConsCall:
                  return k(Whnf{Value::Kind::Constructor, c.name, thunks(c.args, env), 0});
                case CombKind::Tag::FuncPartCall:
                  return k(Whnf{Value::Kind::PartialFunc, c.name, thunks(c.args, env),
                                c.kind.missing()});
                case CombKind::Tag::ConsPartCall:
                  return k(Whnf{Value::Kind::PartialCons, c.name, thunks(c.args, env),
                                c.kind.missing()});
                case CombKind::Tag::FuncCall:
                  break;
              }
              if (c.name == "$" && c.args.size() == 2 && !functions_.contains("$")) {
                return whnf(c.args[0], env, depth, [&](const Whnf& f) {
                  return apply(f, Thunk{c.args[1], env}, depth, k);
                });
              }
              return call(function(c.name), thunks(c.args, env), depth, k);
            },
            [&](const Or& o) { return whnf(o.lhs, env, depth, k) && whnf(o.rhs, env, depth, k); },
            [&](const Free&) -> bool {
              throw EvalError("free variable declarations are not supported");
            },
            [&](const Let& l) {
              return whnf(l.body, extend(env, l.var, Thunk{l.bound, env}), depth, k);
            },
            [&](const Case& c) {
              return whnf(c.scrutinee, env, depth, [&](const Whnf& w) {
                if (w.kind != Value::Kind::Constructor) return true;
                for (const auto& b : c.branches) {
                  if (b.pattern.name != w.name || b.pattern.vars.size() != w.args.size()) continue;
                  Env inner = env;
                  for (std::size_t i = 0; i < w.args.size(); ++i) {
                    inner = extend(std::move(inner), b.pattern.vars[i], w.args[i]);
                  }
                  return whnf(b.body, inner, depth, k);
                }
                return true;
              });
            },
        },
        e);
  }

  bool normalize(const Whnf& w, std::size_t depth, ValueSink k) {
    std::vector<Value> acc;
    return normalize_args(w, 0, acc, depth, k);
  }

  bool normalize_args(const Whnf& w, std::size_t i, std::vector<Value>& acc, std::size_t depth,
                      ValueSink k) {
    if (i == w.args.size()) return k(Value{w.kind, w.name, acc, w.missing});
    const Thunk& t = w.args[i];
    return whnf(t.expr, t.env, depth, [&](const Whnf& arg) {
      return normalize(arg, depth, [&](const Value& v) {
        acc.push_back(v);
        bool more = normalize_args(w, i + 1, acc, depth, k);
        acc.pop_back();
        return more;
      });
    });
  }

  const Program& program_;
  EvalLimits limits_;
  std::unordered_map<std::string, const Function*> functions_;
  std::size_t steps_ = 0;
};

}  // namespace

std::string to_string(const Value& v) {
  std::ostringstream out;
  print_value(out, v);
  return out.str();
}

Choices<Value> eval(const Program& program, const Expr& e, const std::map<VarIndex, Expr>& env,
                    EvalLimits limits) {
  auto shared = std::make_shared<const Program>(program);
  Env initial;
  for (const auto& [var, bound] : env) initial = extend(std::move(initial), var, Thunk{bound, {}});
  return Choices<Value>([shared, e, initial, limits](Choices<Value>::Sink k) {
    Machine machine(*shared, limits);
    return machine.value(e, initial, k);
  });
}

bool values_preserved(const Program& before, const Program& after, std::span<const Expr> calls,
                      EvalLimits limits) {
  for (const auto& call : calls) {
    auto lhs = all_values(eval(before, call, {}, limits));
    auto rhs = all_values(eval(after, call, {}, limits));
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    if (lhs != rhs) return false;
  }
  return true;
}

namespace {

void called_functions(const Expr& e, std::vector<std::string>& out, bool& local_choice) {
  visit(overloaded{
            [](const Var&) {},
            [&](const Comb& c) {
              if (c.kind.tag() == CombKind::Tag::FuncCall ||
                  c.kind.tag() == CombKind::Tag::FuncPartCall) {
                out.push_back(c.name);
              }
            },
            [&](const Or&) { local_choice = true; },
            [&](const Free&) { local_choice = true; },
            [](const Let&) {},
            [](const Case&) {},
        },
        e);
  for (const auto& [i, child] : children(e)) called_functions(child, out, local_choice);
}

bool deterministic_expr(const Expr& e, const std::unordered_set<std::string>& nondet) {
  std::vector<std::string> calls;
  bool choice = false;
  called_functions(e, calls, choice);
  return !choice && std::none_of(calls.begin(), calls.end(),
                                 [&](const std::string& f) { return nondet.contains(f); });
}

bool lets_deterministic(const Expr& e, const std::unordered_set<std::string>& nondet) {
  if (const auto* l = e.get_if<Let>()) {
    if (!deterministic_expr(l->bound, nondet)) return false;
  }
  for (const auto& [i, child] : children(e)) {
    if (!lets_deterministic(child, nondet)) return false;
  }
  return true;
}

}  // namespace

bool has_deterministic_lets(const Program& program) {
  std::unordered_set<std::string> nondet;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& f : program.functions) {
      if (nondet.contains(f.name)) continue;
      if (!deterministic_expr(f.body, nondet)) {
        nondet.insert(f.name);
        changed = true;
      }
    }
  }
  return std::all_of(program.functions.begin(), program.functions.end(),
                     [&](const Function& f) { return lets_deterministic(f.body, nondet); });
}

}  // namespace flattrans
