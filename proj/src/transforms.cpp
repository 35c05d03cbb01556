#include "flattrans/transforms.hpp"

#include <algorithm>

#include "flattrans/patterns.hpp"

namespace flattrans {

Transformation make_t(SimpleRule rule) {
  return [rule = std::move(rule)](const TransContext&, const Expr& e) {
    return rule(e).map([](const Expr& r) { return Rewrite{r, 0, {}}; });
  };
}

DetTransformation make_t_det(std::function<std::optional<Expr>(const Expr&)> rule) {
  return [rule = std::move(rule)](const TransContext&, const Expr& e) -> std::optional<Rewrite> {
    if (auto r = rule(e)) return Rewrite{std::move(*r), 0, {}};
    return std::nullopt;
  };
}

Transformation par(Transformation t1, Transformation t2) {
  return [t1 = std::move(t1), t2 = std::move(t2)](const TransContext& ctx, const Expr& e) {
    return choose(t1(ctx, e), t2(ctx, e));
  };
}

DetTransformation par_det(DetTransformation t1, DetTransformation t2) {
  return [t1 = std::move(t1), t2 = std::move(t2)](const TransContext& ctx, const Expr& e) {
    auto answer = t1(ctx, e);
    return answer ? answer : t2(ctx, e);
  };
}

Transformation lift(DetTransformation t) {
  return [t = std::move(t)](const TransContext& ctx, const Expr& e) {
    return Choices<Rewrite>::lift(t(ctx, e));
  };
}

Transformation named(std::string name, Transformation t) {
  return [name = std::move(name), t = std::move(t)](const TransContext& ctx, const Expr& e) {
    return t(ctx, e).map([name](const Rewrite& r) { return Rewrite{r.expr, r.fresh_used, name}; });
  };
}

DetTransformation named_det(std::string name, DetTransformation t) {
  return [name = std::move(name), t = std::move(t)](const TransContext& ctx,
                                                    const Expr& e) -> std::optional<Rewrite> {
    auto r = t(ctx, e);
    if (r) r->rule = name;
    return r;
  };
}

Choices<Expr> or_float(const Expr& e) {
  const auto* o = e.get_if<Or>();
  if (o == nullptr) return Choices<Expr>::fail();
  std::vector<Expr> results;
  if (const auto* l = o->lhs.get_if<Let>()) {
    results.push_back(make_let(l->var, l->bound, make_or(l->body, o->rhs)));
  }
  if (const auto* l = o->rhs.get_if<Let>()) {
    results.push_back(make_let(l->var, l->bound, make_or(o->lhs, l->body)));
  }
  return Choices<Expr>::from(std::move(results));
}

namespace {

Expr apply_dollar(const DollarMatch& m) {
  auto args = m.args;
  args.push_back(m.x);
  if (m.missing == 1) return make_func_call(m.fname, std::move(args));
  return make_comb(CombKind::func_part_call(m.missing - 1), m.fname, std::move(args));
}

}  // namespace

Choices<Expr> un_dollar(const Expr& e) {
  return match_dollar(e).bind([](const DollarMatch& m) {
    if (m.missing >= 1) return Choices<Expr>::pure(apply_dollar(m));
    return Choices<Expr>::fail();
  });
}

Choices<Expr> case_cancel(const Expr& e) {
  const auto* c = e.get_if<Case>();
  if (c == nullptr) return Choices<Expr>::fail();
  const auto* scrutinee = c->scrutinee.get_if<Comb>();
  if (scrutinee == nullptr || scrutinee->kind != CombKind::cons_call() ||
      !scrutinee->args.empty()) {
    return Choices<Expr>::fail();
  }
  return with_branch(scrutinee->name, c->branches);
}

namespace {

Rewrite bind_argument(const TransContext& ctx, const Comb& c, std::size_t position) {
  auto args = c.args;
  args[position] = make_var(ctx.next_var);
  return Rewrite{make_let(ctx.next_var, c.args[position], make_comb(c.kind, c.name, std::move(args))),
                 1,
                 {}};
}

}  // namespace

Choices<Rewrite> anf_step(const TransContext& ctx, const Expr& e) {
  const auto* c = e.get_if<Comb>();
  if (c == nullptr) return Choices<Rewrite>::fail();
  std::vector<Rewrite> results;
  for (std::size_t i = 0; i < c->args.size(); ++i) {
    if (!c->args[i].is_var()) results.push_back(bind_argument(ctx, *c, i));
  }
  return Choices<Rewrite>::from(std::move(results));
}

std::optional<Rewrite> or_float_det(const TransContext&, const Expr& e) {
  const auto* o = e.get_if<Or>();
  if (o == nullptr) return std::nullopt;
  if (const auto* l = o->lhs.get_if<Let>()) {
    return Rewrite{make_let(l->var, l->bound, make_or(l->body, o->rhs)), 0, {}};
  }
  if (const auto* l = o->rhs.get_if<Let>()) {
    return Rewrite{make_let(l->var, l->bound, make_or(o->lhs, l->body)), 0, {}};
  }
  return std::nullopt;
}

std::optional<Rewrite> un_dollar_det(const TransContext&, const Expr& e) {
  const auto* call = e.get_if<Comb>();
  if (call == nullptr || call->kind != CombKind::func_call() || call->name != "$" ||
      call->args.size() != 2) {
    return std::nullopt;
  }
  const auto* fn = call->args[0].get_if<Comb>();
  if (fn == nullptr || fn->kind.tag() != CombKind::Tag::FuncPartCall) return std::nullopt;
  return Rewrite{apply_dollar(DollarMatch{fn->name, fn->args, fn->kind.missing(), call->args[1]}),
                 0,
                 {}};
}

std::optional<Rewrite> case_cancel_det(const TransContext&, const Expr& e) {
  const auto* c = e.get_if<Case>();
  if (c == nullptr) return std::nullopt;
  const auto* scrutinee = c->scrutinee.get_if<Comb>();
  if (scrutinee == nullptr || scrutinee->kind != CombKind::cons_call() ||
      !scrutinee->args.empty()) {
    return std::nullopt;
  }
  for (const auto& b : c->branches) {
    if (b.pattern.name == scrutinee->name && b.pattern.vars.empty()) {
      return Rewrite{b.body, 0, {}};
    }
  }
  return std::nullopt;
}

std::optional<Rewrite> anf_det(const TransContext& ctx, const Expr& e) {
  const auto* c = e.get_if<Comb>();
  if (c == nullptr) return std::nullopt;
  auto it = std::find_if(c->args.begin(), c->args.end(),
                         [](const Expr& a) { return !a.is_var(); });
  if (it == c->args.end()) return std::nullopt;
  return bind_argument(ctx, *c, static_cast<std::size_t>(it - c->args.begin()));
}

const std::vector<RuleEntry>& builtin_rules() {
  static const std::vector<RuleEntry> rules = [] {
    auto entry = [](std::string name, Transformation t, DetTransformation d) {
      return RuleEntry{name, named(name, std::move(t)), named_det(name, std::move(d))};
    };
    return std::vector<RuleEntry>{
        entry("orFloat", make_t(or_float), or_float_det),
        entry("unDollar", make_t(un_dollar), un_dollar_det),
        entry("caseCancel", make_t(case_cancel), case_cancel_det),
        entry("anf", anf_step, anf_det),
    };
  }();
  return rules;
}

const RuleEntry& find_rule(std::string_view name) {
  const auto& rules = builtin_rules();
  auto it = std::find_if(rules.begin(), rules.end(),
                         [&](const RuleEntry& r) { return r.name == name; });
  if (it == rules.end()) throw UnknownRule(std::string(name));
  return *it;
}

Transformation resolve_rules(std::span<const std::string> names) {
  Transformation t;
  for (const auto& name : names) {
    const auto& rule = find_rule(name).rule;
    t = t ? par(std::move(t), rule) : rule;
  }
  if (!t) return [](const TransContext&, const Expr&) { return Choices<Rewrite>::fail(); };
  return t;
}

DetTransformation resolve_det_rules(std::span<const std::string> names) {
  DetTransformation t;
  for (const auto& name : names) {
    const auto& rule = find_rule(name).det_rule;
    t = t ? par_det(std::move(t), rule) : rule;
  }
  if (!t) {
    return [](const TransContext&, const Expr&) -> std::optional<Rewrite> { return std::nullopt; };
  }
  return t;
}

}  // namespace flattrans
