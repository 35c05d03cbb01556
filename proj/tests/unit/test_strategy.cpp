#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "flattrans/generator.hpp"
#include "flattrans/strategy.hpp"
#include "oracles.hpp"

using namespace flattrans;
namespace fx = flattrans::fixtures;

namespace {

std::vector<std::string> dollar_case{"unDollar", "caseCancel"};
std::vector<std::string> anf_only{"anf"};

StrategyResult run(StrategyKind kind, std::span<const std::string> rules, const Expr& e,
                   const StrategyOptions& opts = {}) {
  switch (kind) {
    case StrategyKind::Chaotic:
      return transform_chaotic(resolve_rules(rules), e, opts);
    case StrategyKind::Mixed:
      return transform_mixed(resolve_rules(rules), e, opts);
    case StrategyKind::Deterministic:
      break;
  }
  return transform_det(resolve_det_rules(rules), e, opts);
}

constexpr StrategyKind kAll[] = {StrategyKind::Chaotic, StrategyKind::Mixed,
                                 StrategyKind::Deterministic};

// Re-applies the traced steps one at a time and returns the final expression.
Expr replay(const Expr& e, const std::vector<TraceStep>& trace, VarIndex next_var) {
  Expr cur = e;
  for (const auto& step : trace) {
    auto sub = subexpression_at(cur, step.path);
    auto r = one_value(find_rule(step.rule_name).rule(TransContext{next_var, step.path}, sub));
    REQUIRE(r.has_value());
    next_var += static_cast<VarIndex>(r->fresh_used);
    cur = replace(cur, step.path, r->expr);
  }
  return cur;
}

}  // namespace

TEST_CASE("sub_exp_of") {
  auto a = all_values(sub_exp_of(make_var(0)));
  REQUIRE(a.size() == 1);
  CHECK(a[0].path.empty());
  auto o = make_or(make_var(0), make_var(1));
  auto b = all_values(sub_exp_of(o));
  REQUIRE(b.size() == 3);
  CHECK((b[0].path == Path{} && b[0].expr == o));
  CHECK((b[1].path == Path{0} && b[1].expr == make_var(0)));
  CHECK((b[2].path == Path{1} && b[2].expr == make_var(1)));
  bool found = false;
  for (const auto& s : all_values(sub_exp_of(fx::not_body()))) {
    if (s.path == Path{2}) {
      CHECK(s.expr == fx::false_());
      found = true;
    }
  }
  CHECK(found);
  auto f = all_values(sub_exp_of(make_free({1}, make_var(1))));
  REQUIRE(f.size() == 2);
  CHECK(f[1].path == Path{1});
}

TEST_CASE("replace") {
  auto a = make_var(0);
  auto b = make_var(1);
  auto c = make_var(2);
  CHECK(replace(make_or(a, b), Path{}, c) == c);
  CHECK(replace(make_or(a, b), Path{1}, c) == make_or(a, c));
  CHECK(replace(fx::insert_body(), Path{1, 1, 1}, make_var(4)) ==
        make_or(make_cons_call(":", {make_var(0), make_var(1)}),
                make_case(make_var(1), {make_branch(":", {2, 3},
                                                    make_cons_call(":", {make_var(2), make_var(4)}))})));
  CHECK_THROWS_AS(replace(make_or(a, b), Path{2}, c), InvalidPath);
  CHECK_THROWS_AS(replace(a, Path{0}, c), InvalidPath);
  CHECK_THROWS_AS(replace(make_free({}, a), Path{0}, c), InvalidPath);
}

TEST_CASE("replace round trip on generated expressions") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    auto e = generate_expr(rng);
    for (const auto& s : all_values(sub_exp_of(e))) {
      REQUIRE(replace(e, s.path, s.expr) == e);
      REQUIRE(subexpression_at(e, s.path) == s.expr);
    }
  }
}

TEST_CASE("new_var") {
  CHECK(new_var(fx::not_body()) == 1);
  CHECK(new_var(make_var(5)) == 6);
  CHECK(new_var(fx::true_()) == 0);
  CHECK(new_var(make_let(8, fx::true_(), fx::true_())) == 9);
}

TEST_CASE("parse_strategy") {
  CHECK(parse_strategy("cs") == StrategyKind::Chaotic);
  CHECK(parse_strategy("mixed") == StrategyKind::Mixed);
  CHECK(parse_strategy("ds") == StrategyKind::Deterministic);
  CHECK_FALSE(parse_strategy("bfs"));
  for (auto k : kAll) CHECK(parse_strategy(strategy_name(k)) == k);
}

TEST_CASE("single redex under every strategy") {
  for (auto k : kAll) {
    CAPTURE(strategy_name(k));
    auto r = run(k, dollar_case, fx::not_not_true());
    CHECK(r.expr == make_func_call("not", {make_func_call("not", {fx::true_()})}));
    CHECK(r.report.total_rewrites() == 1);
  }
}

TEST_CASE("anf of insert under every strategy") {
  for (auto k : kAll) {
    CAPTURE(strategy_name(k));
    StrategyOptions opts;
    opts.trace = true;
    auto r = run(k, anf_only, fx::insert_body(), opts);
    CHECK(alpha_equivalent(r.expr, fx::insert_anf_body()));
    CHECK(r.expr == fx::insert_anf_body());
    CHECK(r.report.total_rewrites() == 1);
    CHECK(r.report.functions[0].next_var == 5);
    REQUIRE(r.report.trace.size() == 1);
    CHECK(r.report.trace[0].path == Path{1, 1});
    CHECK(r.report.trace[0].rule_name == "anf");
  }
}

TEST_CASE("normal forms are left alone") {
  for (auto k : kAll) {
    auto r = run(k, dollar_case, fx::not_body());
    CHECK(r.expr == fx::not_body());
    CHECK(r.report.total_rewrites() == 0);
    auto a = run(k, anf_only, fx::insert_anf_body());
    CHECK(a.expr == fx::insert_anf_body());
    CHECK(a.report.total_rewrites() == 0);
  }
}

TEST_CASE("nested dollar is removed inner first in one pass") {
  // f $ (g $ x)
  auto inner = make_func_call("$", {make_comb(CombKind::func_part_call(1), "g", {}), make_var(0)});
  auto outer = make_func_call("$", {make_comb(CombKind::func_part_call(1), "f", {}), inner});
  StrategyOptions opts;
  opts.trace = true;
  auto r = run(StrategyKind::Deterministic, dollar_case, outer, opts);
  CHECK(r.expr == make_func_call("f", {make_func_call("g", {make_var(0)})}));
  REQUIRE(r.report.trace.size() == 2);
  CHECK(r.report.trace[0].path == Path{1});
  CHECK(r.report.trace[1].path == Path{});
  CHECK(r.report.trace[0].step_index == 1);
  CHECK(r.report.trace[1].step_index == 2);
}

TEST_CASE("a floated let is revisited by a later pass") {
  // ((let 3 = 1 in v3) ? v0) ? v1 needs two floats; the second redex appears
  // above the node where the first one fired.
  auto e = make_or(make_or(make_let(3, make_cons_call("1"), make_var(3)), make_var(0)), make_var(1));
  std::vector<std::string> rules{"orFloat"};
  for (auto k : kAll) {
    auto r = run(k, rules, e);
    CHECK(r.expr == make_let(3, make_cons_call("1"), make_or(make_or(make_var(3), make_var(0)), make_var(1))));
    CHECK(r.report.total_rewrites() == 2);
  }
}

TEST_CASE("fuel") {
  // A rule that always applies at the root never reaches a normal form.
  Transformation loop = named("loop", make_t([](const Expr& e) {
    return e.is_var() ? Choices<Expr>::pure(make_var(0)) : Choices<Expr>::fail();
  }));
  StrategyOptions opts;
  opts.fuel = 50;
  opts.function_name = "spin";
  try {
    transform_chaotic(loop, make_var(0), opts);
    FAIL("no exception");
  } catch (const FuelExhausted& e) {
    CHECK(e.function_name() == "spin");
    CHECK(e.fuel() == 50);
  }
  CHECK_THROWS_AS(transform_mixed(loop, make_var(0), opts), FuelExhausted);
  DetTransformation det_loop = [](const TransContext&, const Expr& e) -> std::optional<Rewrite> {
    if (!e.is_var()) return std::nullopt;
    return Rewrite{make_var(0), 0, "loop"};
  };
  CHECK_THROWS_AS(transform_det(det_loop, make_var(0), opts), FuelExhausted);
  // Exactly `fuel` rewrites are allowed.
  opts.fuel = 1;
  CHECK(run(StrategyKind::Mixed, dollar_case, fx::not_not_true(), opts).report.total_rewrites() == 1);
  opts.fuel = 0;
  CHECK_THROWS_AS(run(StrategyKind::Mixed, dollar_case, fx::not_not_true(), opts), FuelExhausted);
}

TEST_CASE("parse_pipeline") {
  auto s = parse_pipeline("orFloat; unDollar|caseCancel", StrategyKind::Chaotic);
  REQUIRE(s.size() == 2);
  CHECK(s[0].rules == std::vector<std::string>{"orFloat"});
  CHECK(s[1].rules == std::vector<std::string>{"unDollar", "caseCancel"});
  CHECK(s[1].strategy == StrategyKind::Chaotic);
  auto alias = parse_pipeline("simplify", StrategyKind::Mixed);
  REQUIRE(alias.size() == 2);
  CHECK(alias[1].rules == s[1].rules);
  CHECK(parse_pipeline("  ", StrategyKind::Mixed).empty());
  CHECK_THROWS_AS(parse_pipeline("anf; inline", StrategyKind::Mixed), UnknownRule);
  CHECK_THROWS_AS(parse_pipeline("anf;", StrategyKind::Mixed), UnknownRule);
}

TEST_CASE("composed pipeline") {
  // (let 2 = True in not $ v2) ? case False of { False -> v0 }
  auto body = make_or(
      make_let(2, fx::true_(),
               make_func_call("$", {make_comb(CombKind::func_part_call(1), "not", {}), make_var(2)})),
      make_case(fx::false_(), {make_branch("False", {}, make_var(0))}));
  Program p{"M", {Function{"f", 1, body}}};
  auto expected = make_let(2, fx::true_(), make_or(make_func_call("not", {make_var(2)}), make_var(0)));
  for (auto k : kAll) {
    PipelineOptions opts;
    opts.trace = true;
    auto r = apply_pipeline(parse_pipeline("orFloat; unDollar|caseCancel", k), p, opts);
    CHECK(r.program.functions[0].body == expected);
    CHECK(r.report.total_rewrites() == 3);
    REQUIRE(r.report.trace.size() == 3);
    CHECK(r.report.trace[0].rule_name == "orFloat");
    for (std::size_t i = 0; i < 3; ++i) CHECK(r.report.trace[i].step_index == i + 1);
  }
}

TEST_CASE("apply_pipeline basics") {
  auto p = fx::insert_program();
  auto id = apply_pipeline({}, p);
  CHECK(id.program == p);
  CHECK(id.report.total_rewrites() == 0);
  REQUIRE(id.report.find("insert"));
  CHECK(id.report.find("insert")->next_var == 4);

  auto stages = parse_pipeline("anf", StrategyKind::Mixed);
  auto piped = apply_pipeline(stages, p);
  StrategyOptions opts;
  opts.next_var = 4;
  auto direct = transform_mixed(resolve_rules(anf_only), p.functions[0].body, opts);
  CHECK(piped.program.functions[0].body == direct.expr);
  CHECK(piped.report.total_rewrites() == direct.report.total_rewrites());
}

TEST_CASE("fresh variables start above the parameters") {
  // The body never mentions parameter 2, so new_var alone would reuse it.
  Program p{"M", {Function{"f", 3, make_func_call("g", {make_func_call("h", {make_var(0)})})}}};
  auto r = apply_pipeline(parse_pipeline("anf", StrategyKind::Deterministic), p);
  CHECK(r.program.functions[0].body ==
        make_let(3, make_func_call("h", {make_var(0)}), make_func_call("g", {make_var(3)})));
  CHECK_NOTHROW(validate_program(r.program));
  CHECK(r.report.find("f")->next_var == 4);
}

TEST_CASE("fuel exhaustion names the function") {
  Program p{"M", {Function{"ok", 0, fx::true_()}, Function{"big", 1, fx::insert_body()}}};
  PipelineOptions opts;
  opts.fuel = 0;
  try {
    apply_pipeline(parse_pipeline("anf", StrategyKind::Mixed), p, opts);
    FAIL("no exception");
  } catch (const FuelExhausted& e) {
    CHECK(e.function_name() == "big");
  }
}

TEST_CASE("format_trace") {
  std::vector<TraceStep> t{{"insert", "anf", {1, 1}, 17}, {"f", "orFloat", {}, 18}};
  CHECK(format_trace(t) == "17\tinsert\tanf\t1,1\n18\tf\torFloat\t\n");
}

TEST_CASE("report merge") {
  RunReport a;
  a.functions = {{"f", 2, 5}};
  a.trace = {{"f", "anf", {}, 1}, {"f", "anf", {}, 2}};
  RunReport b;
  b.functions = {{"f", 1, 6}, {"g", 3, 1}};
  b.trace = {{"f", "anf", {0}, 1}};
  a.merge(b);
  CHECK(a.total_rewrites() == 6);
  CHECK(a.find("f")->next_var == 6);
  CHECK(a.find("g")->rewrites == 3);
  REQUIRE(a.trace.size() == 3);
  CHECK(a.trace[2].step_index == 3);
}

TEST_CASE("strategy properties on generated expressions") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    auto e = generate_expr(rng, ExprGenOptions{5, 2, true});
    CAPTURE(to_string(e));
    VarIndex start = std::max<VarIndex>(2, new_var(e));
    std::optional<Expr> dc_first;
    std::optional<Expr> anf_first;
    for (auto k : kAll) {
      CAPTURE(strategy_name(k));
      StrategyOptions opts;
      opts.trace = true;
      opts.next_var = start;

      auto dc = run(k, dollar_case, e, opts);
      CHECK(oracles::rule_sites(resolve_rules(dollar_case), dc.expr, dc.report.functions[0].next_var).empty());
      CHECK(dc.report.trace.size() == dc.report.total_rewrites());
      CHECK(replay(e, dc.report.trace, start) == dc.expr);
      if (!dc_first) dc_first = dc.expr;
      CHECK(dc.expr == *dc_first);

      auto anf = run(k, anf_only, e, opts);
      CHECK(is_anf(anf.expr));
      CHECK(anf.report.total_rewrites() == non_var_arguments(e));
      CHECK(anf.report.functions[0].next_var >= new_var(anf.expr));
      CHECK_NOTHROW(validate_body(anf.expr, 2));
      CHECK(replay(e, anf.report.trace, start) == anf.expr);
      if (!anf_first) anf_first = anf.expr;
      CHECK(alpha_equivalent(anf.expr, *anf_first));

      std::vector<std::string> all{"orFloat", "unDollar", "caseCancel", "anf"};
      auto every = run(k, all, e, opts);
      CHECK(oracles::rule_sites(resolve_rules(all), every.expr, every.report.functions[0].next_var).empty());
      CHECK(replay(e, every.report.trace, start) == every.expr);
      CHECK_NOTHROW(validate_body(every.expr, 2));
    }
  }
}
