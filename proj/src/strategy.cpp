#include "flattrans/strategy.hpp"

#include <algorithm>
#include <sstream>

namespace flattrans {

std::optional<StrategyKind> parse_strategy(std::string_view name) {
  if (name == "cs" || name == "chaotic") return StrategyKind::Chaotic;
  if (name == "ms" || name == "mixed") return StrategyKind::Mixed;
  if (name == "ds" || name == "deterministic") return StrategyKind::Deterministic;
  return std::nullopt;
}

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Chaotic:
      return "cs";
    case StrategyKind::Mixed:
      return "ms";
    case StrategyKind::Deterministic:
      return "ds";
  }
  return "?";
}

std::size_t RunReport::total_rewrites() const {
  std::size_t n = 0;
  for (const auto& f : functions) n += f.rewrites;
  return n;
}

const FunctionStats* RunReport::find(std::string_view function_name) const {
  auto it = std::find_if(functions.begin(), functions.end(),
                         [&](const FunctionStats& f) { return f.name == function_name; });
  return it == functions.end() ? nullptr : &*it;
}

void RunReport::merge(const RunReport& other) {
  for (const auto& f : other.functions) {
    auto it = std::find_if(functions.begin(), functions.end(),
                           [&](const FunctionStats& g) { return g.name == f.name; });
    if (it == functions.end()) {
      functions.push_back(f);
    } else {
      it->rewrites += f.rewrites;
      it->next_var = f.next_var;
    }
  }
  elapsed += other.elapsed;
  traced = traced || other.traced;
  auto offset = trace.size();
  for (const auto& step : other.trace) {
    trace.push_back(step);
    trace.back().step_index = ++offset;
  }
}

FuelExhausted::FuelExhausted(std::string function_name, std::size_t fuel)
    : std::runtime_error("fuel exhausted after " + std::to_string(fuel) + " rewrites" +
                         (function_name.empty() ? std::string()
                                                : " in function '" + function_name + "'")),
      function_name_(std::move(function_name)),
      fuel_(fuel) {}

Choices<SubExpr> sub_exp_of(const Expr& e) {
  return Choices<SubExpr>([e](Choices<SubExpr>::Sink k) {
    Path path;
    auto walk = [&](auto& self, const Expr& cur) -> bool {
      if (!k(SubExpr{path, cur})) return false;
      for (const auto& [i, child] : children(cur)) {
        path.push_back(i);
        bool more = self(self, child);
        path.pop_back();
        if (!more) return false;
      }
      return true;
    };
    return walk(walk, e);
  });
}

namespace {

Expr replace_child(const Expr& e, std::size_t index, Expr child, PathView path, std::size_t depth) {
  auto fail = [&]() -> Expr {
    throw InvalidPath("invalid path [" + path_to_string(path) + "] at position " +
                      std::to_string(depth));
  };
  return visit(
      overloaded{
          [&](const Var&) { return fail(); },
          [&](const Comb& c) {
            if (index >= c.args.size()) return fail();
            auto args = c.args;
            args[index] = std::move(child);
            return make_comb(c.kind, c.name, std::move(args));
          },
          [&](const Or& o) {
            if (index == 0) return make_or(std::move(child), o.rhs);
            if (index == 1) return make_or(o.lhs, std::move(child));
            return fail();
          },
          [&](const Free& f) {
            if (index != 1) return fail();
            return make_free(f.vars, std::move(child));
          },
          [&](const Let& l) {
            if (index == 0) return make_let(l.var, std::move(child), l.body);
            if (index == 1) return make_let(l.var, l.bound, std::move(child));
            return fail();
          },
          [&](const Case& c) {
            if (index == 0) return make_case(std::move(child), c.branches);
            if (index > c.branches.size()) return fail();
            auto branches = c.branches;
            branches[index - 1].body = std::move(child);
            return make_case(c.scrutinee, std::move(branches));
          },
      },
      e);
}

Expr replace_at(const Expr& e, PathView full, std::size_t depth, Expr replacement) {
  if (depth == full.size()) return replacement;
  auto sub = subexpression_at(e, full.subspan(depth, 1));
  return replace_child(e, full[depth], replace_at(sub, full, depth + 1, std::move(replacement)),
                       full, depth);
}

/// Bookkeeping shared by all strategies: fresh variables, fuel, trace.
class RunState {
 public:
  RunState(const StrategyOptions& options, VarIndex next_var)
      : options_(options), next_var_(next_var) {}

  VarIndex next_var() const { return next_var_; }

  void record(const Rewrite& r, PathView path) {
    if (rewrites_ == options_.fuel) throw FuelExhausted(options_.function_name, options_.fuel);
    ++rewrites_;
    next_var_ += static_cast<VarIndex>(r.fresh_used);
    if (options_.trace) {
      trace_.push_back(TraceStep{options_.function_name, r.rule, Path(path.begin(), path.end()),
                                 rewrites_});
    }
  }

  std::size_t rewrites() const { return rewrites_; }

  RunReport report(std::chrono::steady_clock::time_point start) {
    RunReport out;
    out.functions.push_back(FunctionStats{options_.function_name, rewrites_, next_var_});
    out.elapsed = std::chrono::steady_clock::now() - start;
    out.traced = options_.trace;
    out.trace = std::move(trace_);
    return out;
  }

 private:
  const StrategyOptions& options_;
  VarIndex next_var_;
  std::size_t rewrites_ = 0;
  std::vector<TraceStep> trace_;
};

using Attempt = FunctionRef<std::optional<Rewrite>(const TransContext&, const Expr&)>;

class BottomUp {
 public:
  BottomUp(Attempt attempt, RunState& state) : attempt_(attempt), state_(state) {}

  Expr run(const Expr& e) {
    Expr cur = e;
    for (;;) {
      auto before = state_.rewrites();
      cur = visit_node(cur);
      if (state_.rewrites() == before) return cur;
    }
  }

 private:
  Expr visit_node(const Expr& e) {
    Expr cur = e;
    for (const auto& [i, child] : children(e)) {
      path_.push_back(i);
      Expr updated = visit_node(child);
      path_.pop_back();
      if (!updated.same_node(child)) cur = replace_child(cur, i, std::move(updated), path_, 0);
    }
    while (auto r = attempt_(TransContext{state_.next_var(), path_}, cur)) {
      state_.record(*r, path_);
      cur = std::move(r->expr);
    }
    return cur;
  }

  Attempt attempt_;
  RunState& state_;
  Path path_;
};

VarIndex start_var(const Expr& e, const StrategyOptions& options) {
  return options.next_var.value_or(new_var(e));
}

}  // namespace

Expr replace(const Expr& e, PathView path, Expr replacement) {
  return replace_at(e, path, 0, std::move(replacement));
}

VarIndex new_var(const Expr& e) {
  auto m = max_var(e);
  return m ? *m + 1 : 0;
}

StrategyResult transform_chaotic(const Transformation& t, const Expr& e,
                                 const StrategyOptions& options) {
  auto start = std::chrono::steady_clock::now();
  RunState state(options, start_var(e, options));
  struct Hit {
    Path path;
    Rewrite rewrite;
  };
  Expr cur = e;
  for (;;) {
    auto attempts = sub_exp_of(cur).bind([&](const SubExpr& s) {
      return t(TransContext{state.next_var(), s.path}, s.expr).map([&s](const Rewrite& r) {
        return Hit{s.path, r};
      });
    });
    auto hit = one_value(attempts);
    if (!hit) break;
    state.record(hit->rewrite, hit->path);
    cur = replace(cur, hit->path, std::move(hit->rewrite.expr));
  }
  return StrategyResult{cur, state.report(start)};
}

StrategyResult transform_det(const DetTransformation& t, const Expr& e,
                             const StrategyOptions& options) {
  auto start = std::chrono::steady_clock::now();
  RunState state(options, start_var(e, options));
  auto attempt = [&](const TransContext& ctx, const Expr& x) { return t(ctx, x); };
  auto out = BottomUp(attempt, state).run(e);
  return StrategyResult{out, state.report(start)};
}

StrategyResult transform_mixed(const Transformation& t, const Expr& e,
                               const StrategyOptions& options) {
  auto start = std::chrono::steady_clock::now();
  RunState state(options, start_var(e, options));
  auto attempt = [&](const TransContext& ctx, const Expr& x) { return one_value(t(ctx, x)); };
  auto out = BottomUp(attempt, state).run(e);
  return StrategyResult{out, state.report(start)};
}

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

}  // namespace

std::vector<Stage> parse_pipeline(std::string_view spec, StrategyKind strategy) {
  std::vector<Stage> stages;
  if (trim(spec).empty()) return stages;
  for (const auto& text : split(spec, ';')) {
    if (text == "simplify") {
      stages.push_back(Stage{strategy, {"orFloat"}});
      stages.push_back(Stage{strategy, {"unDollar", "caseCancel"}});
      continue;
    }
    Stage stage{strategy, split(text, '|')};
    for (const auto& name : stage.rules) find_rule(name);
    stages.push_back(std::move(stage));
  }
  return stages;
}

PipelineResult apply_pipeline(std::span<const Stage> stages, const Program& program,
                              const PipelineOptions& options) {
  PipelineResult result{program, {}};
  result.report.traced = options.trace;
  for (const auto& stage : stages) {
    Transformation rule;
    DetTransformation det_rule;
    if (stage.strategy == StrategyKind::Deterministic) {
      det_rule = resolve_det_rules(stage.rules);
    } else {
      rule = resolve_rules(stage.rules);
    }
    RunReport stage_report;
    for (auto& f : result.program.functions) {
      StrategyOptions opts;
      opts.fuel = options.fuel;
      opts.trace = options.trace;
      opts.function_name = f.name;
      opts.next_var = std::max(static_cast<VarIndex>(f.arity), new_var(f.body));
      StrategyResult r = [&] {
        switch (stage.strategy) {
          case StrategyKind::Chaotic:
            return transform_chaotic(rule, f.body, opts);
          case StrategyKind::Mixed:
            return transform_mixed(rule, f.body, opts);
          case StrategyKind::Deterministic:
            break;
        }
        return transform_det(det_rule, f.body, opts);
      }();
      f.body = std::move(r.expr);
      stage_report.merge(r.report);
    }
    result.report.merge(stage_report);
  }
  if (stages.empty()) {
    for (const auto& f : program.functions) {
      result.report.functions.push_back(FunctionStats{
          f.name, 0, std::max(static_cast<VarIndex>(f.arity), new_var(f.body))});
    }
  }
  return result;
}

std::string format_trace(std::span<const TraceStep> trace) {
  std::ostringstream out;
  for (const auto& step : trace) {
    out << step.step_index << '\t' << step.function_name << '\t' << step.rule_name << '\t'
        << path_to_string(step.path) << '\n';
  }
  return out.str();
}

}  // namespace flattrans
