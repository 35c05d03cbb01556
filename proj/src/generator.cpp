#include "flattrans/generator.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

namespace flattrans {

namespace {

struct Constructor {
  const char* name;
  std::size_t arity;
};

constexpr std::array<Constructor, 10> kConstructors{{
    {"True", 0},
    {"False", 0},
    {"Z", 0},
    {"[]", 0},
    {"0", 0},
    {"1", 0},
    {"S", 1},
    {"Just", 1},
    {":", 2},
    {"Pair", 2},
}};

constexpr std::size_t kNullary = 6;

class Random {
 public:
  explicit Random(std::mt19937_64& engine) : engine_(engine) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(std::size_t percent) { return below(100) < percent; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64& engine_;
};

struct Callee {
  std::string name;
  std::size_t arity;
  bool deterministic;
};

/// Builds one function body under the program-level restrictions.
class BodyBuilder {
 public:
  BodyBuilder(Random& rnd, std::size_t arity, std::vector<Callee> callees, std::size_t budget)
      : rnd_(rnd), callees_(std::move(callees)), budget_(budget), next_(static_cast<VarIndex>(arity)) {
    for (VarIndex v = 0; v < arity; ++v) scope_.push_back(v);
  }

  Expr build() {
    Expr body = gen(0, Mode{});
    // A single depth-limited tree rarely uses a large budget; join more
    // trees by choices until it is spent. Choices keep value sets additive,
    // so sampled calls stay cheap to evaluate and rarely fail as a whole.
    while (budget_ > 0) {
      spend();
      deterministic_ = false;
      body = make_or(std::move(body), gen(1, Mode{}));
    }
    return body;
  }

  bool deterministic() const { return deterministic_; }
  std::size_t nodes() const { return nodes_; }

 private:
  struct Mode {
    bool det = false;         // no choices (let-bound expressions)
    bool simple_root = false; // root must be a variable or an application
  };

  enum class Shape { Leaf, Cons, Call, Dollar, Or, Let, Case, Cancel };

  Expr leaf() {
    spend();
    if (!scope_.empty() && rnd_.chance(60)) return make_var(rnd_.pick(scope_));
    return make_cons_call(kConstructors[rnd_.below(kNullary)].name);
  }

  std::vector<const Callee*> callable(bool det, bool needs_args) const {
    std::vector<const Callee*> out;
    for (const auto& c : callees_) {
      if (det && !c.deterministic) continue;
      if (needs_args && c.arity == 0) continue;
      out.push_back(&c);
    }
    return out;
  }

  Shape shape(std::size_t depth, Mode mode) {
    if (budget_ == 0 || depth > 7) return Shape::Leaf;
    std::vector<std::pair<Shape, std::size_t>> weights{
        {Shape::Leaf, 14}, {Shape::Cons, 18}, {Shape::Call, 12}, {Shape::Dollar, 10}};
    if (!mode.simple_root) {
      if (!mode.det) weights.emplace_back(Shape::Or, 10);
      weights.emplace_back(Shape::Let, 9);
      weights.emplace_back(Shape::Case, 9);
      weights.emplace_back(Shape::Cancel, 9);
    }
    std::size_t total = 0;
    for (const auto& w : weights) total += w.second;
    auto roll = rnd_.below(total);
    for (const auto& [s, w] : weights) {
      if (roll < w) return s;
      roll -= w;
    }
    return Shape::Leaf;
  }

  void spend() {
    ++nodes_;
    if (budget_ > 0) --budget_;
  }

  Expr gen(std::size_t depth, Mode mode) {
    Mode inner{mode.det, false};
    switch (shape(depth, mode)) {
      case Shape::Leaf:
        return leaf();
      case Shape::Cons: {
        spend();
        const auto& c = kConstructors[rnd_.below(kConstructors.size())];
        std::vector<Expr> args;
        for (std::size_t i = 0; i < c.arity; ++i) args.push_back(gen(depth + 1, inner));
        return make_cons_call(c.name, std::move(args));
      }
      case Shape::Call: {
        auto fs = callable(mode.det, false);
        if (fs.empty()) return leaf();
        spend();
        const Callee& f = *fs[rnd_.below(fs.size())];
        std::vector<Expr> args;
        for (std::size_t i = 0; i < f.arity; ++i) args.push_back(gen(depth + 1, inner));
        return make_func_call(f.name, std::move(args));
      }
      case Shape::Dollar:
        return dollar(depth, inner);
      case Shape::Or: {
        spend();
        deterministic_ = false;
        auto lhs = rnd_.chance(50) ? let_expr(depth + 1, inner) : gen(depth + 1, inner);
        auto rhs = rnd_.chance(40) ? let_expr(depth + 1, inner) : gen(depth + 1, inner);
        return make_or(std::move(lhs), std::move(rhs));
      }
      case Shape::Let:
        return let_expr(depth, inner);
      case Shape::Case:
        return case_expr(depth, inner);
      case Shape::Cancel:
        return cancel_expr(depth, inner);
    }
    return leaf();
  }

  Expr let_expr(std::size_t depth, Mode mode) {
    spend();
    auto var = next_++;
    auto bound = gen(depth + 1, Mode{true, false});
    scope_.push_back(var);
    auto body = gen(depth + 1, mode);
    scope_.pop_back();
    return make_let(var, std::move(bound), std::move(body));
  }

  Expr dollar(std::size_t depth, Mode mode) {
    auto fs = callable(mode.det, true);
    if (fs.empty()) return leaf();
    const Callee& f = *fs[rnd_.below(fs.size())];
    auto missing = 1 + rnd_.below(f.arity);
    std::vector<Expr> given;
    for (std::size_t i = 0; i < f.arity - missing; ++i) given.push_back(gen(depth + 1, mode));
    spend();
    Expr fn = make_comb(CombKind::func_part_call(missing), f.name, std::move(given));
    // Chains of `$` only become redexes one after the other.
    auto applications = 1 + (missing > 1 && rnd_.chance(50) ? rnd_.below(missing) : 0);
    for (std::size_t i = 0; i < applications; ++i) {
      spend();
      fn = make_func_call("$", {std::move(fn), gen(depth + 1, mode)});
    }
    return fn;
  }

  Expr scrutinee(std::size_t depth, Mode mode) {
    auto fs = callable(mode.det, false);
    if (fs.empty() || (!scope_.empty() && rnd_.chance(75))) {
      spend();
      return make_var(rnd_.pick(scope_));
    }
    spend();
    const Callee& f = *fs[rnd_.below(fs.size())];
    std::vector<Expr> args;
    for (std::size_t i = 0; i < f.arity; ++i) args.push_back(gen(depth + 1, mode));
    return make_func_call(f.name, std::move(args));
  }

  std::vector<std::size_t> distinct_constructors(std::size_t count, bool nullary_only) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < (nullary_only ? kNullary : kConstructors.size()); ++i) {
      pool.push_back(i);
    }
    std::vector<std::size_t> out;
    while (out.size() < count && !pool.empty()) {
      auto at = rnd_.below(pool.size());
      out.push_back(pool[at]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    }
    return out;
  }

  Branch branch(std::size_t ctor, std::size_t depth, Mode mode, bool leaf_body) {
    const auto& c = kConstructors[ctor];
    std::vector<VarIndex> vars;
    for (std::size_t i = 0; i < c.arity; ++i) vars.push_back(next_++);
    scope_.insert(scope_.end(), vars.begin(), vars.end());
    auto body = leaf_body ? leaf() : gen(depth + 1, mode);
    scope_.resize(scope_.size() - vars.size());
    return make_branch(c.name, std::move(vars), std::move(body));
  }

  Expr case_expr(std::size_t depth, Mode mode) {
    // Without variables or callees the scrutinee would be a constructor,
    // which must go through the restricted cancelable form.
    if (scope_.empty() && callable(mode.det, false).empty()) return cancel_expr(depth, mode);
    spend();
    auto scrut = scrutinee(depth + 1, mode);
    std::vector<Branch> branches;
    for (auto ctor : distinct_constructors(1 + rnd_.below(3), false)) {
      branches.push_back(branch(ctor, depth, mode, false));
    }
    return make_case(std::move(scrut), std::move(branches));
  }

  Expr cancel_expr(std::size_t depth, Mode mode) {
    spend();
    auto ctors = distinct_constructors(1 + rnd_.below(3), true);
    // Sometimes scrutinize a constructor with no branch: not a redex.
    bool matching = rnd_.chance(85);
    auto selected = matching ? ctors[rnd_.below(ctors.size())] : kNullary;
    std::string scrut_name;
    if (matching) {
      scrut_name = kConstructors[selected].name;
    } else {
      auto others = distinct_constructors(kNullary, true);
      auto it = std::find_if(others.begin(), others.end(), [&](std::size_t c) {
        return std::find(ctors.begin(), ctors.end(), c) == ctors.end();
      });
      if (it == others.end()) return leaf();
      scrut_name = kConstructors[*it].name;
    }
    ++nodes_;
    std::vector<Branch> branches;
    for (auto ctor : ctors) {
      if (ctor == selected) {
        const auto& c = kConstructors[ctor];
        branches.push_back(make_branch(c.name, {}, gen(depth + 1, Mode{mode.det, true})));
      } else {
        branches.push_back(branch(ctor, depth, mode, true));
      }
    }
    return make_case(make_cons_call(scrut_name), std::move(branches));
  }

  Random& rnd_;
  std::vector<Callee> callees_;
  std::size_t budget_;
  VarIndex next_;
  std::vector<VarIndex> scope_;
  bool deterministic_ = true;
  std::size_t nodes_ = 0;
};

/// Callees are restricted by estimated evaluation cost so that sampled
/// calls stay cheap to evaluate.
constexpr std::size_t kMaxCalleeCost = 600;

}  // namespace

Program generate_program(const GeneratorOptions& options) {
  std::mt19937_64 engine(options.seed);
  Random rnd(engine);
  Program program{options.module_name, {}};
  std::vector<Callee> callees;
  std::unordered_map<std::string, std::size_t> cost;
  std::size_t per_function = std::max<std::size_t>(1, options.target_nodes /
                                                          std::max<std::size_t>(1, options.functions));
  for (std::size_t i = 0; i < options.functions; ++i) {
    auto arity = rnd.below(4);
    std::vector<Callee> allowed;
    for (const auto& c : callees) {
      if (cost[c.name] <= kMaxCalleeCost) allowed.push_back(c);
    }
    auto budget = per_function / 2 + rnd.below(per_function + 1);
    BodyBuilder builder(rnd, arity, allowed, budget);
    auto body = builder.build();
    std::string name = "f" + std::to_string(i);

    std::size_t c = builder.nodes();
    std::vector<std::pair<std::size_t, Expr>> stack{{0, body}};
    while (!stack.empty()) {
      auto e = stack.back().second;
      stack.pop_back();
      if (const auto* comb = e.get_if<Comb>()) {
        auto it = cost.find(comb->name);
        if (it != cost.end()) c += it->second;
      }
      for (auto& child : children(e)) stack.push_back(std::move(child));
    }
    cost[name] = builder.deterministic() ? c : 2 * c;
    callees.push_back(Callee{name, arity, builder.deterministic()});
    program.functions.push_back(Function{name, arity, std::move(body)});
  }
  return program;
}

namespace {

class ExprBuilder {
 public:
  ExprBuilder(Random& rnd, const ExprGenOptions& options)
      : rnd_(rnd), options_(options), next_(options.params) {
    for (VarIndex v = 0; v < options.params; ++v) scope_.push_back(v);
  }

  Expr gen(std::size_t depth) {
    auto roll = depth >= options_.max_depth ? 0 : rnd_.below(100);
    if (roll < 15) return leaf();
    if (roll < 30) return comb(depth);
    if (roll < 42) return dollar(depth);
    if (roll < 54) {
      auto lhs = rnd_.chance(50) ? let_expr(depth + 1) : gen(depth + 1);
      auto rhs = rnd_.chance(50) ? let_expr(depth + 1) : gen(depth + 1);
      return make_or(std::move(lhs), std::move(rhs));
    }
    if (roll < 64) return let_expr(depth);
    if (roll < 84) return case_expr(depth);
    if (roll < 92 && options_.allow_free) {
      std::vector<VarIndex> vars;
      for (std::size_t i = rnd_.below(3); i > 0; --i) vars.push_back(next_++);
      scope_.insert(scope_.end(), vars.begin(), vars.end());
      auto body = gen(depth + 1);
      scope_.resize(scope_.size() - vars.size());
      return make_free(std::move(vars), std::move(body));
    }
    return comb(depth);
  }

 private:
  Expr leaf() {
    if (!scope_.empty() && rnd_.chance(50)) return make_var(rnd_.pick(scope_));
    if (rnd_.chance(20)) return make_func_call("g" + std::to_string(rnd_.below(3)));
    return make_cons_call(kConstructors[rnd_.below(kNullary)].name);
  }

  Expr comb(std::size_t depth) {
    std::vector<Expr> args;
    for (std::size_t i = rnd_.below(4); i > 0; --i) args.push_back(gen(depth + 1));
    switch (rnd_.below(5)) {
      case 0:
        return make_cons_call(kConstructors[rnd_.below(kConstructors.size())].name,
                              std::move(args));
      case 1:
        return make_comb(CombKind::func_part_call(1 + rnd_.below(3)), "p", std::move(args));
      case 2:
        return make_comb(CombKind::cons_part_call(1 + rnd_.below(2)), "Pair", std::move(args));
      default:
        return make_func_call("f" + std::to_string(rnd_.below(3)), std::move(args));
    }
  }

  Expr dollar(std::size_t depth) {
    Expr fn = [&] {
      switch (rnd_.below(6)) {
        case 0:
          return scope_.empty() ? leaf() : make_var(rnd_.pick(scope_));
        case 1:
          return make_comb(CombKind::cons_part_call(1), "Just", {});
        case 2:
          return make_func_call("h", {gen(depth + 1)});
        default: {
          std::vector<Expr> given;
          for (std::size_t i = rnd_.below(3); i > 0; --i) given.push_back(gen(depth + 1));
          return make_comb(CombKind::func_part_call(1 + rnd_.below(3)), "h", std::move(given));
        }
      }
    }();
    std::vector<Expr> args{std::move(fn), gen(depth + 1)};
    if (rnd_.chance(5)) args.push_back(leaf());
    return make_func_call("$", std::move(args));
  }

  Expr let_expr(std::size_t depth) {
    auto var = next_++;
    auto bound = gen(depth + 1);
    scope_.push_back(var);
    auto body = gen(depth + 1);
    scope_.pop_back();
    return make_let(var, std::move(bound), std::move(body));
  }

  Expr case_expr(std::size_t depth) {
    Expr scrut = rnd_.chance(50) ? make_cons_call(kConstructors[rnd_.below(kNullary)].name)
                                 : gen(depth + 1);
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < kConstructors.size(); ++i) pool.push_back(i);
    std::vector<Branch> branches;
    for (std::size_t n = 1 + rnd_.below(4); n > 0 && !pool.empty(); --n) {
      auto at = rnd_.below(pool.size());
      const auto& c = kConstructors[pool[at]];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
      std::vector<VarIndex> vars;
      // Occasionally give a nullary constructor pattern variables: a near
      // miss for case cancelling.
      auto arity = c.arity == 0 && rnd_.chance(10) ? 1 : c.arity;
      for (std::size_t i = 0; i < arity; ++i) vars.push_back(next_++);
      scope_.insert(scope_.end(), vars.begin(), vars.end());
      auto body = gen(depth + 1);
      scope_.resize(scope_.size() - vars.size());
      branches.push_back(make_branch(c.name, std::move(vars), std::move(body)));
    }
    return make_case(std::move(scrut), std::move(branches));
  }

  Random& rnd_;
  const ExprGenOptions& options_;
  VarIndex next_;
  std::vector<VarIndex> scope_;
};

Expr ground_term(Random& rnd, std::size_t depth) {
  if (depth == 0 || rnd.chance(40)) return make_cons_call(kConstructors[rnd.below(kNullary)].name);
  const auto& c = kConstructors[rnd.below(kConstructors.size())];
  std::vector<Expr> args;
  for (std::size_t i = 0; i < c.arity; ++i) args.push_back(ground_term(rnd, depth - 1));
  return make_cons_call(c.name, std::move(args));
}

}  // namespace

Expr generate_expr(std::mt19937_64& rng, const ExprGenOptions& options) {
  Random rnd(rng);
  return ExprBuilder(rnd, options).gen(0);
}

std::vector<Expr> sample_calls(const Program& program, std::uint64_t seed,
                               std::size_t per_function) {
  std::mt19937_64 engine(seed);
  Random rnd(engine);
  std::vector<Expr> calls;
  for (const auto& f : program.functions) {
    for (std::size_t n = 0; n < per_function; ++n) {
      std::vector<Expr> args;
      for (std::size_t i = 0; i < f.arity; ++i) args.push_back(ground_term(rnd, 2));
      calls.push_back(make_func_call(f.name, std::move(args)));
    }
  }
  return calls;
}

}  // namespace flattrans
