#include "flattrans/patterns.hpp"

namespace flattrans {

Choices<int> adjacent_dup(std::vector<int> xs) {
  return splits(std::move(xs)).bind([](const auto& split) {
    const auto& suffix = split.second;
    if (suffix.size() >= 2 && suffix[0] == suffix[1]) return Choices<int>::pure(suffix[0]);
    return Choices<int>::fail();
  });
}

Choices<Expr> with_branch(const std::string& cname, std::vector<Branch> branches) {
  if (branches.empty()) return Choices<Expr>::fail();
  return splits(std::move(branches)).bind([cname](const auto& split) {
    const auto& suffix = split.second;
    if (!suffix.empty() && suffix.front().pattern.name == cname &&
        suffix.front().pattern.vars.empty()) {
      return Choices<Expr>::pure(suffix.front().body);
    }
    return Choices<Expr>::fail();
  });
}

Choices<DollarMatch> match_dollar(const Expr& e) {
  const auto* call = e.get_if<Comb>();
  if (call == nullptr || call->kind != CombKind::func_call() || call->name != "$" ||
      call->args.size() != 2) {
    return Choices<DollarMatch>::fail();
  }
  const auto* fn = call->args[0].get_if<Comb>();
  if (fn == nullptr || fn->kind.tag() != CombKind::Tag::FuncPartCall) {
    return Choices<DollarMatch>::fail();
  }
  return Choices<DollarMatch>::pure(
      DollarMatch{fn->name, fn->args, fn->kind.missing(), call->args[1]});
}

}  // namespace flattrans
