#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flattrans/ir.hpp"
#include "flattrans/nondet.hpp"

namespace flattrans {

// Functional patterns such as `_ ++ [x,x] ++ _` are emulated by enumerating
// every decomposition of a list and testing each one.

/// All decompositions prefix ++ suffix == xs, by increasing prefix length.
template <class T>
Choices<std::pair<std::vector<T>, std::vector<T>>> splits(std::vector<T> xs) {
  using Split = std::pair<std::vector<T>, std::vector<T>>;
  return Choices<Split>([xs = std::move(xs)](typename Choices<Split>::Sink k) {
    for (std::size_t i = 0; i <= xs.size(); ++i) {
      Split s{std::vector<T>(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(i)),
              std::vector<T>(xs.begin() + static_cast<std::ptrdiff_t>(i), xs.end())};
      if (!k(s)) return false;
    }
    return true;
  });
}

/// Every x with xs == _ ++ [x,x] ++ _, in order of position.
Choices<int> adjacent_dup(std::vector<int> xs);

/// Bodies of the branches `cname -> e` that bind no pattern variables.
Choices<Expr> with_branch(const std::string& cname, std::vector<Branch> branches);

struct DollarMatch {
  std::string fname;
  std::vector<Expr> args;
  std::size_t missing;
  Expr x;
};

/// Matches `Comb FuncCall "$" [Comb (FuncPartCall missing) fname args, x]`.
Choices<DollarMatch> match_dollar(const Expr& e);

}  // namespace flattrans
