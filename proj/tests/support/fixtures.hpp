#pragma once

#include <string>
#include <utility>
#include <vector>

#include <ostream>

#include "flattrans/eval.hpp"
#include "flattrans/ir.hpp"
#include "flattrans/printer.hpp"

// Lets test frameworks print IR terms in failure messages.
namespace flattrans {
inline std::ostream& operator<<(std::ostream& out, const Expr& e) { return out << to_string(e); }
inline std::ostream& operator<<(std::ostream& out, const Value& v) { return out << to_string(v); }
}  // namespace flattrans

namespace flattrans::fixtures {

Expr true_();
Expr false_();

/// case v0 of { False -> True; True -> False }
Expr not_body();
/// not $ not True
Expr not_not_true();
/// x : xs  or  case xs of { y:ys -> y : insert(x,ys) }, x=0 xs=1 y=2 ys=3
Expr insert_body();
/// The A-normal form of insert: the recursive call bound by a let.
Expr insert_anf_body();
/// (let x = 1 in x) ? (let y = 1 in y)
Expr or_float_overlap();

Program not_program();
Program insert_program();

/// Peano-free list literal of 0-ary constructor names.
Expr list_of(const std::vector<std::string>& items);
Value list_value(const std::vector<std::string>& items);

struct CorpusEntry {
  std::string file;
  Program program;
};

/// Every program of the bundled corpus, sorted by file name.
std::vector<CorpusEntry> load_corpus();

}  // namespace flattrans::fixtures
