#pragma once

#include <string>

#include "flattrans/ir.hpp"

namespace flattrans {

// Human-readable FlatCurry-like notation. Variables print as v<idx>, partial
// calls as name@missing(args).

std::string to_string(const Expr& e);
std::string to_string(const Function& f);
std::string to_string(const Program& p);

}  // namespace flattrans
