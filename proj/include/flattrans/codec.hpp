#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "flattrans/ir.hpp"

namespace flattrans {

class DecodeError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Schema, Invariant };

  DecodeError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// JSON interchange format. Output field order is fixed; input accepts any
// field order. Decoding validates every IR invariant.

Program decode_program(std::string_view text);
Expr decode_expr(std::string_view text);

std::string encode_program(const Program& program);
std::string encode_expr(const Expr& e);

}  // namespace flattrans
