#include "flattrans/codec.hpp"

#include <limits>

#include "json.hpp"

namespace flattrans {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& what) {
  throw DecodeError(DecodeError::Kind::Schema, what);
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object()) schema_error(std::string("expected an object holding '") + name + "'");
  auto it = obj.find(name);
  if (it == obj.end()) schema_error(std::string("missing field '") + name + "'");
  return *it;
}

std::string as_string(const json& j, const char* what) {
  if (!j.is_string()) schema_error(std::string("'") + what + "' must be a string");
  return j.get<std::string>();
}

std::uint64_t as_natural(const json& j, const char* what) {
  if (!j.is_number_integer()) {
    schema_error(std::string("'") + what + "' must be a non-negative integer");
  }
  if (!j.is_number_unsigned()) {
    schema_error(std::string("'") + what + "' must be non-negative");
  }
  return j.get<std::uint64_t>();
}

VarIndex as_var(const json& j, const char* what) {
  auto n = as_natural(j, what);
  if (n > std::numeric_limits<VarIndex>::max()) {
    schema_error(std::string("'") + what + "' is out of range");
  }
  return static_cast<VarIndex>(n);
}

std::vector<VarIndex> as_vars(const json& j, const char* what) {
  if (!j.is_array()) schema_error(std::string("'") + what + "' must be an array");
  std::vector<VarIndex> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(as_var(v, what));
  return out;
}

CombKind as_kind(const json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "FuncCall") return CombKind::func_call();
    if (s == "ConsCall") return CombKind::cons_call();
    schema_error("unknown combination kind '" + s + "'");
  }
  if (!j.is_object()) schema_error("'kind' must be a string or an object");
  auto part = as_string(field(j, "part"), "part");
  auto missing = as_natural(field(j, "missing"), "missing");
  if (part != "Func" && part != "Cons") schema_error("unknown partial kind '" + part + "'");
  if (missing < 1) {
    throw DecodeError(DecodeError::Kind::Invariant,
                      "partial call must have at least one missing argument");
  }
  return part == "Func" ? CombKind::func_part_call(missing)
                        : CombKind::cons_part_call(missing);
}

Expr decode(const json& j) {
  auto tag = as_string(field(j, "tag"), "tag");
  if (tag == "Var") return make_var(as_var(field(j, "idx"), "idx"));
  if (tag == "Comb") {
    auto kind = as_kind(field(j, "kind"));
    auto name = as_string(field(j, "name"), "name");
    const auto& args = field(j, "args");
    if (!args.is_array()) schema_error("'args' must be an array");
    std::vector<Expr> out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(decode(a));
    return make_comb(kind, std::move(name), std::move(out));
  }
  if (tag == "Or") return make_or(decode(field(j, "lhs")), decode(field(j, "rhs")));
  if (tag == "Free") {
    return make_free(as_vars(field(j, "vars"), "vars"), decode(field(j, "body")));
  }
  if (tag == "Let") {
    auto var = as_var(field(j, "var"), "var");
    return make_let(var, decode(field(j, "bound")), decode(field(j, "body")));
  }
  if (tag == "Case") {
    auto scrutinee = decode(field(j, "scrutinee"));
    const auto& bs = field(j, "branches");
    if (!bs.is_array()) schema_error("'branches' must be an array");
    std::vector<Branch> branches;
    for (const auto& b : bs) {
      const auto& pattern = field(b, "pattern");
      branches.push_back(make_branch(as_string(field(pattern, "name"), "name"),
                                     as_vars(field(pattern, "vars"), "vars"),
                                     decode(field(b, "body"))));
    }
    return make_case(std::move(scrutinee), std::move(branches));
  }
  schema_error("unknown expression tag '" + tag + "'");
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw DecodeError(DecodeError::Kind::Syntax, err.what());
  }
}

template <class F>
auto checked(F&& f) {
  try {
    return f();
  } catch (const InvariantError& err) {
    throw DecodeError(DecodeError::Kind::Invariant, err.what());
  }
}

ordered_json encode(const Expr& e);

ordered_json encode_kind(const CombKind& kind) {
  switch (kind.tag()) {
    case CombKind::Tag::FuncCall:
      return "FuncCall";
    case CombKind::Tag::ConsCall:
      return "ConsCall";
    case CombKind::Tag::FuncPartCall:
      return ordered_json{{"part", "Func"}, {"missing", kind.missing()}};
    case CombKind::Tag::ConsPartCall:
      return ordered_json{{"part", "Cons"}, {"missing", kind.missing()}};
  }
  return nullptr;
}

ordered_json encode(const Expr& e) {
  return visit(
      overloaded{
          [](const Var& v) { return ordered_json{{"tag", "Var"}, {"idx", v.idx}}; },
          [](const Comb& c) {
            auto args = ordered_json::array();
            for (const auto& a : c.args) args.push_back(encode(a));
            return ordered_json{{"tag", "Comb"},
                                {"kind", encode_kind(c.kind)},
                                {"name", c.name},
                                {"args", std::move(args)}};
          },
          [](const Or& o) {
            return ordered_json{{"tag", "Or"}, {"lhs", encode(o.lhs)}, {"rhs", encode(o.rhs)}};
          },
          [](const Free& f) {
            return ordered_json{{"tag", "Free"}, {"vars", f.vars}, {"body", encode(f.body)}};
          },
          [](const Let& l) {
            return ordered_json{{"tag", "Let"},
                                {"var", l.var},
                                {"bound", encode(l.bound)},
                                {"body", encode(l.body)}};
          },
          [](const Case& c) {
            auto branches = ordered_json::array();
            for (const auto& b : c.branches) {
              branches.push_back(ordered_json{
                  {"pattern", ordered_json{{"name", b.pattern.name}, {"vars", b.pattern.vars}}},
                  {"body", encode(b.body)}});
            }
            return ordered_json{{"tag", "Case"},
                                {"scrutinee", encode(c.scrutinee)},
                                {"branches", std::move(branches)}};
          },
      },
      e);
}

}  // namespace

Program decode_program(std::string_view text) {
  auto doc = parse(text);
  Program program;
  program.module_name = as_string(field(doc, "module"), "module");
  const auto& fs = field(doc, "functions");
  if (!fs.is_array()) schema_error("'functions' must be an array");
  for (const auto& f : fs) {
    auto name = as_string(field(f, "name"), "name");
    auto arity = as_natural(field(f, "arity"), "arity");
    auto body = checked([&] { return decode(field(f, "body")); });
    program.functions.push_back(Function{std::move(name), arity, std::move(body)});
  }
  checked([&] {
    validate_program(program);
    return 0;
  });
  return program;
}

Expr decode_expr(std::string_view text) {
  auto doc = parse(text);
  return checked([&] {
    auto e = decode(doc);
    validate_body(e);
    return e;
  });
}

std::string encode_program(const Program& program) {
  auto functions = ordered_json::array();
  for (const auto& f : program.functions) {
    functions.push_back(
        ordered_json{{"name", f.name}, {"arity", f.arity}, {"body", encode(f.body)}});
  }
  return ordered_json{{"module", program.module_name}, {"functions", std::move(functions)}}
      .dump();
}

std::string encode_expr(const Expr& e) { return encode(e).dump(); }

}  // namespace flattrans
