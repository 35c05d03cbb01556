#include "flattrans/printer.hpp"

#include <sstream>

namespace flattrans {

namespace {

void print(std::ostream& out, const Expr& e);

template <class T, class F>
void join(std::ostream& out, const std::vector<T>& xs, const char* sep, F&& each) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out << sep;
    each(xs[i]);
  }
}

void print_vars(std::ostream& out, const std::vector<VarIndex>& vars) {
  join(out, vars, ", ", [&](VarIndex v) { out << 'v' << v; });
}

void print(std::ostream& out, const Expr& e) {
  visit(overloaded{
            [&](const Var& v) { out << 'v' << v.idx; },
            [&](const Comb& c) {
              if (c.kind == CombKind::cons_call() && c.name == ":" && c.args.size() == 2) {
                out << '(';
                print(out, c.args[0]);
                out << " : ";
                print(out, c.args[1]);
                out << ')';
                return;
              }
              out << c.name;
              if (c.kind.is_partial()) out << '@' << c.kind.missing();
              if (c.kind == CombKind::cons_call() && c.args.empty()) return;
              out << '(';
              join(out, c.args, ", ", [&](const Expr& a) { print(out, a); });
              out << ')';
            },
            [&](const Or& o) {
              out << '(';
              print(out, o.lhs);
              out << " or ";
              print(out, o.rhs);
              out << ')';
            },
            [&](const Free& f) {
              out << "let ";
              print_vars(out, f.vars);
              out << " free in ";
              print(out, f.body);
            },
            [&](const Let& l) {
              out << "let v" << l.var << " = ";
              print(out, l.bound);
              out << " in ";
              print(out, l.body);
            },
            [&](const Case& c) {
              out << "case ";
              print(out, c.scrutinee);
              out << " of { ";
              join(out, c.branches, "; ", [&](const Branch& b) {
                out << b.pattern.name;
                if (!b.pattern.vars.empty()) {
                  out << '(';
                  print_vars(out, b.pattern.vars);
                  out << ')';
                }
                out << " -> ";
                print(out, b.body);
              });
              out << " }";
            },
        },
        e);
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream out;
  print(out, e);
  return out.str();
}

std::string to_string(const Function& f) {
  std::ostringstream out;
  out << f.name << '(';
  for (std::size_t i = 0; i < f.arity; ++i) {
    if (i > 0) out << ", ";
    out << 'v' << i;
  }
  out << ") = ";
  print(out, f.body);
  return out.str();
}

std::string to_string(const Program& p) {
  std::ostringstream out;
  out << "module " << p.module_name << '\n';
  for (const auto& f : p.functions) out << '\n' << to_string(f) << '\n';
  return out.str();
}

}  // namespace flattrans
