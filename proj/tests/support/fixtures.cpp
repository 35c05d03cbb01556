#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flattrans/codec.hpp"

namespace flattrans::fixtures {

Expr true_() { return make_cons_call("True"); }
Expr false_() { return make_cons_call("False"); }

Expr not_body() {
  return make_case(make_var(0), {make_branch("False", {}, true_()),
                                 make_branch("True", {}, false_())});
}

Expr not_not_true() {
  return make_func_call("$", {make_comb(CombKind::func_part_call(1), "not", {}),
                              make_func_call("not", {true_()})});
}

Expr insert_body() {
  return make_or(
      make_cons_call(":", {make_var(0), make_var(1)}),
      make_case(make_var(1),
                {make_branch(":", {2, 3},
                             make_cons_call(":", {make_var(2), make_func_call("insert", {make_var(0),
                                                                                         make_var(3)})}))}));
}

Expr insert_anf_body() {
  return make_or(
      make_cons_call(":", {make_var(0), make_var(1)}),
      make_case(make_var(1),
                {make_branch(":", {2, 3},
                             make_let(4, make_func_call("insert", {make_var(0), make_var(3)}),
                                      make_cons_call(":", {make_var(2), make_var(4)})))}));
}

Expr or_float_overlap() {
  return make_or(make_let(3, make_cons_call("1"), make_var(3)),
                 make_let(4, make_cons_call("1"), make_var(4)));
}

Program not_program() { return Program{"Not", {Function{"not", 1, not_body()}}}; }

Program insert_program() { return Program{"Insert", {Function{"insert", 2, insert_body()}}}; }

Expr list_of(const std::vector<std::string>& items) {
  Expr out = make_cons_call("[]");
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    out = make_cons_call(":", {make_cons_call(*it), out});
  }
  return out;
}

Value list_value(const std::vector<std::string>& items) {
  Value out = make_value("[]");
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    out = make_value(":", {make_value(*it), out});
  }
  return out;
}

std::vector<CorpusEntry> load_corpus() {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(FLATTRANS_CORPUS_DIR)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::ostringstream text;
    text << in.rdbuf();
    out.push_back(CorpusEntry{f.filename().string(), decode_program(text.str())});
  }
  return out;
}

}  // namespace flattrans::fixtures
