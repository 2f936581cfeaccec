#include <doctest.h>

#include <sstream>

#include "geosym/errors.hpp"
#include "geosym/kb.hpp"
#include "geosym/program.hpp"
#include "support.hpp"

using namespace geosym;

namespace {

std::vector<std::string> value_rule_texts(const TupleVariant& v) {
  std::vector<std::string> out;
  for (const auto& r : v.rules)
    if (auto* vr = std::get_if<ValueRule>(&r)) out.push_back(vr->text);
  return out;
}

}  // namespace

TEST_CASE("34 operators, the element set resolves") {
  const auto& kb = builtin_kb();
  CHECK(kb.size() == 34);
  for (const char* op :
       {"Get", "Equal", "Sum", "Multiple", "Iso_Tri_Ang", "Gougu", "Gsin", "Gcos", "Gtan", "Cos_Law", "Sin_Law",
        "Median", "Proportion", "Ratio", "Geo_Mean", "Chord2_Ang", "TanSec_Ang", "Tria_BH_Area", "Tria_SAS_Area",
        "PRK_Perim", "Para_Area", "Rect_Area", "Rhom_Area", "Kite_Area", "Trap_Area", "Circle_R_Circum",
        "Circle_D_Circum", "Circle_R_Area", "Circle_D_Area", "ArcSeg_Area", "Ngon_Angsum", "RNgon_B_Area",
        "RNgon_L_Area", "RNgon_H_Area"})
    CHECK_MESSAGE(kb.is_operator(op), op);
}

TEST_CASE("the three worked tuples carry the quoted rules") {
  const auto& kb = builtin_kb();
  const auto& gougu = kb.base_search("Gougu")->variants.at(0);
  CHECK(render(*gougu.formula) == "a^2+b^2 = c^2");
  CHECK(value_rule_texts(gougu) == std::vector<std::string>{"a+b>c", "0<a<c", "0<b<c"});

  const auto& gcos = kb.base_search("Gcos")->variants.at(0);
  CHECK(render(*gcos.formula) == "cos(c) = a/b");
  CHECK(value_rule_texts(gcos) == std::vector<std::string>{"0<c<90", "0<a<b"});

  const auto& kite = kb.base_search("Kite_Area")->variants.at(0);
  CHECK(render(*kite.formula) == "a*b/2 = c");
  CHECK(value_rule_texts(kite) == std::vector<std::string>{"a,b,c>0"});
  bool relational = false;
  for (const auto& r : kite.rules)
    if (auto* rel = std::get_if<RelationalRule>(&r)) relational = rel->tag == "diagonals-intersect";
  CHECK(relational);
}

TEST_CASE("every witness satisfies its formula and rules") {
  for (const auto& w : check_witnesses(builtin_kb())) {
    CHECK_MESSAGE(w.ok(), w.op << " variant " << w.variant << " residual " << w.residual << " " << w.detail);
  }
}

TEST_CASE("lookup and aliases") {
  const auto& kb = builtin_kb();
  CHECK(kb.base_search("GouGu") == kb.base_search("Gougu"));
  CHECK(kb.base_search("Ngon_Ang") == kb.base_search("Ngon_Angsum"));
  CHECK(kb.base_search("Frobnicate") == nullptr);
}

TEST_CASE("variant matching") {
  const auto& kb = builtin_kb();
  CHECK(match_variant(*kb.base_search("Geo_Mean"), 2) == nullptr);
  const auto* ratio = kb.base_search("Ratio");
  CHECK(render(*match_variant(*ratio, 3)->formula) == "a/b = c");
  CHECK(render(*match_variant(*ratio, 4)->formula) == "(a/b)^c = d");
  const auto* sum = match_variant(*kb.base_search("Sum"), 5);
  REQUIRE(sum != nullptr);
  CHECK(sum->variadic);
  std::vector<Expr> ops;
  for (const char* n : {"N0", "N1", "N2", "N3", "V0"}) ops.push_back(parse_expr(n));
  CHECK(render(*sum->formula_for(ops)) == "N0+N1+N2+N3 = V0");
  CHECK(match_variant(*kb.base_search("Sum"), 2) == nullptr);
  auto groups = sum->groups_for(5);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0] == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("kb file format") {
  std::istringstream one(R"({"operator": "Gougu", "variants": [{"operands": ["a","b","c"], "formula": "a^2+b^2 = c^2", "commutative": [[0,1]], "rules": ["a+b>c"]}]})");
  CHECK(parse_kb(one).size() == 1);

  std::istringstream dup(R"({"operator": "Gougu", "variants": [{"operands": ["a","b","c"], "formula": "a^2+b^2 = c^2"}]}
{"operator": "Gougu", "variants": [{"operands": ["a","b","c"], "formula": "a^2+b^2 = c^2"}]})");
  CHECK_THROWS_AS(parse_kb(dup), DuplicateOperator);

  std::istringstream undeclared(R"({"operator": "X", "variants": [{"operands": ["a","b"], "formula": "a = b", "rules": ["z>0"]}]})");
  CHECK_THROWS_AS(parse_kb(undeclared), FormatError);

  std::istringstream roundtrip(dump_kb(builtin_kb()));
  CHECK(parse_kb(roundtrip) == builtin_kb());
  CHECK(load_kb(test::data_path("builtin_kb.jsonl")) == builtin_kb());
}
