#include <initializer_list>

#include "geosym/kb.hpp"

namespace geosym {

namespace {

struct Rel {
  const char* tag;
  const char* description;
};

TupleVariant variant(std::string_view operands, const char* formula, std::vector<std::vector<int>> comm,
                     std::initializer_list<const char*> rules, std::initializer_list<const char*> witness,
                     std::initializer_list<Rel> relations = {}, bool variadic = false) {
  TupleVariant v;
  for (char c : operands) v.placeholders.push_back(c);
  if (formula) v.formula = parse_equation(formula);
  v.commutative = std::move(comm);
  for (const char* r : rules) v.rules.push_back(ValueRule{parse_predicate(r), r});
  for (const auto& r : relations) v.rules.push_back(RelationalRule{r.tag, r.description});
  v.variadic = variadic;
  auto w = witness.begin();
  for (std::size_t i = 0; i < v.placeholders.size() && w != witness.end(); ++i, ++w) v.witness[v.placeholders[i]] = *w;
  return v;
}

KnowledgeTuple tuple(const char* op, std::vector<TupleVariant> variants, std::vector<std::string> aliases = {}) {
  return KnowledgeTuple{op, std::move(aliases), std::move(variants)};
}

KnowledgeBase make_builtin() {
  KnowledgeBase kb;
  kb.add(tuple("Get", {variant("a", nullptr, {}, {}, {})}));
  kb.add(tuple("Equal", {variant("ab", "a = b", {{0, 1}}, {}, {"2", "2"})}));
  kb.add(tuple("Sum", {variant("abc", "a + b = c", {}, {}, {"1", "2", "3"}, {}, true)}));
  kb.add(tuple("Multiple", {variant("abc", "a * b = c", {}, {}, {"2", "3", "6"}, {}, true)}));
  kb.add(tuple("Iso_Tri_Ang", {variant("ab", "a + 2 * b = 180", {}, {"0<a<180", "0<b<180"}, {"40", "70"})}));
  kb.add(tuple("Gougu", {variant("abc", "a^2 + b^2 = c^2", {{0, 1}}, {"a+b>c", "0<a<c", "0<b<c"}, {"3", "4", "5"})},
               {"GouGu"}));
  kb.add(tuple("Gsin", {variant("abc", "sin(c) = a / b", {}, {"0<c<90", "0<a<b"}, {"1", "2", "30"})}));
  kb.add(tuple("Gcos", {variant("abc", "cos(c) = a / b", {}, {"0<c<90", "0<a<b"}, {"1", "2", "60"})}));
  kb.add(tuple("Gtan", {variant("abc", "tan(c) = a / b", {}, {"0<c<90", "a,b>0"}, {"1", "1", "45"})}));
  kb.add(tuple("Cos_Law", {variant("abcd", "a^2 = b^2 + c^2 - 2 * b * c * cos(d)", {{1, 2}}, {"a,b,c>0", "0<d<180"},
                                   {"7", "5", "8", "60"})}));
  kb.add(tuple("Sin_Law", {variant("abcd", "sin(a) / b = sin(c) / d", {}, {"0<a<180", "0<c<180", "b,d>0"},
                                   {"30", "1", "90", "2"})}));
  kb.add(tuple("Median", {variant("abc", "a + c = 2 * b", {{0, 2}}, {"a,b,c>0"}, {"2", "3", "4"})}));
  kb.add(tuple("Proportion", {variant("abcd", "a / b = c / d", {}, {"a,b,c,d>0"}, {"1", "2", "3", "6"}),
                              variant("abcde", "(a / b)^e = c / d", {}, {"a,b,c,d,e>0"}, {"1", "2", "1", "4", "2"})}));
  kb.add(tuple("Ratio", {variant("abc", "a / b = c", {}, {"a,b,c>0"}, {"6", "3", "2"}),
                         variant("abcd", "(a / b)^c = d", {}, {"a,b,c,d>0"}, {"1", "2", "2", "0.25"})}));
  kb.add(tuple("Geo_Mean", {variant("abc", "a * b = c^2", {{0, 1}}, {"a,b,c>0"}, {"4", "9", "6"})}));
  kb.add(tuple("Chord2_Ang", {variant("abc", "a = (b + c) / 2", {{1, 2}}, {"0<a<180", "0<b<360", "0<c<360"},
                                      {"60", "50", "70"})}));
  kb.add(tuple("TanSec_Ang", {variant("abc", "a = (c - b) / 2", {}, {"0<a<180", "0<b<360", "0<c<360"},
                                      {"30", "40", "100"})}));
  kb.add(tuple("Tria_BH_Area", {variant("abc", "a * b / 2 = c", {{0, 1}}, {"a,b,c>0"}, {"4", "5", "10"})}));
  kb.add(tuple("Tria_SAS_Area", {variant("abcd", "a * c * sin(b) / 2 = d", {{0, 2}}, {"a,c,d>0", "0<b<180"},
                                         {"4", "30", "5", "5"})}));
  kb.add(tuple("PRK_Perim", {variant("abc", "(a + b) * 2 = c", {{0, 1}}, {"a,b,c>0"}, {"3", "4", "14"})}));
  kb.add(tuple("Para_Area", {variant("abc", "a * b = c", {{0, 1}}, {"a,b,c>0"}, {"3", "4", "12"})}));
  kb.add(tuple("Rect_Area", {variant("abc", "a * b = c", {{0, 1}}, {"a,b,c>0"}, {"3", "4", "12"})}));
  kb.add(tuple("Rhom_Area", {variant("abc", "a * b * 2 = c", {{0, 1}}, {"a,b,c>0"}, {"3", "4", "24"})}));
  kb.add(tuple("Kite_Area", {variant("abc", "a * b / 2 = c", {{0, 1}}, {"a,b,c>0"}, {"6", "4", "12"},
                                     {{"diagonals-intersect", "the lines of a and b intersect"}})}));
  kb.add(tuple("Trap_Area", {variant("abcd", "(a + b) * c / 2 = d", {{0, 1}}, {"a,b,c,d>0"}, {"2", "4", "3", "9"})}));
  kb.add(tuple("Circle_R_Circum", {variant("ab", "2 * pi * a = b", {}, {"a,b>0"}, {"1", "2*pi"}),
                                   variant("abc", "2 * pi * a * b / 360 = c", {}, {"a,c>0", "0<b<360"}, {"2", "90", "pi"})}));
  kb.add(tuple("Circle_D_Circum", {variant("ab", "pi * a = b", {}, {"a,b>0"}, {"2", "2*pi"}),
                                   variant("abc", "pi * a * b / 360 = c", {}, {"a,c>0", "0<b<360"}, {"2", "180", "pi"})}));
  kb.add(tuple("Circle_R_Area", {variant("ab", "pi * a^2 = b", {}, {"a,b>0"}, {"1", "pi"}),
                                 variant("abc", "pi * a^2 * b / 360 = c", {}, {"a,c>0", "0<b<360"}, {"2", "90", "pi"})}));
  kb.add(tuple("Circle_D_Area", {variant("ab", "pi * (a / 2)^2 = b", {}, {"a,b>0"}, {"2", "pi"}),
                                 variant("abc", "pi * (a / 2)^2 * b / 360 = c", {}, {"a,c>0", "0<b<360"},
                                         {"4", "90", "pi"})}));
  kb.add(tuple("ArcSeg_Area", {variant("abc", "pi * a^2 * b / 360 - a^2 * sin(b) / 2 = c", {}, {"a,c>0", "0<b<360"},
                                       {"2", "90", "pi-2"})}));
  kb.add(tuple("Ngon_Angsum", {variant("ab", "(a - 2) * 180 = b", {}, {"a>=3", "b>0"}, {"5", "540"})}, {"Ngon_Ang"}));
  kb.add(tuple("RNgon_B_Area", {variant("abc", "a * b^2 / tan(180 / a) / 4 = c", {}, {"a>=3", "b,c>0"}, {"4", "2", "4"})}));
  kb.add(tuple("RNgon_L_Area", {variant("abc", "a * b^2 * sin(360 / a) / 2 = c", {}, {"a>=3", "b,c>0"}, {"4", "1", "2"})}));
  kb.add(tuple("RNgon_H_Area", {variant("abc", "a * b^2 * tan(180 / a) = c", {}, {"a>=3", "b,c>0"}, {"4", "1", "4"})}));
  return kb;
}

}  // namespace

const KnowledgeBase& builtin_kb() {
  static const KnowledgeBase kb = make_builtin();
  return kb;
}

}  // namespace geosym
