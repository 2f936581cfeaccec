#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "geosym/clauses.hpp"
#include "geosym/errors.hpp"
#include "support.hpp"

using namespace geosym;

namespace {

std::vector<Tag> tags_of(std::string_view text) {
  std::vector<Tag> out;
  for (const auto& t : tag_tokens(text)) out.push_back(t.tag);
  return out;
}

}  // namespace

TEST_CASE("rendering the templates") {
  CHECK(render_fact({FactKind::PointsOnLine, {"A", "B", "C"}}) == "line A B C");
  CHECK(render_fact({FactKind::PointsOnCircle, {"O", "E", "F", "G"}}) == "⊙O lieson E F G");
  CHECK(render_fact({FactKind::Perpendicular, {"EF", "GH", "C"}}) == "EF ⊥ GH on C");
  CHECK(render_fact({FactKind::AngleEq, {"A", "1"}, "30"}) == "m ∠A = m ∠1 = 30");
  CHECK(render_fact({FactKind::SegEq, {"AB", "CD"}, "3x+y"}) == "AB = CD = 3x+y");
  CHECK(render_fact({FactKind::ArcLenEq, {"EF"}, "5π"}) == "l ⌒EF = 5π");
  CHECK(render_fact({FactKind::ArcDegEq, {"EFG"}, "270"}) == "m ⌒EFG = 270");
  CHECK(render_fact({FactKind::Parallel, {"k", "m", "EF"}}) == "line k ∥ line m ∥ EF");
  CHECK(render_fact({FactKind::NamedLinePoints, {"k", "A", "B", "C"}}) == "line k lieson A B C");
  CHECK(render_fact({FactKind::PointsOnCircle, {"O", "E", "F", "G"}}, GlyphStyle::Plain) == "circle O lieson E F G");
  CHECK(render_fact({FactKind::Perpendicular, {"EF", "GH", "C"}}, GlyphStyle::Plain) == "EF perp GH on C");
  CHECK(render_clauses({}).empty());
  CHECK_THROWS_AS(check_fact({FactKind::Perpendicular, {"EF"}}), KindError);
  CHECK_THROWS_AS(check_fact({FactKind::SegEq, {"AB"}}), KindError);  // equality without a value
}

TEST_CASE("parsing clauses") {
  auto c = parse_clause("EF ⊥ GH on C");
  CHECK(c.kind == FactKind::Perpendicular);
  CHECK(c.fact.refs == std::vector<std::string>{"EF", "GH", "C"});
  CHECK(c.category == ClauseCategory::Semantic);

  auto a = parse_clause("m ∠A = m ∠1 = 30");
  CHECK(a.kind == FactKind::AngleEq);
  CHECK(a.fact.refs == std::vector<std::string>{"A", "1"});
  CHECK(*a.fact.value == "30");

  CHECK(parse_clause("line A B C").category == ClauseCategory::Structural);
  CHECK(parse_clause("CA = 3(N0)").fact.value == "3");
  CHECK(parse_clause("m angle(ABC) = 40").fact == parse_clause("m ∠ABC = 40").fact);
  CHECK_THROWS_AS(parse_clause("triangle A B C"), TemplateMismatch);
}

TEST_CASE("round trip over generated facts in both styles") {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    Fact f = test::random_fact(rng);
    check_fact(f);
    for (auto style : {GlyphStyle::Unicode, GlyphStyle::Plain}) {
      std::string text = render_fact(f, style);
      REQUIRE_MESSAGE(parse_clause(text).fact == f, text);
    }
  }
}

TEST_CASE("tagging") {
  using enum Tag;
  CHECK(tags_of("line A B C") == std::vector<Tag>{General, Point, Point, Point});
  CHECK(tags_of("").empty());
  CHECK(tags_of("m ∠1 = 30") == std::vector<Tag>{General, AngleId, General, VarNum});
  CHECK(tags_of("AB = 3x+y") == std::vector<Tag>{Point, Point, General, VarNum, Arg, General, Arg});

  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    std::string a = render_fact(test::random_fact(rng)), b = render_fact(test::random_fact(rng));
    auto ta = tags_of(a), tb = tags_of(b), both = tags_of(a + ", " + b);
    ta.push_back(General);
    ta.insert(ta.end(), tb.begin(), tb.end());
    REQUIRE_MESSAGE(both == ta, a << " | " << b);
  }
}

TEST_CASE("problem variable assignment") {
  auto a = assign_problem_vars({"CA = 3", "BD ⊥ EA on C", "EC = 2"}, "Find BD.");
  CHECK(a.semantic_clauses == std::vector<std::string>{"CA = 3(N0)", "BD ⊥ EA on C", "EC = 2(N1)"});
  REQUIRE(a.declarations.size() == 2);
  CHECK(a.declarations[0].second == "3");
  CHECK(a.sources == std::vector<int>{0, 2});

  CHECK(assign_problem_vars({"BD ⊥ EA on C"}, "Find BD.").declarations.empty());

  auto r = assign_problem_vars({"EC = 2(N0)", "CA = 3(N1)"}, "The area is 12.");
  CHECK(r.semantic_clauses == std::vector<std::string>{"EC = 2(N0)", "CA = 3(N1)"});
  CHECK(r.problem_text == "The area is 12(N2).");
  CHECK(strip_annotations(r.problem_text) == "The area is 12.");

  std::vector<std::string> many(11, "AB = 1");
  CHECK_THROWS_AS(assign_problem_vars(many, "2"), TooManyVariables);
}

TEST_CASE("assignment is order-equivariant") {
  Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> clauses;
    for (std::size_t k = 0, n = 1 + rng.below(6); k < n; ++k) {
      Fact f = test::random_fact(rng);
      if (category_of(f.kind) == ClauseCategory::Semantic) clauses.push_back(render_fact(f));
    }
    std::vector<std::size_t> perm(clauses.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = perm.size(); k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
    std::vector<std::string> shuffled;
    for (auto p : perm) shuffled.push_back(clauses[p]);

    auto before = assign_problem_vars(clauses, "");
    auto after = assign_problem_vars(shuffled, "");
    // the value declared for clause p keeps its value, indices follow the new order
    std::vector<std::string> expected;
    for (auto p : perm)
      for (std::size_t d = 0; d < before.sources.size(); ++d)
        if (before.sources[d] == static_cast<int>(p)) expected.push_back(before.declarations[d].second);
    std::vector<std::string> got;
    for (const auto& [v, text] : after.declarations) got.push_back(text);
    REQUIRE(got == expected);
    for (std::size_t d = 0; d < after.declarations.size(); ++d)
      CHECK(after.declarations[d].first == VarId::problem(static_cast<int>(d)));
  }
}
