#include <doctest.h>

#include <algorithm>

#include "geosym/errors.hpp"
#include "geosym/program.hpp"
#include "support.hpp"

using namespace geosym;

namespace {

const char* kWorkedProgram = "Sum N0 N1 V0 Gougu N0 V1 V0 Multiple V1 C2 V2 Get V2";

std::vector<std::string> labels(const SolutionStep& s) {
  std::vector<std::string> out;
  for (const auto& t : s.operands) out.push_back(t.label());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("parsing segments steps greedily") {
  auto p = parse_program(kWorkedProgram);
  REQUIRE(p.steps.size() == 4);
  CHECK(p.steps[0].operands.size() == 3);
  CHECK(p.steps[1].operands.size() == 3);
  CHECK(p.steps[2].operands.size() == 3);
  CHECK(p.steps[3].operands.size() == 1);
  CHECK(p.steps[2].operands[1].kind == TokenKind::Const);
  CHECK(p.steps[2].operands[1].value == 2);

  CHECK(parse_program("Get V0").steps.size() == 1);
  auto bad_form = parse_program("Geo_Mean N0 N1");
  REQUIRE(bad_form.steps.size() == 1);
  CHECK(bad_form.steps[0].operands.size() == 2);

  CHECK_THROWS_AS(parse_program("N0 Get N0"), LeadingOperand);
  CHECK_THROWS_AS(parse_program("Get Q7"), UnknownToken);
  CHECK_THROWS_AS(parse_program("Get N11"), UnknownToken);
  CHECK_THROWS_AS(parse_program("Get C7"), UnknownToken);
  CHECK(parse_program("").empty());
}

TEST_CASE("rendering") {
  CHECK(render_program(parse_program("Get V2")) == "Get V2");
  CHECK(render_program(parse_program(kWorkedProgram)) == kWorkedProgram);
  CHECK(ProgramToken::constant("C0.5").label() == "C0.5");
  CHECK(ProgramToken::constant("C0.5").value == 0.5);
  CHECK(ProgramToken::constant("C60").value == 60);
  CHECK(constant_labels().size() == 11);
}

TEST_CASE("normalization") {
  auto norm = [](const char* s) { return render_program(normalize_program(parse_program(s))); };
  CHECK(norm("Gougu V0 N1 N4") == "Gougu V0 N1 N4");
  CHECK(norm("Gougu N1 V0 N4") == "Gougu V0 N1 N4");
  CHECK(norm("Sum N2 N0 V0") == "Sum N0 N2 V0");
  CHECK(norm("GouGu N1 N0 V0") == "Gougu N0 N1 V0");
  CHECK(norm("Ngon_Ang N0 V0") == "Ngon_Angsum N0 V0");
  CHECK(norm("Sum C3 N2 x V1 V0") == "Sum x V1 N2 C3 V0");
  // unknown arity is left alone
  CHECK(norm("Gougu N1 N0") == "Gougu N1 N0");
}

TEST_CASE("program equality") {
  CHECK(program_equal(parse_program("Gougu N1 N0 V0"), parse_program("Gougu N0 N1 V0")));
  CHECK_FALSE(program_equal(parse_program("Get V0"), parse_program("Get V1")));
  CHECK(program_equal(parse_program(kWorkedProgram), parse_program(kWorkedProgram)));
  CHECK_FALSE(program_equal(parse_program("Gougu N0 V0 N1"), parse_program("Gougu N0 N1 V0")));
}

TEST_CASE("round trip and normalization properties on random programs") {
  const auto& kb = builtin_kb();
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    SolutionProgram p = test::random_program(rng, kb);
    std::string text = render_program(p);
    REQUIRE_MESSAGE(parse_program(text) == p, text);

    SolutionProgram n = normalize_program(p);
    REQUIRE_MESSAGE(normalize_program(n) == n, text);
    REQUIRE(n.steps.size() == p.steps.size());
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
      CHECK(kb.base_search(n.steps[k].op) == kb.base_search(p.steps[k].op));
      REQUIRE_MESSAGE(labels(n.steps[k]) == labels(p.steps[k]), text);
    }
  }
}
