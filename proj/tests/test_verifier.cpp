#include <doctest.h>

#include "geosym/verifier.hpp"
#include "support.hpp"

using namespace geosym;

namespace {

Declarations decls(std::initializer_list<std::pair<int, const char*>> xs) {
  Declarations d;
  for (auto [k, v] : xs) d.emplace_back(VarId::problem(k), v);
  return d;
}

VerificationReport verify(const Declarations& d, const char* program, VerifyOptions opts = {}) {
  return verify_program(d, parse_program(program), builtin_kb(), opts);
}

bool rules_hold_on(const ExecOutcome& out) {
  Assignment env;
  for (const auto& r : out.trace)
    for (const auto& [v, x] : r.bound) env[v] = x;
  for (const auto& r : out.trace) {
    for (const auto& [pred, text] : r.rules) {
      bool bound = true;
      for (VarId v : free_vars(pred)) bound = bound && env.count(v);
      if (bound && !holds(pred, env)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("the three failure archetypes") {
  auto d = decls({{0, "3"}, {1, "2"}});
  auto form = verify(d, "Geo_Mean N0 N1");
  REQUIRE(form.verdicts.size() == 1);
  CHECK(form.verdicts[0].failed_level == Level::Form);
  CHECK_FALSE(form.passed);

  auto calc = verify({}, "Get x");
  REQUIRE(calc.verdicts.size() == 1);
  CHECK(calc.verdicts[0].failed_level == Level::Calculability);

  // N4 is not the hypotenuse of legs N1 and N3
  auto sem = verify(decls({{1, "9"}, {3, "12"}, {4, "10"}}), "GouGu N1 N3 N4 Get N1");
  REQUIRE(sem.verdicts.size() == 1);
  CHECK(sem.verdicts[0].failed_level == Level::Semantic);
  CHECK(sem.verdicts[0].reason == "rule_violated");
  CHECK(sem.verdicts[0].detail == "0<b<c");
}

TEST_CASE("a passing program and early exit") {
  auto ok = verify(decls({{0, "3"}, {1, "2"}}), "Sum N0 N1 V0 Gougu N0 V1 V0 Multiple V1 C2 V2 Get V2");
  CHECK(ok.passed);
  CHECK(ok.verdicts.size() == 4);
  CHECK(*ok.answer == doctest::Approx(8));

  auto early = verify(decls({{0, "3"}, {1, "2"}}), "Geo_Mean N0 N1 Sum N0 N1 V0 Get V0");
  CHECK(early.verdicts.size() == 1);

  CHECK_FALSE(verify(decls({{0, "3"}}), "Sum N0 N0 V0").passed);  // no Get
  CHECK_FALSE(verify_program(Declarations{}, SolutionProgram{}).passed);
}

TEST_CASE("check levels") {
  auto d = decls({{0, "9"}, {1, "12"}});
  const char* prog = "Gougu N0 N1 V0 Gougu V0 V1 N0 Get V1";
  VerifyOptions calc_only;
  calc_only.level = Level::Calculability;
  CHECK_FALSE(verify(d, prog, calc_only).passed);  // no admissible root for the backward step
  VerifyOptions none;
  none.level = Level::None;
  CHECK(verify(d, prog, none).passed);
}

TEST_CASE("relational hooks") {
  auto d = decls({{0, "6"}, {1, "4"}});
  CHECK(verify(d, "Kite_Area N0 N1 V0 Get V0").passed);  // unregistered hooks pass
  VerifyOptions opts;
  opts.hooks["diagonals-intersect"] = [](const RelationalRule&, const StepRecord&, const ExecutionSession&) {
    return false;
  };
  auto rep = verify(d, "Kite_Area N0 N1 V0 Get V0", opts);
  CHECK_FALSE(rep.passed);
  CHECK(rep.verdicts[0].reason == "relation_failed");
}

TEST_CASE("selection") {
  auto d = decls({{0, "3"}, {1, "2"}});
  std::vector<Candidate> cands{{parse_program("Geo_Mean N0 N1 Get N0"), 0.9},
                               {parse_program("Sum N0 N1 V0 Gougu N0 V1 V0 Multiple V1 C2 V2 Get V2"), 0.8}};
  auto sel = select_solution(d, cands);
  REQUIRE(sel.chosen);
  CHECK(*sel.chosen == 1);
  CHECK(sel.reports.size() == 2);

  CHECK(*select_solution(d, {cands[1]}).chosen == 0);
  CHECK_FALSE(select_solution(d, {cands[0]}).chosen);
  CHECK_FALSE(select_solution(d, {}).chosen);

  std::vector<Candidate> ties{{parse_program("Get N0"), 0.5}, {parse_program("Get N1"), 0.5},
                              {parse_program("Get N1"), 0.7}};
  CHECK(confidence_order(ties) == std::vector<std::size_t>{2, 0, 1});
}

TEST_CASE("level hierarchy over random steps") {
  const auto& kb = builtin_kb();
  Rng rng(4242);
  std::size_t form = 0, calc = 0, sem = 0;
  for (int i = 0; i < 10000; ++i) {
    auto prefix = test::random_program(rng, kb, 2);
    auto step = test::random_program(rng, kb, 1).steps.front();
    Declarations d;
    for (int k = 0; k < 4; ++k) d.emplace_back(VarId::problem(k), std::to_string(1 + rng.below(40)));
    auto check_only = [&](Level l) {
      ExecutionSession s(kb);
      s.bind_problem_vars(d);
      for (const auto& p : prefix.steps) s.execute_step(p);
      VerifyOptions o;
      o.level = l;
      o.mode = CheckMode::Only;
      return !verify_step(s, step, o).passed;
    };
    bool f = check_only(Level::Form), c = check_only(Level::Calculability), s = check_only(Level::Semantic);
    form += f;
    calc += c;
    sem += s;
    REQUIRE_MESSAGE(!(f && !c), "form failure passed calculability: " << step.op);
    REQUIRE_MESSAGE(!(c && !s), "calculability failure passed semantic: " << step.op);
  }
  // every level must actually be exercised
  CHECK(form > 0);
  CHECK(calc > form);
  CHECK(sem > calc);
}

TEST_CASE("verifier and executor agree") {
  const auto& kb = builtin_kb();
  Rng rng(17);
  std::vector<std::pair<Declarations, SolutionProgram>> cases;
  for (const auto& r : test::fixtures()) {
    auto p = parse_program(r.ground_truth_program);
    cases.emplace_back(r.variables, p);
    for (const auto& c : r.candidates) cases.emplace_back(r.variables, parse_program(c.program));
    // mutate one operand
    for (int k = 0; k < 20; ++k) {
      auto q = p;
      auto& s = q.steps[rng.below(q.steps.size())];
      if (!s.operands.empty()) s.operands[rng.below(s.operands.size())] = test::random_operand(rng);
      cases.emplace_back(r.variables, q);
    }
  }
  std::size_t passed = 0;
  for (const auto& [d, p] : cases) {
    auto rep = verify_program(d, p, kb);
    auto out = execute_program(d, p, kb);
    bool expected = out.status == ExecStatus::Completed && out.answer && rules_hold_on(out);
    REQUIRE_MESSAGE(rep.passed == expected, render_program(p));
    if (rep.passed) {
      CHECK(*rep.answer == *out.answer);
      ++passed;
    }
  }
  CHECK(passed >= test::fixtures().size());
}

TEST_CASE("selection dominance") {
  Rng rng(5);
  for (const auto& r : test::fixtures()) {
    std::vector<Candidate> cands;
    for (int k = 0; k < 5; ++k) cands.push_back({test::random_program(rng, builtin_kb(), 3), rng.unit()});
    cands.push_back({parse_program(r.ground_truth_program), rng.unit()});
    auto sel = select_solution(r, cands);
    REQUIRE(sel.chosen);
    for (const auto& [i, rep] : sel.reports)
      if (rep.passed) CHECK(cands[i].confidence <= cands[*sel.chosen].confidence);
  }
}
