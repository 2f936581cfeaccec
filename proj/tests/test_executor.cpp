#include <doctest.h>

#include <cmath>
#include <set>

#include "geosym/errors.hpp"
#include "geosym/executor.hpp"
#include "support.hpp"

using namespace geosym;

namespace {

Declarations decls(std::initializer_list<std::pair<int, const char*>> xs) {
  Declarations d;
  for (auto [k, v] : xs) d.emplace_back(VarId::problem(k), v);
  return d;
}

ExecOutcome run(const Declarations& d, const char* program) { return execute_program(d, parse_program(program)); }

}  // namespace

TEST_CASE("binding problem variables") {
  auto b = bind_problem_vars(decls({{0, "3"}, {1, "2"}}));
  CHECK(b.env.at(VarId::problem(0)) == 3);
  CHECK(b.env.at(VarId::problem(1)) == 2);
  CHECK(bind_problem_vars(Declarations{}).env.empty());

  b = bind_problem_vars(decls({{0, "3x+y"}}));
  CHECK(b.env.empty());
  REQUIRE(b.pending.size() == 1);
  CHECK(render(b.pending[0]) == "N0 = 3*x+y");

  CHECK_THROWS_AS(bind_problem_vars(decls({{0, "3"}, {0, "4"}})), DuplicateDeclaration);
  CHECK_THROWS_AS(bind_problem_vars(decls({{0, "3+"}})), SyntaxError);
}

TEST_CASE("single steps") {
  ExecutionSession s;
  s.bind_problem_vars(decls({{0, "3"}}));
  s.execute_step(parse_program("Equal V0 C5").steps[0]);
  auto r = s.execute_step(parse_program("Gougu N0 V1 V0").steps[0]);
  CHECK(r.status == StepStatus::Solved);
  CHECK(r.bound.at(VarId::inter(1)) == doctest::Approx(4));

  ExecutionSession t;
  auto get = t.execute_step(parse_program("Get x").steps[0]);
  CHECK(get.status == StepStatus::Failed);
  CHECK(get.reason == FailReason::NoValue);

  ExecutionSession u;
  u.bind_problem_vars(decls({{0, "3"}}));
  auto taut = u.execute_step(parse_program("Equal N0 N0").steps[0]);
  CHECK(taut.status == StepStatus::Solved);
  CHECK(taut.bound.empty());

  auto unknown = u.execute_step(SolutionStep{"Frob", {ProgramToken::variable(VarId::problem(0))}});
  CHECK(unknown.reason == FailReason::UnknownOperator);
}

TEST_CASE("whole programs") {
  auto out = run(decls({{0, "3"}, {1, "2"}}), "Sum N0 N1 V0 Gougu N0 V1 V0 Multiple V1 C2 V2 Get V2");
  CHECK(out.status == ExecStatus::Completed);
  CHECK(*get_answer(out) == doctest::Approx(8).epsilon(1e-12));
  CHECK(out.trace.size() == 4);

  CHECK(*get_answer(run(decls({{0, "7"}}), "Get N0")) == 7);
  CHECK(*get_answer(run(decls({{0, "3"}, {1, "60"}}), "Gcos N0 V0 N1 Get V0")) == doctest::Approx(6));

  auto form = run(decls({{0, "3"}, {1, "2"}}), "Geo_Mean N0 N1 Get N0");
  CHECK(form.status == ExecStatus::FormError);
  CHECK_FALSE(get_answer(form));
  CHECK(form.trace.size() == 1);

  auto calc = run({}, "Get x");
  CHECK(calc.status == ExecStatus::Incalculable);
  CHECK_FALSE(get_answer(calc));

  auto contra = run(decls({{0, "9"}, {1, "12"}, {2, "10"}}), "Gougu N0 N1 N2 Get N2");
  CHECK(contra.status == ExecStatus::ContradictionError);
}

TEST_CASE("backward use of intermediates and deferred steps") {
  // Gougu(V, *, *): hypotenuse known, leg unknown
  CHECK(*get_answer(run(decls({{0, "5"}, {1, "13"}}), "Gougu N0 V0 N1 Get V0")) == doctest::Approx(12));
  // two unknowns defer until a second equation arrives
  auto out = run(decls({{0, "108"}}), "Multiple N0 V0 V1 Ngon_Angsum V0 V1 Get V0");
  REQUIRE(out.status == ExecStatus::Completed);
  CHECK(out.trace[0].status == StepStatus::Deferred);
  CHECK(*out.answer == doctest::Approx(5));
  // symbolic declarations resolve through the pending set
  CHECK(*get_answer(run(decls({{0, "2x+4"}, {1, "10"}}), "Equal N0 N1 Get x")) == doctest::Approx(3));
}

TEST_CASE("budget and determinism") {
  ExecOptions tiny;
  tiny.budget = 5;
  auto out = execute_program(decls({{0, "4"}, {1, "41.569"}}), parse_program("RNgon_B_Area V0 N0 N1 Get V0"),
                             builtin_kb(), tiny);
  CHECK(out.status == ExecStatus::BudgetExceeded);

  auto a = run(decls({{0, "108"}}), "Multiple N0 V0 V1 Ngon_Angsum V0 V1 Get V0");
  auto b = run(decls({{0, "108"}}), "Multiple N0 V0 V1 Ngon_Angsum V0 V1 Get V0");
  CHECK(*a.answer == *b.answer);
}

TEST_CASE("fixture suite matches hand oracles") {
  const auto& recs = test::fixtures();
  REQUIRE(recs.size() >= 25);
  std::set<std::string> ops;
  for (const auto& r : recs) {
    auto p = parse_program(r.ground_truth_program);
    for (const auto& s : p.steps) ops.insert(builtin_kb().base_search(s.op)->op);
    auto out = execute_program(r, p);
    REQUIRE_MESSAGE(out.status == ExecStatus::Completed, r.id);
    CHECK_MESSAGE(test::close_rel(*out.answer, *r.answer, 1e-6), r.id << ": " << *out.answer << " vs " << *r.answer);
  }
  CHECK(ops.size() == 34);
}

TEST_CASE("trace and binding invariants on random programs") {
  const auto& kb = builtin_kb();
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    auto p = test::random_program(rng, kb, 6);
    Declarations d;
    for (int k = 0; k < 4; ++k) d.emplace_back(VarId::problem(k), std::to_string(1 + rng.below(20)));
    ExecutionSession s(kb);
    s.bind_problem_vars(d);
    Assignment seen;
    for (const auto& step : p.steps) {
      auto rec = s.execute_step(step);
      for (const auto& [v, x] : s.env()) {
        auto it = seen.find(v);
        if (it != seen.end()) REQUIRE(it->second == x);
        seen[v] = x;
      }
      if (rec.status == StepStatus::Failed) break;
    }
    CHECK(s.trace().size() <= p.steps.size());
  }
}
