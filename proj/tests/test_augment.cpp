#include <doctest.h>

#include <algorithm>

#include "geosym/augment.hpp"
#include "geosym/errors.hpp"
#include "geosym/executor.hpp"
#include "support.hpp"

using namespace geosym;

namespace {

ProblemRecord worked_record() {
  ProblemRecord r;
  r.id = "worked";
  r.structural_clauses = {"line B C D", "⊙A lieson E B D"};
  r.semantic_clauses = {"EC = 2", "BD ⊥ EA on C", "CA = 3"};
  r.problem_text = "Find BD.";
  r.variables = assign_problem_vars(r.semantic_clauses, r.problem_text).declarations;
  r.ground_truth_program = "Sum N0 N1 V0 Gougu N1 V1 V0 Multiple V1 C2 V2 Get V2";
  r.candidates = {{r.ground_truth_program, 0.9}};
  r.answer = 8;
  return r;
}

double answer_of(const ProblemRecord& r) {
  auto out = execute_program(r, parse_program(r.ground_truth_program));
  REQUIRE_MESSAGE(out.status == ExecStatus::Completed, r.id << ": " << r.ground_truth_program);
  return *out.answer;
}

AugmentSpec all_strategies(std::uint64_t seed, double p = 1.0) {
  AugmentSpec s;
  s.seed = seed;
  for (auto st : {Strategy::TokenReplacement, Strategy::ConnectionRotation, Strategy::RepresentationTransposition,
                  Strategy::ClausesShuffle})
    s.probability[st] = p;
  return s;
}

// Declared values with argument letters masked, since renaming may change them.
std::vector<std::string> values(const ProblemRecord& r) {
  std::vector<std::string> v;
  for (auto [id, text] : r.variables) {
    for (char& c : text)
      if (c >= 'a' && c <= 'z') c = '_';
    v.push_back(text);
  }
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("token replacement") {
  auto r = worked_record();
  SymbolMap m;
  m.points['B'] = 'V';
  auto a = token_replacement_with(r, m);
  CHECK(a.structural_clauses == std::vector<std::string>{"line V C D", "⊙A lieson E V D"});
  CHECK(a.semantic_clauses[1] == "VD ⊥ EA on C");
  CHECK(a.problem_text == "Find VD.");

  CHECK(token_replacement_with(r, SymbolMap{}) == r);

  ProblemRecord x;
  x.semantic_clauses = {"AB = 2x+4", "CD = 10"};
  x.problem_text = "Find x.";
  x.variables = assign_problem_vars(x.semantic_clauses, x.problem_text).declarations;
  x.ground_truth_program = "Equal N0 N1 Get x";
  SymbolMap w;
  w.args['x'] = 'w';
  auto xw = token_replacement_with(x, w);
  CHECK(xw.ground_truth_program == "Equal N0 N1 Get w");
  CHECK(xw.semantic_clauses[0] == "AB = 2w+4");
  CHECK(answer_of(xw) == doctest::Approx(3));

  SymbolMap merge;
  merge.points['B'] = 'C';
  CHECK_THROWS_AS(token_replacement_with(r, merge), Error);
}

TEST_CASE("renaming is injective") {
  Rng rng(1);
  for (const auto& r : test::fixtures()) {
    for (int k = 0; k < 10; ++k) {
      auto a = token_replacement(r, rng.next(), 0.7);
      // distinct points before stay distinct after
      std::set<char> before, after;
      for (const auto& c : r.structural_clauses)
        for (const auto& t : tag_tokens(c))
          if (t.tag == Tag::Point) before.insert(t.token[0]);
      for (const auto& c : a.structural_clauses)
        for (const auto& t : tag_tokens(c))
          if (t.tag == Tag::Point) after.insert(t.token[0]);
      CHECK(before.size() == after.size());
    }
  }
}

TEST_CASE("connection rotation") {
  CHECK(rotate_clause("line B C D", 0, true) == "line D C B");
  CHECK(rotate_clause("⊙A lieson E B D", 0, true) == "⊙A lieson E D B");
  CHECK(rotate_clause("line A", 0, true) == "line A");
  CHECK(rotate_clause("⊙A lieson E B D", 1, false) == "⊙A lieson B D E");
  CHECK(rotate_clause("EC = 2", 1, true) == "EC = 2");
  CHECK(dihedral({"E", "B", "D"}, 0, true) == std::vector<std::string>{"E", "D", "B"});
}

TEST_CASE("representation transposition") {
  CHECK(transpose_text("EA") == "AE");
  CHECK(transpose_text("m ∠STR = 30") == "m ∠RTS = 30");
  CHECK(transpose_text("m ∠1 = 30") == "m ∠1 = 30");
  CHECK(transpose_text("l ⌒EF = 5π") == "l ⌒FE = 5π");
  CHECK(transpose_text("line A B C") == "line A B C");
  auto r = representation_transposition(worked_record(), 0);
  CHECK(r.structural_clauses == worked_record().structural_clauses);
}

TEST_CASE("clauses shuffle") {
  auto r = worked_record();
  auto s = clauses_shuffle_with(r, {2, 1, 0});
  CHECK(s.ground_truth_program == "Sum N0 N1 V0 Gougu N0 V1 V0 Multiple V1 C2 V2 Get V2");
  auto annotated = assign_problem_vars(s.semantic_clauses, s.problem_text).semantic_clauses;
  CHECK(annotated == std::vector<std::string>{"CA = 3(N0)", "BD ⊥ EA on C", "EC = 2(N1)"});
  CHECK(answer_of(s) == doctest::Approx(8));
  CHECK(clauses_shuffle_with(r, {0, 1, 2}) == r);
  CHECK(values(s) == values(r));
}

TEST_CASE("composition") {
  auto r = worked_record();
  AugmentSpec none = all_strategies(1, 0.0);
  CHECK(compose(r, none) == r);
  CHECK(compose(r, all_strategies(9)) == compose(r, all_strategies(9)));
  for (auto st : {Strategy::TokenReplacement, Strategy::ConnectionRotation, Strategy::RepresentationTransposition,
                  Strategy::ClausesShuffle})
    CHECK(strategy_from_string(to_string(st)) == st);
}

TEST_CASE("answers survive every composition") {
  Rng rng(100);
  for (const auto& r : test::fixtures()) {
    double base = answer_of(r);
    for (int k = 0; k < 100; ++k) {
      auto a = compose(r, all_strategies(rng.next(), 0.5));
      double got = answer_of(a);
      REQUIRE_MESSAGE(std::fabs(got - base) < 1e-9 * std::max(1.0, std::fabs(base)), r.id << " -> " << record_to_json(a));
      REQUIRE(values(a) == values(r));
      for (std::size_t c = 0; c < a.candidates.size(); ++c) {
        auto before = get_answer(execute_program(r, parse_program(r.candidates[c].program)));
        auto after = get_answer(execute_program(a, parse_program(a.candidates[c].program)));
        REQUIRE(before.has_value() == after.has_value());
      }
    }
  }
}
