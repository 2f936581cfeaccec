#include <doctest.h>

#include <array>
#include <sstream>

#include "geosym/dataset.hpp"
#include "geosym/errors.hpp"
#include "geosym/evaluate.hpp"
#include "support.hpp"

using namespace geosym;

namespace {

const ProblemRecord& fixture(const std::string& prefix) {
  for (const auto& r : test::fixtures())
    if (r.id.rfind(prefix, 0) == 0) return r;
  FAIL("no fixture " << prefix);
  return test::fixtures().front();
}

EvalConfig config(EvalMode m, bool verify = true) {
  EvalConfig c;
  c.mode = m;
  c.verify = verify;
  return c;
}

const char* kLine =
    R"({"id": "t", "semantic_clauses": ["CA = 3", "EC = 2"], "problem_text": "Find BD.", )"
    R"("candidates": [{"program": "Get N0", "confidence": 0.5}], "answer": 3, "choices": [1, 2, 3, 4]})";

}  // namespace

TEST_CASE("loading datasets") {
  CHECK(test::fixtures().size() == 45);

  std::istringstream empty("");
  CHECK(read_dataset(empty).records.empty());

  auto r = parse_record(kLine);
  CHECK(r.id == "t");
  REQUIRE(r.variables.size() == 2);
  CHECK(r.variables[0].second == "3");
  CHECK(parse_record(record_to_json(r)) == r);

  std::string five = kLine;
  five.replace(five.find("[1, 2, 3, 4]"), 12, "[1, 2, 3, 4, 5]");
  CHECK_THROWS_AS(parse_record(five), FormatError);
  CHECK_THROWS_AS(parse_record("{\"id\": 3}"), FormatError);
  CHECK_THROWS_AS(parse_record("not json"), FormatError);

  std::istringstream mixed(std::string(kLine) + "\n{broken\n" + kLine + "\n");
  CHECK_THROWS_AS(read_dataset(mixed), FormatError);
  std::istringstream mixed2(std::string(kLine) + "\n{broken\n" + kLine + "\n");
  auto lenient = read_dataset(mixed2, {true, 10});
  CHECK(lenient.records.size() == 2);
  REQUIRE(lenient.skipped.size() == 1);
  CHECK(lenient.skipped[0].rfind("line 2", 0) == 0);

  std::ostringstream out;
  write_dataset(out, test::fixtures());
  std::istringstream back(out.str());
  CHECK(read_dataset(back).records == test::fixtures());
}

TEST_CASE("completion") {
  const auto& kb = builtin_kb();
  auto worked = evaluate_record(fixture("f01"), kb, config(EvalMode::Completion));
  CHECK(worked.correct_answer);
  CHECK(worked.correct_program);
  CHECK(worked.verified);
  CHECK(*worked.answer == doctest::Approx(8));

  // the top candidate fails Form; verification skips it
  const auto& f09 = fixture("f09");
  auto with = evaluate_record(f09, kb, config(EvalMode::Completion));
  CHECK(with.correct_answer);
  CHECK(*with.chosen == 1);
  auto without = evaluate_record(f09, kb, config(EvalMode::Completion, false));
  CHECK_FALSE(without.correct_answer);
  CHECK(*without.chosen == 0);

  auto bare = f09;
  bare.candidates.clear();
  auto none = evaluate_record(bare, kb, config(EvalMode::Completion));
  CHECK_FALSE(none.chosen);
  CHECK_FALSE(none.correct_answer);

  CHECK(answer_matches(8.0005, 8, 1e-3, 5e-3));
  CHECK_FALSE(answer_matches(8.1, 8, 1e-3, 5e-3));
  CHECK(answer_matches(0.004, 0, 1e-3, 5e-3));
}

TEST_CASE("choice") {
  CHECK(*nearest_choice(8.001, {6, 7, 8, 9}, 0.05) == 2);
  CHECK_FALSE(nearest_choice(20, {6, 7, 8, 9}, 0.05));

  const auto& kb = builtin_kb();
  auto o = evaluate_record(fixture("f01"), kb, config(EvalMode::Choice));
  CHECK(*o.picked_option == 2);
  CHECK_FALSE(o.random_pick);
  CHECK(o.correct_answer);

  auto bare = fixture("f01");
  bare.choices.reset();
  CHECK_THROWS_AS(evaluate_record(bare, kb, config(EvalMode::Choice)), MissingChoices);

  // no answer: the pick is uniform and reproducible per (seed, id)
  bare = fixture("f01");
  bare.candidates.clear();
  auto cfg = config(EvalMode::Choice);
  auto first = evaluate_record(bare, kb, cfg);
  CHECK(first.random_pick);
  CHECK(evaluate_record(bare, kb, cfg).picked_option == first.picked_option);

  std::array<int, 4> counts{};
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    ++counts[*evaluate_record(bare, kb, cfg).picked_option];
  }
  for (int c : counts) CHECK(std::abs(static_cast<double>(c) / trials - 0.25) < 0.02);
}

TEST_CASE("top-3") {
  const auto& kb = builtin_kb();
  // ranks 1 and 2 verify but are wrong, rank 3 is right
  const auto& f02 = fixture("f02");
  CHECK(evaluate_record(f02, kb, config(EvalMode::Top3)).correct_answer);
  CHECK_FALSE(evaluate_record(f02, kb, config(EvalMode::Completion)).correct_answer);

  auto programs = config(EvalMode::Top3);
  programs.top3_programs = true;
  CHECK(evaluate_record(f02, kb, programs).correct_answer);

  for (bool v : {true, false}) {
    auto top = evaluate_top3(test::fixtures(), kb, config(EvalMode::Top3, v));
    auto comp = evaluate_completion(test::fixtures(), kb, config(EvalMode::Completion, v));
    CHECK(top.answer_accuracy >= comp.answer_accuracy);
  }
}

TEST_CASE("aggregates are means over outcomes") {
  const auto& kb = builtin_kb();
  for (auto m : {EvalMode::Completion, EvalMode::Choice, EvalMode::Top3}) {
    for (bool v : {true, false}) {
      auto rep = evaluate(test::fixtures(), kb, config(m, v));
      REQUIRE(rep.outcomes.size() == test::fixtures().size());
      double a = 0, p = 0;
      std::size_t verified = 0;
      for (const auto& o : rep.outcomes) {
        a += o.correct_answer;
        p += o.correct_program;
        verified += o.verified;
      }
      CHECK(rep.answer_accuracy == a / rep.outcomes.size());
      CHECK(rep.program_accuracy == p / rep.outcomes.size());
      CHECK(rep.verified == verified);
      CHECK(eval_mode_from_string(to_string(m)) == m);
    }
  }
  auto bad = config(EvalMode::Completion);
  bad.rel_tolerance = 0;
  CHECK_THROWS_AS(evaluate(test::fixtures(), kb, bad), Error);
  CHECK(evaluate({}, kb, config(EvalMode::Completion)).answer_accuracy == 0);
}
