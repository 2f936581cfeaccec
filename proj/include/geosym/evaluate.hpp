#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geosym/record.hpp"
#include "geosym/verifier.hpp"

namespace geosym {

enum class EvalMode { Completion, Choice, Top3 };
std::string_view to_string(EvalMode m);
std::optional<EvalMode> eval_mode_from_string(std::string_view s);

struct EvalConfig {
  EvalMode mode = EvalMode::Completion;
  double rel_tolerance = 1e-3;
  double abs_tolerance = 5e-3;
  double choice_window = 0.05;       // relative distance to the nearest option
  bool verify = true;
  Level verify_level = Level::Semantic;
  bool fallback_unverified = true;   // take the top candidate when nothing verifies
  bool top3_programs = false;        // Top-3 matches programs instead of answers
  std::uint64_t seed = 0;
  std::size_t beam_size = 10;
  ExecOptions exec;
};

struct ProblemOutcome {
  std::string id;
  std::optional<std::size_t> chosen;  // candidate index
  bool verified = false;
  std::optional<double> answer;
  std::optional<std::size_t> picked_option;  // Choice mode
  bool random_pick = false;                  // Choice mode fallback fired
  bool correct_answer = false;
  bool correct_program = false;
};

struct EvalReport {
  EvalMode mode = EvalMode::Completion;
  std::vector<ProblemOutcome> outcomes;
  double answer_accuracy = 0;
  double program_accuracy = 0;
  std::size_t verified = 0;
};

bool answer_matches(double answer, double truth, double rel, double abs);
// Nearest option within `window` of it (relative, with `abs` as a floor).
std::optional<std::size_t> nearest_choice(double answer, const std::vector<double>& options, double window,
                                          double abs = 5e-3);
std::uint64_t record_seed(std::uint64_t global, std::string_view id);

// Candidate text parsed against the knowledge base; unparsable text becomes
// an empty program, which never verifies.
std::vector<Candidate> parse_candidates(const ProblemRecord& r, const KnowledgeBase& kb = builtin_kb());

ProblemOutcome evaluate_record(const ProblemRecord& r, const KnowledgeBase& kb, const EvalConfig& cfg);

EvalReport evaluate_completion(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, EvalConfig cfg);
// Throws MissingChoices for a record without options.
EvalReport evaluate_choice(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, EvalConfig cfg);
EvalReport evaluate_top3(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, EvalConfig cfg);
EvalReport evaluate(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, const EvalConfig& cfg);

}  // namespace geosym
