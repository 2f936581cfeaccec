#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geosym/executor.hpp"

namespace geosym {

enum class Level { None, Form, Calculability, Semantic };
std::string_view to_string(Level l);
std::optional<Level> level_from_string(std::string_view s);

struct StepVerdict {
  std::size_t index = 0;
  bool passed = true;
  Level failed_level = Level::None;
  std::string reason;  // stable machine-readable code
  std::string detail;
};

struct VerificationReport {
  std::vector<StepVerdict> verdicts;
  bool passed = false;
  std::optional<double> answer;
};

// Evaluates a relational rule for a step; returning false fails the Semantic level.
using RelationalHook = std::function<bool(const RelationalRule&, const StepRecord&, const ExecutionSession&)>;

enum class CheckMode {
  Cumulative,  // every level up to `level`
  Only,        // just `level`
};

struct VerifyOptions {
  Level level = Level::Semantic;
  CheckMode mode = CheckMode::Cumulative;
  std::map<std::string, RelationalHook> hooks;  // by relation tag; unregistered tags pass
  ExecOptions exec;
};

// Executes `step` in `session` and judges it. Value rules of steps whose
// operands are still unbound are checked later by verify_program.
StepVerdict verify_step(ExecutionSession& session, const SolutionStep& step, const VerifyOptions& opts = {});

VerificationReport verify_program(const Declarations& decls, const SolutionProgram& program,
                                  const KnowledgeBase& kb = builtin_kb(), const VerifyOptions& opts = {});
VerificationReport verify_program(const ProblemRecord& record, const SolutionProgram& program,
                                  const KnowledgeBase& kb = builtin_kb(), const VerifyOptions& opts = {});

struct Selection {
  std::optional<std::size_t> chosen;  // index into the input candidates
  std::vector<std::size_t> order;     // descending confidence, ties by input order
  std::map<std::size_t, VerificationReport> reports;
};

// Candidate visiting order used by selection.
std::vector<std::size_t> confidence_order(const std::vector<Candidate>& candidates);

Selection select_solution(const Declarations& decls, const std::vector<Candidate>& candidates,
                          const KnowledgeBase& kb = builtin_kb(), const VerifyOptions& opts = {});
Selection select_solution(const ProblemRecord& record, const std::vector<Candidate>& candidates,
                          const KnowledgeBase& kb = builtin_kb(), const VerifyOptions& opts = {});

}  // namespace geosym
