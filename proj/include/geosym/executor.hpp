#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geosym/kb.hpp"
#include "geosym/program.hpp"
#include "geosym/record.hpp"
#include "geosym/solve.hpp"

namespace geosym {

enum class StepStatus { Solved, Deferred, Failed };

enum class FailReason {
  None,
  UnknownOperator,
  FormMismatch,
  NoRoot,
  NoValue,
  Indeterminate,
  MathDomain,
  Contradiction,
  BudgetExceeded,
};

std::string_view to_string(StepStatus s);
std::string_view to_string(FailReason r);

struct StepRecord {
  std::size_t index = 0;
  std::string op;                    // as written in the program
  std::string canonical_op;          // empty when the operator is unknown
  int variant = -1;                  // index into the tuple's variants
  std::optional<Equation> equation;  // instantiated formula, before substitution
  Assignment bound;                  // variables newly bound by this step (including sweeps)
  StepStatus status = StepStatus::Failed;
  FailReason reason = FailReason::None;
  std::string detail;
  // Value rules of the matched variant with operands in place of placeholders.
  std::vector<std::pair<Predicate, std::string>> rules;
  std::vector<RelationalRule> relations;
  std::optional<VarId> get_var;      // Get steps only
  std::optional<double> get_value;
};

struct ExecOptions {
  std::uint64_t budget = 1'000'000;  // evaluations per step
  std::uint64_t seed = 0;
};

struct Bindings {
  Assignment env;
  std::vector<Equation> pending;
};

// Numeric declarations bind directly; others become equations N_k = expr.
// Throws DuplicateDeclaration, IndexOutOfRange, SyntaxError.
Bindings bind_problem_vars(const Declarations& decls);
Bindings bind_problem_vars(const ProblemRecord& record);

class ExecutionSession {
 public:
  explicit ExecutionSession(const KnowledgeBase& kb = builtin_kb(), ExecOptions opts = {});

  void bind_problem_vars(const Declarations& decls);

  // Never throws for malformed steps; failures are reported in the record.
  StepRecord execute_step(const SolutionStep& step);

  const Assignment& env() const { return env_; }
  const std::vector<Equation>& pending() const { return pending_; }
  const std::vector<StepRecord>& trace() const { return trace_; }
  const std::map<VarId, Interval>& domains() const { return domains_; }
  std::optional<double> value_of(VarId v) const;
  // Value of the last Get executed so far.
  std::optional<double> answer() const { return answer_; }
  const KnowledgeBase& kb() const { return *kb_; }

 private:
  StepRecord run(const SolutionStep& step, std::size_t index);
  void narrow_domains(const std::vector<std::pair<Predicate, std::string>>& rules);
  // Re-solves the pending set; returns false on a contradiction.
  bool sweep(EvalBudget& budget, Assignment& bound, std::string& detail);

  const KnowledgeBase* kb_;
  ExecOptions opts_;
  Assignment env_;
  std::vector<Equation> pending_;
  std::vector<StepRecord> trace_;
  std::map<VarId, Interval> domains_;
  std::optional<double> answer_;
};

enum class ExecStatus { Completed, FormError, Incalculable, ContradictionError, BudgetExceeded };
std::string_view to_string(ExecStatus s);
ExecStatus terminal_status(FailReason r);

struct ExecOutcome {
  ExecStatus status = ExecStatus::Incalculable;
  std::optional<double> answer;
  std::vector<StepRecord> trace;
  std::string detail;
};

ExecOutcome execute_program(const Declarations& decls, const SolutionProgram& program,
                            const KnowledgeBase& kb = builtin_kb(), ExecOptions opts = {});
ExecOutcome execute_program(const ProblemRecord& record, const SolutionProgram& program,
                            const KnowledgeBase& kb = builtin_kb(), ExecOptions opts = {});

inline std::optional<double> get_answer(const ExecOutcome& o) {
  return o.status == ExecStatus::Completed ? o.answer : std::nullopt;
}

}  // namespace geosym
