#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geosym/expr.hpp"
#include "geosym/kb.hpp"

namespace geosym {

enum class TokenKind { Operator, ProblemVar, InterVar, Arg, Const };

struct ProgramToken {
  TokenKind kind = TokenKind::Const;
  std::string name;   // operator name or constant label ("C0.5")
  VarId var;          // variable kinds only
  double value = 0;   // Const only

  static ProgramToken op(std::string name);
  static ProgramToken variable(VarId v);
  // Throws UnknownToken unless `label` is one of the 11 constant labels.
  static ProgramToken constant(std::string_view label);

  std::string label() const;
  bool is_variable() const { return kind == TokenKind::ProblemVar || kind == TokenKind::InterVar || kind == TokenKind::Arg; }
  // Literal for constants, variable reference otherwise.
  Expr expr() const;

  friend bool operator==(const ProgramToken& a, const ProgramToken& b) { return a.label() == b.label(); }
};

// The constant vocabulary, in the order of the element set.
const std::vector<std::pair<std::string, double>>& constant_labels();

// Operand token or nullopt when `text` is not in the operand vocabulary.
std::optional<ProgramToken> parse_operand(std::string_view text);

struct SolutionStep {
  std::string op;
  std::vector<ProgramToken> operands;
  friend bool operator==(const SolutionStep&, const SolutionStep&) = default;
};

struct SolutionProgram {
  std::vector<SolutionStep> steps;
  bool empty() const { return steps.empty(); }
  friend bool operator==(const SolutionProgram&, const SolutionProgram&) = default;
};

struct Candidate {
  SolutionProgram program;
  double confidence = 0;
};

// Greedy segmentation: an operator token opens a step, the following operand
// tokens belong to it. Arity is not checked. Throws LeadingOperand, UnknownToken.
SolutionProgram parse_program(std::string_view text, const KnowledgeBase& kb = builtin_kb());
std::string render_program(const SolutionProgram& p);

// Canonical operator names; operands of each commutative group sorted by
// Arg > InterVar > ProblemVar > Const, then ascending index. Steps with an
// unknown operator or arity are left as they are.
SolutionProgram normalize_program(const SolutionProgram& p, const KnowledgeBase& kb = builtin_kb());
bool program_equal(const SolutionProgram& a, const SolutionProgram& b, const KnowledgeBase& kb = builtin_kb());

// Ordering key used by normalization: type rank first, then index.
bool operand_before(const ProgramToken& a, const ProgramToken& b);

}  // namespace geosym
