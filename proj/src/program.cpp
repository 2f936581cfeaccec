#include "geosym/program.hpp"

#include <algorithm>
#include <sstream>

#include "geosym/errors.hpp"

namespace geosym {

const std::vector<std::pair<std::string, double>>& constant_labels() {
  static const std::vector<std::pair<std::string, double>> labels = {
      {"C0.5", 0.5}, {"C2", 2},   {"C3", 3},   {"C4", 4},    {"C5", 5},   {"C6", 6},
      {"C8", 8},     {"C60", 60}, {"C90", 90}, {"C180", 180}, {"C360", 360},
  };
  return labels;
}

ProgramToken ProgramToken::op(std::string name) {
  ProgramToken t;
  t.kind = TokenKind::Operator;
  t.name = std::move(name);
  return t;
}

ProgramToken ProgramToken::variable(VarId v) {
  ProgramToken t;
  switch (v.kind) {
    case VarKind::ProblemVar: t.kind = TokenKind::ProblemVar; break;
    case VarKind::InterVar: t.kind = TokenKind::InterVar; break;
    case VarKind::Arg: t.kind = TokenKind::Arg; break;
  }
  t.var = v;
  return t;
}

ProgramToken ProgramToken::constant(std::string_view label) {
  for (const auto& [l, v] : constant_labels()) {
    if (l == label) {
      ProgramToken t;
      t.kind = TokenKind::Const;
      t.name = l;
      t.value = v;
      return t;
    }
  }
  throw UnknownToken(std::string(label));
}

std::string ProgramToken::label() const {
  switch (kind) {
    case TokenKind::Operator:
    case TokenKind::Const: return name;
    default: return var.str();
  }
}

Expr ProgramToken::expr() const {
  if (kind == TokenKind::Const) return Expr::number(value);
  return Expr::var(var);
}

std::optional<ProgramToken> parse_operand(std::string_view text) {
  if (auto v = VarId::parse(text)) return ProgramToken::variable(*v);
  for (const auto& [l, v] : constant_labels())
    if (l == text) return ProgramToken::constant(text);
  return std::nullopt;
}

SolutionProgram parse_program(std::string_view text, const KnowledgeBase& kb) {
  SolutionProgram p;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (kb.is_operator(tok)) {
      p.steps.push_back({tok, {}});
      continue;
    }
    auto operand = parse_operand(tok);
    if (!operand) throw UnknownToken(tok);
    if (p.steps.empty()) throw LeadingOperand(tok);
    p.steps.back().operands.push_back(*operand);
  }
  return p;
}

std::string render_program(const SolutionProgram& p) {
  std::string out;
  for (const auto& s : p.steps) {
    if (!out.empty()) out += ' ';
    out += s.op;
    for (const auto& o : s.operands) {
      out += ' ';
      out += o.label();
    }
  }
  return out;
}

namespace {

int type_rank(TokenKind k) {
  switch (k) {
    case TokenKind::Arg: return 0;
    case TokenKind::InterVar: return 1;
    case TokenKind::ProblemVar: return 2;
    case TokenKind::Const: return 3;
    case TokenKind::Operator: return 4;
  }
  return 4;
}

}  // namespace

bool operand_before(const ProgramToken& a, const ProgramToken& b) {
  int ra = type_rank(a.kind), rb = type_rank(b.kind);
  if (ra != rb) return ra < rb;
  if (a.kind == TokenKind::Const) return a.value < b.value;
  return a.var.index < b.var.index;
}

SolutionProgram normalize_program(const SolutionProgram& p, const KnowledgeBase& kb) {
  SolutionProgram out = p;
  for (auto& step : out.steps) {
    const auto* t = kb.base_search(step.op);
    if (!t) continue;
    const auto* v = match_variant(*t, step.operands.size());
    if (!v) continue;
    step.op = t->op;
    for (const auto& group : v->groups_for(step.operands.size())) {
      std::vector<ProgramToken> vals;
      for (auto i : group) vals.push_back(step.operands[i]);
      std::stable_sort(vals.begin(), vals.end(), operand_before);
      for (std::size_t k = 0; k < group.size(); ++k) step.operands[group[k]] = vals[k];
    }
  }
  return out;
}

bool program_equal(const SolutionProgram& a, const SolutionProgram& b, const KnowledgeBase& kb) {
  return normalize_program(a, kb) == normalize_program(b, kb);
}

}  // namespace geosym
