#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "geosym/clauses.hpp"
#include "geosym/dataset.hpp"
#include "geosym/program.hpp"
#include "geosym/rng.hpp"

namespace test {

inline std::string data_path(const std::string& name) { return std::string(GEOSYM_DATA_DIR) + "/" + name; }

inline const std::vector<geosym::ProblemRecord>& fixtures() {
  static const auto recs = geosym::load_dataset(data_path("fixtures.jsonl")).records;
  return recs;
}

inline bool close_rel(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max(1.0, std::fabs(b));
}

// Random tree of depth <= `depth` using every node kind the grammar can express.
inline geosym::Expr random_expr(geosym::Rng& rng, int depth) {
  using geosym::Expr;
  using K = Expr::Kind;
  if (depth <= 0 || rng.chance(0.25)) {
    switch (rng.below(5)) {
      case 0: return Expr::number(static_cast<double>(rng.below(100)));
      case 1: return Expr::number(static_cast<double>(rng.below(64)) / 8.0);
      case 2: return Expr::pi();
      case 3: return Expr::var(geosym::VarId::problem(static_cast<int>(rng.below(11))));
      default:
        return rng.chance(0.5) ? Expr::var(geosym::VarId::inter(static_cast<int>(rng.below(7))))
                               : Expr::var(geosym::VarId::arg(static_cast<char>('a' + rng.below(26))));
    }
  }
  switch (rng.below(9)) {
    case 0: return Expr::neg(random_expr(rng, depth - 1));
    case 1: return Expr::binary(K::Add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 2: return Expr::binary(K::Sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3: return Expr::binary(K::Mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4: return Expr::binary(K::Div, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return Expr::binary(K::Pow, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6: return Expr::call(K::Sin, random_expr(rng, depth - 1));
    case 7: return Expr::call(K::Cos, random_expr(rng, depth - 1));
    default: return Expr::call(K::Tan, random_expr(rng, depth - 1));
  }
}

inline geosym::ProgramToken random_operand(geosym::Rng& rng) {
  using geosym::ProgramToken;
  using geosym::VarId;
  switch (rng.below(4)) {
    case 0: return ProgramToken::variable(VarId::problem(static_cast<int>(rng.below(11))));
    case 1: return ProgramToken::variable(VarId::inter(static_cast<int>(rng.below(7))));
    case 2: return ProgramToken::variable(VarId::arg(static_cast<char>('a' + rng.below(26))));
    default: {
      const auto& labels = geosym::constant_labels();
      return ProgramToken::constant(labels[rng.below(labels.size())].first);
    }
  }
}

// Steps drawn from the knowledge base (canonical names and aliases), with
// arities around the valid ones so form failures also occur.
inline geosym::SolutionProgram random_program(geosym::Rng& rng, const geosym::KnowledgeBase& kb, std::size_t max_steps = 5) {
  std::vector<std::string> names;
  for (const auto& [name, t] : kb.tuples()) {
    names.push_back(name);
    for (const auto& a : t.aliases) names.push_back(a);
  }
  geosym::SolutionProgram p;
  std::size_t n = 1 + rng.below(max_steps);
  for (std::size_t i = 0; i < n; ++i) {
    geosym::SolutionStep s;
    s.op = names[rng.below(names.size())];
    const auto* t = kb.base_search(s.op);
    std::size_t arity = t->variants[rng.below(t->variants.size())].min_arity();
    if (rng.chance(0.2)) arity = rng.below(7);
    else if (rng.chance(0.2)) arity += rng.below(3);
    for (std::size_t k = 0; k < arity; ++k) s.operands.push_back(random_operand(rng));
    p.steps.push_back(std::move(s));
  }
  return p;
}

inline std::size_t env_size(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  return v && *v ? static_cast<std::size_t>(std::strtoull(v, nullptr, 10)) : fallback;
}

inline std::string point(geosym::Rng& rng) { return std::string(1, static_cast<char>('A' + rng.below(26))); }

inline std::string points(geosym::Rng& rng, std::size_t n) {
  std::string s;
  while (s.size() < n) {
    char c = static_cast<char>('A' + rng.below(26));
    if (s.find(c) == std::string::npos) s += c;
  }
  return s;
}

inline std::string value(geosym::Rng& rng) {
  static const char* values[] = {"3", "2.5", "3x+y", "5π", "x", "2x+4", "30", "12"};
  return values[rng.below(8)];
}

// Random fact of any of the nine kinds, valid per check_fact.
inline geosym::Fact random_fact(geosym::Rng& rng) {
  using namespace geosym;
  Fact f;
  f.kind = static_cast<FactKind>(rng.below(9));
  auto letters = [](const std::string& s) {
    std::vector<std::string> v;
    for (char c : s) v.emplace_back(1, c);
    return v;
  };
  switch (f.kind) {
    case FactKind::PointsOnLine: f.refs = letters(points(rng, 2 + rng.below(3))); break;
    case FactKind::NamedLinePoints: {
      f.refs = {std::string(1, "klmn"[rng.below(4)])};
      for (auto& p : letters(points(rng, 2 + rng.below(2)))) f.refs.push_back(p);
      break;
    }
    case FactKind::PointsOnCircle: f.refs = letters(points(rng, 2 + rng.below(3))); break;
    case FactKind::SegEq:
      for (std::size_t i = 0, n = 1 + rng.below(2); i < n; ++i) f.refs.push_back(points(rng, 2));
      f.value = value(rng);
      break;
    case FactKind::ArcLenEq: f.refs = {points(rng, 2)}; f.value = value(rng); break;
    case FactKind::AngleEq:
      for (std::size_t i = 0, n = 1 + rng.below(2); i < n; ++i) {
        switch (rng.below(3)) {
          case 0: f.refs.push_back(points(rng, 3)); break;
          case 1: f.refs.push_back(point(rng)); break;
          default: f.refs.push_back(std::to_string(1 + rng.below(20)));
        }
      }
      f.value = value(rng);
      break;
    case FactKind::ArcDegEq: f.refs = {points(rng, 2 + rng.below(2))}; f.value = value(rng); break;
    case FactKind::Parallel:
      f.refs = {points(rng, 2), rng.chance(0.5) ? std::string("k") : points(rng, 2)};
      break;
    case FactKind::Perpendicular: f.refs = {points(rng, 2), points(rng, 2), point(rng)}; break;
  }
  return f;
}

}  // namespace test
