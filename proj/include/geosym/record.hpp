#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geosym/clauses.hpp"
#include "geosym/expr.hpp"

namespace geosym {

using Declarations = std::vector<std::pair<VarId, std::string>>;

struct CandidateText {
  std::string program;
  double confidence = 0;
  friend bool operator==(const CandidateText&, const CandidateText&) = default;
};

struct ProblemRecord {
  std::string id;
  std::vector<Fact> annotations;
  std::vector<std::string> structural_clauses;
  std::vector<std::string> semantic_clauses;
  std::string problem_text;
  Declarations variables;  // Nk -> value expression
  std::vector<CandidateText> candidates;
  std::string ground_truth_program;
  std::optional<double> answer;
  std::optional<std::vector<double>> choices;

  friend bool operator==(const ProblemRecord&, const ProblemRecord&) = default;
};

}  // namespace geosym
