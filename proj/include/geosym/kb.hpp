#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geosym/expr.hpp"

namespace geosym {

// Numeric constraint over operand placeholders, e.g. "0<a<c".
struct ValueRule {
  Predicate predicate;
  std::string text;
  friend bool operator==(const ValueRule&, const ValueRule&) = default;
};

// Diagram-level constraint the library cannot evaluate by itself, e.g. the
// diagonals of a kite intersecting. Checked through optional hooks.
struct RelationalRule {
  std::string tag;
  std::string description;
  friend bool operator==(const RelationalRule&, const RelationalRule&) = default;
};

using SemanticRule = std::variant<ValueRule, RelationalRule>;

struct TupleVariant {
  std::vector<char> placeholders;       // 'a', 'b', ...
  std::optional<Equation> formula;      // absent only for Get
  std::vector<std::vector<int>> commutative;
  std::vector<SemanticRule> rules;
  bool variadic = false;                // last operand is the result, the rest repeat
  std::map<char, std::string> witness;  // placeholder -> expression satisfying the formula

  std::size_t min_arity() const { return placeholders.size(); }
  bool accepts(std::size_t arity) const;
  // Commutative operand positions for a concrete operand count.
  std::vector<std::vector<std::size_t>> groups_for(std::size_t arity) const;
  // Formula with every placeholder replaced by the matching operand.
  std::optional<Equation> formula_for(std::span<const Expr> operands) const;
  // Value rules with placeholders replaced by operands.
  std::vector<std::pair<Predicate, std::string>> rules_for(std::span<const Expr> operands) const;

  friend bool operator==(const TupleVariant&, const TupleVariant&) = default;
};

struct KnowledgeTuple {
  std::string op;
  std::vector<std::string> aliases;
  std::vector<TupleVariant> variants;
  friend bool operator==(const KnowledgeTuple&, const KnowledgeTuple&) = default;
};

class KnowledgeBase {
 public:
  // Throws DuplicateOperator when the name or an alias is already taken.
  void add(KnowledgeTuple tuple);

  // Canonical or alias lookup; nullptr when absent.
  const KnowledgeTuple* base_search(std::string_view name) const;
  bool is_operator(std::string_view name) const { return base_search(name) != nullptr; }
  std::size_t size() const { return tuples_.size(); }
  const std::map<std::string, KnowledgeTuple, std::less<>>& tuples() const { return tuples_; }

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) { return a.tuples_ == b.tuples_; }

 private:
  std::map<std::string, KnowledgeTuple, std::less<>> tuples_;
  std::map<std::string, std::string, std::less<>> alias_;
};

// Exact-arity variant or a variadic one accepting `arity`; nullptr on a form mismatch.
const TupleVariant* match_variant(const KnowledgeTuple& tuple, std::size_t arity);

// The 34 built-in theorem tuples.
const KnowledgeBase& builtin_kb();

// One JSON object per line; blank lines and lines starting with '#' are skipped.
KnowledgeBase parse_kb(std::istream& in);
KnowledgeBase load_kb(const std::filesystem::path& path);
std::string dump_kb(const KnowledgeBase& kb);
// Parses a single tuple record. `line` is used in error messages.
KnowledgeTuple parse_tuple_record(std::string_view json_text, std::size_t line);

struct WitnessResult {
  std::string op;
  std::size_t variant = 0;
  double residual = 0.0;
  bool rules_hold = true;
  std::string detail;
  bool ok() const { return rules_hold && std::abs(residual) < 1e-9; }
};

// Evaluates every shipped witness against its formula and value rules.
std::vector<WitnessResult> check_witnesses(const KnowledgeBase& kb);

}  // namespace geosym
