#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace geosym {

enum class VarKind { ProblemVar, InterVar, Arg };

inline constexpr int kMaxProblemVar = 10;
inline constexpr int kMaxInterVar = 6;

// A named unknown: N0..N10, V0..V6 or a single letter a..z.
struct VarId {
  VarKind kind = VarKind::Arg;
  int index = 0;  // letter - 'a' for Arg

  static VarId problem(int k);
  static VarId inter(int k);
  static VarId arg(char letter);
  // Parses "N<k>", "V<k>" or a lowercase letter; nullopt when out of range.
  static std::optional<VarId> parse(std::string_view text);

  char letter() const { return static_cast<char>('a' + index); }
  std::string str() const;

  auto operator<=>(const VarId&) const = default;
};

using Assignment = std::map<VarId, double>;

// Counts expression evaluations and aborts once a limit is hit.
class EvalBudget {
 public:
  explicit EvalBudget(std::uint64_t limit) : limit_(limit) {}
  void charge(std::uint64_t n = 1);
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// Immutable expression tree. Copies share structure.
class Expr {
 public:
  enum class Kind { Number, Pi, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Tan };

  Expr();  // the literal 0
  static Expr number(double v);
  static Expr pi();
  static Expr var(VarId v);
  static Expr neg(Expr e);
  static Expr binary(Kind k, Expr lhs, Expr rhs);
  static Expr call(Kind fn, Expr arg);

  Kind kind() const;
  double value() const;  // Number only
  VarId var() const;     // Var only
  std::size_t arity() const;
  const Expr& child(std::size_t i) const;

  bool is_number() const { return kind() == Kind::Number; }
  bool is_var() const { return kind() == Kind::Var; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

struct Equation {
  Expr lhs;
  Expr rhs;
  friend bool operator==(const Equation&, const Equation&) = default;
};

// Chained comparison "0<a<c" or "a,b,c>0". Every adjacent pair must hold for
// every combination of the comma-separated members.
enum class CmpOp { Lt, Le, Gt, Ge };

struct Predicate {
  std::vector<std::vector<Expr>> terms;
  std::vector<CmpOp> ops;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

Expr parse_expr(std::string_view text);
Equation parse_equation(std::string_view text);
Predicate parse_predicate(std::string_view text);

std::string render(const Expr& e);
std::string render(const Equation& eq);
std::string render(const Predicate& p);

// Trigonometric functions take degrees.
double eval_expr(const Expr& e, const Assignment& env, EvalBudget* budget = nullptr);
// lhs - rhs
double residual(const Equation& eq, const Assignment& env, EvalBudget* budget = nullptr);
bool holds(const Predicate& p, const Assignment& env);

// Replaces bound variables by literals and folds variable-free subtrees.
Expr substitute(const Expr& e, const Assignment& env);
Equation substitute(const Equation& eq, const Assignment& env);
// Simultaneous replacement of variables by expressions.
Expr instantiate(const Expr& e, const std::map<VarId, Expr>& repl);
Equation instantiate(const Equation& eq, const std::map<VarId, Expr>& repl);
Predicate instantiate(const Predicate& p, const std::map<VarId, Expr>& repl);

std::set<VarId> free_vars(const Expr& e);
std::set<VarId> free_vars(const Equation& eq);
std::set<VarId> free_vars(const Predicate& p);
std::size_t occurrences(const Expr& e, VarId v);

double sin_deg(double x);
double cos_deg(double x);
double tan_deg(double x);

}  // namespace geosym
