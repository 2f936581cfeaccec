#include "geosym/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "geosym/errors.hpp"

namespace geosym {

// ---------------------------------------------------------------------------
// VarId

VarId VarId::problem(int k) {
  if (k < 0 || k > kMaxProblemVar) throw IndexOutOfRange("problem variable index " + std::to_string(k));
  return {VarKind::ProblemVar, k};
}

VarId VarId::inter(int k) {
  if (k < 0 || k > kMaxInterVar) throw IndexOutOfRange("intermediate variable index " + std::to_string(k));
  return {VarKind::InterVar, k};
}

VarId VarId::arg(char letter) {
  if (letter < 'a' || letter > 'z') throw IndexOutOfRange(std::string("argument letter '") + letter + "'");
  return {VarKind::Arg, letter - 'a'};
}

std::optional<VarId> VarId::parse(std::string_view text) {
  if (text.size() == 1 && text[0] >= 'a' && text[0] <= 'z') return VarId{VarKind::Arg, text[0] - 'a'};
  if (text.size() < 2 || (text[0] != 'N' && text[0] != 'V')) return std::nullopt;
  auto digits = text.substr(1);
  if (digits.size() > 1 && digits[0] == '0') return std::nullopt;
  int k = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc{} || p != digits.data() + digits.size()) return std::nullopt;
  if (text[0] == 'N') {
    if (k > kMaxProblemVar) return std::nullopt;
    return VarId{VarKind::ProblemVar, k};
  }
  if (k > kMaxInterVar) return std::nullopt;
  return VarId{VarKind::InterVar, k};
}

std::string VarId::str() const {
  switch (kind) {
    case VarKind::ProblemVar: return "N" + std::to_string(index);
    case VarKind::InterVar: return "V" + std::to_string(index);
    case VarKind::Arg: return std::string(1, letter());
  }
  return "?";
}

void EvalBudget::charge(std::uint64_t n) {
  used_ += n;
  if (used_ > limit_) throw BudgetExceeded("evaluation budget of " + std::to_string(limit_) + " exhausted");
}

// ---------------------------------------------------------------------------
// Expr nodes

struct Expr::Node {
  Kind kind = Kind::Number;
  double value = 0.0;
  VarId var{};
  std::array<Expr, 2> kids;
  std::size_t n_kids = 0;
};

// A null node stands for the literal 0 so that Node can hold Expr members.
Expr::Expr() = default;

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pi;
  return Expr(std::move(n));
}

Expr Expr::var(VarId v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = v;
  return Expr(std::move(n));
}

Expr Expr::neg(Expr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->kids[0] = std::move(e);
  n->n_kids = 1;
  return Expr(std::move(n));
}

Expr Expr::binary(Kind k, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->kids[0] = std::move(lhs);
  n->kids[1] = std::move(rhs);
  n->n_kids = 2;
  return Expr(std::move(n));
}

Expr Expr::call(Kind fn, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = fn;
  n->kids[0] = std::move(arg);
  n->n_kids = 1;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_ ? node_->kind : Kind::Number; }
double Expr::value() const { return node_ ? node_->value : 0.0; }
VarId Expr::var() const { return node_ ? node_->var : VarId{}; }
std::size_t Expr::arity() const { return node_ ? node_->n_kids : 0; }
const Expr& Expr::child(std::size_t i) const { return node_->kids[i]; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Number: {
      // bitwise-equal values, so NaN literals compare equal to themselves
      double x = a.value(), y = b.value();
      return x == y || (std::isnan(x) && std::isnan(y));
    }
    case Expr::Kind::Pi: return true;
    case Expr::Kind::Var: return a.var() == b.var();
    default: break;
  }
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Expr::Kind::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Expr::Kind::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Expr::Kind::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Expr::Kind::Div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::neg(std::move(a)); }

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Lt, Le, Gt, Ge, Eq, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
  double number = 0.0;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      while (i < s.size() && is_digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
      }
      // exponent only when followed by digits, so "2e" stays 2*e
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          i = j;
          while (i < s.size() && is_digit(s[i])) ++i;
        }
      }
      Token t{Tok::Number, start, std::string(s.substr(start, i - start))};
      auto [p, ec] = std::from_chars(s.data() + start, s.data() + i, t.number);
      if (ec != std::errc{} || p != s.data() + i) throw SyntaxError("malformed number '" + t.text + "'", start);
      out.push_back(std::move(t));
      continue;
    }
    if (is_ident_start(c)) {
      while (i < s.size() && is_ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    // UTF-8 pi
    if (s.substr(i, 2) == "\xCF\x80") {
      i += 2;
      out.push_back({Tok::Ident, start, "pi"});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case '=': k = Tok::Eq; break;
      case '<':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          out.push_back({Tok::Le, start, "<="});
          i += 2;
          continue;
        }
        k = Tok::Lt;
        break;
      case '>':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          out.push_back({Tok::Ge, start, ">="});
          i += 2;
          continue;
        }
        k = Tok::Gt;
        break;
      default: throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({k, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : toks_(lex(s)) {}

  Expr expression() {
    Expr e = term();
    while (peek() == Tok::Plus || peek() == Tok::Minus) {
      Tok op = next().kind;
      Expr r = term();
      e = Expr::binary(op == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub, std::move(e), std::move(r));
    }
    return e;
  }

  std::vector<Expr> expression_list() {
    std::vector<Expr> v{expression()};
    while (peek() == Tok::Comma) {
      next();
      v.push_back(expression());
    }
    return v;
  }

  Tok peek() const { return toks_[pos_].kind; }
  const Token& current() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  void expect_end() {
    if (peek() != Tok::End) throw SyntaxError("unexpected '" + current().text + "'", current().offset);
  }

 private:
  Expr term() {
    Expr e = unary();
    for (;;) {
      if (peek() == Tok::Star || peek() == Tok::Slash) {
        Tok op = next().kind;
        Expr r = unary();
        e = Expr::binary(op == Tok::Star ? Expr::Kind::Mul : Expr::Kind::Div, std::move(e), std::move(r));
      } else if ((peek() == Tok::Ident || peek() == Tok::LParen) && pos_ > 0 &&
                 toks_[pos_ - 1].kind == Tok::Number) {
        // implicit product: number followed by a symbol or "("
        Expr r = unary();
        e = Expr::binary(Expr::Kind::Mul, std::move(e), std::move(r));
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (peek() == Tok::Minus) {
      next();
      return Expr::neg(unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek() == Tok::Caret) {
      next();
      return Expr::binary(Expr::Kind::Pow, std::move(base), unary());
    }
    return base;
  }

  Expr primary() {
    const Token& t = current();
    switch (t.kind) {
      case Tok::Number: next(); return Expr::number(t.number);
      case Tok::LParen: {
        next();
        Expr e = expression();
        if (peek() != Tok::RParen) throw SyntaxError("expected ')'", current().offset);
        next();
        return e;
      }
      case Tok::Ident: {
        next();
        if (t.text == "pi") return Expr::pi();
        if (t.text == "sin" || t.text == "cos" || t.text == "tan") {
          if (peek() != Tok::LParen) throw SyntaxError("expected '(' after " + t.text, current().offset);
          next();
          Expr arg = expression();
          if (peek() != Tok::RParen) throw SyntaxError("expected ')'", current().offset);
          next();
          Expr::Kind k = t.text == "sin" ? Expr::Kind::Sin : t.text == "cos" ? Expr::Kind::Cos : Expr::Kind::Tan;
          return Expr::call(k, std::move(arg));
        }
        if (auto v = VarId::parse(t.text)) return Expr::var(*v);
        throw UnknownIdentifier(t.text, t.offset);
      }
      case Tok::End: throw SyntaxError("unexpected end of input", t.offset);
      default: throw SyntaxError("unexpected '" + t.text + "'", t.offset);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Expr e = p.expression();
  p.expect_end();
  return e;
}

Equation parse_equation(std::string_view text) {
  Parser p(text);
  Expr lhs = p.expression();
  if (p.peek() != Tok::Eq) throw SyntaxError("expected '='", p.current().offset);
  p.next();
  Expr rhs = p.expression();
  p.expect_end();
  return {std::move(lhs), std::move(rhs)};
}

Predicate parse_predicate(std::string_view text) {
  Parser p(text);
  Predicate out;
  out.terms.push_back(p.expression_list());
  for (;;) {
    CmpOp op;
    switch (p.peek()) {
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default: goto done;
    }
    p.next();
    out.ops.push_back(op);
    out.terms.push_back(p.expression_list());
  }
done:
  if (out.ops.empty()) throw SyntaxError("expected comparison", p.current().offset);
  p.expect_end();
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    case Expr::Kind::Number: return e.value() < 0 || std::signbit(e.value()) ? 3 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

void render_into(const Expr& e, std::string& out);

void wrapped(const Expr& e, bool paren, std::string& out) {
  if (paren) out += '(';
  render_into(e, out);
  if (paren) out += ')';
}

void render_into(const Expr& e, std::string& out) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: {
      double v = e.value();
      if (v < 0 || std::signbit(v)) {
        out += '-';
        out += format_number(-v);
      } else {
        out += format_number(v);
      }
      return;
    }
    case K::Pi: out += "pi"; return;
    case K::Var: out += e.var().str(); return;
    case K::Neg:
      out += '-';
      wrapped(e.child(0), precedence(e.child(0)) < 3, out);
      return;
    case K::Add:
    case K::Sub:
      wrapped(e.child(0), precedence(e.child(0)) < 1, out);
      out += e.kind() == K::Add ? '+' : '-';
      wrapped(e.child(1), precedence(e.child(1)) <= 1, out);
      return;
    case K::Mul:
    case K::Div:
      wrapped(e.child(0), precedence(e.child(0)) < 2, out);
      out += e.kind() == K::Mul ? '*' : '/';
      wrapped(e.child(1), precedence(e.child(1)) <= 2, out);
      return;
    case K::Pow:
      wrapped(e.child(0), precedence(e.child(0)) <= 4, out);
      out += '^';
      wrapped(e.child(1), precedence(e.child(1)) < 3, out);
      return;
    case K::Sin:
    case K::Cos:
    case K::Tan:
      out += e.kind() == K::Sin ? "sin(" : e.kind() == K::Cos ? "cos(" : "tan(";
      render_into(e.child(0), out);
      out += ')';
      return;
  }
}

const char* op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

}  // namespace

std::string render(const Expr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

std::string render(const Equation& eq) { return render(eq.lhs) + " = " + render(eq.rhs); }

std::string render(const Predicate& p) {
  std::string out;
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    if (i > 0) out += op_text(p.ops[i - 1]);
    for (std::size_t j = 0; j < p.terms[i].size(); ++j) {
      if (j > 0) out += ',';
      out += render(p.terms[i][j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double reduce_deg(double x) {
  double r = std::fmod(x, 360.0);
  if (r < 0) r += 360.0;
  return r;
}

}  // namespace

double sin_deg(double x) {
  double r = reduce_deg(x);
  if (r == 0.0 || r == 180.0) return 0.0;
  if (r == 90.0) return 1.0;
  if (r == 270.0) return -1.0;
  if (r == 30.0 || r == 150.0) return 0.5;
  if (r == 210.0 || r == 330.0) return -0.5;
  return std::sin(r * kDegToRad);
}

double cos_deg(double x) {
  double r = reduce_deg(x);
  if (r == 90.0 || r == 270.0) return 0.0;
  if (r == 0.0) return 1.0;
  if (r == 180.0) return -1.0;
  if (r == 60.0 || r == 300.0) return 0.5;
  if (r == 120.0 || r == 240.0) return -0.5;
  return std::cos(r * kDegToRad);
}

double tan_deg(double x) {
  double r = reduce_deg(x);
  if (r == 90.0 || r == 270.0) throw MathDomain("tan undefined at " + format_number(x) + " degrees");
  if (r == 0.0 || r == 180.0) return 0.0;
  if (r == 45.0 || r == 225.0) return 1.0;
  if (r == 135.0 || r == 315.0) return -1.0;
  return std::tan(r * kDegToRad);
}

namespace {

double eval_rec(const Expr& e, const Assignment& env) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return e.value();
    case K::Pi: return std::numbers::pi;
    case K::Var: {
      auto it = env.find(e.var());
      if (it == env.end()) throw UnboundVariable(e.var().str());
      return it->second;
    }
    case K::Neg: return -eval_rec(e.child(0), env);
    case K::Add: return eval_rec(e.child(0), env) + eval_rec(e.child(1), env);
    case K::Sub: return eval_rec(e.child(0), env) - eval_rec(e.child(1), env);
    case K::Mul: return eval_rec(e.child(0), env) * eval_rec(e.child(1), env);
    case K::Div: {
      double n = eval_rec(e.child(0), env);
      double d = eval_rec(e.child(1), env);
      if (d == 0.0) throw MathDomain("division by zero");
      return n / d;
    }
    case K::Pow: {
      double b = eval_rec(e.child(0), env);
      double x = eval_rec(e.child(1), env);
      if (b < 0 && x != std::floor(x)) throw MathDomain("negative base with non-integer exponent");
      if (b == 0 && x < 0) throw MathDomain("zero base with negative exponent");
      if (x == 2.0) return b * b;
      return std::pow(b, x);
    }
    case K::Sin: return sin_deg(eval_rec(e.child(0), env));
    case K::Cos: return cos_deg(eval_rec(e.child(0), env));
    case K::Tan: return tan_deg(eval_rec(e.child(0), env));
  }
  return 0.0;
}

}  // namespace

double eval_expr(const Expr& e, const Assignment& env, EvalBudget* budget) {
  if (budget) budget->charge();
  double v = eval_rec(e, env);
  if (!std::isfinite(v)) throw MathDomain("non-finite result");
  return v;
}

double residual(const Equation& eq, const Assignment& env, EvalBudget* budget) {
  if (budget) budget->charge();
  double l = eval_rec(eq.lhs, env);
  double r = eval_rec(eq.rhs, env);
  double d = l - r;
  if (!std::isfinite(d)) throw MathDomain("non-finite residual");
  return d;
}

namespace {

bool compare(double x, CmpOp op, double y) {
  switch (op) {
    case CmpOp::Lt: return x < y;
    case CmpOp::Le: return x <= y;
    case CmpOp::Gt: return x > y;
    case CmpOp::Ge: return x >= y;
  }
  return false;
}

}  // namespace

bool holds(const Predicate& p, const Assignment& env) {
  try {
    std::vector<std::vector<double>> vals;
    for (const auto& group : p.terms) {
      auto& g = vals.emplace_back();
      for (const auto& e : group) g.push_back(eval_expr(e, env));
    }
    for (std::size_t i = 0; i < p.ops.size(); ++i)
      for (double x : vals[i])
        for (double y : vals[i + 1])
          if (!compare(x, p.ops[i], y)) return false;
    return true;
  } catch (const MathDomain&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

bool has_vars(const Expr& e) {
  if (e.is_var()) return true;
  for (std::size_t i = 0; i < e.arity(); ++i)
    if (has_vars(e.child(i))) return true;
  return false;
}

Expr rebuild(const Expr& e, std::array<Expr, 2> kids) {
  switch (e.kind()) {
    case Expr::Kind::Neg: return Expr::neg(std::move(kids[0]));
    case Expr::Kind::Sin:
    case Expr::Kind::Cos:
    case Expr::Kind::Tan: return Expr::call(e.kind(), std::move(kids[0]));
    default: return Expr::binary(e.kind(), std::move(kids[0]), std::move(kids[1]));
  }
}

Expr substitute_rec(const Expr& e, const Assignment& env) {
  if (e.is_var()) {
    auto it = env.find(e.var());
    return it == env.end() ? e : Expr::number(it->second);
  }
  if (e.arity() == 0) return e;
  std::array<Expr, 2> kids;
  bool changed = false;
  for (std::size_t i = 0; i < e.arity(); ++i) {
    kids[i] = substitute_rec(e.child(i), env);
    changed = changed || !(kids[i] == e.child(i));
  }
  Expr out = changed ? rebuild(e, kids) : e;
  if (!has_vars(out)) {
    try {
      return Expr::number(eval_expr(out, {}));
    } catch (const MathDomain&) {
      // leave unfolded; evaluation will report the error
    }
  }
  return out;
}

Expr instantiate_rec(const Expr& e, const std::map<VarId, Expr>& repl) {
  if (e.is_var()) {
    auto it = repl.find(e.var());
    return it == repl.end() ? e : it->second;
  }
  if (e.arity() == 0) return e;
  std::array<Expr, 2> kids;
  for (std::size_t i = 0; i < e.arity(); ++i) kids[i] = instantiate_rec(e.child(i), repl);
  return rebuild(e, kids);
}

void collect_vars(const Expr& e, std::set<VarId>& out) {
  if (e.is_var()) out.insert(e.var());
  for (std::size_t i = 0; i < e.arity(); ++i) collect_vars(e.child(i), out);
}

}  // namespace

Expr substitute(const Expr& e, const Assignment& env) { return substitute_rec(e, env); }

Equation substitute(const Equation& eq, const Assignment& env) {
  return {substitute(eq.lhs, env), substitute(eq.rhs, env)};
}

Expr instantiate(const Expr& e, const std::map<VarId, Expr>& repl) { return instantiate_rec(e, repl); }

Equation instantiate(const Equation& eq, const std::map<VarId, Expr>& repl) {
  return {instantiate(eq.lhs, repl), instantiate(eq.rhs, repl)};
}

Predicate instantiate(const Predicate& p, const std::map<VarId, Expr>& repl) {
  Predicate out = p;
  for (auto& g : out.terms)
    for (auto& e : g) e = instantiate(e, repl);
  return out;
}

std::set<VarId> free_vars(const Expr& e) {
  std::set<VarId> out;
  collect_vars(e, out);
  return out;
}

std::set<VarId> free_vars(const Equation& eq) {
  std::set<VarId> out;
  collect_vars(eq.lhs, out);
  collect_vars(eq.rhs, out);
  return out;
}

std::set<VarId> free_vars(const Predicate& p) {
  std::set<VarId> out;
  for (const auto& g : p.terms)
    for (const auto& e : g) collect_vars(e, out);
  return out;
}

std::size_t occurrences(const Expr& e, VarId v) {
  if (e.is_var()) return e.var() == v ? 1 : 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < e.arity(); ++i) n += occurrences(e.child(i), v);
  return n;
}

}  // namespace geosym
