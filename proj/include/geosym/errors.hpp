#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geosym {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& var)
      : Error("unbound variable " + var), var_(var) {}
  const std::string& variable() const { return var_; }

 private:
  std::string var_;
};

class MathDomain : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Program parsing.
class LeadingOperand : public Error {
 public:
  explicit LeadingOperand(const std::string& tok)
      : Error("program starts with operand '" + tok + "'") {}
};

class UnknownToken : public Error {
 public:
  explicit UnknownToken(const std::string& tok)
      : Error("unknown program token '" + tok + "'"), token_(tok) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// File formats. line is 1-based; 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& field, const std::string& msg)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + msg),
        line_(line),
        field_(field) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class DuplicateOperator : public Error {
 public:
  explicit DuplicateOperator(const std::string& op)
      : Error("duplicate operator '" + op + "'") {}
};

class DuplicateDeclaration : public Error {
 public:
  explicit DuplicateDeclaration(const std::string& var)
      : Error("variable " + var + " declared twice") {}
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// Clauses.
class KindError : public Error {
 public:
  using Error::Error;
};

class TemplateMismatch : public Error {
 public:
  TemplateMismatch(const std::string& text, const std::string& nearest)
      : Error("clause '" + text + "' matches no template (nearest: " + nearest + ")"),
        nearest_(nearest) {}
  const std::string& nearest() const { return nearest_; }

 private:
  std::string nearest_;
};

class TooManyVariables : public Error {
 public:
  using Error::Error;
};

class SymbolExhausted : public Error {
 public:
  using Error::Error;
};

class MissingChoices : public Error {
 public:
  explicit MissingChoices(const std::string& id)
      : Error("record '" + id + "' has no answer choices"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

}  // namespace geosym
