#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shop2 {

/// Numeric literal. Integer literals that fit in 64 bits are kept exact;
/// everything else is a double. Equality compares values, so 3 == 3.0.
struct Number {
  bool integral = true;
  std::int64_t integer = 0;
  double real = 0.0;

  static Number ofInteger(std::int64_t v) { return Number{true, v, static_cast<double>(v)}; }
  static Number ofReal(double v) { return Number{false, 0, v}; }

  double value() const { return integral ? static_cast<double>(integer) : real; }
  friend bool operator==(const Number& a, const Number& b);
};

/// One node of the Lisp-like surface syntax. Names are stored lower-cased
/// and without their prefix character (`?`, `:`, `#'`).
class SExpr {
 public:
  enum class Kind : std::uint8_t { Symbol, Number, Variable, Keyword, FunctionRef, List };

  SExpr() : kind_(Kind::List) {}

  static SExpr symbol(std::string_view name);
  static SExpr variable(std::string_view name);
  static SExpr keyword(std::string_view name);
  static SExpr functionRef(std::string_view name);
  static SExpr number(Number n);
  static SExpr integer(std::int64_t v) { return number(Number::ofInteger(v)); }
  static SExpr real(double v) { return number(Number::ofReal(v)); }
  static SExpr list(std::vector<SExpr> items);

  Kind kind() const { return kind_; }
  bool isList() const { return kind_ == Kind::List; }
  bool isSymbol() const { return kind_ == Kind::Symbol; }
  bool isSymbol(std::string_view name) const { return kind_ == Kind::Symbol && name_ == name; }
  bool isKeyword(std::string_view name) const { return kind_ == Kind::Keyword && name_ == name; }

  /// Name without prefix; empty for numbers and lists.
  const std::string& name() const { return name_; }
  const Number& number() const { return number_; }
  const std::vector<SExpr>& items() const { return items_; }
  std::vector<SExpr>& items() { return items_; }

  friend bool operator==(const SExpr& a, const SExpr& b);
  friend bool operator!=(const SExpr& a, const SExpr& b) { return !(a == b); }

 private:
  Kind kind_;
  std::string name_;
  Number number_;
  std::vector<SExpr> items_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Reads every top-level form in `text`.
std::vector<SExpr> parseSExprs(std::string_view text);

/// Reads exactly one form; anything else is a ParseError.
SExpr parseSExpr(std::string_view text);

/// Canonical text: lower-case names, single spaces, shortest round-trip numbers.
std::string print(const SExpr& e);
std::string printNumber(const Number& n);

/// Multi-line rendering for files meant to be read by people.
std::string prettyPrint(const SExpr& e, int width = 78);

}  // namespace shop2
