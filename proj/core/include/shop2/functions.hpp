#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "shop2/term.hpp"

namespace shop2 {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Whitelisted host functions callable from `eval`, `call`, `assign` and
/// cost expressions, plus a store of named global parameters such as
/// `*tc*`. Arguments are always ground.
class FunctionTable {
 public:
  using Function = std::function<Term(std::span<const Term>)>;

  FunctionTable();

  void define(std::string_view name, Function fn);
  const Function* find(SymbolId name) const;
  bool contains(SymbolId name) const { return find(name) != nullptr; }

  void setParameter(SymbolId name, Term value);
  std::optional<Term> parameter(SymbolId name) const;
  void clearParameters() { parameters_.clear(); }

  /// Evaluates `expr` under `theta`. Special forms: if, setf, eval, call,
  /// quote, and, or. A symbol evaluates to its parameter value when one is
  /// set, to the fixnum sentinel for most-positive-fixnum, else to itself.
  Term evaluate(const Term& expr, const Substitution& theta);

  /// Applies the named binary function (used for sort-by comparators).
  Term apply(SymbolId name, std::span<const Term> args);

 private:
  std::unordered_map<SymbolId, Function> functions_;
  std::unordered_map<SymbolId, Term> parameters_;
};

/// Largest representable integer, standing in for Lisp's most-positive-fixnum.
inline constexpr std::int64_t kFixnumSentinel = INT64_MAX;

}  // namespace shop2
