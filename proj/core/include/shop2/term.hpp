#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shop2/sexpr.hpp"

namespace shop2 {

/// Interned, lower-cased identifier. Variables keep their leading `?`,
/// keywords their leading `:`.
using SymbolId = std::uint32_t;

SymbolId intern(std::string_view name);
const std::string& symbolName(SymbolId id);

/// Ground or non-ground term of the planning language. Lists are shared
/// and immutable, so copying a Term is cheap.
class Term {
 public:
  enum class Kind : std::uint8_t { Symbol, Integer, Real, Variable, List };

  Term() : Term(Kind::List) {}  // the empty list

  static Term symbol(SymbolId id);
  static Term symbol(std::string_view name) { return symbol(intern(name)); }
  static Term integer(std::int64_t v);
  static Term real(double v);
  static Term number(const Number& n) { return n.integral ? integer(n.integer) : real(n.real); }
  static Term variable(SymbolId name, std::uint32_t generation = 0);
  static Term variable(std::string_view name) { return variable(intern(name)); }
  static Term list(std::vector<Term> items);
  static Term truth();  // the symbol t
  static Term nil() { return Term(); }

  Kind kind() const { return kind_; }
  bool isSymbol() const { return kind_ == Kind::Symbol; }
  bool isSymbol(SymbolId id) const { return kind_ == Kind::Symbol && sym_ == id; }
  bool isVariable() const { return kind_ == Kind::Variable; }
  bool isNumber() const { return kind_ == Kind::Integer || kind_ == Kind::Real; }
  bool isList() const { return kind_ == Kind::List; }
  bool isEmptyList() const { return kind_ == Kind::List && size() == 0; }
  /// Lisp truthiness: everything except nil and the empty list.
  bool isTruthy() const;

  SymbolId symbolId() const { return sym_; }
  std::uint32_t generation() const { return gen_; }
  std::int64_t asInteger() const { return i_; }
  double asDouble() const { return kind_ == Kind::Integer ? static_cast<double>(i_) : d_; }
  Number asNumber() const;

  std::span<const Term> items() const;
  std::size_t size() const;
  const Term& operator[](std::size_t i) const { return items()[i]; }
  /// Head symbol of a non-empty list whose first item is a symbol, else nullopt.
  std::optional<SymbolId> head() const;

  bool isGround() const;
  std::size_t hash() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  /// Arbitrary but total order, used for canonical sorting.
  friend bool operator<(const Term& a, const Term& b);

 private:
  struct ListNode;
  explicit Term(Kind k) : kind_(k) {}

  Kind kind_;
  SymbolId sym_ = 0;
  std::uint32_t gen_ = 0;
  union {
    std::int64_t i_ = 0;
    double d_;
  };
  std::shared_ptr<const ListNode> list_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

Term toTerm(const SExpr& e);
SExpr toSExpr(const Term& t);
std::string toString(const Term& t);
Term parseTerm(std::string_view text);

/// Replaces every variable with the same name at `generation`.
Term renameVariables(const Term& t, std::uint32_t generation);
/// Process-wide fresh generation number for standardizing apart.
std::uint32_t freshGeneration();
void collectVariables(const Term& t, std::vector<Term>& out);

/// Finite map from variables to terms with an undo trail (truncate to a
/// mark). Lookups return the direct binding; resolve() follows chains.
class Substitution {
 public:
  using Key = std::uint64_t;

  const Term* lookup(const Term& var) const;
  bool isBound(const Term& var) const { return lookup(var) != nullptr; }
  void bind(const Term& var, Term value);

  /// Follows variable-to-variable bindings one level at a time.
  const Term& walk(const Term& t) const;
  /// Applies the substitution all the way down.
  Term resolve(const Term& t) const;
  bool occurs(const Term& var, const Term& t) const;

  std::size_t mark() const { return bindings_.size(); }
  void undoTo(std::size_t mark) { bindings_.resize(mark); }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  /// Every binding with its value fully resolved.
  std::vector<std::pair<Term, Term>> bindings() const;

 private:
  static Key keyOf(const Term& var) {
    return (static_cast<Key>(var.symbolId()) << 32) | var.generation();
  }
  std::vector<std::pair<Key, Term>> bindings_;
};

/// Most general unifier with occurs check. Extends `theta` in place; on
/// failure `theta` is restored to its state on entry.
bool unify(const Term& a, const Term& b, Substitution& theta);
std::optional<Substitution> unify(const Term& a, const Term& b);

}  // namespace shop2

template <>
struct std::hash<shop2::Term> {
  std::size_t operator()(const shop2::Term& t) const { return t.hash(); }
};
