#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shop2/model.hpp"
#include "shop2/state.hpp"
#include "shop2/term.hpp"

namespace shop2 {

/// Input outside the supported PDDL subset.
class PddlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PddlParameter {
  Term variable;
  std::optional<SymbolId> type;
};

struct NumericEffect {
  enum class Op : std::uint8_t { Assign, Increase, Decrease, ScaleUp, ScaleDown };
  Op op = Op::Assign;
  Term fluent;      // (f arg...)
  Term expression;  // PDDL numeric expression over fluents, numbers, variables
};

struct PddlAction {
  SymbolId name = 0;
  std::vector<PddlParameter> parameters;
  Term precondition;  // PDDL goal description, () when absent
  std::vector<Term> additions;
  std::vector<Term> deletions;
  std::vector<NumericEffect> numeric;
};

struct SkippedConstruct {
  std::string action;
  std::string feature;
};

struct PddlDomain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<std::pair<SymbolId, std::optional<SymbolId>>> types;  // type, supertype
  std::vector<PddlParameter> constants;
  std::vector<Term> predicates;
  std::vector<Term> functions;  // fluent signatures
  std::vector<PddlAction> actions;
  std::vector<SkippedConstruct> skipped;  // lenient parsing only

  const PddlAction* findAction(SymbolId name) const;
  bool isFluent(SymbolId name) const;
  /// The type and all its ancestors.
  std::vector<SymbolId> typeChain(SymbolId type) const;
};

struct PddlProblem {
  std::string name;
  std::string domain;
  std::vector<PddlParameter> objects;
  std::vector<Term> init;  // `(= (f a) v)` already encoded as `(f a v)`
  Term goal;
};

struct PddlOptions {
  /// When false, actions using unsupported constructs are dropped and
  /// recorded in PddlDomain::skipped instead of aborting the parse.
  bool strict = true;
};

PddlDomain parsePddl(std::string_view text, const PddlOptions& options = {});
PddlProblem parsePddlProblem(std::string_view text);

/// Initial state for `problem`: init atoms plus one unary type atom per
/// object and ancestor type.
std::vector<Term> pddlInitialAtoms(const PddlDomain& domain, const PddlProblem& problem);

struct TranslationReport {
  std::size_t translatedOperators = 0;
  std::vector<SkippedConstruct> skipped;
  std::vector<std::string> stubMethods;
  std::vector<std::string> notes;

  std::string text() const;
};

struct Translation {
  Domain domain;
  std::string source;  // printable .shop text of `domain`
  TranslationReport report;
};

/// One operator `!name` per action plus a wrapper method `(name ...)`.
Translation translateToShop(const PddlDomain& domain);

struct PddlExecution {
  bool ok = true;
  std::size_t failedIndex = 0;
  std::string message;
  State finalState;
};

/// Applies ground actions `(name obj...)` under PDDL semantics.
PddlExecution executePddl(const PddlDomain& domain, const State& init, const std::vector<Term>& actions);

}  // namespace shop2
