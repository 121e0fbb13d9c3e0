#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "shop2/logic.hpp"
#include "shop2/sexpr.hpp"
#include "shop2/task_network.hpp"
#include "shop2/term.hpp"

namespace shop2 {

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Single-valued state property tracked on its own timeline: atoms
/// `(pred a1 ... an)` whose key arguments identify the instance and whose
/// value argument may change.
struct DynamicProperty {
  SymbolId predicate = 0;
  std::vector<int> keyPositions;  // 1-based argument positions
  int valuePosition = 0;
  int arity() const;
};

/// Dynamic-property patterns an operator reads and writes, kept for
/// temporal plan checking.
struct TemporalSignature {
  std::vector<Term> reads;
  std::vector<Term> writes;
};

struct Operator {
  Term head;
  Term precondition;
  Term deleteList;
  Term addList;
  Term cost;
  std::optional<TemporalSignature> temporal;

  SymbolId name() const { return *head.head(); }
  std::size_t arity() const { return head.size() - 1; }
  /// Names beginning with `!!` are bookkeeping actions.
  bool internal() const;
};

struct MethodClause {
  std::optional<SymbolId> label;
  Term precondition;
  NetworkTemplate subtasks;
};

struct Method {
  Term head;
  std::vector<MethodClause> clauses;
  SymbolId task() const { return *head.head(); }
};

struct DurativeOperator {
  Term head;
  std::vector<DynamicProperty> dynamics;
  std::vector<SymbolId> statics;
  Term precondition;
  Term effects;
  Term duration;
};

struct Domain {
  enum class ItemKind : std::uint8_t { Operator, Method, Axiom, Durative };
  struct Item {
    ItemKind kind;
    std::size_t index;
  };

  std::string name;
  std::vector<Operator> operators;
  std::vector<Method> methods;
  std::vector<Axiom> axiomList;
  std::vector<DurativeOperator> durative;
  std::vector<Item> items;  // source order
  AxiomSet axioms;
  /// Union of the dynamic declarations of all durative operators.
  std::vector<DynamicProperty> dynamics;

  const Operator* findOperator(SymbolId name) const;
  std::vector<const Method*> methodsFor(SymbolId task) const;
  bool isTemporal() const { return !durative.empty(); }
  const DynamicProperty* dynamicFor(SymbolId predicate) const;

  std::unordered_map<SymbolId, std::size_t> operatorIndex;
  std::unordered_map<SymbolId, std::vector<std::size_t>> methodIndex;
};

struct Problem {
  std::string name;
  std::string domainName;
  std::vector<Term> initialState;
  NetworkTemplate goals;
};

/// Primitive task names begin with `!`.
bool isPrimitiveTask(SymbolId name);

Domain loadDomain(const SExpr& form);
Domain loadDomainText(std::string_view text);
Problem loadProblem(const SExpr& form);
std::vector<Problem> loadProblems(std::string_view text);

/// Checks that every task symbol in `goals` resolves against `domain`.
void checkGoals(const Domain& domain, const Problem& problem);

/// The problem's initial atoms plus the timeline atoms a temporal domain
/// needs: read-time/write-time 0 for each initial dynamic-property
/// instance and `(maxtime 0)`, unless already present.
std::vector<Term> initialAtoms(const Domain& domain, const Problem& problem);

SExpr domainToSExpr(const Domain& domain);
SExpr problemToSExpr(const Problem& problem);
std::string printDomain(const Domain& domain);

}  // namespace shop2
