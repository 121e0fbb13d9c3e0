#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "shop2/function_ref.hpp"
#include "shop2/functions.hpp"
#include "shop2/state.hpp"
#include "shop2/term.hpp"

namespace shop2 {

/// Axiom recursion went deeper than ProverOptions::depthLimit.
class ProofDepthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition could not be evaluated as written: a negation reached with
/// unbound variables, a sort-by key left unbound, a malformed connective.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AxiomClause {
  std::optional<SymbolId> label;
  Term tail;
};

/// `(:- head [label] tail [label] tail ...)`. Clauses act as if-then-else:
/// only the first clause with at least one satisfier contributes.
struct Axiom {
  Term head;
  std::vector<AxiomClause> clauses;

  SymbolId predicate() const { return *head.head(); }
};

class AxiomSet {
 public:
  void add(Axiom axiom);
  std::span<const Axiom> find(SymbolId predicate) const;
  bool defines(SymbolId predicate) const { return byPredicate_.count(predicate) != 0; }
  std::size_t size() const { return count_; }

 private:
  std::unordered_map<SymbolId, std::vector<Axiom>> byPredicate_;
  std::size_t count_ = 0;
};

/// Observer for axiom-clause tracing. `wants` filters; `emit` receives
/// properly nested enter/exit pairs.
struct AxiomTraceHook {
  std::function<bool(const Axiom&, const AxiomClause&)> wants;
  std::function<void(bool enter, const Axiom&, const AxiomClause&, const Term& goal, bool success)> emit;
};

struct ProverOptions {
  int depthLimit = 512;
};

/// Default proof-depth limit, overridable through SHOP2_PROOF_DEPTH.
int defaultProofDepthLimit();

/// Enumerates satisfiers of precondition expressions against a state.
///
/// Enumeration order is canonical: conjuncts left to right, state atoms in
/// insertion order, then axioms in file order. `:sort-by` stably reorders the
/// satisfiers of its child by the key variable.
class Prover {
 public:
  using Yield = FunctionRef<bool(Substitution&)>;

  Prover(const State& state, const AxiomSet& axioms, FunctionTable& functions,
         ProverOptions options = {});
  Prover(State&&, const AxiomSet&, FunctionTable&, ProverOptions = {}) = delete;
  Prover(const State&, AxiomSet&&, FunctionTable&, ProverOptions = {}) = delete;

  std::vector<Substitution> satisfiers(const Term& expr, const Substitution& initial = {});
  std::vector<Substitution> prove(const Term& goal, const Substitution& initial = {});
  bool holds(const Term& expr, const Substitution& initial = {});

  /// Streams satisfiers into `yield`, which returns false to stop early.
  /// Returns false iff enumeration was stopped by the consumer.
  bool forEach(const Term& expr, Substitution& theta, Yield yield) { return solve(expr, theta, 0, yield); }

  void setTraceHook(const AxiomTraceHook* hook) { trace_ = hook; }

 private:
  bool solve(const Term& expr, Substitution& theta, int depth, Yield yield);
  bool solveConjunction(std::span<const Term> conjuncts, Substitution& theta, int depth, Yield yield);
  bool solveAtom(const Term& goal, Substitution& theta, int depth, Yield yield);
  bool solveSortBy(const Term& expr, Substitution& theta, int depth, Yield yield);
  bool solveUniversal(const Term& antecedent, const Term& consequent, Substitution& theta, int depth,
                      Yield yield);
  bool anySatisfier(const Term& expr, Substitution& theta, int depth);

  const State& state_;
  const AxiomSet& axioms_;
  FunctionTable& functions_;
  ProverOptions options_;
  const AxiomTraceHook* trace_ = nullptr;
};

std::vector<Substitution> satisfiers(const Term& precondition, const State& state, const AxiomSet& axioms,
                                     FunctionTable& functions, const Substitution& initial = {});

/// Variables of `expr` not bound by an enclosing forall/exists inside it.
std::vector<Term> freeVariables(const Term& expr);

}  // namespace shop2
