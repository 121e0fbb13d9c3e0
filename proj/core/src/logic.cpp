#include "shop2/logic.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace shop2 {

namespace {

struct Keywords {
  SymbolId kAnd = intern("and");
  SymbolId kOr = intern("or");
  SymbolId kNot = intern("not");
  SymbolId kImply = intern("imply");
  SymbolId kForall = intern("forall");
  SymbolId kExists = intern("exists");
  SymbolId kSortBy = intern(":sort-by");
  SymbolId kAssign = intern("assign");
  SymbolId kEval = intern("eval");
  SymbolId kCall = intern("call");
  SymbolId kNil = intern("nil");
  SymbolId kTrue = intern("t");
  SymbolId kLess = intern("<");
  SymbolId kLessEq = intern("<=");
  SymbolId kGreater = intern(">");
  SymbolId kGreaterEq = intern(">=");
  SymbolId kEqual = intern("=");
};

const Keywords& kw() {
  static const Keywords k;
  return k;
}

bool isComparator(SymbolId s) {
  const auto& k = kw();
  return s == k.kLess || s == k.kLessEq || s == k.kGreater || s == k.kGreaterEq || s == k.kEqual;
}

Term renameSome(const Term& t, std::span<const Term> vars, std::uint32_t generation) {
  if (t.isGround()) return t;
  if (t.isVariable()) {
    for (const auto& v : vars) {
      if (v == t) return Term::variable(t.symbolId(), generation);
    }
    return t;
  }
  std::vector<Term> items;
  items.reserve(t.size());
  for (const auto& item : t.items()) items.push_back(renameSome(item, vars, generation));
  return Term::list(std::move(items));
}

void freeVarsRec(const Term& t, std::vector<Term>& bound, std::vector<Term>& out) {
  if (t.isGround()) return;
  if (t.isVariable()) {
    if (std::find(bound.begin(), bound.end(), t) != bound.end()) return;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  auto h = t.head();
  if (h && (*h == kw().kForall || *h == kw().kExists) && t.size() >= 2 && t[1].isList()) {
    std::size_t before = bound.size();
    for (const auto& v : t[1].items()) bound.push_back(v);
    for (std::size_t i = 2; i < t.size(); ++i) freeVarsRec(t[i], bound, out);
    bound.resize(before);
    return;
  }
  for (const auto& item : t.items()) freeVarsRec(item, bound, out);
}

}  // namespace

std::vector<Term> freeVariables(const Term& expr) {
  std::vector<Term> bound;
  std::vector<Term> out;
  freeVarsRec(expr, bound, out);
  return out;
}

int defaultProofDepthLimit() {
  if (const char* env = std::getenv("SHOP2_PROOF_DEPTH")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 1000000) return static_cast<int>(v);
  }
  return 512;
}

void AxiomSet::add(Axiom axiom) {
  byPredicate_[axiom.predicate()].push_back(std::move(axiom));
  ++count_;
}

std::span<const Axiom> AxiomSet::find(SymbolId predicate) const {
  auto it = byPredicate_.find(predicate);
  if (it == byPredicate_.end()) return {};
  return it->second;
}

Prover::Prover(const State& state, const AxiomSet& axioms, FunctionTable& functions, ProverOptions options)
    : state_(state), axioms_(axioms), functions_(functions), options_(options) {}

std::vector<Substitution> Prover::satisfiers(const Term& expr, const Substitution& initial) {
  std::vector<Substitution> out;
  Substitution theta = initial;
  solve(expr, theta, 0, [&](Substitution& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::vector<Substitution> Prover::prove(const Term& goal, const Substitution& initial) {
  std::vector<Substitution> out;
  Substitution theta = initial;
  solveAtom(goal, theta, 0, [&](Substitution& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

bool Prover::holds(const Term& expr, const Substitution& initial) {
  Substitution theta = initial;
  return anySatisfier(expr, theta, 0);
}

bool Prover::anySatisfier(const Term& expr, Substitution& theta, int depth) {
  bool found = false;
  solve(expr, theta, depth, [&](Substitution&) {
    found = true;
    return false;
  });
  return found;
}

bool Prover::solveConjunction(std::span<const Term> conjuncts, Substitution& theta, int depth, Yield yield) {
  if (conjuncts.empty()) return yield(theta);
  auto rest = conjuncts.subspan(1);
  return solve(conjuncts.front(), theta, depth,
               [&](Substitution& s) { return solveConjunction(rest, s, depth, yield); });
}

bool Prover::solve(const Term& expr, Substitution& theta, int depth, Yield yield) {
  const auto& k = kw();
  if (expr.isSymbol()) {
    if (expr.symbolId() == k.kNil || expr.symbolId() == k.kTrue) return yield(theta);
    throw PreconditionError("not a precondition: " + toString(expr));
  }
  if (!expr.isList()) throw PreconditionError("not a precondition: " + toString(expr));
  if (expr.isEmptyList()) return yield(theta);
  if (expr[0].isList()) return solveConjunction(expr.items(), theta, depth, yield);

  auto head = expr.head();
  if (!head) throw PreconditionError("not a precondition: " + toString(expr));
  SymbolId h = *head;
  auto args = expr.items().subspan(1);

  if (h == k.kAnd) return solveConjunction(args, theta, depth, yield);
  if (h == k.kOr) {
    for (const auto& disjunct : args) {
      if (!solve(disjunct, theta, depth, yield)) return false;
    }
    return true;
  }
  if (h == k.kNot) {
    if (args.size() != 1) throw PreconditionError("not: expected one argument in " + toString(expr));
    for (const auto& v : freeVariables(args[0])) {
      if (!theta.resolve(v).isGround()) {
        throw PreconditionError("negation reached with unbound variable " + toString(v) + " in " +
                                toString(theta.resolve(expr)));
      }
    }
    if (anySatisfier(args[0], theta, depth)) return true;
    return yield(theta);
  }
  if (h == k.kImply) {
    if (args.size() != 2) throw PreconditionError("imply: expected two arguments in " + toString(expr));
    return solveUniversal(args[0], args[1], theta, depth, yield);
  }
  if (h == k.kForall || h == k.kExists) {
    if (args.size() != 3 || !args[0].isList()) {
      throw PreconditionError(symbolName(h) + ": expected (vars) antecedent consequent in " + toString(expr));
    }
    std::uint32_t gen = freshGeneration();
    Term antecedent = renameSome(args[1], args[0].items(), gen);
    Term consequent = renameSome(args[2], args[0].items(), gen);
    if (h == k.kForall) return solveUniversal(antecedent, consequent, theta, depth, yield);
    Term both = Term::list({Term::symbol(k.kAnd), antecedent, consequent});
    return solve(both, theta, depth, yield);
  }
  if (h == k.kSortBy) return solveSortBy(expr, theta, depth, yield);
  if (h == k.kAssign) {
    if (args.size() != 2 || !args[0].isVariable()) {
      throw PreconditionError("assign: expected a variable and an expression in " + toString(expr));
    }
    Term value = functions_.evaluate(args[1], theta);
    const Term& current = theta.walk(args[0]);
    if (!current.isVariable()) {
      if (!(theta.resolve(current) == value)) return true;
      return yield(theta);
    }
    std::size_t m = theta.mark();
    theta.bind(current, value);
    bool cont = yield(theta);
    theta.undoTo(m);
    return cont;
  }
  if (h == k.kEval) {
    if (args.size() != 1) throw PreconditionError("eval: expected one argument in " + toString(expr));
    if (!functions_.evaluate(args[0], theta).isTruthy()) return true;
    return yield(theta);
  }
  if (h == k.kCall) {
    if (!functions_.evaluate(expr, theta).isTruthy()) return true;
    return yield(theta);
  }
  if (isComparator(h) && !axioms_.defines(h)) {
    if (!functions_.evaluate(expr, theta).isTruthy()) return true;
    return yield(theta);
  }
  if (symbolName(h).front() == ':') throw PreconditionError("unsupported precondition form " + toString(expr));
  return solveAtom(expr, theta, depth, yield);
}

bool Prover::solveUniversal(const Term& antecedent, const Term& consequent, Substitution& theta, int depth,
                            Yield yield) {
  std::vector<Substitution> cases;
  Substitution scratch = theta;
  solve(antecedent, scratch, depth, [&](Substitution& s) {
    cases.push_back(s);
    return true;
  });
  for (auto& c : cases) {
    if (!anySatisfier(consequent, c, depth)) return true;
  }
  return yield(theta);
}

bool Prover::solveSortBy(const Term& expr, Substitution& theta, int depth, Yield yield) {
  if (expr.size() != 3 && expr.size() != 4) {
    throw PreconditionError(":sort-by: expected key [comparator] expression in " + toString(expr));
  }
  const Term& key = expr[1];
  if (!key.isVariable()) throw PreconditionError(":sort-by: key must be a variable in " + toString(expr));
  SymbolId comparator = kw().kLess;
  const Term* body = &expr[2];
  if (expr.size() == 4) {
    if (!expr[2].isSymbol()) throw PreconditionError(":sort-by: comparator must be a function name");
    comparator = expr[2].symbolId();
    body = &expr[3];
  }
  if (!functions_.contains(comparator)) {
    throw EvaluationError("unknown function " + symbolName(comparator) + " in :sort-by");
  }
  std::vector<Substitution> found;
  std::vector<Term> keys;
  solve(*body, theta, depth, [&](Substitution& s) {
    Term value = s.resolve(key);
    if (!value.isGround()) {
      throw PreconditionError(":sort-by: key " + toString(key) + " unbound in a satisfier");
    }
    found.push_back(s);
    keys.push_back(std::move(value));
    return true;
  });
  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    Term args[2] = {keys[a], keys[b]};
    return functions_.apply(comparator, args).isTruthy();
  });
  for (std::size_t i : order) {
    if (!yield(found[i])) return false;
  }
  return true;
}

bool Prover::solveAtom(const Term& goal, Substitution& theta, int depth, Yield yield) {
  auto head = goal.head();
  if (!head) throw PreconditionError("not an atom: " + toString(goal));
  Term resolved = theta.resolve(goal);
  if (resolved.isGround()) {
    if (state_.contains(resolved) && !yield(theta)) return false;
  } else {
    // The bucket is not mutated while we iterate it: the search never
    // changes the state during a precondition evaluation.
    for (const auto& atom : state_.atomsFor(*head)) {
      std::size_t m = theta.mark();
      if (unify(resolved, atom, theta)) {
        bool cont = yield(theta);
        theta.undoTo(m);
        if (!cont) return false;
      }
    }
  }
  auto axioms = axioms_.find(*head);
  if (axioms.empty()) return true;
  if (depth + 1 > options_.depthLimit) {
    throw ProofDepthError("axiom recursion exceeded depth limit " + std::to_string(options_.depthLimit) +
                          " proving " + toString(resolved));
  }
  for (const auto& axiom : axioms) {
    std::uint32_t gen = freshGeneration();
    Term axiomHead = renameVariables(axiom.head, gen);
    std::size_t m = theta.mark();
    if (!unify(axiomHead, resolved, theta)) continue;
    for (const auto& clause : axiom.clauses) {
      Term tail = renameVariables(clause.tail, gen);
      bool traced = trace_ && trace_->wants && trace_->wants(axiom, clause);
      if (traced) trace_->emit(true, axiom, clause, theta.resolve(resolved), false);
      bool had = false;
      bool cont = solve(tail, theta, depth + 1, [&](Substitution& s) {
        had = true;
        return yield(s);
      });
      if (traced) trace_->emit(false, axiom, clause, theta.resolve(resolved), had);
      if (!cont) {
        theta.undoTo(m);
        return false;
      }
      if (had) break;
    }
    theta.undoTo(m);
  }
  return true;
}

std::vector<Substitution> satisfiers(const Term& precondition, const State& state, const AxiomSet& axioms,
                                     FunctionTable& functions, const Substitution& initial) {
  Prover prover(state, axioms, functions, ProverOptions{defaultProofDepthLimit()});
  return prover.satisfiers(precondition, initial);
}

}  // namespace shop2
