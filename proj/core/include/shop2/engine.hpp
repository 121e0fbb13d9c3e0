#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shop2/functions.hpp"
#include "shop2/model.hpp"
#include "shop2/plan.hpp"
#include "shop2/state.hpp"

namespace shop2 {

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SearchMode : std::uint8_t { FirstPlan, AllPlans, BranchAndBound };

struct TraceDetail {
  bool arguments = false;
  bool state = false;
};

struct TraceEvent {
  enum class Kind : std::uint8_t { Enter, Exit };
  enum class Subject : std::uint8_t { MethodClause, Operator, AxiomClause };

  Kind kind = Kind::Enter;
  Subject subject = Subject::MethodClause;
  std::string name;   // method task, operator or axiom predicate
  std::string label;  // clause label, empty when none
  std::optional<Term> arguments;
  bool success = false;  // exit events only
  std::optional<std::vector<Term>> state;
};

using TraceSink = std::function<void(const TraceEvent&)>;

struct SearchConfig {
  SearchMode mode = SearchMode::FirstPlan;
  std::optional<double> timeLimit;  // seconds
  std::optional<int> depthLimit;    // decomposition-tree depth; goal tasks are depth 1
  /// Traced names (method task names, clause labels, operator names, axiom
  /// predicates), case-insensitive.
  std::map<std::string, TraceDetail> trace;
  TraceSink traceSink;
  /// Invoked for every new incumbent in branch-and-bound mode.
  std::function<void(const Plan&)> onIncumbent;
  /// Stop after this many plans in all-plans mode; 0 means no bound.
  std::size_t maxPlans = 0;
  int proofDepthLimit = defaultProofDepthLimit();
  /// Prototype table copied for each search; built-ins only when null.
  const FunctionTable* functions = nullptr;
};

enum class SearchStatus : std::uint8_t { PlanFound, NoPlan, ResourceLimit };

struct SearchResult {
  SearchStatus status = SearchStatus::NoPlan;
  std::vector<Plan> plans;
  std::vector<DecompositionTree> trees;
  std::vector<double> incumbentCosts;
  std::vector<Term> finalState;  // of the first (or best) plan
  bool timedOut = false;
  bool depthLimitHit = false;
  std::size_t expansions = 0;
  double seconds = 0.0;

  const Plan* best() const { return plans.empty() ? nullptr : &plans.back(); }
};

/// Runs the planning procedure. In branch-and-bound mode `plans` holds the
/// incumbents in discovery order, so the last one is the best.
SearchResult plan(const Domain& domain, const Problem& problem, const SearchConfig& config = {});

/// One applicable ground instance of an operator for a primitive task.
struct OperatorInstance {
  Term task;
  double cost = 0.0;
  std::vector<Term> deletions;
  std::vector<Term> additions;
  Substitution bindings;  // ground values of the operator's own variables
};

/// Every (instance, satisfier) pair for `task` in `state`, in enumeration
/// order. Cost is evaluated against the pre-application state.
std::vector<OperatorInstance> operatorInstances(const Domain& domain, const State& state, const Term& task,
                                                FunctionTable& functions, int proofDepthLimit = 512);

struct ValidationResult {
  bool ok = false;
  std::optional<std::size_t> failedIndex;
  std::string message;
  double recomputedCost = 0.0;
  std::vector<Term> finalState;
  /// Bindings used for each replayed action.
  std::vector<Substitution> bindings;
};

/// Replays `plan` from the problem's initial state, backtracking over
/// satisfier choices consistent with each action's arguments and cost.
ValidationResult validatePlan(const Domain& domain, const Problem& problem, const Plan& plan,
                              const FunctionTable* functions = nullptr);

/// Costs are compared with this relative tolerance.
bool costsEqual(double a, double b);

}  // namespace shop2
