#include "shop2/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace shop2 {

namespace {

using Clock = std::chrono::steady_clock;
using NodeId = TaskNetwork::NodeId;

std::string lowerCase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

SymbolId callSymbol() {
  static const SymbolId id = intern("call");
  return id;
}

/// Evaluates `(call f args...)` arguments of a task once they are ground.
Term evaluateTaskArguments(const Term& task, FunctionTable& functions) {
  bool any = false;
  for (const auto& arg : task.items().subspan(1)) {
    if (arg.isList() && arg.head() == callSymbol() && arg.isGround()) any = true;
  }
  if (!any) return task;
  std::vector<Term> items{task[0]};
  Substitution empty;
  for (const auto& arg : task.items().subspan(1)) {
    if (arg.isList() && arg.head() == callSymbol() && arg.isGround()) {
      items.push_back(functions.evaluate(arg, empty));
    } else {
      items.push_back(arg);
    }
  }
  return Term::list(std::move(items));
}

std::vector<Term> effectAtoms(const Term& list, const Substitution& theta, const Term& task) {
  Term resolved = theta.resolve(list);
  if (!resolved.isList()) {
    throw SearchError("effect list of " + toString(task) + " is not a list: " + toString(resolved));
  }
  std::vector<Term> out;
  out.reserve(resolved.size());
  for (const auto& a : resolved.items()) {
    if (!a.isList() || a.isEmptyList() || !a[0].isSymbol()) {
      throw SearchError("effect " + toString(a) + " of " + toString(task) + " is not an atom");
    }
    if (!a.isGround()) throw GroundingError("effect " + toString(a) + " of " + toString(task) + " is not ground");
    out.push_back(a);
  }
  return out;
}

double costValue(const Term& t, const Term& task) {
  if (!t.isNumber()) throw EvaluationError("cost of " + toString(task) + " is not a number: " + toString(t));
  double v = t.asDouble();
  if (!std::isfinite(v)) throw EvaluationError("cost of " + toString(task) + " is not finite");
  return v;
}

// With `originalVariables`, bindings are keyed by the operator's own
// variables instead of their renamed copies.
std::vector<OperatorInstance> instancesWith(const Domain& domain, Prover& prover, const Term& rawTask,
                                            FunctionTable& functions, bool originalVariables = false) {
  SymbolId name = *rawTask.head();
  const Operator* op = domain.findOperator(name);
  if (!op) throw SearchError("no operator for primitive task " + toString(rawTask));
  Term task = rawTask;
  std::uint32_t gen = freshGeneration();
  if (op->temporal && task.size() + 2 == op->head.size()) {
    std::vector<Term> items(task.items().begin(), task.items().end());
    items.push_back(Term::variable(intern("?start"), gen));
    items.push_back(Term::variable(intern("?duration"), gen));
    task = Term::list(std::move(items));
  }
  std::vector<OperatorInstance> out;
  if (task.size() != op->head.size()) return out;
  Term head = renameVariables(op->head, gen);
  Substitution theta;
  if (!unify(head, task, theta)) return out;
  Term pre = renameVariables(op->precondition, gen);
  Term dels = renameVariables(op->deleteList, gen);
  Term adds = renameVariables(op->addList, gen);
  Term cost = renameVariables(op->cost, gen);
  for (auto& sigma : prover.satisfiers(pre, theta)) {
    OperatorInstance inst;
    inst.task = sigma.resolve(head);
    if (!inst.task.isGround()) {
      throw GroundingError("operator instance " + toString(inst.task) + " is not ground after its precondition");
    }
    inst.deletions = effectAtoms(dels, sigma, inst.task);
    inst.additions = effectAtoms(adds, sigma, inst.task);
    inst.cost = costValue(functions.evaluate(cost, sigma), inst.task);
    if (originalVariables) {
      std::vector<Term> vars;
      for (const Term* t : {&op->head, &op->precondition, &op->deleteList, &op->addList, &op->cost}) {
        collectVariables(*t, vars);
      }
      for (const auto& v : vars) {
        if (inst.bindings.isBound(v)) continue;
        Term value = sigma.resolve(renameVariables(v, gen));
        if (value.isGround()) inst.bindings.bind(v, std::move(value));
      }
    } else {
      inst.bindings = std::move(sigma);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

struct Record {
  Term task;
  std::optional<SymbolId> label;
  std::vector<std::pair<Term, Term>> bindings;
  int parent = -1;
  int slot = -1;
  std::vector<int> predecessorSlots;
  bool immediate = false;
};

struct ActionOrigin {
  int record = -1;
  int slot = -1;
  std::vector<int> predecessorSlots;
  bool immediate = false;
};

class Search {
 public:
  Search(const Domain& domain, const Problem& problem, const SearchConfig& config)
      : domain_(domain),
        config_(config),
        state_(initialAtoms(domain, problem)),
        functions_(config.functions ? *config.functions : FunctionTable{}),
        prover_(state_, domain.axioms, functions_, ProverOptions{config.proofDepthLimit}),
        goals_(problem.goals) {
    for (const auto& [name, detail] : config.trace) trace_[lowerCase(name)] = detail;
    if (!trace_.empty() && config_.traceSink) {
      hook_.wants = [this](const Axiom& a, const AxiomClause& c) {
        return traced(symbolName(a.predicate()), c.label) != nullptr;
      };
      hook_.emit = [this](bool enter, const Axiom& a, const AxiomClause& c, const Term& goal, bool success) {
        const TraceDetail* d = traced(symbolName(a.predicate()), c.label);
        emit(enter, TraceEvent::Subject::AxiomClause, symbolName(a.predicate()), c.label, goal, success, d);
      };
      prover_.setTraceHook(&hook_);
    }
  }

  SearchResult run() {
    start_ = Clock::now();
    TaskNetwork network(goals_);
    seek(network, TaskNetwork::kNone);
    result_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    if (config_.mode == SearchMode::BranchAndBound) {
      if (result_.timedOut) {
        result_.status = SearchStatus::ResourceLimit;
      } else {
        result_.status = result_.plans.empty()
                             ? (result_.depthLimitHit ? SearchStatus::ResourceLimit : SearchStatus::NoPlan)
                             : SearchStatus::PlanFound;
      }
    } else if (!result_.plans.empty()) {
      result_.status = result_.timedOut ? SearchStatus::ResourceLimit : SearchStatus::PlanFound;
    } else {
      result_.status =
          (result_.timedOut || result_.depthLimitHit) ? SearchStatus::ResourceLimit : SearchStatus::NoPlan;
    }
    return std::move(result_);
  }

 private:
  const TraceDetail* traced(const std::string& name, std::optional<SymbolId> label) const {
    if (trace_.empty()) return nullptr;
    if (label) {
      auto it = trace_.find(symbolName(*label));
      if (it != trace_.end()) return &it->second;
    }
    auto it = trace_.find(name);
    return it == trace_.end() ? nullptr : &it->second;
  }

  void emit(bool enter, TraceEvent::Subject subject, const std::string& name, std::optional<SymbolId> label,
            const Term& args, bool success, const TraceDetail* detail) {
    if (!detail || !config_.traceSink) return;
    TraceEvent ev;
    ev.kind = enter ? TraceEvent::Kind::Enter : TraceEvent::Kind::Exit;
    ev.subject = subject;
    ev.name = name;
    if (label) ev.label = symbolName(*label);
    if (detail->arguments) ev.arguments = args;
    ev.success = success;
    if (detail->state) ev.state = state_.atoms();
    config_.traceSink(ev);
  }

  bool timeUp() {
    if (!config_.timeLimit) return false;
    if (std::chrono::duration<double>(Clock::now() - start_).count() >= *config_.timeLimit) {
      result_.timedOut = true;
      return true;
    }
    return false;
  }

  // Returns true when the whole search must stop.
  bool seek(const TaskNetwork& net, NodeId scope) {
    if (timeUp()) return true;
    if (net.empty()) return solution();
    ++result_.expansions;

    std::vector<NodeId> candidates;
    if (scope != TaskNetwork::kNone) {
      candidates = net.unconstrained(scope);
    } else {
      NodeId exclusive = net.deepestExclusive();
      candidates = net.unconstrained(exclusive == TaskNetwork::kNone ? net.root() : exclusive);
    }
    if (std::any_of(candidates.begin(), candidates.end(), [&](NodeId id) { return net.node(id).immediate; })) {
      std::erase_if(candidates, [&](NodeId id) { return !net.node(id).immediate; });
    }

    for (NodeId id : candidates) {
      const auto& leaf = net.node(id);
      if (config_.depthLimit && leaf.depth > *config_.depthLimit) {
        result_.depthLimitHit = true;
        continue;
      }
      Term task = evaluateTaskArguments(leaf.task, functions_);
      SymbolId name = *task.head();
      bool stop = isPrimitiveTask(name) ? primitive(net, id, task) : compound(net, id, task);
      if (stop) return true;
      if (timeUp()) return true;
    }
    return false;
  }

  bool primitive(const TaskNetwork& net, NodeId id, const Term& task) {
    const auto& leaf = net.node(id);
    const std::string& name = symbolName(*task.head());
    const TraceDetail* detail = traced(name, std::nullopt);
    emit(true, TraceEvent::Subject::Operator, name, std::nullopt, task, false, detail);
    std::size_t before = solutions_;
    auto instances = instancesWith(domain_, prover_, task, functions_);
    bool stop = false;
    for (auto& inst : instances) {
      double cost = current_.totalCost + inst.cost;
      if (config_.mode == SearchMode::BranchAndBound && cost >= incumbent_) continue;
      UndoRecord undo = state_.applyEffects(inst.deletions, inst.additions);
      double saved = current_.totalCost;
      current_.append(inst.task, inst.cost);
      origins_.push_back(ActionOrigin{leaf.origin.record, leaf.origin.slot, leaf.origin.predecessorSlots,
                                      leaf.immediate});
      TaskNetwork next = net;
      next.remove(id);
      if (!leaf.task.isGround()) {
        Substitution theta;
        if (unify(leaf.task, inst.task, theta)) next.apply(theta);
      }
      stop = seek(next, TaskNetwork::kNone);
      origins_.pop_back();
      current_.actions.pop_back();
      current_.totalCost = saved;
      state_.undo(undo);
      if (stop) break;
    }
    emit(false, TraceEvent::Subject::Operator, name, std::nullopt, task, solutions_ > before, detail);
    return stop;
  }

  bool compound(const TaskNetwork& net, NodeId id, const Term& task) {
    const auto& leaf = net.node(id);
    SymbolId name = *task.head();
    for (const Method* m : domain_.methodsFor(name)) {
      std::uint32_t gen = freshGeneration();
      Term head = renameVariables(m->head, gen);
      Substitution theta;
      if (!unify(head, task, theta)) continue;
      for (const auto& clause : m->clauses) {
        const TraceDetail* detail = traced(symbolName(name), clause.label);
        emit(true, TraceEvent::Subject::MethodClause, symbolName(name), clause.label, theta.resolve(task), false,
             detail);
        Term pre = renameVariables(clause.precondition, gen);
        auto satisfiers = prover_.satisfiers(pre, theta);
        if (satisfiers.empty()) {
          emit(false, TraceEvent::Subject::MethodClause, symbolName(name), clause.label, theta.resolve(task), false,
               detail);
          continue;
        }
        std::size_t before = solutions_;
        bool stop = false;
        for (const auto& sigma : satisfiers) {
          Record rec;
          rec.task = sigma.resolve(task);
          rec.label = clause.label;
          rec.parent = leaf.origin.record;
          rec.slot = leaf.origin.slot;
          rec.predecessorSlots = leaf.origin.predecessorSlots;
          rec.immediate = leaf.immediate;
          std::vector<Term> vars;
          collectVariables(m->head, vars);
          collectVariables(clause.precondition, vars);
          for (const auto& v : vars) {
            Term value = sigma.resolve(renameVariables(v, gen));
            if (value.isGround()) rec.bindings.emplace_back(v, value);
          }
          int index = static_cast<int>(records_.size());
          records_.push_back(std::move(rec));

          TaskNetwork next = net;
          NodeId scope = next.replace(id, clause.subtasks, sigma, gen, index, leaf.immediate);
          if (!leaf.task.isGround()) next.apply(sigma);
          stop = seek(next, scope);
          records_.pop_back();
          if (stop) break;
        }
        emit(false, TraceEvent::Subject::MethodClause, symbolName(name), clause.label, theta.resolve(task),
             solutions_ > before, detail);
        if (stop) return true;
        break;  // clauses are if-then-else
      }
    }
    return false;
  }

  bool solution() {
    if (config_.mode == SearchMode::BranchAndBound && current_.totalCost >= incumbent_) return false;
    ++solutions_;
    Plan plan = current_;
    for (std::size_t i = 0; i < plan.actions.size(); ++i) plan.actions[i].index = i;
    result_.plans.push_back(plan);
    result_.trees.push_back(buildTree());
    result_.finalState = state_.atoms();
    switch (config_.mode) {
      case SearchMode::FirstPlan:
        return true;
      case SearchMode::AllPlans:
        return config_.maxPlans != 0 && result_.plans.size() >= config_.maxPlans;
      case SearchMode::BranchAndBound:
        incumbent_ = plan.totalCost;
        result_.incumbentCosts.push_back(plan.totalCost);
        if (config_.onIncumbent) config_.onIncumbent(plan);
        return false;
    }
    return false;
  }

  DecompositionTree buildTree() const {
    DecompositionTree tree;
    std::size_t nr = records_.size();
    tree.nodes.resize(nr + current_.actions.size());
    for (std::size_t i = 0; i < nr; ++i) {
      auto& n = tree.nodes[i];
      const Record& r = records_[i];
      n.task = r.task;
      n.label = r.label;
      n.bindings = r.bindings;
      n.immediate = r.immediate;
      n.slot = r.slot;
      n.predecessorSlots = r.predecessorSlots;
    }
    for (std::size_t a = 0; a < current_.actions.size(); ++a) {
      auto& n = tree.nodes[nr + a];
      const ActionOrigin& o = origins_[a];
      n.task = current_.actions[a].task;
      n.immediate = o.immediate;
      n.slot = o.slot;
      n.predecessorSlots = o.predecessorSlots;
      n.action = static_cast<int>(a);
      n.firstAction = n.lastAction = static_cast<int>(a);
    }
    auto attach = [&](int parent, int child) {
      if (parent < 0) {
        tree.roots.push_back(child);
      } else {
        tree.nodes[static_cast<std::size_t>(parent)].children.push_back(child);
      }
    };
    for (std::size_t i = 0; i < nr; ++i) attach(records_[i].parent, static_cast<int>(i));
    for (std::size_t a = 0; a < current_.actions.size(); ++a) attach(origins_[a].record, static_cast<int>(nr + a));
    // Records are pushed before any of their descendants, so a reverse sweep
    // sees children first.
    for (std::size_t i = nr; i-- > 0;) {
      auto& n = tree.nodes[i];
      for (int c : n.children) {
        const auto& child = tree.nodes[static_cast<std::size_t>(c)];
        if (child.firstAction < 0) continue;
        n.firstAction = n.firstAction < 0 ? child.firstAction : std::min(n.firstAction, child.firstAction);
        n.lastAction = std::max(n.lastAction, child.lastAction);
      }
    }
    auto order = [&](std::vector<int>& ids) {
      std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        int fa = tree.nodes[static_cast<std::size_t>(a)].firstAction;
        int fb = tree.nodes[static_cast<std::size_t>(b)].firstAction;
        if (fa < 0) fa = std::numeric_limits<int>::max();
        if (fb < 0) fb = std::numeric_limits<int>::max();
        return fa < fb;
      });
    };
    order(tree.roots);
    for (auto& n : tree.nodes) order(n.children);
    return tree;
  }

  const Domain& domain_;
  const SearchConfig& config_;
  State state_;
  FunctionTable functions_;
  Prover prover_;
  NetworkTemplate goals_;
  std::map<std::string, TraceDetail> trace_;
  AxiomTraceHook hook_;
  Clock::time_point start_;
  Plan current_;
  std::vector<Record> records_;
  std::vector<ActionOrigin> origins_;
  std::size_t solutions_ = 0;
  double incumbent_ = std::numeric_limits<double>::infinity();
  SearchResult result_;
};

}  // namespace

bool costsEqual(double a, double b) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= 1e-9 * scale;
}

SearchResult plan(const Domain& domain, const Problem& problem, const SearchConfig& config) {
  checkGoals(domain, problem);
  if (config.timeLimit && !(*config.timeLimit > 0)) throw SearchError("time limit must be positive");
  Search search(domain, problem, config);
  return search.run();
}

std::vector<OperatorInstance> operatorInstances(const Domain& domain, const State& state, const Term& task,
                                                FunctionTable& functions, int proofDepthLimit) {
  Prover prover(state, domain.axioms, functions, ProverOptions{proofDepthLimit});
  return instancesWith(domain, prover, evaluateTaskArguments(task, functions), functions, true);
}

namespace {

class Replay {
 public:
  Replay(const Domain& domain, const Problem& problem, const Plan& plan, const FunctionTable* functions)
      : domain_(domain),
        plan_(plan),
        state_(initialAtoms(domain, problem)),
        functions_(functions ? *functions : FunctionTable{}) {}

  ValidationResult run() {
    ValidationResult out;
    if (step(0, 0.0, out)) {
      double listed = 0.0;
      for (const auto& a : plan_.actions) listed += a.cost;
      if (!costsEqual(out.recomputedCost, plan_.totalCost) || !costsEqual(listed, plan_.totalCost)) {
        out.ok = false;
        out.message = "total cost " + std::to_string(plan_.totalCost) + " differs from recomputed " +
                      std::to_string(out.recomputedCost);
        return out;
      }
      out.ok = true;
      return out;
    }
    out.ok = false;
    out.failedIndex = deepest_;
    out.message = message_;
    out.bindings.clear();
    return out;
  }

 private:
  bool step(std::size_t i, double cost, ValidationResult& out) {
    if (i == plan_.actions.size()) {
      out.recomputedCost = cost;
      out.finalState = state_.atoms();
      return true;
    }
    const Action& a = plan_.actions[i];
    std::vector<OperatorInstance> instances;
    try {
      if (!a.task.isGround() || !a.task.head()) throw SearchError("action is not a ground task");
      if (!domain_.findOperator(a.name())) throw SearchError("no operator named " + symbolName(a.name()));
      instances = operatorInstances(domain_, state_, a.task, functions_);
    } catch (const std::exception& e) {
      fail(i, "action " + std::to_string(i) + " " + toString(a.task) + ": " + e.what());
      return false;
    }
    bool anyApplicable = !instances.empty();
    bool anyCost = false;
    for (auto& inst : instances) {
      if (!costsEqual(inst.cost, a.cost)) continue;
      anyCost = true;
      UndoRecord undo = state_.applyEffects(inst.deletions, inst.additions);
      out.bindings.push_back(inst.bindings);
      if (step(i + 1, cost + inst.cost, out)) return true;
      out.bindings.pop_back();
      state_.undo(undo);
    }
    if (!anyApplicable) {
      fail(i, "action " + std::to_string(i) + " " + toString(a.task) + " is not applicable");
    } else if (!anyCost) {
      fail(i, "action " + std::to_string(i) + " " + toString(a.task) + " has cost " + std::to_string(a.cost) +
                  " but the operator yields " + std::to_string(instances.front().cost));
    }
    return false;
  }

  void fail(std::size_t i, std::string message) {
    if (!deepest_ || i > *deepest_) {
      deepest_ = i;
      message_ = std::move(message);
    }
  }

  const Domain& domain_;
  const Plan& plan_;
  State state_;
  FunctionTable functions_;
  std::optional<std::size_t> deepest_;
  std::string message_;
};

}  // namespace

ValidationResult validatePlan(const Domain& domain, const Problem& problem, const Plan& plan,
                              const FunctionTable* functions) {
  return Replay(domain, problem, plan, functions).run();
}

}  // namespace shop2
