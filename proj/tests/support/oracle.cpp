#include "oracle.hpp"

#include <algorithm>
#include <set>

#include "shop2/functions.hpp"
#include "shop2/logic.hpp"
#include "shop2/state.hpp"

namespace shop2::testing {

namespace {

struct Task {
  int id;
  Term task;
  bool immediate;
  int depth;
};

struct Net {
  std::vector<Task> tasks;
  std::set<std::pair<int, int>> edges;  // (before, after)
  std::vector<std::vector<int>> blocks;  // nested no-interleaving blocks, innermost last
  int nextId = 0;

  const Task* find(int id) const {
    for (const auto& t : tasks) {
      if (t.id == id) return &t;
    }
    return nullptr;
  }

  bool constrained(int id) const {
    return std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return e.second == id; });
  }

  void erase(int id) {
    std::erase_if(tasks, [&](const Task& t) { return t.id == id; });
    std::erase_if(edges, [&](const auto& e) { return e.first == id || e.second == id; });
    for (auto& b : blocks) std::erase(b, id);
  }

  void resolveAll(const Substitution& theta) {
    for (auto& t : tasks) t.task = theta.resolve(t.task);
  }
};

class Oracle {
 public:
  Oracle(const Domain& d, const OracleOptions& o) : domain_(d), options_(o) {}

  std::vector<OraclePlan> run(const Problem& problem) {
    Net net;
    instantiate(problem.goals, 0, Substitution(), 1, net, false);
    State state(initialAtoms(domain_, problem));
    OraclePlan prefix;
    expand(net, state, prefix, std::nullopt);
    return std::move(plans_);
  }

 private:
  // Adds the leaves of `t` to the network and returns their ids.
  std::vector<int> instantiate(const NetworkTemplate& t, std::uint32_t gen, const Substitution& theta, int depth,
                               Net& net, bool renamed) {
    if (t.kind == NetworkTemplate::Kind::Task) {
      Term task = renamed ? renameVariables(t.task, gen) : t.task;
      int id = net.nextId++;
      net.tasks.push_back(Task{id, theta.resolve(task), t.immediate, depth});
      return {id};
    }
    std::vector<std::vector<int>> parts;
    for (const auto& c : t.children) parts.push_back(instantiate(c, gen, theta, depth, net, renamed));
    if (t.kind == NetworkTemplate::Kind::Ordered) {
      for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
          for (int a : parts[i]) {
            for (int b : parts[j]) net.edges.insert({a, b});
          }
        }
      }
    }
    std::vector<int> all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
  }

  Term evaluateCalls(const Term& task) {
    static const SymbolId kCall = intern("call");
    std::vector<Term> items(task.items().begin(), task.items().end());
    for (std::size_t i = 1; i < items.size(); ++i) {
      if (items[i].isList() && items[i].size() > 0 && items[i][0].isSymbol(kCall) && items[i].isGround()) {
        items[i] = functions_.evaluate(items[i], Substitution());
      }
    }
    return Term::list(std::move(items));
  }

  void expand(const Net& net, const State& state, OraclePlan& prefix, const std::optional<std::vector<int>>& scope) {
    if (options_.maxPlans != 0 && plans_.size() >= options_.maxPlans) return;
    if (net.tasks.empty()) {
      plans_.push_back(prefix);
      return;
    }
    std::vector<int> pool;
    if (scope) {
      pool = *scope;
    } else {
      const std::vector<int>* block = nullptr;
      for (auto it = net.blocks.rbegin(); it != net.blocks.rend(); ++it) {
        if (!it->empty()) {
          block = &*it;
          break;
        }
      }
      if (block) {
        pool = *block;
      } else {
        for (const auto& t : net.tasks) pool.push_back(t.id);
      }
    }
    std::vector<int> ready;
    for (int id : pool) {
      if (net.find(id) && !net.constrained(id)) ready.push_back(id);
    }
    bool anyImmediate = std::any_of(ready.begin(), ready.end(), [&](int id) { return net.find(id)->immediate; });
    if (anyImmediate) std::erase_if(ready, [&](int id) { return !net.find(id)->immediate; });

    for (int id : ready) {
      const Task& t = *net.find(id);
      if (t.depth > options_.depthLimit) continue;
      Term task = evaluateCalls(t.task);
      if (isPrimitiveTask(*task.head())) {
        applyOperator(net, state, prefix, t, task);
      } else {
        decompose(net, state, prefix, t, task);
      }
    }
  }

  void applyOperator(const Net& net, const State& state, OraclePlan& prefix, const Task& t, Term task) {
    const Operator* op = domain_.findOperator(*task.head());
    if (!op) return;
    std::uint32_t gen = freshGeneration();
    Term head = renameVariables(op->head, gen);
    if (op->temporal && task.size() + 2 == head.size()) {
      std::vector<Term> items(task.items().begin(), task.items().end());
      std::uint32_t extra = freshGeneration();
      items.push_back(Term::variable(intern("?oracle-start"), extra));
      items.push_back(Term::variable(intern("?oracle-duration"), extra));
      task = Term::list(std::move(items));
    }
    Substitution theta;
    if (!unify(head, task, theta)) return;
    Prover prover(state, domain_.axioms, functions_);
    auto sats = prover.satisfiers(renameVariables(op->precondition, gen), theta);
    for (const auto& sigma : sats) {
      Term ground = sigma.resolve(head);
      Term dels = sigma.resolve(renameVariables(op->deleteList, gen));
      Term adds = sigma.resolve(renameVariables(op->addList, gen));
      double cost = functions_.evaluate(renameVariables(op->cost, gen), sigma).asDouble();
      State next = state;
      for (const auto& a : dels.items()) next.remove(a);
      for (const auto& a : adds.items()) next.add(a);
      Net n = net;
      n.erase(t.id);
      if (!t.task.isGround()) {
        Substitution bind;
        if (unify(t.task, ground, bind)) n.resolveAll(bind);
      }
      prefix.actions.push_back(ground);
      prefix.costs.push_back(cost);
      double saved = prefix.total;
      prefix.total += cost;
      expand(n, next, prefix, std::nullopt);
      prefix.total = saved;
      prefix.actions.pop_back();
      prefix.costs.pop_back();
    }
  }

  void decompose(const Net& net, const State& state, OraclePlan& prefix, const Task& t, const Term& task) {
    for (const Method* m : domain_.methodsFor(*task.head())) {
      std::uint32_t gen = freshGeneration();
      Substitution theta;
      if (!unify(renameVariables(m->head, gen), task, theta)) continue;
      for (const auto& clause : m->clauses) {
        Prover prover(state, domain_.axioms, functions_);
        auto sats = prover.satisfiers(renameVariables(clause.precondition, gen), theta);
        if (sats.empty()) continue;
        for (const auto& sigma : sats) {
          Net n = net;
          std::vector<int> added = instantiate(clause.subtasks, gen, sigma, t.depth + 1, n, true);
          std::vector<std::pair<int, int>> extra;
          for (const auto& e : n.edges) {
            if (e.second == t.id) {
              for (int s : added) extra.emplace_back(e.first, s);
            }
            if (e.first == t.id) {
              for (int s : added) extra.emplace_back(s, e.second);
            }
          }
          for (auto& b : n.blocks) {
            if (std::find(b.begin(), b.end(), t.id) != b.end()) b.insert(b.end(), added.begin(), added.end());
          }
          n.erase(t.id);
          n.edges.insert(extra.begin(), extra.end());
          if (t.immediate && !added.empty()) n.blocks.push_back(added);
          if (!t.task.isGround()) n.resolveAll(sigma);
          if (added.empty()) {
            expand(n, state, prefix, std::nullopt);
          } else {
            expand(n, state, prefix, added);
          }
        }
        break;
      }
    }
  }

  const Domain& domain_;
  OracleOptions options_;
  FunctionTable functions_;
  std::vector<OraclePlan> plans_;
};

}  // namespace

std::vector<OraclePlan> enumeratePlans(const Domain& domain, const Problem& problem, const OracleOptions& options) {
  Oracle oracle(domain, options);
  return oracle.run(problem);
}

std::optional<double> minimumCost(const std::vector<OraclePlan>& plans) {
  std::optional<double> best;
  for (const auto& p : plans) {
    if (!best || p.total < *best) best = p.total;
  }
  return best;
}

}  // namespace shop2::testing
