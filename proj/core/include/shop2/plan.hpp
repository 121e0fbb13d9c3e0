#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shop2/term.hpp"

namespace shop2 {

struct Action {
  Term task;  // ground (name arg...)
  double cost = 0.0;
  std::size_t index = 0;

  SymbolId name() const { return *task.head(); }
  std::span<const Term> arguments() const { return task.items().subspan(1); }
  bool internal() const;
};

struct Plan {
  std::vector<Action> actions;
  double totalCost = 0.0;

  void append(Term task, double cost);
  /// Actions whose names do not start with `!!`.
  std::vector<const Action*> visibleActions() const;
  std::vector<Term> tasks() const;
};

/// Method-decomposition tree of one plan. Compound nodes record the method
/// and clause used; primitive nodes point at their action.
struct DecompositionTree {
  struct Node {
    Term task;
    std::optional<SymbolId> label;
    std::vector<std::pair<Term, Term>> bindings;
    bool immediate = false;
    int slot = -1;
    std::vector<int> predecessorSlots;
    std::vector<int> children;
    int action = -1;        // plan index, primitive nodes only
    int firstAction = -1;   // smallest plan index below this node
    int lastAction = -1;    // largest plan index below this node
    bool primitive() const { return action >= 0; }
  };

  std::vector<Node> nodes;
  std::vector<int> roots;

  /// Action indices below `node` in tree order.
  std::vector<int> leafActions(int node) const;
  std::vector<int> leafActions() const;
};

}  // namespace shop2
