#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "shop2/term.hpp"

namespace shop2 {

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Task network as written in a method body or problem file, before any
/// instantiation. A bare list of tasks is ordered.
struct NetworkTemplate {
  enum class Kind : std::uint8_t { Task, Ordered, Unordered };

  Kind kind = Kind::Ordered;
  Term task;
  bool immediate = false;
  std::vector<NetworkTemplate> children;

  static NetworkTemplate leaf(Term task, bool immediate = false);
  static NetworkTemplate ordered(std::vector<NetworkTemplate> children);
  static NetworkTemplate unordered(std::vector<NetworkTemplate> children);

  bool empty() const;
  /// Leaf tasks in writing order.
  std::vector<const NetworkTemplate*> leaves() const;
};

NetworkTemplate parseNetwork(const Term& form);
/// Canonical written form; parseNetwork(printNetwork(n)) reproduces n.
Term networkToTerm(const NetworkTemplate& network);

/// Runtime task network: leaves are tasks, interior nodes are ordered or
/// unordered groups. The precedence relation is derived from the nesting: a
/// leaf precedes another iff their lowest common ancestor is ordered and the
/// first sits in an earlier child.
class TaskNetwork {
 public:
  using NodeId = int;
  static constexpr NodeId kNone = -1;

  struct Origin {
    int record = -1;            // decomposition record that produced the leaf
    int slot = -1;              // position among that record's template leaves
    std::vector<int> predecessorSlots;
  };

  struct Node {
    NetworkTemplate::Kind kind = NetworkTemplate::Kind::Ordered;
    Term task;
    bool immediate = false;
    bool exclusive = false;
    bool alive = true;
    int depth = 0;
    Origin origin;
    NodeId parent = kNone;
    std::vector<NodeId> children;
  };

  TaskNetwork();
  /// Builds a network from the goal tasks of a problem; leaves get depth 1.
  explicit TaskNetwork(const NetworkTemplate& goals);

  NodeId root() const { return 0; }
  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  bool empty() const { return nodes_[0].children.empty(); }
  bool isLeaf(NodeId id) const { return node(id).kind == NetworkTemplate::Kind::Task; }
  bool contains(NodeId id) const;

  /// Leaves in tree order.
  std::vector<NodeId> leaves() const;
  std::vector<NodeId> leaves(NodeId scope) const;
  std::size_t taskCount() const { return leaves().size(); }

  /// Leaves under `scope` with no predecessor inside `scope`, in tree order.
  std::vector<NodeId> unconstrained(NodeId scope) const;
  std::vector<NodeId> unconstrained() const { return unconstrained(root()); }

  bool precedes(NodeId a, NodeId b) const;
  /// Innermost group marked exclusive that still has tasks, or kNone.
  NodeId deepestExclusive() const;

  /// Removes a leaf; groups left empty are pruned.
  void remove(NodeId leaf);
  /// Replaces a leaf by a copy of `sub` whose variables are renamed to
  /// `generation` and then resolved under `theta`. Returns the node now
  /// standing at the leaf's position, or kNone when `sub` is empty.
  NodeId replace(NodeId leaf, const NetworkTemplate& sub, const Substitution& theta, std::uint32_t generation,
                 int record, bool exclusive);
  /// Resolves every task under `theta`.
  void apply(const Substitution& theta);
  void setTask(NodeId leaf, Term task);

  Term toTerm() const;

 private:
  NodeId build(const NetworkTemplate& t, const Substitution& theta, std::uint32_t generation, NodeId parent,
               int depth, int record, int& slot, const std::vector<int>& preceding, std::vector<int>& finals);
  void collectLeaves(NodeId id, std::vector<NodeId>& out) const;
  void collectUnconstrained(NodeId id, std::vector<NodeId>& out) const;
  Term nodeToTerm(NodeId id) const;

  std::vector<Node> nodes_;
};

}  // namespace shop2
