#include "shop2/task_network.hpp"

#include <algorithm>

namespace shop2 {

namespace {

using Kind = NetworkTemplate::Kind;

SymbolId kwOrdered() {
  static const SymbolId id = intern(":ordered");
  return id;
}
SymbolId kwUnordered() {
  static const SymbolId id = intern(":unordered");
  return id;
}
SymbolId kwImmediate() {
  static const SymbolId id = intern(":immediate");
  return id;
}
SymbolId kwTask() {
  static const SymbolId id = intern(":task");
  return id;
}

bool isKeywordSymbol(const Term& t) { return t.isSymbol() && symbolName(t.symbolId()).front() == ':'; }

NetworkTemplate parseNode(const Term& form);

NetworkTemplate parseTaskForm(std::span<const Term> rest, const Term& whole, bool immediate) {
  if (!rest.empty() && rest[0].isSymbol(kwImmediate())) {
    immediate = true;
    rest = rest.subspan(1);
  }
  if (rest.empty()) throw NetworkError("missing task in " + toString(whole));
  if (rest.size() == 1 && rest[0].isList()) {
    const Term& inner = rest[0];
    if (inner.isEmptyList() || !inner[0].isSymbol()) throw NetworkError("malformed task " + toString(whole));
    if (isKeywordSymbol(inner[0])) {
      NetworkTemplate n = parseNode(inner);
      if (n.kind != Kind::Task) throw NetworkError(":immediate applies to tasks, not groups: " + toString(whole));
      n.immediate = n.immediate || immediate;
      return n;
    }
    return NetworkTemplate::leaf(inner, immediate);
  }
  if (!rest[0].isSymbol() || isKeywordSymbol(rest[0])) throw NetworkError("malformed task " + toString(whole));
  return NetworkTemplate::leaf(Term::list({rest.begin(), rest.end()}), immediate);
}

NetworkTemplate parseNode(const Term& form) {
  if (!form.isList()) throw NetworkError("expected a task or task list, got " + toString(form));
  if (form.isEmptyList()) return NetworkTemplate::ordered({});
  const Term& first = form[0];
  auto rest = form.items().subspan(1);
  if (first.isList()) {
    std::vector<NetworkTemplate> children;
    for (const auto& item : form.items()) children.push_back(parseNode(item));
    return NetworkTemplate::ordered(std::move(children));
  }
  if (first.isSymbol(kwOrdered()) || first.isSymbol(kwUnordered())) {
    std::vector<NetworkTemplate> children;
    for (const auto& item : rest) children.push_back(parseNode(item));
    return first.isSymbol(kwOrdered()) ? NetworkTemplate::ordered(std::move(children))
                                       : NetworkTemplate::unordered(std::move(children));
  }
  if (first.isSymbol(kwImmediate())) return parseTaskForm(rest, form, true);
  if (first.isSymbol(kwTask())) return parseTaskForm(rest, form, false);
  if (first.isSymbol() && !isKeywordSymbol(first)) return NetworkTemplate::leaf(form);
  throw NetworkError("unknown task-list form " + toString(form));
}

}  // namespace

NetworkTemplate NetworkTemplate::leaf(Term task, bool immediate) {
  NetworkTemplate n;
  n.kind = Kind::Task;
  n.task = std::move(task);
  n.immediate = immediate;
  return n;
}

NetworkTemplate NetworkTemplate::ordered(std::vector<NetworkTemplate> children) {
  NetworkTemplate n;
  n.kind = Kind::Ordered;
  n.children = std::move(children);
  return n;
}

NetworkTemplate NetworkTemplate::unordered(std::vector<NetworkTemplate> children) {
  NetworkTemplate n;
  n.kind = Kind::Unordered;
  n.children = std::move(children);
  return n;
}

bool NetworkTemplate::empty() const {
  if (kind == Kind::Task) return false;
  return std::all_of(children.begin(), children.end(), [](const auto& c) { return c.empty(); });
}

std::vector<const NetworkTemplate*> NetworkTemplate::leaves() const {
  std::vector<const NetworkTemplate*> out;
  std::vector<const NetworkTemplate*> stack{this};
  while (!stack.empty()) {
    const NetworkTemplate* n = stack.back();
    stack.pop_back();
    if (n->kind == Kind::Task) {
      out.push_back(n);
      continue;
    }
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

NetworkTemplate parseNetwork(const Term& form) {
  NetworkTemplate n = parseNode(form);
  if (n.kind == Kind::Task) return NetworkTemplate::ordered({std::move(n)});
  return n;
}

namespace {

Term templateToTerm(const NetworkTemplate& n, bool top) {
  if (n.kind == Kind::Task) {
    if (!n.immediate) return n.task;
    std::vector<Term> items{Term::symbol(kwImmediate())};
    items.insert(items.end(), n.task.items().begin(), n.task.items().end());
    return Term::list(std::move(items));
  }
  std::vector<Term> items;
  bool bare = n.kind == Kind::Ordered && !n.children.empty() && (top || n.children[0].kind != Kind::Task);
  if (!bare) items.push_back(Term::symbol(n.kind == Kind::Ordered ? kwOrdered() : kwUnordered()));
  for (const auto& c : n.children) items.push_back(templateToTerm(c, false));
  return Term::list(std::move(items));
}

}  // namespace

Term networkToTerm(const NetworkTemplate& network) { return templateToTerm(network, true); }

TaskNetwork::TaskNetwork() { nodes_.push_back(Node{}); }

TaskNetwork::TaskNetwork(const NetworkTemplate& goals) : TaskNetwork() {
  nodes_[0].kind = goals.kind == Kind::Task ? Kind::Ordered : goals.kind;
  int slot = 0;
  std::vector<int> finals;
  if (goals.kind == Kind::Task) {
    nodes_[0].children.push_back(build(goals, Substitution{}, 0, 0, 1, -1, slot, {}, finals));
    return;
  }
  std::vector<int> frontier;
  for (const auto& child : goals.children) {
    if (child.empty()) continue;
    std::vector<int> out;
    const std::vector<int>& preceding = goals.kind == Kind::Ordered ? frontier : finals;
    NodeId id = build(child, Substitution{}, 0, 0, 1, -1, slot, preceding, out);
    nodes_[0].children.push_back(id);
    if (goals.kind == Kind::Ordered) frontier = out;
  }
}

TaskNetwork::NodeId TaskNetwork::build(const NetworkTemplate& t, const Substitution& theta,
                                       std::uint32_t generation, NodeId parent, int depth, int record, int& slot,
                                       const std::vector<int>& preceding, std::vector<int>& finals) {
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{});
  nodes_[id].kind = t.kind;
  nodes_[id].parent = parent;
  nodes_[id].depth = depth;
  if (t.kind == Kind::Task) {
    Term task = generation == 0 ? t.task : renameVariables(t.task, generation);
    nodes_[id].task = theta.empty() ? task : theta.resolve(task);
    nodes_[id].immediate = t.immediate;
    nodes_[id].origin = Origin{record, slot, preceding};
    finals = {slot};
    ++slot;
    return id;
  }
  std::vector<int> frontier = preceding;
  finals.clear();
  for (const auto& child : t.children) {
    if (child.empty()) continue;
    std::vector<int> out;
    NodeId c = build(child, theta, generation, id, depth, record, slot,
                     t.kind == Kind::Ordered ? frontier : preceding, out);
    nodes_[id].children.push_back(c);
    if (t.kind == Kind::Ordered) {
      frontier = out;
    } else {
      finals.insert(finals.end(), out.begin(), out.end());
    }
  }
  if (t.kind == Kind::Ordered) finals = frontier;
  return id;
}

bool TaskNetwork::contains(NodeId id) const {
  return id >= 0 && static_cast<std::size_t>(id) < nodes_.size() && nodes_[id].alive;
}

void TaskNetwork::collectLeaves(NodeId id, std::vector<NodeId>& out) const {
  const Node& n = nodes_[id];
  if (n.kind == Kind::Task) {
    out.push_back(id);
    return;
  }
  for (NodeId c : n.children) collectLeaves(c, out);
}

std::vector<TaskNetwork::NodeId> TaskNetwork::leaves() const { return leaves(root()); }

std::vector<TaskNetwork::NodeId> TaskNetwork::leaves(NodeId scope) const {
  std::vector<NodeId> out;
  collectLeaves(scope, out);
  return out;
}

void TaskNetwork::collectUnconstrained(NodeId id, std::vector<NodeId>& out) const {
  const Node& n = nodes_[id];
  switch (n.kind) {
    case Kind::Task:
      out.push_back(id);
      return;
    case Kind::Ordered:
      if (!n.children.empty()) collectUnconstrained(n.children.front(), out);
      return;
    case Kind::Unordered:
      for (NodeId c : n.children) collectUnconstrained(c, out);
      return;
  }
}

std::vector<TaskNetwork::NodeId> TaskNetwork::unconstrained(NodeId scope) const {
  if (!contains(scope)) throw NetworkError("scope node is not part of the network");
  std::vector<NodeId> out;
  collectUnconstrained(scope, out);
  return out;
}

bool TaskNetwork::precedes(NodeId a, NodeId b) const {
  if (a == b) return false;
  std::vector<NodeId> pathA;
  for (NodeId x = a; x != kNone; x = nodes_[x].parent) pathA.push_back(x);
  NodeId childB = b;
  for (NodeId y = nodes_[b].parent; y != kNone; childB = y, y = nodes_[y].parent) {
    auto it = std::find(pathA.begin(), pathA.end(), y);
    if (it == pathA.end()) continue;
    if (it == pathA.begin()) return false;
    if (nodes_[y].kind != Kind::Ordered) return false;
    NodeId childA = *(it - 1);
    const auto& kids = nodes_[y].children;
    auto ia = std::find(kids.begin(), kids.end(), childA);
    auto ib = std::find(kids.begin(), kids.end(), childB);
    return ia < ib;
  }
  return false;
}

TaskNetwork::NodeId TaskNetwork::deepestExclusive() const {
  NodeId best = kNone;
  std::vector<NodeId> stack{root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[id];
    if (n.kind == Kind::Task) continue;
    if (n.exclusive && !n.children.empty()) best = id;
    // Exclusive groups form a single chain; the last one visited is innermost.
    for (NodeId c : n.children) {
      if (nodes_[c].kind != Kind::Task) stack.push_back(c);
    }
  }
  return best;
}

void TaskNetwork::remove(NodeId leaf) {
  if (!contains(leaf) || !isLeaf(leaf)) throw NetworkError("task is not a leaf of the network");
  NodeId child = leaf;
  NodeId parent = nodes_[leaf].parent;
  nodes_[leaf].alive = false;
  while (parent != kNone) {
    auto& kids = nodes_[parent].children;
    kids.erase(std::find(kids.begin(), kids.end(), child));
    if (!kids.empty() || parent == root()) break;
    nodes_[parent].alive = false;
    child = parent;
    parent = nodes_[parent].parent;
  }
}

TaskNetwork::NodeId TaskNetwork::replace(NodeId leaf, const NetworkTemplate& sub, const Substitution& theta,
                                         std::uint32_t generation, int record, bool exclusive) {
  if (!contains(leaf) || !isLeaf(leaf)) throw NetworkError("task is not a leaf of the network");
  if (sub.empty()) {
    remove(leaf);
    return kNone;
  }
  NodeId parent = nodes_[leaf].parent;
  int depth = nodes_[leaf].depth + 1;
  int slot = 0;
  std::vector<int> finals;
  NodeId id;
  if (sub.kind == Kind::Task) {
    NetworkTemplate wrapped = NetworkTemplate::ordered({sub});
    id = build(wrapped, theta, generation, parent, depth, record, slot, {}, finals);
  } else {
    id = build(sub, theta, generation, parent, depth, record, slot, {}, finals);
  }
  nodes_[id].exclusive = exclusive;
  auto& kids = nodes_[parent].children;
  *std::find(kids.begin(), kids.end(), leaf) = id;
  nodes_[leaf].alive = false;
  return id;
}

void TaskNetwork::apply(const Substitution& theta) {
  if (theta.empty()) return;
  for (NodeId id : leaves()) {
    Node& n = nodes_[id];
    if (!n.task.isGround()) n.task = theta.resolve(n.task);
  }
}

void TaskNetwork::setTask(NodeId leaf, Term task) {
  if (!contains(leaf) || !isLeaf(leaf)) throw NetworkError("task is not a leaf of the network");
  nodes_[leaf].task = std::move(task);
}

Term TaskNetwork::nodeToTerm(NodeId id) const {
  const Node& n = nodes_[id];
  if (n.kind == Kind::Task) {
    if (!n.immediate) return n.task;
    std::vector<Term> items{Term::symbol(kwImmediate())};
    items.insert(items.end(), n.task.items().begin(), n.task.items().end());
    return Term::list(std::move(items));
  }
  std::vector<Term> items{Term::symbol(n.kind == Kind::Ordered ? kwOrdered() : kwUnordered())};
  for (NodeId c : n.children) items.push_back(nodeToTerm(c));
  return Term::list(std::move(items));
}

Term TaskNetwork::toTerm() const { return nodeToTerm(root()); }

}  // namespace shop2
