#include <set>

#include "testing.hpp"
#include "shop2/task_network.hpp"

using namespace shop2;

namespace {

using NodeId = TaskNetwork::NodeId;

NodeId leaf(const TaskNetwork& net, const char* task) {
  for (NodeId id : net.leaves()) {
    if (toString(net.node(id).task) == task) return id;
  }
  FAIL("no leaf " << task);
  return TaskNetwork::kNone;
}

std::set<std::string> names(const TaskNetwork& net, const std::vector<NodeId>& ids) {
  std::set<std::string> out;
  for (NodeId id : ids) out.insert(toString(net.node(id).task));
  return out;
}

TaskNetwork network(const char* text) { return TaskNetwork(parseNetwork(parseTerm(text))); }

}  // namespace

TEST_SUITE("task_network") {

TEST_CASE("unconstrained tasks") {
  CHECK(names(network("((a) (b) (c))"), network("((a) (b) (c))").unconstrained()) == std::set<std::string>{"(a)"});
  auto u = network("(:unordered (a) (b))");
  CHECK(names(u, u.unconstrained()) == std::set<std::string>{"(a)", "(b)"});
  auto n = network("(:ordered (:unordered (a) (b)) (c))");
  CHECK(names(n, n.unconstrained()) == std::set<std::string>{"(a)", "(b)"});
}

TEST_CASE("precedence comes from nesting") {
  auto n = network("(:ordered (:unordered (a) (b)) (c))");
  NodeId a = leaf(n, "(a)"), b = leaf(n, "(b)"), c = leaf(n, "(c)");
  CHECK(n.precedes(a, c));
  CHECK(n.precedes(b, c));
  CHECK_FALSE(n.precedes(a, b));
  CHECK_FALSE(n.precedes(b, a));
  CHECK_FALSE(n.precedes(c, a));
}

TEST_CASE("replacing a leaf by an ordered pair") {
  auto n = network("((t) (x))");
  NodeId t = leaf(n, "(t)");
  n.replace(t, parseNetwork(parseTerm("((u) (v))")), Substitution(), 0, -1, false);
  NodeId u = leaf(n, "(u)"), v = leaf(n, "(v)"), x = leaf(n, "(x)");
  CHECK(n.precedes(u, v));
  CHECK(n.precedes(u, x));
  CHECK(n.precedes(v, x));
  CHECK_FALSE(n.precedes(x, u));
  CHECK(n.taskCount() == 3);
}

TEST_CASE("replacing a leaf by nothing") {
  auto n = network("((t) (x))");
  NodeId scope = n.replace(leaf(n, "(t)"), parseNetwork(parseTerm("()")), Substitution(), 0, -1, false);
  CHECK(scope == TaskNetwork::kNone);
  CHECK(names(n, n.leaves()) == std::set<std::string>{"(x)"});
}

TEST_CASE("decomposing transport-two") {
  auto n = network("((transport-two p1 p2))");
  NodeId root = leaf(n, "(transport-two p1 p2)");
  Substitution theta;
  theta.bind(Term::variable("?p"), Term::symbol("p1"));
  theta.bind(Term::variable("?q"), Term::symbol("p2"));
  NodeId scope = n.replace(root, parseNetwork(parseTerm("(:unordered (transport ?p) (transport ?q))")), theta, 0, -1,
                           false);
  REQUIRE(scope != TaskNetwork::kNone);
  CHECK(names(n, n.unconstrained(scope)) == std::set<std::string>{"(transport p1)", "(transport p2)"});
  CHECK(n.toTerm() == parseTerm("(:ordered (:unordered (transport p1) (transport p2)))"));
}

TEST_CASE("substitution and renaming on replace") {
  auto n = network("((t) (x))");
  Substitution theta;
  std::uint32_t g = freshGeneration();
  theta.bind(Term::variable(intern("?a"), g), Term::symbol("k"));
  n.replace(leaf(n, "(t)"), parseNetwork(parseTerm("((u ?a ?b))")), theta, g, -1, false);
  NodeId u = n.leaves().front();
  CHECK(n.node(u).task[1] == Term::symbol("k"));
  CHECK(n.node(u).task[2] == Term::variable(intern("?b"), g));
  CHECK(n.node(u).depth == 2);
}

TEST_CASE("removal prunes empty groups") {
  auto n = network("((a) (:unordered (b)))");
  n.remove(leaf(n, "(b)"));
  n.remove(leaf(n, "(a)"));
  CHECK(n.empty());
}

TEST_CASE("exclusive groups") {
  auto n = network("(:unordered (t) (y))");
  CHECK(n.deepestExclusive() == TaskNetwork::kNone);
  NodeId g = n.replace(leaf(n, "(t)"), parseNetwork(parseTerm("((u) (v))")), Substitution(), 0, -1, true);
  CHECK(n.deepestExclusive() == g);
  n.remove(leaf(n, "(u)"));
  n.remove(leaf(n, "(v)"));
  CHECK(n.deepestExclusive() == TaskNetwork::kNone);
}

TEST_CASE("immediate markers") {
  auto t = parseNetwork(parseTerm("((a) (:immediate b 1) (:unordered (c) (:immediate d)))"));
  auto leaves = t.leaves();
  REQUIRE(leaves.size() == 4);
  CHECK_FALSE(leaves[0]->immediate);
  CHECK(leaves[1]->immediate);
  CHECK(leaves[1]->task == parseTerm("(b 1)"));
  CHECK(leaves[3]->immediate);
  CHECK_THROWS_AS(parseNetwork(parseTerm("((:immediate :unordered (a)))")), NetworkError);
}

TEST_CASE("printing round trip") {
  for (const char* s : {"((a) (b))", "(:unordered (a) ((b) (c)))", "((:immediate a) (b))"}) {
    auto t = parseNetwork(parseTerm(s));
    CHECK(parseNetwork(networkToTerm(t)).leaves().size() == t.leaves().size());
    CHECK(networkToTerm(parseNetwork(networkToTerm(t))) == networkToTerm(t));
  }
  CHECK(parseNetwork(parseTerm("()")).empty());
}

}
