#include <functional>
#include <random>

#include "testing.hpp"
#include "shop2/sexpr.hpp"

using namespace shop2;

TEST_SUITE("sexpr") {

TEST_CASE("reads atoms with a trailing comment") {
  SExpr e = parseSExpr("(at ?p ?c1) ; loc");
  REQUIRE(e.isList());
  REQUIRE(e.items().size() == 3);
  CHECK(e.items()[0].isSymbol("at"));
  CHECK(e.items()[1].kind() == SExpr::Kind::Variable);
  CHECK(e.items()[1].name() == "p");
  CHECK(e.items()[2].name() == "c1");
}

TEST_CASE("keywords and function references") {
  SExpr e = parseSExpr("(:sort-by ?d #'> (and (at ?here)))");
  const auto& it = e.items();
  REQUIRE(it.size() == 4);
  CHECK(it[0].isKeyword("sort-by"));
  CHECK(it[1].kind() == SExpr::Kind::Variable);
  CHECK(it[2].kind() == SExpr::Kind::FunctionRef);
  CHECK(it[2].name() == ">");
  CHECK(it[3].isList());
}

TEST_CASE("lisp long-float suffix") {
  SExpr e = parseSExpr("(assign ?end (+ ?start ?duration 0.01L0))");
  const SExpr& sum = e.items()[2];
  const SExpr& last = sum.items().back();
  REQUIRE(last.kind() == SExpr::Kind::Number);
  CHECK(last.number().value() == doctest::Approx(0.01));
  CHECK_FALSE(last.number().integral);
}

TEST_CASE("symbols are lower-cased") {
  CHECK(print(parseSExpr("AT")) == "at");
  CHECK(print(parseSExpr("(Board P1 A1)")) == "(board p1 a1)");
}

TEST_CASE("printing") {
  CHECK(print(SExpr::list({SExpr::symbol("board"), SExpr::symbol("p1"), SExpr::symbol("a1")})) == "(board p1 a1)");
  CHECK(print(SExpr::real(3.0)) == "3");
  CHECK(print(SExpr::real(0.25)) == "0.25");
  CHECK(print(SExpr::integer(-7)) == "-7");
  CHECK(print(parseSExpr("()")) == "()");
  CHECK(print(parseSExpr("(f #'< :immediate ?x)")) == "(f #'< :immediate ?x)");
}

TEST_CASE("numbers compare by value") {
  CHECK(Number::ofInteger(3) == Number::ofReal(3.0));
  CHECK_FALSE(Number::ofInteger(3) == Number::ofReal(3.5));
}

TEST_CASE("several top-level forms") {
  auto forms = parseSExprs("(a) (b c)\n; done\n");
  REQUIRE(forms.size() == 2);
  CHECK(print(forms[1]) == "(b c)");
  CHECK(parseSExprs("  ; nothing\n").empty());
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parseSExpr("(a b"), ParseError);
  CHECK_THROWS_AS(parseSExpr(")"), ParseError);
  CHECK_THROWS_AS(parseSExpr("(a) (b)"), ParseError);
  try {
    parseSExprs("(a\n  (b))\n)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("round trip on random trees") {
  std::mt19937 rng(7);
  std::function<SExpr(int)> gen = [&](int depth) -> SExpr {
    int k = static_cast<int>(rng() % 6);
    if (depth > 3) k %= 5;
    switch (k) {
      case 0: return SExpr::symbol("s" + std::to_string(rng() % 9));
      case 1: return SExpr::variable("v" + std::to_string(rng() % 9));
      case 2: return SExpr::integer(static_cast<std::int64_t>(rng() % 2000) - 1000);
      case 3: return SExpr::real((static_cast<double>(rng() % 100000) - 50000) / 64.0 + 0.5);
      case 4: return SExpr::keyword("k" + std::to_string(rng() % 3));
      default: {
        std::vector<SExpr> items;
        for (unsigned i = rng() % 4; i > 0; --i) items.push_back(gen(depth + 1));
        return SExpr::list(std::move(items));
      }
    }
  };
  for (int i = 0; i < 500; ++i) {
    SExpr e = gen(0);
    CHECK(parseSExpr(print(e)) == e);
    CHECK(parseSExpr(prettyPrint(e, 20)) == e);
  }
}

}
