#include <doctest.h>

#include <random>

#include "sltlrm/formula.hpp"
#include "test_util.hpp"

using namespace sltlrm;

TEST_CASE("parse builds the expected structures") {
  FormulaRef f = parse("F c ; F o");
  REQUIRE(f->kind() == Kind::Then);
  CHECK(f->child(0) == mk_eventually(prop("c")));
  CHECK(f->child(1) == mk_eventually(prop("o")));

  f = parse("!star U c");
  REQUIRE(f->kind() == Kind::Until);
  CHECK(f->child(0) == mk_not(prop("star")));
  CHECK(f->child(1) == prop("c"));

  f = parse("(F a & F f) ; F e");
  REQUIRE(f->kind() == Kind::Then);
  REQUIRE(f->child(0)->kind() == Kind::And);
  CHECK(f->child(1) == mk_eventually(prop("e")));
}

TEST_CASE("precedence and associativity") {
  // ';' loosest, left-assoc
  FormulaRef f = parse("a ; b ; c");
  REQUIRE(f->kind() == Kind::Then);
  CHECK(f->child(0)->kind() == Kind::Then);
  // 'U' right-assoc, tighter than '&'
  f = parse("a U b U c & d");
  REQUIRE(f->kind() == Kind::And);
  REQUIRE(f->child(0)->kind() == Kind::Until);
  CHECK(f->child(0)->child(1)->kind() == Kind::Until);
  // unary binds tighter than U
  CHECK(parse("!a U X b") == mk_until(mk_not(prop("a")), mk_next(prop("b"))));
  // '|' between ';' and '&'
  f = parse("a | b & c ; d");
  REQUIRE(f->kind() == Kind::Then);
  CHECK(f->child(0)->kind() == Kind::Or);
}

TEST_CASE("normalization rules") {
  FormulaRef fo = mk_eventually(prop("o"));
  CHECK(normalize(mk_and({top(), fo})) == fo);
  CHECK(normalize(mk_and({bot(), fo})) == bot());
  CHECK(normalize(mk_or({top(), fo})) == top());
  CHECK(normalize(mk_or({bot(), fo})) == fo);
  CHECK(normalize(mk_not(top())) == bot());
  CHECK(normalize(mk_not(bot())) == top());
  CHECK(normalize(mk_not(mk_not(fo))) == fo);
  CHECK(normalize(mk_and({fo, fo})) == fo);
  CHECK(normalize(mk_or({fo, fo})) == fo);
  CHECK(normalize(mk_then(top(), fo)) == fo);
  CHECK(normalize(mk_then(bot(), fo)) == bot());
  // AC flatten + sort + dedup
  FormulaRef a = prop("a"), b = prop("b"), c = prop("c");
  CHECK(normalize(mk_and({mk_and({c, a}), mk_and({b, a})})) == mk_and({a, b, c}));
  CHECK(normalize(mk_and({c, a, b}))->str() == "a & b & c");
}

TEST_CASE("printing is injective on nested same-operator nodes") {
  FormulaRef a = prop("a"), b = prop("b"), c = prop("c");
  FormulaRef nested = mk_and({mk_and({a, b}), c});
  FormulaRef flat = mk_and({a, b, c});
  CHECK(nested->str() == "(a & b) & c");
  CHECK(flat->str() == "a & b & c");
  CHECK(nested->str() != flat->str());
  // parse of the nested print re-normalizes to the flat form
  CHECK(parse(nested->str()) == flat);
}

TEST_CASE("interning gives pointer identity for equal structure") {
  CHECK(parse("F c ; F o") == parse("F c ; F o"));
  CHECK(prop("c") == prop("c"));
  CHECK(mk_then(mk_eventually(prop("c")), mk_eventually(prop("o"))) == parse("F c ; F o"));
}

TEST_CASE("parse errors carry position and expectations") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("a &"), ParseError);
  CHECK_THROWS_AS(parse("(a"), ParseError);
  CHECK_THROWS_AS(parse("a @ b"), ParseError);
  CHECK_THROWS_AS(parse("U c"), ParseError);
  try {
    parse("a &\n& b");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 1);
    CHECK(std::string(e.what()).find("expected") != std::string::npos);
  }
}

TEST_CASE("proposition names are validated") {
  CHECK_THROWS_AS(prop(""), std::invalid_argument);
  CHECK_THROWS_AS(prop("1a"), std::invalid_argument);
  CHECK_THROWS_AS(prop("a*b"), std::invalid_argument);
  CHECK_THROWS_AS(prop("true"), std::invalid_argument);
  CHECK_THROWS_AS(prop("U"), std::invalid_argument);
  CHECK(prop("star")->prop_name() == "star");
  CHECK(prop("_x9")->prop_name() == "_x9");
}

TEST_CASE("And/Or constructors require two operands") {
  CHECK_THROWS_AS(mk_and({prop("a")}), std::invalid_argument);
  CHECK_THROWS_AS(mk_or({}), std::invalid_argument);
}

TEST_CASE("propositions collects distinct names") {
  auto p = propositions(parse("(!star U c) ; (!star U o)"));
  CHECK(p == std::set<std::string>{"star", "c", "o"});
  CHECK(propositions(top()).empty());
}

TEST_CASE("normalize is idempotent and round-trips through parse") {
  std::mt19937_64 rng(2024);
  std::vector<std::string> props{"a", "b", "c", "d"};
  for (int i = 0; i < 2000; ++i) {
    FormulaRef f = testutil::random_formula(rng, 4, props);
    FormulaRef n = normalize(f);
    CHECK(normalize(n) == n);
    CHECK(is_normalized(n));
    CHECK(parse(n->str()) == n);
  }
}

TEST_CASE("normalized And/Or operands are flat, sorted, deduplicated") {
  std::mt19937_64 rng(7);
  std::vector<std::string> props{"a", "b", "c"};
  for (int i = 0; i < 1000; ++i) {
    FormulaRef n = normalize(testutil::random_formula(rng, 4, props));
    std::vector<FormulaRef> stack{n};
    while (!stack.empty()) {
      FormulaRef g = stack.back();
      stack.pop_back();
      if (g->kind() == Kind::And || g->kind() == Kind::Or) {
        for (size_t k = 0; k + 1 < g->arity(); ++k)
          CHECK(g->child(k)->str() < g->child(k + 1)->str());
        for (FormulaRef ch : g->children()) {
          CHECK(ch->kind() != g->kind());
          CHECK_FALSE(ch->is_terminal());
        }
      }
      if (g->kind() == Kind::Then) CHECK(g->child(0)->kind() != Kind::True);
      if (g->kind() == Kind::Not) {
        CHECK_FALSE(g->child(0)->is_terminal());
        CHECK(g->child(0)->kind() != Kind::Not);
      }
      for (FormulaRef ch : g->children()) stack.push_back(ch);
    }
  }
}
