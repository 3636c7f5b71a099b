#include "beliefreg/ast.hpp"
#include "beliefreg/errors.hpp"
#include "beliefreg/number.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace beliefreg;
using testing::F;
using testing::str;
using testing::T;

TEST_SUITE("number") {
  TEST_CASE("decimal literals are exact") {
    CHECK(parse_rational("0.1").value() == Rational(1, 10));
    CHECK(parse_rational("1/3").value() == Rational(1, 3));
    CHECK(parse_rational("2e-3").value() == Rational(2, 1000));
    CHECK(parse_rational(".5").value() == Rational(1, 2));
    CHECK_FALSE(parse_rational("abc").has_value());
  }

  TEST_CASE("arithmetic stays exact until a transcendental appears") {
    const Number a = Number::ratio(1, 3);
    CHECK((a + a + a).is_exact());
    CHECK(compare(a + a + a, Number(1)) == 0);
    CHECK(compare(pow(Number(2), Number(-2)), Number::ratio(1, 4)) == 0);
    CHECK_FALSE(exp(Number(1)).is_exact());
    CHECK_FALSE(gauss(Number(0), Number(0), Number(4)).is_exact());
    CHECK(gauss(Number(0), Number(0), Number(4)).to_double() ==
          doctest::Approx(1.0 / std::sqrt(8.0 * 3.14159265358979323846)));
  }

  TEST_CASE("printing") {
    CHECK(Number::ratio(2, 3).to_string() == "2/3");
    CHECK(Number(-4).to_string() == "-4");
    CHECK(Number(0.1).to_string() == "0.1");
  }

  TEST_CASE("exact_from_double is lossless") {
    const Number n = Number::exact_from_double(0.1);
    CHECK(n.is_exact());
    CHECK(n.to_double() == 0.1);
    CHECK(n.exact() != Rational(1, 10));
  }

  TEST_CASE("division by zero and bad variance") {
    CHECK_THROWS_AS(apply_op(Op::Div, {Number(1), Number(0)}), EvalError);
    CHECK_THROWS_AS(apply_op(Op::Gauss, {Number(0), Number(0), Number(0)}), EvalError);
  }
}

TEST_SUITE("ast") {
  TEST_CASE("substitute the situation variable") {
    const Formula f = F("h <= 9");
    CHECK(str(substitute_now(f, SitTerm{SitBase::S0, {}})) == "h(S0) <= 9");
  }

  TEST_CASE("substitute: absent variable and bound occurrence") {
    CHECK(str(substitute(T("x + 1"), "y", constant(5))) == "x + 1");
    const Formula bound = F("exists x (x = h)");
    CHECK(substitute(bound, "x", constant(3)) == bound);
  }

  TEST_CASE("substitute avoids capture") {
    const Formula f = F("exists u (u = y)");
    const Formula g = substitute(f, "y", var("u"));
    CHECK(free_vars(g) == std::set<std::string>{"u"});
  }

  TEST_CASE("substitute rejects an action in an arithmetic slot") {
    CHECK_THROWS_AS(substitute(T("x + 1"), "x", action("fwd", {constant(1)})), SortError);
  }

  TEST_CASE("free_vars") {
    CHECK(free_vars(T("if abs(u2 - u1) <= 1 then 1/3 else 0")) ==
          std::set<std::string>{"u1", "u2"});
    CHECK(free_vars(F("h(S0) = 4")).empty());
    CHECK(free_vars(F("exists u (h = u and u <= 9)")).empty());
  }

  TEST_CASE("mentions_do") {
    CHECK(mentions_do(fluent("h", SitTerm{SitBase::S0, {action("fwd", {constant(1)})}})));
    CHECK_FALSE(mentions_do(fluent("h", SitTerm{SitBase::S0, {}})));
    CHECK_FALSE(mentions_do(F("max(0, h(S0) - 1) = 11")));
  }

  TEST_CASE("unique names for actions") {
    const Term a = action("fwd", {constant(4)});
    CHECK(str(actions_equal(a, action("sonar", {constant(4)}))) == "false");
    CHECK(str(actions_equal(a, action("fwd", {var("z")}))) == "4 = z");
  }

  TEST_CASE("do with actions prints in execution order") {
    const Situation s{{action("fwd", {constant(4)}), action("fwd", {constant(-4)})}};
    CHECK(to_string(s.as_sit_term()) == "do([fwd(4), fwd(-4)], S0)");
    CHECK(to_string(s.prefix(1).as_sit_term()) == "do([fwd(4)], S0)");
    CHECK(to_string(Situation{}.as_sit_term()) == "S0");
    CHECK(to_string(s) == "fwd(4); fwd(-4)");
  }
}

TEST_SUITE("parser") {
  TEST_CASE("precedence and associativity") {
    CHECK(str(T("1 + 2 * x")) == "1 + 2 * x");
    CHECK(str(T("(1 + 2) * x")) == "(1 + 2) * x");
    CHECK(str(T("x - (y - 1)")) == "x - (y - 1)");
    CHECK(str(T("x - y - 1")) == "x - y - 1");
    CHECK(str(T("2 ^ 3 ^ 2")) == str(T("2 ^ (3 ^ 2)")));
  }

  TEST_CASE("unicode spellings") {
    CHECK(F("h ≤ 5 ∧ ¬(h ≠ 3)") == F("h <= 5 and not (h != 3)"));
    CHECK(T("h − 1") == T("h - 1"));
  }

  TEST_CASE("absolute value bars and conditionals") {
    CHECK(T("|h - z|") == T("abs(h - z)"));
    CHECK(str(T("if h >= 2 and h <= 11 then .1 else 0")) ==
          "if h >= 2 and h <= 11 then 1/10 else 0");
  }

  TEST_CASE("chained comparison is a conjunction") {
    CHECK(F("4 <= h <= 6") == F("4 <= h and h <= 6"));
  }

  TEST_CASE("fluents with explicit situations") {
    CHECK(str(F("h(do(fwd(1), S0)) = 11")) == "h(do([fwd(1)], S0)) = 11");
    CHECK(str(F("h(do([fwd(1), sonar(2)], now)) = 11")) == "h(do([fwd(1), sonar(2)], now)) = 11");
  }

  TEST_CASE("errors carry positions") {
    try {
      (void)parse_formula("h <= ", testing::wall_scope());
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      REQUIRE_FALSE(e.diagnostics().empty());
      CHECK(e.diagnostics().front().pos.line == 1);
      CHECK(e.diagnostics().front().pos.column == 6);
    }
  }

  TEST_CASE("unknown identifier and wrong arity") {
    Scope s;
    s.fluents = {"h"};
    CHECK_THROWS_AS(parse_formula("k <= 3", s), ParseError);
    CHECK_THROWS_AS(parse_term("gauss(1, 2)", s), ParseError);
    CHECK_THROWS_AS(parse_term("max(1)", s), ParseError);
  }

  TEST_CASE("Bel is not part of query formulas") {
    CHECK_THROWS_AS(parse_formula("Bel(h <= 3) = 1", testing::wall_scope()), ParseError);
  }

  TEST_CASE("action sequences") {
    const Situation s = parse_situation("fwd(4); sonar(5)", testing::wall_scope());
    REQUIRE(s.size() == 2);
    CHECK(str(s.actions[1]) == "sonar(5)");
    CHECK(parse_situation("  ", testing::wall_scope()).empty());
  }
}
