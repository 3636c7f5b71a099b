#include "beliefreg/errors.hpp"
#include "beliefreg/evaluate.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace beliefreg;
using testing::str;

namespace {

std::vector<std::string> messages(const std::string& src) {
  try {
    (void)parse_theory(src);
  } catch (const ParseError& e) {
    std::vector<std::string> out;
    for (const auto& d : e.diagnostics()) out.push_back(d.to_string());
    return out;
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("theory") {
  TEST_CASE("bundled theories load without diagnostics") {
    for (const auto& name : bundled_theory_names()) {
      CAPTURE(name);
      const ActionTheory th = parse_theory(*bundled_theory(name));
      CHECK(validate_theory(th).empty());
    }
  }

  TEST_CASE("prior mass is one for both running theories") {
    CHECK(compare(prior_mass(testing::discrete()).gamma, Number(1)) == 0);
    const EvalResult c = prior_mass(testing::continuous(), 1e-9);
    CHECK(c.gamma.is_exact());
    CHECK(compare(c.gamma, Number(1)) == 0);
  }

  TEST_CASE("action and sensor declarations") {
    const ActionTheory th = testing::discrete();
    const ActionDecl* fwd = th.find_action("fwd");
    REQUIRE(fwd);
    REQUIRE(fwd->effects.size() == 1);
    CHECK(fwd->effects[0].first == "h");
    CHECK(str(fwd->effects[0].second) == "max(0, h - z)");
    const SensorDecl* sonar = th.find_sensor("sonar");
    REQUIRE(sonar);
    CHECK(sonar->fluent == "h");
    CHECK(str(sonar->error) == "if abs(h - z) <= 1 then 1/3 else 0");
    const ActionDecl* grasp = th.find_action("grasp");
    REQUIRE(grasp);
    CHECK(grasp->effects.empty());
  }

  TEST_CASE("ssa_rhs") {
    const ActionTheory th = testing::discrete();
    CHECK(str(ssa_rhs(th, "h", parse_actions(th, "fwd(1)").actions[0])) == "max(0, h - 1)");
    CHECK(str(ssa_rhs(th, "h", parse_actions(th, "grasp(obj5)").actions[0])) == "h");
    CHECK(str(ssa_rhs(th, "h", parse_actions(th, "fwd(0)").actions[0])) == "max(0, h - 0)");
    CHECK(str(ssa_rhs(th, "h", parse_actions(th, "sonar(3)").actions[0])) == "h");
  }

  TEST_CASE("likelihood_of") {
    const ActionTheory d = testing::discrete();
    CHECK(str(likelihood_of(d, parse_actions(d, "sonar(5)").actions[0])) ==
          "if abs(x_h - 5) <= 1 then 1/3 else 0");
    CHECK(str(likelihood_of(d, parse_actions(d, "fwd(2)").actions[0])) == "1");
    const ActionTheory c = testing::continuous();
    CHECK(str(likelihood_of(c, parse_actions(c, "sonar(5)").actions[0])) ==
          "if 5 >= 0 then gauss(5 - x_h, 0, 4) else 0");
  }

  TEST_CASE("undeclared and ill-formed actions") {
    const ActionTheory th = testing::discrete();
    CHECK_THROWS_AS(parse_actions(th, "jump(1)"), DeclarationError);
    CHECK_THROWS_AS(parse_actions(th, "fwd(1, 2)"), DeclarationError);
    CHECK_THROWS_AS(parse_actions(th, "fwd(x)"), Error);
    CHECK_NOTHROW(parse_actions(th, "fwd(1/2 + 1/2)"));
    CHECK_THROWS_AS(parse_actions(th, "fwd(1/2)"), DeclarationError);
  }

  TEST_CASE("declaration diagnostics") {
    CHECK(any_contains(messages("fluent h : int in [0, 3]\nfluent h : real in [0, 1]\nprior { 1 }"),
                       "duplicate"));
    CHECK(any_contains(messages("fluent h : int in [0, 3]\naction a(z: real) { g := z }\nprior { 1 }"),
                       "unknown fluent 'g'"));
    CHECK(any_contains(
        messages("fluent h : int in [0, 3]\nfluent g : int in [0, 3]\n"
                 "sensor s(z: int) on h { if h = g then 1 else 0 }\nprior { 1 }"),
        "likelihood depends on extra fluent"));
    CHECK(any_contains(messages("fluent h : int in [0, 3]\n"), "prior"));
    CHECK(any_contains(messages("fluent h : int in [3, 0]\nprior { 1 }"), "empty domain"));
    CHECK(any_contains(messages("fluent h : int in [0, 3]\naction a(z: real) { h := z; h := 1 }\nprior { 1 }"),
                       "more than one effect"));
    CHECK(any_contains(messages("fluent h : int in [0, 3]\naction a(o: object) { h := o }\nprior { 1 }"),
                       "object parameter"));
  }

  TEST_CASE("diagnostics have line and column") {
    const auto m = messages("fluent h : int in [0, 3]\naction a(z: real) { g := z }\nprior { 1 }");
    REQUIRE_FALSE(m.empty());
    CHECK(m.front().rfind("2:", 0) == 0);
  }

  TEST_CASE("several errors are reported together") {
    const auto m = messages(
        "fluent h : int in [0, 3]\n"
        "action a(z: real) { g := z }\n"
        "action b(z: real) { k := z }\n"
        "prior { 1 }\n");
    CHECK(m.size() >= 2);
  }

  TEST_CASE("validate_theory: negative prior") {
    const ActionTheory th = parse_theory("fluent h : real in [0, 1]\nprior { -0.1 }\n");
    const auto d = validate_theory(th);
    REQUIRE_FALSE(d.empty());
    CHECK(d.front().message.find("prior negative at sample") != std::string::npos);
  }

  TEST_CASE("validate_theory: negative error model and zero prior mass") {
    const ActionTheory neg = parse_theory(
        "fluent h : int in [0, 3]\nsensor s(z: int) on h { h - z }\nprior { 1 }\n");
    CHECK_FALSE(validate_theory(neg).empty());
    const ActionTheory zero = parse_theory("fluent h : int in [0, 3]\nprior { 0 }\n");
    const auto d = validate_theory(zero);
    REQUIRE_FALSE(d.empty());
    CHECK(d.front().message.find("prior mass") != std::string::npos);
  }

  TEST_CASE("set and unbounded domains") {
    const ActionTheory th = load_theory(
        "fluent s : set {3, 1, 2, 2}\nfluent r : real in [-inf, inf]\n"
        "prior { (if s = 2 then 1 else 0) * gauss(r, 0, 1) }\n");
    REQUIRE(th.fluents[0].domain.values.size() == 3);
    CHECK(th.fluents[0].domain.to_string() == "set {1, 2, 3}");
    CHECK_FALSE(th.all_discrete());
  }

  TEST_CASE("preconditions are parsed") {
    const ActionTheory th = load_theory(
        "fluent h : int in [0, 5]\naction fwd(z: int) requires h >= z { h := h - z }\n"
        "prior { 1 }\n");
    CHECK(str(precondition_of(th, parse_actions(th, "fwd(2)").actions[0])) == "h >= 2");
  }
}
