#include "beliefreg/errors.hpp"
#include "beliefreg/evaluate.hpp"
#include "beliefreg/quadrature.hpp"
#include "doctest.h"
#include "helpers.hpp"

#include <cmath>

using namespace beliefreg;

namespace {

EvalResult bel(const ActionTheory& th, const std::string& q, const std::string& a,
               double tol = 1e-6) {
  return belief(th, parse_query(th, q), parse_actions(th, a), tol);
}

}  // namespace

TEST_SUITE("evaluate") {
  TEST_CASE("eval_formula_at") {
    CHECK(eval_formula_at(testing::F("max(0, x - 2) <= 5"), {{"x", Number(6)}}));
    CHECK(eval_formula_at(parse_formula("h(S0) = 7", testing::wall_scope()), {{"h", Number(7)}}));
    CHECK(eval_formula_at(truth(true), {}));
  }

  TEST_CASE("eval_term_at errors") {
    CHECK_THROWS_AS(eval_term_at(testing::T("1 / (x - 2)"), {{"x", Number(2)}}), EvalError);
    CHECK_THROWS_AS(eval_term_at(testing::T("x + 1"), {}), EvalError);
  }

  TEST_CASE("real comparisons use a relative tolerance for equality") {
    // 0.1 + 0.2 differs from 0.3 in binary floating point.
    CHECK(eval_formula_at(testing::F("exp(0) * 0.1 + 0.2 = 0.3"), {}));
  }

  TEST_CASE("discrete: exact results") {
    const ActionTheory th = testing::discrete();
    const EvalResult r = bel(th, "h <= 5", "sonar(5)");
    CHECK(r.exact());
    CHECK(r.value.exact() == Rational(2, 3));
    CHECK(r.gamma.exact() == Rational(3, 30));
    CHECK(r.error == 0.0);
    CHECK(bel(th, "h = 10 or h = 11", "").value.exact() == Rational(1, 5));
    CHECK(bel(th, "false", "").value.exact() == 0);
    CHECK(bel(th, "true", "sonar(5); fwd(2); sonar(3)").value.exact() == 1);
  }

  TEST_CASE("discrete: undefined belief") {
    const ActionTheory th = testing::discrete();
    CHECK_THROWS_AS(bel(th, "h <= 5", "sonar(30)"), UndefinedBelief);
  }

  TEST_CASE("continuous: region integration") {
    const ActionTheory th = testing::continuous();
    CHECK(bel(th, "h = 0", "fwd(4)").value.to_double() == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(bel(th, "4 <= h <= 6", "sonar(5)").value.to_double() ==
          doctest::Approx(0.41).epsilon(0.03));
    CHECK(bel(th, "true", "sonar(5)").value.to_double() == 1.0);
    CHECK(bel(th, "h = 12", "").value.to_double() == 0.0);
  }

  TEST_CASE("continuous: exact path for piecewise-constant integrands") {
    const ActionTheory th = testing::continuous();
    const EvalResult r = bel(th, "4 <= h <= 6", "fwd(-3); fwd(1)");
    CHECK(r.exact());
    CHECK(r.value.exact() == Rational(1, 5));
  }

  TEST_CASE("continuous: undefined belief") {
    const ActionTheory th = testing::continuous();
    CHECK_THROWS_AS(bel(th, "h <= 5", "sonar(-1)"), UndefinedBelief);
  }

  TEST_CASE("mixed discrete and real fluents") {
    const ActionTheory th = load_theory(
        "fluent d : set {0, 1}\nfluent r : real in [0, 1]\n"
        "sensor look(z: real) on r { if abs(r - z) <= 1/4 then 2 else 0 }\n"
        "prior { if d = 1 then 3 else 1 }\n");
    CHECK(bel(th, "d = 1", "").value.to_double() == doctest::Approx(0.75));
    // The reading 1/2 leaves r uniform on [1/4, 3/4], independent of d.
    CHECK(bel(th, "d = 1 and r <= 1/2", "look(1/2)").value.to_double() ==
          doctest::Approx(0.375).epsilon(1e-9));
  }

  TEST_CASE("two real fluents") {
    const ActionTheory th = load_theory(
        "fluent a : real in [0, 1]\nfluent b : real in [0, 1]\n"
        "action copy(z: real) { a := b + z }\nprior { 1 }\n");
    CHECK(bel(th, "a <= b", "").value.to_double() == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(bel(th, "a + b <= 1/2", "").value.to_double() == doctest::Approx(0.125).epsilon(1e-7));
    CHECK(bel(th, "a <= 1/2", "copy(0)").value.to_double() == doctest::Approx(0.5).epsilon(1e-7));
  }

  TEST_CASE("unbounded real domain") {
    const ActionTheory th = load_theory("fluent r : real in [-inf, inf]\nprior { gauss(r, 1, 4) }\n");
    CHECK(bel(th, "r <= 1", "").value.to_double() == doctest::Approx(0.5).epsilon(1e-7));
    const double want = 0.5 * (1 + std::erf((3.0 - 1.0) / (2.0 * std::sqrt(2.0))));
    CHECK(bel(th, "r <= 3", "").value.to_double() == doctest::Approx(want).epsilon(1e-7));
  }

  TEST_CASE("precondition flag is reported") {
    const ActionTheory th = load_theory(
        "fluent h : int in [0, 5]\naction fwd(z: int) requires h >= z { h := h - z }\n"
        "prior { 1 }\n");
    const EvalResult r = bel(th, "h = 0", "fwd(2)");
    CHECK(std::find(r.flags.begin(), r.flags.end(), "precondition-sensitive") != r.flags.end());
  }

  TEST_CASE("non-definitional existentials are rejected") {
    const ActionTheory th = testing::discrete();
    CHECK_THROWS_AS(bel(th, "exists v (v > h and v < 3)", ""), EvalError);
  }

  TEST_CASE("density_profile") {
    const ActionTheory th = testing::continuous();
    const std::vector<Number> grid{Number(3), Number(7), Number(13)};
    const DensityProfile p0 = density_profile(th, Situation{}, "h", grid);
    CHECK(p0.points[0].density == doctest::Approx(0.1));
    CHECK(p0.points[1].density == doctest::Approx(0.1));
    CHECK(p0.points[2].density == 0.0);
    const DensityProfile p1 = density_profile(th, parse_actions(th, "sonar(5)"), "h", {Number(5)});
    CHECK(p1.points[0].density == doctest::Approx(0.1 * gauss_pdf(0, 0, 4)));
    const DensityProfile p2 =
        density_profile(th, parse_actions(th, "sonar(5); sonar(5)"), "h", {Number(5)});
    CHECK(p2.points[0].density / p2.gamma > p1.points[0].density / p1.gamma);
  }

  TEST_CASE("density_profile after a shift") {
    const ActionTheory th = testing::continuous();
    std::vector<Number> grid;
    for (int v = 0; v <= 14; ++v) grid.push_back(Number(v));
    const DensityProfile p = density_profile(th, parse_actions(th, "fwd(1)"), "h", grid);
    for (const auto& pt : p.points) {
      const int v = static_cast<int>(pt.value.to_double());
      CAPTURE(v);
      CHECK(pt.density / p.gamma == doctest::Approx(v >= 1 && v <= 11 ? 0.1 : 0.0));
    }
  }

  TEST_CASE("density_profile flags a point mass") {
    const ActionTheory th = testing::continuous();
    const DensityProfile p = density_profile(th, parse_actions(th, "fwd(4)"), "h", {Number(1)});
    REQUIRE_FALSE(p.flags.empty());
    CHECK(p.flags.front().find("point mass") != std::string::npos);
  }

  TEST_CASE("quadrature") {
    double err = 0;
    CHECK(integrate_scalar([](double x) { return x * x; }, 0, 3, 1e-12, &err) ==
          doctest::Approx(9.0).epsilon(1e-12));
    CHECK(integrate_scalar([](double x) { return std::exp(-x * x); }, -INFINITY, INFINITY, 1e-10) ==
          doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-9));
    CHECK(integrate_scalar([](double x) { return std::exp(-x); }, 0, INFINITY, 1e-10) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(integrate_scalar([](double x) { return 1.0 / std::sqrt(x); }, 0, 1, 1e-8) ==
          doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_SUITE("oracle") {
  TEST_CASE("agrees with the exact discrete answer") {
    const ActionTheory th = testing::discrete();
    const OracleEstimate o =
        mc_oracle(th, parse_query(th, "h <= 5"), parse_actions(th, "sonar(5)"), 1000000, 1);
    CHECK(std::abs(o.estimate - 2.0 / 3.0) <= 3 * o.stderr_);
    CHECK(o.n == 1000000);
  }

  TEST_CASE("true has estimate one") {
    const ActionTheory th = testing::continuous();
    const OracleEstimate o =
        mc_oracle(th, truth(true), parse_actions(th, "sonar(5); fwd(2)"), 1000, 9);
    CHECK(o.estimate == 1.0);
  }

  TEST_CASE("two sonar readings") {
    const ActionTheory th = testing::continuous();
    const OracleEstimate o = mc_oracle(th, parse_query(th, "4 <= h <= 6"),
                                       parse_actions(th, "sonar(5); sonar(5)"), 400000, 3);
    CHECK(std::abs(o.estimate - 0.529473284245788) <= 3 * o.stderr_);
  }

  TEST_CASE("deterministic in the seed") {
    const ActionTheory th = testing::continuous();
    const Formula q = parse_query(th, "h <= 5");
    const Situation a = parse_actions(th, "sonar(5)");
    const OracleEstimate x = mc_oracle(th, q, a, 5000, 42);
    const OracleEstimate y = mc_oracle(th, q, a, 5000, 42);
    const OracleEstimate z = mc_oracle(th, q, a, 5000, 43);
    CHECK(x.estimate == y.estimate);
    CHECK(x.stderr_ == y.stderr_);
    CHECK(x.estimate != z.estimate);
  }

  TEST_CASE("no support") {
    const ActionTheory th = testing::discrete();
    CHECK_THROWS_AS(mc_oracle(th, truth(true), parse_actions(th, "sonar(30)"), 1000, 1),
                    UndefinedBelief);
  }
}
