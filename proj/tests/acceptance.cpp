// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include "beliefreg/evaluate.hpp"
#include "beliefreg/parser.hpp"
#include "beliefreg/printer.hpp"
#include "beliefreg/quadrature.hpp"
#include "beliefreg/query.hpp"
#include "beliefreg/regression.hpp"
#include "beliefreg/theory.hpp"
#include "support/fuzz.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace beliefreg;

namespace {

// Tolerances.
constexpr double kContinuousTol = 1e-6;    // goldens with a continuous prior
constexpr double kRoundedTol = 0.01;   // values reported as "approximately"
constexpr double kPinnedTol = 1e-9;        // frozen high-precision values
constexpr double kFineQuadTol = 1e-9;      // quadrature tolerance for pinned values
constexpr double kSigmas = 3.0;            // oracle agreement
constexpr double kShiftTol = 1e-6;
constexpr double kConjugateRelTol = 1e-3;
constexpr double kPropertyTol = 1e-6;      // property checks, continuous theories
constexpr double kPropertyEvalTol = 1e-8;  // quadrature tolerance used by the property checks
constexpr std::size_t kOracleSamplesGolden = 1000000;
constexpr std::size_t kOracleSamplesProperty = 20000;
constexpr int kFuzzedTheories = 50;

// Frozen high-precision values (fine quadrature, cross-checked with the
// sampling oracle and with closed forms in terms of erf).
constexpr double kPinnedOneSonar = 0.41044080444593467;
constexpr double kPinnedTwoSonars = 0.529473284245788;

struct Criterion {
  bool ok = true;
  std::vector<std::string> notes;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string g(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

ActionTheory bundled(const std::string& name) { return load_theory(*bundled_theory(name)); }

EvalResult bel(const ActionTheory& th, const std::string& q, const std::string& after,
               double tol = kContinuousTol) {
  return belief(th, parse_query(th, q), parse_actions(th, after), tol);
}

double Phi(double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); }

// 1 -----------------------------------------------------------------------------------
Criterion discrete_goldens() {
  Criterion c;
  const ActionTheory th = bundled("wall-discrete");
  auto exact_is = [&](const std::string& q, const std::string& a, Number want) {
    const EvalResult r = bel(th, q, a);
    c.check(r.value.is_exact() && compare(r.value, want) == 0,
            "Bel(" + q + ", [" + a + "]) = " + r.value.to_string() + ", want " + want.to_string());
    return r;
  };
  exact_is("h = 10 or h = 11", "", Number::ratio(1, 5));
  exact_is("h <= 9", "", Number::ratio(4, 5));
  exact_is("h = 11", "fwd(1)", Number(0));
  const EvalResult r = exact_is("h <= 5", "sonar(5)", Number::ratio(2, 3));
  c.check(r.gamma.is_exact() && compare(r.gamma, Number::ratio(3, 30)) == 0,
          "gamma = " + r.gamma.to_string() + ", want 3/30");
  return c;
}

// 2 -----------------------------------------------------------------------------------
Criterion continuous_goldens() {
  Criterion c;
  const ActionTheory th = bundled("wall-continuous");
  auto near = [&](const std::string& q, const std::string& a, double want, double tol) {
    const EvalResult r = bel(th, q, a);
    const double v = r.value.to_double();
    c.check(std::abs(v - want) <= tol, "Bel(" + q + ", [" + a + "]) = " + g(v) + ", want " +
                                           g(want) + " +- " + g(tol));
    return v;
  };
  near("h = 3 or h = 4", "", 0.0, kContinuousTol);
  near("4 <= h <= 6", "", 0.2, kContinuousTol);
  near("h >= 11", "fwd(1)", 0.0, kContinuousTol);
  near("h = 0", "fwd(4)", 0.2, kContinuousTol);
  near("h = 4", "fwd(4); fwd(-4)", 0.2, kContinuousTol);
  near("h = 4", "fwd(-4); fwd(4)", 0.0, kContinuousTol);
  const double one = near("4 <= h <= 6", "sonar(5)", 0.41, kRoundedTol);
  const double two = near("4 <= h <= 6", "sonar(5); sonar(5)", 0.52, kRoundedTol);
  c.note("one sonar reading: " + g(one) + " (paper: about .41)");
  c.note("two sonar readings: " + g(two) + " (paper: about .52; margin " +
         g(kRoundedTol - std::abs(two - 0.52)) + ")");

  // Pinned values: fine quadrature, sampling oracle, closed form.
  struct Pin {
    const char* after;
    double pinned;
    double closed;
  };
  const double s = std::sqrt(2.0);
  const Pin pins[] = {
      {"sonar(5)", kPinnedOneSonar, (Phi(0.5) - Phi(-0.5)) / (Phi(3.5) - Phi(-1.5))},
      {"sonar(5); sonar(5)", kPinnedTwoSonars,
       (Phi(1 / s) - Phi(-1 / s)) / (Phi(7 / s) - Phi(-3 / s))},
  };
  for (const auto& p : pins) {
    const Formula phi = parse_query(th, "4 <= h <= 6");
    const Situation alpha = parse_actions(th, p.after);
    const double fine = belief(th, phi, alpha, kFineQuadTol).value.to_double();
    c.check(std::abs(fine - p.pinned) <= kPinnedTol,
            std::string("fine quadrature after [") + p.after + "] = " + g(fine) + ", pinned " +
                g(p.pinned));
    c.check(std::abs(p.closed - p.pinned) <= kPinnedTol,
            std::string("closed form after [") + p.after + "] = " + g(p.closed));
    const OracleEstimate o = mc_oracle(th, phi, alpha, kOracleSamplesGolden, 17);
    c.check(std::abs(o.estimate - fine) <= kSigmas * o.stderr_,
            std::string("oracle after [") + p.after + "] = " + g(o.estimate) + " +- " +
                g(o.stderr_) + ", engine " + g(fine));
    c.note(std::string("after [") + p.after + "]: engine " + g(fine) + ", oracle " +
           g(o.estimate) + " +- " + g(o.stderr_));
  }
  return c;
}

// 3 -----------------------------------------------------------------------------------
Criterion intro_example() {
  Criterion c;
  const ActionTheory th = bundled("wall-continuous");
  const Formula phi = parse_query(th, "h <= 5");
  const Situation alpha = parse_actions(th, "fwd(-2); sonar(8)");
  const InitialBeliefExpr e = regress_belief(th, phi, alpha);
  c.check(to_string(e.condition) == "x_h <= 3",
          "regressed condition is '" + to_string(e.condition) + "', want 'x_h <= 3'");
  const double engine = eval_belief(th, e, kContinuousTol).value.to_double();

  // Independent side: quadrature of the stated integrand, and erf.
  auto integrand = [](double x) { return 0.1 * gauss_pdf(6.0 - x, 0.0, 4.0); };
  const double num = integrate_scalar(integrand, 2.0, 3.0, 1e-13);
  const double gam = integrate_scalar(integrand, 2.0, 12.0, 1e-13);
  const double quad = num / gam;
  const double closed = (Phi(-1.5) - Phi(-2.0)) / (Phi(3.0) - Phi(-2.0));
  c.check(std::abs(engine - quad) <= kContinuousTol,
          "engine " + g(engine) + " vs direct quadrature " + g(quad));
  c.check(std::abs(engine - closed) <= kContinuousTol,
          "engine " + g(engine) + " vs closed form " + g(closed));
  c.note("engine " + g(engine) + ", direct quadrature " + g(quad) + ", closed form " + g(closed));
  return c;
}

// 4 -----------------------------------------------------------------------------------
Criterion proposition_one() {
  Criterion c;
  const ActionTheory th = bundled("wall-discrete");
  auto prior = [](int t) { return t >= 2 && t <= 11 ? Rational(1, 10) : Rational(0); };
  auto err = [](int z, int t) { return std::abs(t - z) <= 1 ? Rational(1, 3) : Rational(0); };
  int checked = 0;
  for (int z = 2; z <= 11; ++z) {
    Rational norm = 0;
    for (int t = 0; t <= 20; ++t) norm += prior(t) * err(z, t);
    for (int t = 2; t <= 11; ++t) {
      const Rational want = prior(t) * err(z, t) / norm;
      const EvalResult r =
          bel(th, "h = " + std::to_string(t), "sonar(" + std::to_string(z) + ")");
      c.check(r.value.is_exact() && r.value.exact() == want,
              "t=" + std::to_string(t) + " z=" + std::to_string(z) + ": " + r.value.to_string() +
                  " vs " + Number(want).to_string());
      ++checked;
    }
  }
  c.note(std::to_string(checked) + " (t, z) pairs compared exactly");
  return c;
}

// 5 -----------------------------------------------------------------------------------
Criterion shift_property() {
  Criterion c;
  const ActionTheory th = bundled("wall-continuous");
  double worst = 0.0;
  for (int b = 3; b <= 10; ++b) {
    for (int n = 1; n <= 3; ++n) {
      const double lhs =
          bel(th, "h <= " + std::to_string(b), "fwd(-" + std::to_string(n) + ")").value.to_double();
      const double rhs = bel(th, "h <= " + std::to_string(b - n), "").value.to_double();
      worst = std::max(worst, std::abs(lhs - rhs));
      c.check(std::abs(lhs - rhs) <= kShiftTol,
              "b=" + std::to_string(b) + " n=" + std::to_string(n) + ": " + g(lhs) + " vs " + g(rhs));
    }
  }
  c.note("largest difference " + g(worst));
  return c;
}

// 6 -----------------------------------------------------------------------------------
Criterion noop_action() {
  Criterion c;
  for (const char* name : {"wall-discrete", "wall-continuous"}) {
    const ActionTheory th = bundled(name);
    for (int b = 0; b <= 13; ++b) {
      const Formula phi = parse_query(th, "h <= " + std::to_string(b));
      const InitialBeliefExpr after = regress_belief(th, phi, parse_actions(th, "grasp(obj5)"));
      const InitialBeliefExpr before = regress_belief(th, phi, Situation{});
      c.check(after.condition == before.condition && after.likelihood == before.likelihood &&
                  after.prior == before.prior && after.gamma_condition == before.gamma_condition,
              std::string(name) + " b=" + std::to_string(b) + ": regressed " + to_string(after) +
                  " differs from " + to_string(before));
      const EvalResult ra = eval_belief(th, after);
      const EvalResult rb = eval_belief(th, before);
      c.check(ra.value.identical(rb.value), std::string(name) + " b=" + std::to_string(b) +
                                                ": values " + ra.value.to_string() + " and " +
                                                rb.value.to_string());
    }
  }
  return c;
}

// 7 -----------------------------------------------------------------------------------
Criterion conjugate() {
  Criterion c;
  const double mu1 = 5, var1 = 4, mu2 = 0, var2 = 1, z = 6;
  const double lo = mu1 - 8 * std::sqrt(var1);
  const double hi = mu1 + 8 * std::sqrt(var1);
  std::ostringstream src;
  src << "fluent h : real in [" << lo << ", " << hi << "]\n"
      << "sensor sonar(z: real) on h { gauss(z - h, " << mu2 << ", " << var2 << ") }\n"
      << "prior { gauss(h, " << mu1 << ", " << var1 << ") }\n";
  const ActionTheory th = load_theory(src.str());

  // Product rule: the reading is h + noise with noise ~ N(mu2, var2).
  const double post_var = 1.0 / (1.0 / var1 + 1.0 / var2);
  const double post_mean = post_var * (mu1 / var1 + (z - mu2) / var2);

  const std::size_t n = 6401;  // odd, for Simpson's rule
  std::vector<Number> grid;
  for (std::size_t i = 0; i < n; ++i) grid.push_back(Number::exact_from_double(lo + (hi - lo) * i / (n - 1)));
  const DensityProfile p =
      density_profile(th, parse_actions(th, "sonar(" + g(z) + ")"), "h", grid);
  const double step = (hi - lo) / (n - 1);
  double m0 = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double x = grid[i].to_double();
    const double d = p.points[i].density / p.gamma;
    m0 += w * d;
    m1 += w * d * x;
    m2 += w * d * x * x;
  }
  m0 *= step / 3;
  m1 *= step / 3;
  m2 *= step / 3;
  const double mean = m1 / m0;
  const double var = m2 / m0 - mean * mean;
  c.check(std::abs(mean - post_mean) <= kConjugateRelTol * std::abs(post_mean),
          "posterior mean " + g(mean) + ", closed form " + g(post_mean));
  c.check(std::abs(var - post_var) <= kConjugateRelTol * post_var,
          "posterior variance " + g(var) + ", closed form " + g(post_var));
  c.note("mean " + g(mean) + " (closed form " + g(post_mean) + "), variance " + g(var) +
         " (closed form " + g(post_var) + ")");

  // Sampling cross-check of the closed form.
  const Situation alpha = parse_actions(th, "sonar(" + g(z) + ")");
  for (double k : {0.0, 1.0}) {
    const double cut = post_mean + k * std::sqrt(post_var);
    const OracleEstimate o = mc_oracle(th, parse_query(th, "h <= " + g(cut)), alpha, 200000, 5);
    c.check(std::abs(o.estimate - Phi(k)) <= kSigmas * o.stderr_,
            "oracle P(h <= " + g(cut) + ") = " + g(o.estimate) + " +- " + g(o.stderr_) +
                ", closed form " + g(Phi(k)));
  }
  return c;
}

// 8 -----------------------------------------------------------------------------------
struct PropertyStats {
  int theories = 0;
  int queries = 0;
  int oracle_checks = 0;
  int roundtrips = 0;
};

void properties_for(const ActionTheory& th, const std::vector<fuzz::Query>& queries,
                    const std::string& silent, const std::string& label, Criterion& c,
                    PropertyStats& st, std::uint64_t seed) {
  const bool discrete = th.all_discrete();
  const double tol = discrete ? 0.0 : kPropertyTol;
  auto value = [&](const Formula& phi, const Situation& a) {
    return belief(th, phi, a, kPropertyEvalTol).value;
  };
  auto close = [&](const Number& a, const Number& b, double t) {
    if (discrete) return a.is_exact() && b.is_exact() && compare(a, b) == 0;
    return std::abs(a.to_double() - b.to_double()) <= t;
  };
  ++st.theories;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const fuzz::Query& q = queries[qi];
    const std::string where = label + " query " + std::to_string(qi) + " Bel(" + q.formula +
                              ", [" + q.actions + "])";
    try {
      const Formula phi = parse_query(th, q.formula);
      const Formula psi = parse_query(th, queries[(qi + 1) % queries.size()].formula);
      const Situation alpha = parse_actions(th, q.actions);
      ++st.queries;

      // Round trip of the query text.
      c.check(parse_query(th, to_string(phi)) == phi, where + ": print/parse round trip");
      ++st.roundtrips;

      // Do-freeness.
      const InitialBeliefExpr e = regress_belief(th, phi, alpha);
      c.check(!mentions_do(e.condition) && !mentions_do(e.gamma_condition) &&
                  !mentions_do(e.likelihood) && !mentions_do(e.prior),
              where + ": regression output mentions do");
      c.check(!mentions_do(regress_projection(th, phi, alpha)),
              where + ": projection output mentions do");

      // Normalization.
      const Number one = value(truth(true), alpha);
      c.check(close(one, Number(1), tol), where + ": Bel(true) = " + one.to_string());

      // Additivity and monotonicity.
      const Number a = value(phi, alpha);
      const Number b = value(psi, alpha);
      const Number both = value(conj({phi, psi}), alpha);
      const Number either = value(disj({phi, psi}), alpha);
      c.check(close(either + both, a + b, 2 * tol),
              where + ": additivity " + g((either + both - a - b).to_double()));
      c.check(both.to_double() <= b.to_double() + tol, where + ": monotonicity");

      // Silent sensor at the end and at the front.
      Situation tail = alpha;
      tail.actions.push_back(action(silent, {constant(Number(0))}));
      Situation head;
      head.actions.push_back(action(silent, {constant(Number(3))}));
      for (const auto& t : alpha.actions) head.actions.push_back(t);
      c.check(close(value(phi, tail), a, tol), where + ": silent sensor appended changes belief");
      c.check(close(value(phi, head), a, tol), where + ": silent sensor prepended changes belief");

      // Sampling oracle.
      const OracleEstimate o = mc_oracle(th, phi, alpha, kOracleSamplesProperty, seed + qi);
      ++st.oracle_checks;
      c.check(std::abs(o.estimate - a.to_double()) <= kSigmas * o.stderr_ + kPropertyTol,
              where + ": engine " + g(a.to_double()) + " vs oracle " + g(o.estimate) + " +- " +
                  g(o.stderr_));
    } catch (const std::exception& ex) {
      c.check(false, where + ": " + ex.what());
    }
  }
}

Criterion property_suites() {
  Criterion c;
  PropertyStats st;
  const std::vector<fuzz::Query> discrete_q = {
      {"h <= 5", "sonar(5)"}, {"h = 3 or h >= 9", "fwd(1); sonar(4)"},
      {"2 <= h <= 7", "sonar(6); fwd(-2); sonar(8)"}, {"not (h = 4)", "fwd(-3)"}};
  const std::vector<fuzz::Query> continuous_q = {
      {"4 <= h <= 6", "sonar(5)"}, {"h <= 3 or h > 8", "fwd(2); sonar(4)"},
      {"h = 0", "fwd(4); sonar(1)"}, {"not (h < 6)", "fwd(-2); sonar(8)"}};
  const std::string silent_src = "sensor silent(z: real) on h { 1/2 }\n";
  properties_for(load_theory(*bundled_theory("wall-discrete") + silent_src), discrete_q, "silent",
                 "wall-discrete", c, st, 100);
  properties_for(load_theory(*bundled_theory("wall-continuous") + silent_src), continuous_q,
                 "silent", "wall-continuous", c, st, 200);

  for (int i = 0; i < kFuzzedTheories; ++i) {
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(i);
    const fuzz::Scenario sc = fuzz::random_scenario(seed);
    const std::string label = "fuzzed theory " + std::to_string(seed);
    ActionTheory th;
    try {
      th = load_theory(sc.source);
    } catch (const std::exception& ex) {
      c.check(false, label + " does not load: " + ex.what() + "\n" + sc.source);
      continue;
    }
    properties_for(th, sc.queries, sc.silent_sensor, label, c, st, seed * 7);
  }

  // Syntax round trip on random trees.
  fuzz::TreeGen gen(4242);
  Scope scope;
  scope.fluents = {"h", "g"};
  scope.variables = {"x", "y"};
  for (int i = 0; i < 300; ++i) {
    const Term t = gen.term(4);
    const Formula f = gen.formula(3);
    try {
      c.check(parse_term(to_string(t), scope) == t, "term round trip: " + to_string(t));
      c.check(parse_formula(to_string(f), scope) == f, "formula round trip: " + to_string(f));
    } catch (const std::exception& ex) {
      c.check(false, "round trip threw on " + to_string(f) + ": " + ex.what());
    }
    st.roundtrips += 2;
  }
  c.note(std::to_string(st.theories) + " theories, " + std::to_string(st.queries) + " queries, " +
         std::to_string(st.oracle_checks) + " oracle comparisons, " +
         std::to_string(st.roundtrips) + " round trips");
  return c;
}

// 9 -----------------------------------------------------------------------------------
std::vector<std::pair<double, double>> read_csv(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return rows;
}

Criterion figure_profiles() {
  Criterion c;
  const auto dir = std::filesystem::temp_directory_path() / "beliefreg-acceptance";
  std::filesystem::create_directories(dir);
  QueryRequest req;
  req.theory = "wall-continuous";
  req.mode = QueryMode::Density;
  req.format = OutputFormat::Csv;
  req.after = "sonar(5); sonar(5)";
  req.grid = "0:15:301";
  req.out = (dir / "profile").string();
  const QueryReport rep = run_query(req);
  c.check(rep.exit_code == 0 && rep.files.size() == 3,
          "density run exited " + std::to_string(rep.exit_code) + ": " + rep.errors);
  if (!c.ok) return c;
  std::vector<double> at5;
  for (const auto& f : rep.files) {
    for (const auto& [v, d] : read_csv(f)) {
      if (v == 5.0) at5.push_back(d);
    }
  }
  c.check(at5.size() == 3, "grid point 5 missing");
  if (at5.size() == 3) {
    c.check(at5[0] < at5[1] && at5[1] < at5[2],
            "density at 5: " + g(at5[0]) + ", " + g(at5[1]) + ", " + g(at5[2]));
    c.note("normalized density at 5: " + g(at5[0]) + " < " + g(at5[1]) + " < " + g(at5[2]));
  }
  for (const auto& [v, d] : read_csv(rep.files[0])) {
    const double want = (v >= 2.0 && v <= 12.0) ? 0.1 : 0.0;
    c.check(std::abs(d - want) <= 1e-12, "prior density at " + g(v) + " is " + g(d));
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
      {"discrete goldens", discrete_goldens},
      {"continuous goldens", continuous_goldens},
      {"intro example", intro_example},
      {"posterior is prior times error", proposition_one},
      {"shift property", shift_property},
      {"no-op action", noop_action},
      {"conjugate Gaussian", conjugate},
      {"property suites", property_suites},
      {"density profiles", figure_profiles},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& ex) {
      c.check(false, std::string("exception: ") + ex.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (c.ok ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << "  ("
              << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s)\n";
    std::cout.unsetf(std::ios::fixed);
    std::size_t shown = 0;
    for (const auto& n : c.notes) {
      if (++shown > 25) {
        std::cout << "      ... " << c.notes.size() - 25 << " more\n";
        break;
      }
      std::cout << "      " << n << "\n";
    }
    if (!c.ok) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
