// Numeric evaluation: exact summation for finite domains, breakpoint-aware
// adaptive quadrature for real-valued fluents, a Monte Carlo forward
// simulation oracle, and posterior density profiles.

#ifndef BELIEFREG_EVALUATE_HPP
#define BELIEFREG_EVALUATE_HPP

#include "beliefreg/ast.hpp"
#include "beliefreg/regression.hpp"
#include "beliefreg/theory.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace beliefreg {

/// Fluent name -> value. Value variables x_f are accepted as well.
using Valuation = std::map<std::string, Number>;

/// Exact where possible; real comparisons use a 1e-12 relative tolerance for
/// equality. Throws EvalError on division by zero, unbound names or an
/// existential that cannot be decided.
Number eval_term_at(const Term& t, const Valuation& v);
bool eval_formula_at(const Formula& phi, const Valuation& v);

struct EvalResult {
  Number value;
  Number numerator;
  Number gamma;
  /// Absolute error estimate of `value`; 0 for exact results.
  double error = 0.0;
  /// Valuations enumerated (discrete) or integration cells visited.
  std::size_t cells = 0;
  /// Conditions worth reporting: "gamma-near-zero", "non-convergent",
  /// "precondition-sensitive", "unsupported-existential", or piecewise
  /// diagnostics.
  std::vector<std::string> flags;

  bool exact() const { return value.is_exact(); }
};

/// All fluents finite: exact enumeration. Throws UndefinedBelief when the
/// normalization is 0.
EvalResult eval_belief_discrete(const ActionTheory& theory, const InitialBeliefExpr& e);

/// At least one real fluent: discrete fluents are enumerated, real ones
/// integrated with per-cell adaptive quadrature. Throws UndefinedBelief when
/// gamma <= tol.
EvalResult eval_belief_continuous(const ActionTheory& theory, const InitialBeliefExpr& e,
                                  double tol = 1e-6);

/// Dispatches on the theory's domains.
EvalResult eval_belief(const ActionTheory& theory, const InitialBeliefExpr& e, double tol = 1e-6);

/// Regression followed by evaluation.
EvalResult belief(const ActionTheory& theory, const Formula& phi, const Situation& alpha,
                  double tol = 1e-6);

/// Mass of the prior, i.e. the normalization before any action.
EvalResult prior_mass(const ActionTheory& theory, double tol = 1e-6);

struct OracleEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Self-normalized importance-sampling estimate of Bel(phi, do(alpha, S0))
/// by forward simulation. Deterministic in `seed`. Throws UndefinedBelief
/// when every sample has weight 0.
OracleEstimate mc_oracle(const ActionTheory& theory, const Formula& phi, const Situation& alpha,
                         std::size_t n, std::uint64_t seed);

struct DensityPoint {
  Number value;
  /// Unnormalized posterior density (or weight, for a discrete fluent).
  double density = 0.0;
};

struct DensityProfile {
  std::vector<DensityPoint> points;
  /// Normalization; density / gamma integrates to 1.
  double gamma = 0.0;
  std::vector<std::string> flags;
};

/// Posterior density of `fluent` after alpha at each grid value.
DensityProfile density_profile(const ActionTheory& theory, const Situation& alpha,
                               const std::string& fluent, const std::vector<Number>& grid,
                               double tol = 1e-9);

}  // namespace beliefreg

#endif  // BELIEFREG_EVALUATE_HPP
