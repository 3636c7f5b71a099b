// Regression of projection and belief queries to the initial situation.

#ifndef BELIEFREG_REGRESSION_HPP
#define BELIEFREG_REGRESSION_HPP

#include "beliefreg/ast.hpp"
#include "beliefreg/theory.hpp"

#include <string>
#include <vector>

namespace beliefreg {

struct TraceStep {
  std::string rule;
  std::string input;
  std::string output;
};

struct RegressionTrace {
  std::vector<TraceStep> steps;

  /// Numbered derivation, one step per line: "(i) rule: input => output".
  std::string to_text() const;
};

/// P(x, condition, situation) together with the sensing factors already
/// peeled off, stated over fluents at `now`.
struct DensityPseudoTerm {
  std::vector<std::string> vars;
  Formula condition;
  Situation situation;
  Term likelihood = constant(1);
};

std::string to_string(const DensityPseudoTerm& d);

struct DensityStep {
  /// Factor contributed by the peeled action: Err(z, f(now)) for a sensor,
  /// 1 for a physical action.
  Term factor;
  DensityPseudoTerm next;
  std::vector<TraceStep> steps;
};

/// Peels the last action off d.situation. Throws DeclarationError for an
/// undeclared action and std::invalid_argument for an empty situation.
DensityStep step_density(const ActionTheory& theory, const DensityPseudoTerm& d);

/// The regressed belief: sum or integral over the value variables of
/// likelihood * prior * [condition], normalized by the same with
/// gamma_condition.
struct InitialBeliefExpr {
  std::vector<std::string> vars;
  std::vector<FluentDomain> domains;
  Term likelihood = constant(1);
  Term prior;
  Formula condition;
  Formula gamma_condition;
  /// Some action on the path has a nontrivial precondition.
  bool precondition_sensitive = false;
  RegressionTrace trace;
};

std::string to_string(const InitialBeliefExpr& e);

/// Replaces f(do(a, s)) by the instantiated successor-state right-hand side,
/// recursively, and folds the result.
Term regress_term(const ActionTheory& theory, const Term& t);

/// Homomorphic regression of a formula; Poss atoms are replaced by the
/// instantiated precondition.
Formula regress_formula(const ActionTheory& theory, const Formula& phi);

/// Regression of Bel(phi, do(alpha, S0)). phi is situation-suppressed.
InitialBeliefExpr regress_belief(const ActionTheory& theory, const Formula& phi,
                                 const Situation& alpha);

/// R[phi[do(alpha, S0)]], a formula about S0 only.
Formula regress_projection(const ActionTheory& theory, const Formula& phi, const Situation& alpha);

}  // namespace beliefreg

#endif  // BELIEFREG_REGRESSION_HPP
