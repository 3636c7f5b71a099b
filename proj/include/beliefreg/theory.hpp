// Action theories: fluent domains, actions with successor-state effects and
// preconditions, sensors with error models, and the initial prior.
//
// Source syntax (line oriented, `#` or `//` comments):
//
//   fluent h : int in [2, 11]          # or: real in [2, 12], set {1, 2, 5}
//   action fwd(z: real) requires z >= -20 { h := max(0, h - z) }
//   sensor sonar(z: real) on h { if |h - z| <= 1 then 1/3 else 0 }
//   prior { if 2 <= h and h <= 11 then .1 else 0 }
//
// Parameters default to `real`; `int` and `object` are also accepted. An
// object parameter receives uninterpreted constants such as obj5 and may not
// be used arithmetically. Real bounds may be `inf` / `-inf`.

#ifndef BELIEFREG_THEORY_HPP
#define BELIEFREG_THEORY_HPP

#include "beliefreg/ast.hpp"
#include "beliefreg/errors.hpp"
#include "beliefreg/parser.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beliefreg {

enum class DomainKind { IntRange, FiniteSet, RealInterval };

struct FluentDomain {
  DomainKind kind = DomainKind::IntRange;
  Number lo;  // IntRange and RealInterval; RealInterval bounds may be +-inf
  Number hi;
  std::vector<Number> values;  // FiniteSet, sorted and unique

  bool is_discrete() const { return kind != DomainKind::RealInterval; }
  /// All values of a discrete domain in increasing order.
  std::vector<Number> enumerate() const;
  std::size_t size() const;  // discrete only
  bool contains(const Number& v) const;
  std::string to_string() const;
};

struct FluentDecl {
  std::string name;
  FluentDomain domain;
  SourcePos pos;
};

enum class ParamSort { Real, Int, Object };

struct Param {
  std::string name;
  ParamSort sort = ParamSort::Real;
};

struct ActionDecl {
  std::string name;
  std::vector<Param> params;
  /// Effect e(z, now) per changed fluent, in source order.
  std::vector<std::pair<std::string, Term>> effects;
  Formula precondition = truth(true);
  SourcePos pos;

  const Term* effect_for(const std::string& fluent) const;
};

struct SensorDecl {
  std::string name;
  Param reading;
  std::string fluent;
  /// Err(z, f(now)): mentions the reading variable and the target fluent.
  Term error;
  SourcePos pos;
};

struct ActionTheory {
  std::vector<FluentDecl> fluents;
  std::vector<ActionDecl> actions;
  std::vector<SensorDecl> sensors;
  /// Initial weight or density over the value variables x_f.
  Term prior;
  SourcePos prior_pos;

  const FluentDecl* find_fluent(std::string_view name) const;
  const ActionDecl* find_action(std::string_view name) const;
  const SensorDecl* find_sensor(std::string_view name) const;

  bool all_discrete() const;
  /// Parsing scope in which the declared fluents are recognized.
  Scope scope() const;
  /// Value variables, one per fluent in declaration order.
  std::vector<std::string> value_vars() const;
};

/// Name of the value variable standing for the initial value of `fluent`.
std::string value_var(std::string_view fluent);

/// Parses theory source. Throws ParseError carrying every syntax and
/// declaration diagnostic found.
ActionTheory parse_theory(std::string_view source);

/// Numeric checks: prior and error models nonnegative on a sample grid,
/// prior mass finite and positive. Returns the diagnostics found.
std::vector<Diagnostic> validate_theory(const ActionTheory& theory);

/// parse_theory followed by validate_theory; throws ParseError when either
/// reports anything.
ActionTheory load_theory(std::string_view source);

/// Checks a ground action against its declaration. Throws DeclarationError.
void check_action(const ActionTheory& theory, const Term& action_term);

/// Parses "a1(..); a2(..)" and checks each action against the theory.
Situation parse_actions(const ActionTheory& theory, std::string_view text);

/// Parses a query formula over the theory's fluents.
Formula parse_query(const ActionTheory& theory, std::string_view text);

bool is_sensing(const ActionTheory& theory, const Term& action_term);

/// Right-hand side of the successor-state axiom of `fluent` for a ground
/// action, with parameters instantiated; f(now) for the frame case.
Term ssa_rhs(const ActionTheory& theory, const std::string& fluent, const Term& action_term);

/// Instantiated precondition of a ground action; true for sensors.
Formula precondition_of(const ActionTheory& theory, const Term& action_term);

/// Err(reading, x_f) for a sensing action, the constant 1 otherwise.
Term likelihood_of(const ActionTheory& theory, const Term& action_term);

/// Like likelihood_of but with the fluent left as f(now).
Term likelihood_at_now(const ActionTheory& theory, const Term& action_term);

}  // namespace beliefreg

#endif  // BELIEFREG_THEORY_HPP
