// Normalization and simplification of terms and formulas.

#ifndef BELIEFREG_SIMPLIFY_HPP
#define BELIEFREG_SIMPLIFY_HPP

#include "beliefreg/ast.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace beliefreg {

struct FoldOptions {
  /// max(a, b) <= c  ->  a <= c and b <= c, and the other monotone splits.
  bool split_minmax_bounds = false;
  /// An atom linear in a single variable with exact coefficients becomes
  /// `v rel c`.
  bool isolate_linear = false;
};

/// Constant folding (exact results only) and algebraic identities.
Term fold(const Term& t);
/// Term folding on every atom plus boolean simplification.
Formula fold(const Formula& f, const FoldOptions& options = {});

/// Rewrites each atom in which a fluent occurs other than as a direct
/// argument of an equality into exists u (f = u and atom[f := u]). Fresh
/// names avoid every name in the formula and in `reserved`.
Formula normalize_fluent_atoms(const Formula& phi, const std::set<std::string>& reserved = {});

/// exists u (... and u = t and ...) -> (...)[u := t] when u is not free in t,
/// to a fixpoint. Other existentials are left in place.
Formula one_point_elim(const Formula& phi);

/// True iff an existential quantifier remains.
bool has_exists(const Formula& phi);

/// a_1 v_1 + ... + a_n v_n + c with exact coefficients.
struct LinearForm {
  std::map<std::string, Rational> coeffs;
  Rational constant;
};

/// Linear form of a term built from exact constants, variables, +, -, unary
/// minus, multiplication by a constant and division by a nonzero constant.
std::optional<LinearForm> linear_form(const Term& t);

struct Piece {
  Formula guard;
  Term body;
};

/// Guarded, guard-free pieces; the guards partition the space of values.
struct PiecewiseTerm {
  std::vector<Piece> pieces;
  std::vector<std::string> diagnostics;
};

/// Hoists max/min/abs and if-then-else into guards. Throws EvalError when the
/// expansion exceeds `max_pieces`.
PiecewiseTerm to_piecewise(const Term& t, std::size_t max_pieces = 10000);

/// Formula equivalent to `f` whose atoms contain no max/min/abs or
/// conditional terms.
Formula guard_free(const Formula& f, std::size_t max_pieces = 10000);

/// Every comparison atom in the formula, in order of occurrence.
std::vector<Formula> atoms_of(const Formula& f);

}  // namespace beliefreg

#endif  // BELIEFREG_SIMPLIFY_HPP
