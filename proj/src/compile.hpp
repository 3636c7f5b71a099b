// Closure compilation of terms and formulas for fast real-valued evaluation.
// Not installed.

#ifndef BELIEFREG_COMPILE_HPP
#define BELIEFREG_COMPILE_HPP

#include "beliefreg/ast.hpp"

#include <functional>
#include <map>
#include <string>

namespace beliefreg::detail {

/// Argument slots: variables by name, and fluents without actions by name.
struct Slots {
  std::map<std::string, int> vars;
  std::map<std::string, int> fluents;
};

using RealFn = std::function<double(const double*)>;
using BoolFn = std::function<bool(const double*)>;

/// Throws EvalError for unbound names, action terms and existentials.
RealFn compile(const Term& t, const Slots& slots);
BoolFn compile(const Formula& f, const Slots& slots);

/// Equality used whenever a comparison is evaluated in floating point.
bool approx_equal(double a, double b);

}  // namespace beliefreg::detail

#endif  // BELIEFREG_COMPILE_HPP
