// Breakpoint-aware nested integration over real-valued value variables.
// Not installed.

#ifndef BELIEFREG_INTEGRATOR_HPP
#define BELIEFREG_INTEGRATOR_HPP

#include "beliefreg/ast.hpp"
#include "beliefreg/quadrature.hpp"
#include "beliefreg/theory.hpp"
#include "compile.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace beliefreg::detail {

struct Env {
  std::map<std::string, Number> vars;
  std::map<std::string, Number> fluents;
};

Number eval_exact(const Term& t, const Env& env);
bool eval_exact(const Formula& f, const Env& env);

/// Integrates `weight` over the box of real domains, once restricted to
/// `condition` and once to `gamma_condition`. The domain of each variable is
/// cut at every root of a guard or condition atom, so the integrand is smooth
/// and both indicators are constant inside each cell.
class Integrator {
 public:
  struct Result {
    Number numerator;
    Number gamma;
    Vec2 error{0, 0};
    std::size_t cells = 0;
    std::vector<std::string> flags;
  };

  Integrator(std::vector<std::string> vars, std::vector<FluentDomain> domains, const Term& weight,
             const Formula& condition, const Formula& gamma_condition, double tol);

  Result run();

 private:
  struct Switch {
    RealFn fn;
    std::size_t dim = 0;  // deepest variable it depends on
    bool linear = false;
    std::vector<Rational> coeffs;  // per variable, when linear
    Rational constant;
  };
  struct CompiledPiece {
    BoolFn guard;
    RealFn body;
    std::optional<Rational> exact_constant;
  };

  std::vector<Number> breakpoints(std::size_t k, std::vector<double>& x) const;
  // `top` is false inside the integrand of an outer dimension.
  Vec2 integrate_dim(std::size_t k, std::vector<double>& x, double tol, Result& acc, bool top);
  Vec2 cell_last(std::size_t k, std::vector<double>& x, const Number& lo, const Number& hi,
                 double tol, Result& acc, bool top);
  Number const_weight() const { return eval_exact(weight_term_, Env{}); }

  std::vector<std::string> vars_;
  std::vector<FluentDomain> domains_;
  Slots slots_;
  Term weight_term_;
  std::vector<std::string> diagnostics_;
  RealFn weight_;
  BoolFn condition_;
  BoolFn gamma_condition_;
  std::vector<CompiledPiece> pieces_;
  std::vector<Switch> switches_;
  Rational exact_sum_[2];
  bool all_exact_ = true;
  double tol_;
};

}  // namespace beliefreg::detail

#endif  // BELIEFREG_INTEGRATOR_HPP
