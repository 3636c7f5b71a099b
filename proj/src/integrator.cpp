#include "integrator.hpp"

#include "beliefreg/errors.hpp"
#include "beliefreg/printer.hpp"
#include "beliefreg/simplify.hpp"

#include <algorithm>
#include <cmath>

namespace beliefreg::detail {

namespace {

void add_flag(std::vector<std::string>& flags, const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

double cell_midpoint(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return 0.0;
  if (std::isinf(a)) return b - 1.0;
  if (std::isinf(b)) return a + 1.0;
  return 0.5 * (a + b);
}

constexpr int kRootSamples = 400;

}  // namespace

Integrator::Integrator(std::vector<std::string> vars, std::vector<FluentDomain> domains,
                       const Term& weight, const Formula& condition,
                       const Formula& gamma_condition, double tol)
    : vars_(std::move(vars)), domains_(std::move(domains)), weight_term_(weight), tol_(tol) {
  for (std::size_t i = 0; i < vars_.size(); ++i) slots_.vars[vars_[i]] = static_cast<int>(i);
  weight_ = compile(weight, slots_);
  condition_ = compile(condition, slots_);
  gamma_condition_ = compile(gamma_condition, slots_);

  const PiecewiseTerm pw = to_piecewise(weight);
  std::vector<Formula> atoms;
  for (const auto& p : pw.pieces) {
    CompiledPiece cp{compile(p.guard, slots_), compile(p.body, slots_), std::nullopt};
    if (const auto* c = p.body.as<node::Const>(); c && c->value.is_exact()) {
      cp.exact_constant = c->value.exact();
    }
    pieces_.push_back(std::move(cp));
    for (auto& a : atoms_of(p.guard)) atoms.push_back(std::move(a));
  }
  for (auto& a : atoms_of(guard_free(condition))) atoms.push_back(std::move(a));
  for (auto& a : atoms_of(guard_free(gamma_condition))) atoms.push_back(std::move(a));

  std::vector<Term> seen;
  for (const auto& atom : atoms) {
    const auto& c = *atom.as<node::Cmp>();
    Term d = fold(apply(Op::Sub, {c.lhs, c.rhs}));
    if (d.kind() == Term::Kind::Const) continue;
    if (std::find(seen.begin(), seen.end(), d) != seen.end()) continue;
    seen.push_back(d);
    Switch s;
    s.fn = compile(d, slots_);
    for (const auto& name : free_vars(d)) s.dim = std::max<std::size_t>(s.dim, slots_.vars.at(name));
    if (auto lf = linear_form(d)) {
      s.linear = true;
      s.coeffs.assign(vars_.size(), Rational(0));
      for (const auto& [name, k] : lf->coeffs) s.coeffs[slots_.vars.at(name)] = k;
      s.constant = lf->constant;
    }
    switches_.push_back(std::move(s));
  }
  diagnostics_ = pw.diagnostics;
}

std::vector<Number> Integrator::breakpoints(std::size_t k, std::vector<double>& x) const {
  const Number lo = domains_[k].lo;
  const Number hi = domains_[k].hi;
  std::vector<Number> pts{lo, hi};
  auto add = [&](const Number& r) {
    if (lo < r && r < hi) pts.push_back(r);
  };
  const double flo = std::isfinite(lo.to_double()) ? lo.to_double() : -1e4;
  const double fhi = std::isfinite(hi.to_double()) ? hi.to_double() : 1e4;
  for (const auto& s : switches_) {
    if (s.dim != k) continue;
    if (s.linear) {
      const Rational& a = s.coeffs[k];
      if (a.is_zero()) continue;
      bool outer = false;
      for (std::size_t j = 0; j < k; ++j) outer = outer || !s.coeffs[j].is_zero();
      if (!outer) {
        add(Number(Rational(-s.constant / a)));
      } else {
        double b = s.constant.convert_to<double>();
        for (std::size_t j = 0; j < k; ++j) b += s.coeffs[j].convert_to<double>() * x[j];
        add(Number(-b / a.convert_to<double>()));
      }
      continue;
    }
    // Nonlinear boundary: sign changes on a sample grid, refined by bisection.
    auto eval = [&](double t) {
      x[k] = t;
      try {
        return s.fn(x.data());
      } catch (const EvalError&) {
        return std::nan("");
      }
    };
    double t_prev = flo;
    double f_prev = eval(t_prev);
    for (int i = 1; i <= kRootSamples; ++i) {
      const double t = flo + (fhi - flo) * i / kRootSamples;
      const double f = eval(t);
      if (f == 0.0) {
        add(Number(t));
      } else if (std::isfinite(f) && std::isfinite(f_prev) && f_prev != 0.0 &&
                 (f < 0.0) != (f_prev < 0.0)) {
        double a = t_prev, b = t, fa = f_prev;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
          const double m = 0.5 * (a + b);
          const double fm = eval(m);
          if (!std::isfinite(fm) || fm == 0.0) {
            a = b = m;
            break;
          }
          if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        add(Number(0.5 * (a + b)));
      }
      t_prev = t;
      f_prev = f;
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<Number> out;
  for (const auto& p : pts) {
    if (!out.empty()) {
      const Number& q = out.back();
      if (compare(p, q) == 0) continue;
      if ((!p.is_exact() || !q.is_exact()) && approx_equal(p.to_double(), q.to_double())) continue;
    }
    out.push_back(p);
  }
  return out;
}

Vec2 Integrator::cell_last(std::size_t k, std::vector<double>& x, const Number& lo,
                           const Number& hi, double tol, Result& acc, bool top) {
  const double a = lo.to_double();
  const double b = hi.to_double();
  if (!(a < b)) return {0, 0};
  x[k] = cell_midpoint(a, b);
  const bool cn = condition_(x.data());
  const bool cg = gamma_condition_(x.data());
  if (!cn && !cg) return {0, 0};
  const CompiledPiece* piece = nullptr;
  for (const auto& p : pieces_) {
    bool holds = false;
    try {
      holds = p.guard(x.data());
    } catch (const EvalError&) {
      holds = false;
    }
    if (holds) {
      piece = &p;
      break;
    }
  }
  if (top) ++acc.cells;
  if (top && vars_.size() == 1 && piece && piece->exact_constant && lo.is_exact() && hi.is_exact()) {
    const Rational v = *piece->exact_constant * (hi.exact() - lo.exact());
    if (cn) exact_sum_[0] += v;
    if (cg) exact_sum_[1] += v;
    return {0, 0};
  }
  if (piece && piece->exact_constant && piece->exact_constant->is_zero()) return {0, 0};
  const RealFn& body = piece ? piece->body : weight_;
  auto f = [&](double t) {
    x[k] = t;
    const double w = body(x.data());
    return Vec2{cn ? w : 0.0, cg ? w : 0.0};
  };
  const QuadResult q = integrate(f, a, b, tol, top ? 2000 : 300);
  all_exact_ = false;
  if (!std::isfinite(q.value[0]) || !std::isfinite(q.value[1])) {
    throw EvalError("integrand is not integrable on [" + lo.to_string() + ", " + hi.to_string() +
                    "]");
  }
  if (!q.converged) add_flag(acc.flags, "non-convergent");
  if (top) {
    acc.error[0] += q.error[0];
    acc.error[1] += q.error[1];
  }
  return q.value;
}

Vec2 Integrator::integrate_dim(std::size_t k, std::vector<double>& x, double tol, Result& acc,
                               bool top) {
  const std::vector<Number> pts = breakpoints(k, x);
  const std::size_t ncells = pts.size() - 1;
  const double tol_cell = tol / static_cast<double>(std::max<std::size_t>(ncells, 1));
  Vec2 total{0, 0};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Vec2 v;
    if (k + 1 == vars_.size()) {
      v = cell_last(k, x, pts[i], pts[i + 1], tol_cell, acc, top);
    } else {
      const double a = pts[i].to_double();
      const double b = pts[i + 1].to_double();
      if (!(a < b)) continue;
      const double width = std::isfinite(b - a) ? b - a : 1.0;
      const double tol_inner = 0.1 * tol_cell / std::max(1.0, width);
      auto f = [&, k](double t) {
        std::vector<double> y = x;
        y[k] = t;
        return integrate_dim(k + 1, y, tol_inner, acc, false);
      };
      const QuadResult q = integrate(f, a, b, tol_cell, top ? 400 : 100);
      all_exact_ = false;
      if (!q.converged) add_flag(acc.flags, "non-convergent");
      if (top) {
        ++acc.cells;
        acc.error[0] += q.error[0];
        acc.error[1] += q.error[1];
      }
      v = q.value;
    }
    total[0] += v[0];
    total[1] += v[1];
  }
  return total;
}

Integrator::Result Integrator::run() {
  Result acc;
  for (const auto& d : diagnostics_) add_flag(acc.flags, d);
  if (vars_.empty()) {
    const Number w = const_weight();
    acc.numerator = condition_(nullptr) ? w : Number(0);
    acc.gamma = gamma_condition_(nullptr) ? w : Number(0);
    acc.cells = 1;
    return acc;
  }
  std::vector<double> x(vars_.size(), 0.0);
  exact_sum_[0] = exact_sum_[1] = Rational(0);
  all_exact_ = true;
  const Vec2 v = integrate_dim(0, x, tol_, acc, true);
  if (all_exact_) {
    acc.numerator = Number(exact_sum_[0]);
    acc.gamma = Number(exact_sum_[1]);
  } else {
    acc.numerator = Number(v[0] + exact_sum_[0].convert_to<double>());
    acc.gamma = Number(v[1] + exact_sum_[1].convert_to<double>());
  }
  return acc;
}

}  // namespace beliefreg::detail
