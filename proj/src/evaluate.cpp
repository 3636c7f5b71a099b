#include "beliefreg/evaluate.hpp"

#include "beliefreg/printer.hpp"
#include "beliefreg/quadrature.hpp"
#include "beliefreg/simplify.hpp"
#include "compile.hpp"
#include "integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beliefreg {

// Exact evaluation -------------------------------------------------------------

namespace detail {

namespace {

bool compare_numbers(Rel rel, const Number& l, const Number& r) {
  if (l.is_exact() && r.is_exact()) {
    const auto c = compare(l, r);
    switch (rel) {
      case Rel::Eq: return c == 0;
      case Rel::Ne: return c != 0;
      case Rel::Lt: return c < 0;
      case Rel::Le: return c <= 0;
      case Rel::Gt: return c > 0;
      case Rel::Ge: return c >= 0;
    }
  }
  const double a = l.to_double();
  const double b = r.to_double();
  switch (rel) {
    case Rel::Eq: return approx_equal(a, b);
    case Rel::Ne: return !approx_equal(a, b);
    case Rel::Lt: return a < b;
    case Rel::Le: return a <= b;
    case Rel::Gt: return a > b;
    case Rel::Ge: return a >= b;
  }
  return false;
}

}  // namespace

Number eval_exact(const Term& t, const Env& env) {
  switch (t.kind()) {
    case Term::Kind::Const: return t.as<node::Const>()->value;
    case Term::Kind::Var: {
      const auto& name = t.as<node::Var>()->name;
      auto it = env.vars.find(name);
      if (it == env.vars.end()) throw EvalError("unbound variable '" + name + "'");
      return it->second;
    }
    case Term::Kind::Fluent: {
      const auto& f = *t.as<node::Fluent>();
      auto it = env.fluents.find(f.name);
      if (!f.situation.actions.empty() || it == env.fluents.end()) {
        throw EvalError("cannot evaluate fluent reference " + to_string(t));
      }
      return it->second;
    }
    case Term::Kind::Apply: {
      const auto& a = *t.as<node::Apply>();
      std::vector<Number> args;
      args.reserve(a.args.size());
      for (const auto& x : a.args) args.push_back(eval_exact(x, env));
      return apply_op(a.op, args);
    }
    case Term::Kind::Ite: {
      const auto& i = *t.as<node::Ite>();
      return eval_exact(eval_exact(i.guard, env) ? i.then_term : i.else_term, env);
    }
    default: throw EvalError("cannot evaluate " + to_string(t) + " as a number");
  }
}

bool eval_exact(const Formula& f, const Env& env) {
  switch (f.kind()) {
    case Formula::Kind::Truth: return f.as<node::Truth>()->value;
    case Formula::Kind::Cmp: {
      const auto& c = *f.as<node::Cmp>();
      return compare_numbers(c.rel, eval_exact(c.lhs, env), eval_exact(c.rhs, env));
    }
    case Formula::Kind::And:
      for (const auto& p : f.as<node::And>()->parts) {
        if (!eval_exact(p, env)) return false;
      }
      return true;
    case Formula::Kind::Or:
      for (const auto& p : f.as<node::Or>()->parts) {
        if (eval_exact(p, env)) return true;
      }
      return false;
    case Formula::Kind::Not: return !eval_exact(f.as<node::Not>()->body, env);
    case Formula::Kind::Exists:
      throw EvalError("unsupported existential (not definitional): " + to_string(f));
    case Formula::Kind::Poss: throw EvalError("unregressed Poss atom: " + to_string(f));
  }
  return false;
}

}  // namespace detail

namespace {

detail::Env env_from(const Valuation& v) {
  detail::Env env;
  for (const auto& [name, value] : v) {
    env.fluents[name] = value;
    env.vars[name] = value;
    env.vars[value_var(name)] = value;
  }
  return env;
}

}  // namespace

Number eval_term_at(const Term& t, const Valuation& v) { return detail::eval_exact(t, env_from(v)); }

bool eval_formula_at(const Formula& phi, const Valuation& v) {
  return detail::eval_exact(phi, env_from(v));
}

// Discrete enumeration -----------------------------------------------------------

namespace {

constexpr std::size_t kMaxEnumeration = 5000000;

struct Masses {
  Number numerator;
  Number gamma;
  double num_error = 0.0;
  double gamma_error = 0.0;
  std::size_t cells = 0;
  std::vector<std::string> flags;
};

void add_flag(std::vector<std::string>& flags, const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

// Odometer over the product of discrete domains.
template <class Fn>
std::size_t for_each_assignment(const std::vector<std::vector<Number>>& values, Fn&& fn) {
  std::size_t total = 1;
  for (const auto& v : values) {
    if (v.empty()) return 0;
    total *= v.size();
    if (total > kMaxEnumeration) throw EvalError("finite domain product too large to enumerate");
  }
  std::vector<std::size_t> idx(values.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    fn(idx);
    for (std::size_t k = values.size(); k-- > 0;) {
      if (++idx[k] < values[k].size()) break;
      idx[k] = 0;
    }
  }
  return total;
}

Masses discrete_masses(const InitialBeliefExpr& e) {
  std::vector<std::vector<Number>> values;
  for (const auto& d : e.domains) values.push_back(d.enumerate());
  Masses m;
  m.numerator = Number(0);
  m.gamma = Number(0);
  const Term weight = fold(apply(Op::Mul, {e.likelihood, e.prior}));
  detail::Env env;
  m.cells = for_each_assignment(values, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t k = 0; k < idx.size(); ++k) env.vars[e.vars[k]] = values[k][idx[k]];
    const Number w = detail::eval_exact(weight, env);
    if (w.is_zero()) return;
    if (detail::eval_exact(e.gamma_condition, env)) m.gamma = m.gamma + w;
    if (detail::eval_exact(e.condition, env)) m.numerator = m.numerator + w;
  });
  return m;
}

Masses continuous_masses(const InitialBeliefExpr& e, double tol) {
  std::vector<std::size_t> disc, cont;
  for (std::size_t i = 0; i < e.domains.size(); ++i) {
    (e.domains[i].is_discrete() ? disc : cont).push_back(i);
  }
  std::vector<std::vector<Number>> values;
  for (auto i : disc) values.push_back(e.domains[i].enumerate());
  std::vector<std::string> cvars;
  std::vector<FluentDomain> cdoms;
  for (auto i : cont) {
    cvars.push_back(e.vars[i]);
    cdoms.push_back(e.domains[i]);
  }

  Masses m;
  m.numerator = Number(0);
  m.gamma = Number(0);
  const Term weight = fold(apply(Op::Mul, {e.likelihood, e.prior}));
  std::size_t assignments = 1;
  for (const auto& v : values) assignments *= std::max<std::size_t>(v.size(), 1);
  const double tol_each = tol / static_cast<double>(std::max<std::size_t>(assignments, 1));

  for_each_assignment(values, [&](const std::vector<std::size_t>& idx) {
    Term w = weight;
    Formula c = e.condition;
    Formula g = e.gamma_condition;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Term value = constant(values[k][idx[k]]);
      w = substitute(w, e.vars[disc[k]], value);
      c = substitute(c, e.vars[disc[k]], value);
      g = substitute(g, e.vars[disc[k]], value);
    }
    const FoldOptions opt{true, true};
    detail::Integrator integ(cvars, cdoms, fold(w), fold(c, opt), fold(g, opt), tol_each);
    const auto r = integ.run();
    m.numerator = m.numerator + r.numerator;
    m.gamma = m.gamma + r.gamma;
    m.num_error += r.error[0];
    m.gamma_error += r.error[1];
    m.cells += r.cells;
    for (const auto& f : r.flags) add_flag(m.flags, f);
  });
  return m;
}

EvalResult finish(const InitialBeliefExpr& e, Masses m, double gamma_floor) {
  EvalResult out;
  out.numerator = m.numerator;
  out.gamma = m.gamma;
  out.cells = m.cells;
  out.flags = std::move(m.flags);
  if (e.precondition_sensitive) add_flag(out.flags, "precondition-sensitive");
  const double g = m.gamma.to_double();
  if (m.gamma.is_zero() || !(g > gamma_floor)) {
    throw UndefinedBelief("belief is not defined: normalization factor is " + m.gamma.to_string());
  }
  if (g < 1e3 * gamma_floor) add_flag(out.flags, "gamma-near-zero");
  out.value = m.numerator / m.gamma;
  out.error = (m.num_error + std::abs(out.value.to_double()) * m.gamma_error) / g;
  return out;
}

}  // namespace

EvalResult eval_belief_discrete(const ActionTheory&, const InitialBeliefExpr& e) {
  for (const auto& d : e.domains) {
    if (!d.is_discrete()) throw EvalError("discrete evaluation needs finite domains only");
  }
  return finish(e, discrete_masses(e), 0.0);
}

EvalResult eval_belief_continuous(const ActionTheory&, const InitialBeliefExpr& e, double tol) {
  if (!(tol > 0.0)) throw EvalError("tolerance must be positive");
  return finish(e, continuous_masses(e, tol), tol);
}

EvalResult eval_belief(const ActionTheory& theory, const InitialBeliefExpr& e, double tol) {
  const bool discrete = std::all_of(e.domains.begin(), e.domains.end(),
                                    [](const FluentDomain& d) { return d.is_discrete(); });
  return discrete ? eval_belief_discrete(theory, e) : eval_belief_continuous(theory, e, tol);
}

EvalResult belief(const ActionTheory& theory, const Formula& phi, const Situation& alpha,
                  double tol) {
  return eval_belief(theory, regress_belief(theory, phi, alpha), tol);
}

EvalResult prior_mass(const ActionTheory& theory, double tol) {
  InitialBeliefExpr e;
  e.vars = theory.value_vars();
  for (const auto& f : theory.fluents) e.domains.push_back(f.domain);
  e.prior = theory.prior;
  e.condition = truth(true);
  e.gamma_condition = truth(true);
  const Masses m = theory.all_discrete() ? discrete_masses(e) : continuous_masses(e, tol);
  EvalResult out;
  out.value = m.gamma;
  out.numerator = m.gamma;
  out.gamma = m.gamma;
  out.error = m.gamma_error;
  out.cells = m.cells;
  out.flags = m.flags;
  return out;
}

// Monte Carlo oracle -------------------------------------------------------------

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based stream: draw j of sample i depends only on (seed, i, j).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t sample) : key_(splitmix(seed) ^ splitmix(~sample)) {}

  double uniform() {  // in (0, 1)
    const std::uint64_t bits = splitmix(key_ + 0x632BE59BD9B4E019ULL * ++counter_);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// gauss(x_f, mu, var) or gauss(mu, x_f, var) with constant mu and var.
std::optional<std::pair<double, double>> gaussian_factor(const Term& t, const std::string& v) {
  if (const auto* a = t.as<node::Apply>()) {
    if (a->op == Op::Gauss) {
      const auto* c1 = a->args[1].as<node::Const>();
      const auto* c2 = a->args[2].as<node::Const>();
      const auto* x0 = a->args[0].as<node::Var>();
      const auto* x1 = a->args[1].as<node::Var>();
      const auto* c0 = a->args[0].as<node::Const>();
      if (x0 && x0->name == v && c1 && c2) return std::pair{c1->value.to_double(), c2->value.to_double()};
      if (x1 && x1->name == v && c0 && c2) return std::pair{c0->value.to_double(), c2->value.to_double()};
    }
    for (const auto& x : a->args) {
      if (auto r = gaussian_factor(x, v)) return r;
    }
  }
  if (const auto* i = t.as<node::Ite>()) {
    if (auto r = gaussian_factor(i->then_term, v)) return r;
    return gaussian_factor(i->else_term, v);
  }
  return std::nullopt;
}

struct Proposal {
  enum Kind { Categorical, Uniform, UniformReal, Normal, Cauchy } kind = Uniform;
  std::vector<Number> values;  // Uniform over a finite set
  double lo = 0, hi = 0;       // UniformReal
  double mu = 0, sd = 1;       // Normal / Cauchy (sd is the scale)

  // Draws a value and returns its proposal density (or probability).
  double draw(CounterRng& rng, double& q) const {
    switch (kind) {
      case Uniform: {
        const std::size_t k =
            std::min(values.size() - 1, static_cast<std::size_t>(rng.uniform() * values.size()));
        q = 1.0 / static_cast<double>(values.size());
        return values[k].to_double();
      }
      case UniformReal:
        q = 1.0 / (hi - lo);
        return lo + (hi - lo) * rng.uniform();
      case Normal: {
        const double x = mu + sd * rng.normal();
        q = gauss_pdf(x, mu, sd * sd);
        return x;
      }
      case Cauchy: {
        const double x = mu + sd * std::tan(std::numbers::pi * (rng.uniform() - 0.5));
        const double d = (x - mu) / sd;
        q = 1.0 / (std::numbers::pi * sd * (1.0 + d * d));
        return x;
      }
      case Categorical: break;
    }
    q = 1.0;
    return 0.0;
  }
};

struct ActionProgram {
  bool sensing = false;
  detail::BoolFn pre;
  std::vector<detail::RealFn> effects;  // one per fluent
  detail::RealFn err;
};

}  // namespace

OracleEstimate mc_oracle(const ActionTheory& theory, const Formula& phi, const Situation& alpha,
                         std::size_t n, std::uint64_t seed) {
  if (n == 0) throw EvalError("oracle needs at least one sample");
  const std::size_t nf = theory.fluents.size();
  detail::Slots fluent_slots;
  detail::Slots var_slots;
  for (std::size_t i = 0; i < nf; ++i) {
    fluent_slots.fluents[theory.fluents[i].name] = static_cast<int>(i);
    var_slots.vars[value_var(theory.fluents[i].name)] = static_cast<int>(i);
  }
  const detail::RealFn prior = detail::compile(theory.prior, var_slots);
  const detail::BoolFn query = detail::compile(phi, fluent_slots);
  std::vector<ActionProgram> program;
  for (const auto& a : alpha.actions) {
    ActionProgram p;
    p.sensing = is_sensing(theory, a);
    if (p.sensing) {
      p.err = detail::compile(likelihood_at_now(theory, a), fluent_slots);
    } else {
      p.pre = detail::compile(precondition_of(theory, a), fluent_slots);
      for (const auto& f : theory.fluents) {
        p.effects.push_back(detail::compile(ssa_rhs(theory, f.name, a), fluent_slots));
      }
    }
    program.push_back(std::move(p));
  }

  // Exact categorical proposal over small finite joint domains.
  std::vector<std::vector<double>> joint;
  std::vector<double> cdf;
  if (theory.all_discrete()) {
    std::size_t total = 1;
    for (const auto& f : theory.fluents) total *= f.domain.size();
    if (total <= 1000000) {
      std::vector<std::vector<Number>> values;
      for (const auto& f : theory.fluents) values.push_back(f.domain.enumerate());
      double acc = 0.0;
      for_each_assignment(values, [&](const std::vector<std::size_t>& idx) {
        std::vector<double> x(nf);
        for (std::size_t k = 0; k < nf; ++k) x[k] = values[k][idx[k]].to_double();
        const double w = prior(x.data());
        if (w > 0.0) {
          acc += w;
          joint.push_back(std::move(x));
          cdf.push_back(acc);
        }
      });
      if (joint.empty()) throw UndefinedBelief("prior has no support");
    }
  }
  std::vector<Proposal> proposals(nf);
  if (joint.empty()) {
    for (std::size_t i = 0; i < nf; ++i) {
      const auto& d = theory.fluents[i].domain;
      Proposal& p = proposals[i];
      if (d.is_discrete()) {
        p.kind = Proposal::Uniform;
        p.values = d.enumerate();
      } else if (std::isfinite(d.lo.to_double()) && std::isfinite(d.hi.to_double())) {
        p.kind = Proposal::UniformReal;
        p.lo = d.lo.to_double();
        p.hi = d.hi.to_double();
      } else if (auto g = gaussian_factor(theory.prior, value_var(theory.fluents[i].name))) {
        p.kind = Proposal::Normal;
        p.mu = g->first;
        p.sd = std::sqrt(g->second) * 1.5;
      } else {
        p.kind = Proposal::Cauchy;
        p.mu = 0.0;
        p.sd = 10.0;
      }
    }
  }

  double sum_w = 0.0, sum_wi = 0.0;
  std::vector<double> weights(n), hits(n);
  std::vector<double> x(nf), next(nf);
  for (std::size_t s = 0; s < n; ++s) {
    CounterRng rng(seed, s);
    double w = 1.0;
    if (!joint.empty()) {
      const double u = rng.uniform() * cdf.back();
      const std::size_t k = std::min<std::size_t>(
          static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()),
          joint.size() - 1);
      x = joint[k];
    } else {
      double q_total = 1.0;
      for (std::size_t i = 0; i < nf; ++i) {
        double q = 1.0;
        x[i] = proposals[i].draw(rng, q);
        q_total *= q;
      }
      w = theory.fluents.empty() ? 1.0 : prior(x.data()) / q_total;
      if (!theory.all_discrete()) {
        for (std::size_t i = 0; i < nf; ++i) {
          if (!theory.fluents[i].domain.contains(Number(x[i]))) w = 0.0;
        }
      }
    }
    for (const auto& p : program) {
      if (w == 0.0) break;
      if (p.sensing) {
        w *= p.err(x.data());
      } else {
        if (!p.pre(x.data())) {
          w = 0.0;
          break;
        }
        for (std::size_t i = 0; i < nf; ++i) next[i] = p.effects[i](x.data());
        x.swap(next);
      }
    }
    const double hit = (w != 0.0 && query(x.data())) ? 1.0 : 0.0;
    weights[s] = w;
    hits[s] = hit;
    sum_w += w;
    sum_wi += w * hit;
  }
  if (!(sum_w > 0.0)) throw UndefinedBelief("no sample has positive weight");
  OracleEstimate out;
  out.estimate = sum_wi / sum_w;
  double var = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double d = hits[s] - out.estimate;
    var += weights[s] * weights[s] * d * d;
  }
  out.stderr_ = std::sqrt(var) / sum_w;
  out.n = n;
  out.seed = seed;
  return out;
}

// Density profiles ----------------------------------------------------------------

DensityProfile density_profile(const ActionTheory& theory, const Situation& alpha,
                               const std::string& fluent_name, const std::vector<Number>& grid,
                               double tol) {
  const FluentDecl* decl = theory.find_fluent(fluent_name);
  if (!decl) throw DeclarationError("undeclared fluent '" + fluent_name + "'");
  if (decl->domain.is_discrete()) {
    throw EvalError("density profile needs a real-valued fluent; '" + fluent_name + "' is finite");
  }
  const InitialBeliefExpr e = regress_belief(theory, truth(true), alpha);
  const std::string xf = value_var(fluent_name);
  std::size_t target = 0;
  while (e.vars[target] != xf) ++target;

  DensityProfile out;
  const Masses total = continuous_masses(e, tol);
  out.gamma = total.gamma.to_double();
  out.flags = total.flags;

  // Marginal of likelihood * prior at x_f = v, other fluents integrated out.
  const Term weight = fold(apply(Op::Mul, {e.likelihood, e.prior}));
  auto marginal = [&](const Number& v) -> double {
    if (!decl->domain.contains(v)) return 0.0;
    if (e.vars.size() == 1) {
      detail::Env env;
      env.vars[xf] = v;
      return detail::eval_exact(weight, env).to_double();
    }
    InitialBeliefExpr rest;
    for (std::size_t i = 0; i < e.vars.size(); ++i) {
      if (i == target) continue;
      rest.vars.push_back(e.vars[i]);
      rest.domains.push_back(e.domains[i]);
    }
    rest.likelihood = fold(substitute(e.likelihood, xf, constant(v)));
    rest.prior = fold(substitute(e.prior, xf, constant(v)));
    rest.condition = truth(true);
    rest.gamma_condition = truth(true);
    const bool discrete = std::all_of(rest.domains.begin(), rest.domains.end(),
                                      [](const FluentDomain& d) { return d.is_discrete(); });
    const Masses m = discrete ? discrete_masses(rest) : continuous_masses(rest, tol);
    return m.gamma.to_double();
  };

  // Value of the fluent after alpha as a function of the initial values.
  const Term after = fold(replace_initial_fluents(
      regress_term(theory, fluent(fluent_name, alpha.as_sit_term())),
      [](const std::string& f) { return var(value_var(f)); }));

  if (after == var(xf)) {
    for (const auto& v : grid) out.points.push_back({v, marginal(v)});
    return out;
  }
  for (const auto& name : free_vars(after)) {
    if (name != xf) {
      throw EvalError("density profile of '" + fluent_name +
                      "' is unsupported: its value after the actions depends on other fluents");
    }
  }
  // Change of variables over the monotone linear pieces of the transform.
  const PiecewiseTerm pw = to_piecewise(after);
  struct LinearPiece {
    Formula guard;
    Rational slope, offset;
  };
  std::vector<LinearPiece> pieces;
  for (const auto& p : pw.pieces) {
    auto lf = linear_form(p.body);
    if (!lf) {
      throw EvalError("density profile of '" + fluent_name +
                      "' is unsupported: nonlinear transform " + to_string(p.body));
    }
    const Rational slope = lf->coeffs.contains(xf) ? lf->coeffs.at(xf) : Rational(0);
    if (slope.is_zero()) {
      // A constant piece on a region of positive prior mass is a point mass.
      const double lo = std::max(decl->domain.lo.to_double(), -1e6);
      const double hi = std::min(decl->domain.hi.to_double(), 1e6);
      for (int k = 1; k < 64; ++k) {
        const Number x = Number::exact_from_double(lo + (hi - lo) * k / 64.0);
        detail::Env env;
        env.vars[xf] = x;
        if (detail::eval_exact(p.guard, env) && marginal(x) > 0.0) {
          add_flag(out.flags, "point mass at " + to_string(p.body) + " omitted");
          break;
        }
      }
      continue;
    }
    pieces.push_back({p.guard, slope, lf->constant});
  }
  for (const auto& v : grid) {
    double density = 0.0;
    const Rational ve = v.is_exact() ? v.exact() : Number::exact_from_double(v.to_double()).exact();
    for (const auto& p : pieces) {
      const Number x((ve - p.offset) / p.slope);
      detail::Env env;
      env.vars[xf] = x;
      if (!detail::eval_exact(p.guard, env)) continue;
      density += marginal(x) / std::abs(p.slope.convert_to<double>());
    }
    out.points.push_back({v, density});
  }
  return out;
}

}  // namespace beliefreg
