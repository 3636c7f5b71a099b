#include "compile.hpp"

#include "beliefreg/errors.hpp"
#include "beliefreg/printer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace beliefreg::detail {

bool approx_equal(double a, double b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-12 * scale;
}

namespace {

double checked_div(double a, double b) {
  if (b == 0.0) throw EvalError("division by zero");
  return a / b;
}

double checked_gauss(double x, double m, double v) {
  if (!(v > 0.0)) throw EvalError("gauss variance must be positive");
  return gauss_pdf(x, m, v);
}

}  // namespace

RealFn compile(const Term& t, const Slots& slots) {
  if (const auto* c = t.as<node::Const>()) {
    const double v = c->value.to_double();
    return [v](const double*) { return v; };
  }
  if (const auto* v = t.as<node::Var>()) {
    auto it = slots.vars.find(v->name);
    if (it == slots.vars.end()) throw EvalError("unbound variable '" + v->name + "'");
    const int i = it->second;
    return [i](const double* x) { return x[i]; };
  }
  if (const auto* f = t.as<node::Fluent>()) {
    auto it = slots.fluents.find(f->name);
    if (!f->situation.actions.empty() || it == slots.fluents.end()) {
      throw EvalError("cannot evaluate fluent reference " + to_string(t));
    }
    const int i = it->second;
    return [i](const double* x) { return x[i]; };
  }
  if (const auto* i = t.as<node::Ite>()) {
    BoolFn g = compile(i->guard, slots);
    RealFn a = compile(i->then_term, slots);
    RealFn b = compile(i->else_term, slots);
    return [g, a, b](const double* x) { return g(x) ? a(x) : b(x); };
  }
  const auto* ap = t.as<node::Apply>();
  if (!ap) throw EvalError("cannot evaluate " + to_string(t) + " as a number");
  std::vector<RealFn> args;
  for (const auto& a : ap->args) args.push_back(compile(a, slots));
  switch (ap->op) {
    case Op::Add: return [a = args[0], b = args[1]](const double* x) { return a(x) + b(x); };
    case Op::Sub: return [a = args[0], b = args[1]](const double* x) { return a(x) - b(x); };
    case Op::Mul:
      return [a = args[0], b = args[1]](const double* x) {
        const double l = a(x);
        return l == 0.0 ? 0.0 : l * b(x);
      };
    case Op::Div: return [a = args[0], b = args[1]](const double* x) { return checked_div(a(x), b(x)); };
    case Op::Neg: return [a = args[0]](const double* x) { return -a(x); };
    case Op::Min: return [a = args[0], b = args[1]](const double* x) { return std::min(a(x), b(x)); };
    case Op::Max: return [a = args[0], b = args[1]](const double* x) { return std::max(a(x), b(x)); };
    case Op::Abs: return [a = args[0]](const double* x) { return std::abs(a(x)); };
    case Op::Exp: return [a = args[0]](const double* x) { return std::exp(a(x)); };
    case Op::Pow: return [a = args[0], b = args[1]](const double* x) { return std::pow(a(x), b(x)); };
    case Op::Gauss:
      return [a = args[0], m = args[1], v = args[2]](const double* x) {
        return checked_gauss(a(x), m(x), v(x));
      };
    case Op::Pi: return [](const double*) { return std::numbers::pi; };
  }
  throw EvalError("unknown operator");
}

BoolFn compile(const Formula& f, const Slots& slots) {
  switch (f.kind()) {
    case Formula::Kind::Truth: {
      const bool v = f.as<node::Truth>()->value;
      return [v](const double*) { return v; };
    }
    case Formula::Kind::Cmp: {
      const auto& c = *f.as<node::Cmp>();
      RealFn l = compile(c.lhs, slots);
      RealFn r = compile(c.rhs, slots);
      switch (c.rel) {
        case Rel::Eq: return [l, r](const double* x) { return approx_equal(l(x), r(x)); };
        case Rel::Ne: return [l, r](const double* x) { return !approx_equal(l(x), r(x)); };
        case Rel::Lt: return [l, r](const double* x) { return l(x) < r(x); };
        case Rel::Le: return [l, r](const double* x) { return l(x) <= r(x); };
        case Rel::Gt: return [l, r](const double* x) { return l(x) > r(x); };
        case Rel::Ge: return [l, r](const double* x) { return l(x) >= r(x); };
      }
      break;
    }
    case Formula::Kind::And: {
      std::vector<BoolFn> parts;
      for (const auto& p : f.as<node::And>()->parts) parts.push_back(compile(p, slots));
      return [parts](const double* x) {
        return std::all_of(parts.begin(), parts.end(), [x](const BoolFn& p) { return p(x); });
      };
    }
    case Formula::Kind::Or: {
      std::vector<BoolFn> parts;
      for (const auto& p : f.as<node::Or>()->parts) parts.push_back(compile(p, slots));
      return [parts](const double* x) {
        return std::any_of(parts.begin(), parts.end(), [x](const BoolFn& p) { return p(x); });
      };
    }
    case Formula::Kind::Not: {
      BoolFn b = compile(f.as<node::Not>()->body, slots);
      return [b](const double* x) { return !b(x); };
    }
    case Formula::Kind::Exists:
      throw EvalError("unsupported existential over a real or unbounded variable: " + to_string(f));
    case Formula::Kind::Poss:
      throw EvalError("unregressed Poss atom: " + to_string(f));
  }
  throw EvalError("unknown formula");
}

}  // namespace beliefreg::detail
