#include "beliefreg/regression.hpp"

#include "beliefreg/printer.hpp"
#include "beliefreg/simplify.hpp"

#include <stdexcept>

namespace beliefreg {

namespace {

std::string roman(std::size_t n) {
  static const std::pair<int, const char*> kTable[] = {
      {1000, "m"}, {900, "cm"}, {500, "d"}, {400, "cd"}, {100, "c"}, {90, "xc"}, {50, "l"},
      {40, "xl"},  {10, "x"},   {9, "ix"},  {5, "v"},   {4, "iv"},   {1, "i"}};
  std::string out;
  for (const auto& [v, s] : kTable) {
    while (n >= static_cast<std::size_t>(v)) {
      out += s;
      n -= v;
    }
  }
  return out;
}

std::string var_list(const std::vector<std::string>& vars) {
  std::string out = "<";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i];
  }
  return out + ">";
}

bool situation_suppressed(const Term& t);
bool situation_suppressed(const Formula& f);

bool situation_suppressed(const Term& t) {
  if (const auto* f = t.as<node::Fluent>()) {
    return f->situation.base == SitBase::Now && f->situation.actions.empty();
  }
  if (const auto* a = t.as<node::Apply>()) {
    for (const auto& x : a->args) {
      if (!situation_suppressed(x)) return false;
    }
  }
  if (const auto* i = t.as<node::Ite>()) {
    return situation_suppressed(i->guard) && situation_suppressed(i->then_term) &&
           situation_suppressed(i->else_term);
  }
  return true;
}

bool situation_suppressed(const Formula& f) {
  if (const auto* c = f.as<node::Cmp>()) {
    return situation_suppressed(c->lhs) && situation_suppressed(c->rhs);
  }
  if (const auto* a = f.as<node::And>()) {
    for (const auto& p : a->parts) {
      if (!situation_suppressed(p)) return false;
    }
  }
  if (const auto* o = f.as<node::Or>()) {
    for (const auto& p : o->parts) {
      if (!situation_suppressed(p)) return false;
    }
  }
  if (const auto* n = f.as<node::Not>()) return situation_suppressed(n->body);
  if (const auto* e = f.as<node::Exists>()) return situation_suppressed(e->body);
  if (const auto* p = f.as<node::Poss>()) return p->situation.actions.empty() && p->situation.base == SitBase::Now;
  return true;
}

Term to_value_vars(const Term& t) {
  return replace_initial_fluents(t, [](const std::string& f) { return var(value_var(f)); });
}

Formula to_value_vars(const Formula& f) {
  return replace_initial_fluents(f, [](const std::string& n) { return var(value_var(n)); });
}

const FoldOptions kFinalFold{true, true};

}  // namespace

std::string RegressionTrace::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    out += "(" + roman(i + 1) + ") " + steps[i].rule + ":\n    " + steps[i].input + "\n => " +
           steps[i].output + "\n";
  }
  return out;
}

std::string to_string(const DensityPseudoTerm& d) {
  std::string out;
  if (!(d.likelihood == constant(1))) out += "(" + to_string(d.likelihood) + ") * ";
  out += "P(" + var_list(d.vars) + ", " + to_string(d.condition) + ", " +
         to_string(d.situation.as_sit_term()) + ")";
  return out;
}

std::string to_string(const InitialBeliefExpr& e) {
  std::string agg = "sum/integral over " + var_list(e.vars);
  const bool unit = e.likelihood == constant(1);
  const std::string lik = unit ? "" : "(" + to_string(e.likelihood) + ") * ";
  return agg + " of " + lik + "(" + to_string(e.prior) + ") * [" +
         to_string(e.condition) + "], normalized by [" + to_string(e.gamma_condition) + "]";
}

// Terms and formulas -------------------------------------------------------------

Term regress_term(const ActionTheory& theory, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Fluent: {
      const auto& f = *t.as<node::Fluent>();
      if (f.situation.actions.empty()) return t;
      SitTerm inner = f.situation;
      const Term a = inner.actions.back();
      inner.actions.pop_back();
      const Term rhs = ssa_rhs(theory, f.name, a);
      return regress_term(theory, substitute_now(rhs, inner));
    }
    case Term::Kind::Apply: {
      const auto& a = *t.as<node::Apply>();
      std::vector<Term> args;
      for (const auto& x : a.args) args.push_back(regress_term(theory, x));
      return fold(apply(a.op, std::move(args)));
    }
    case Term::Kind::Ite: {
      const auto& i = *t.as<node::Ite>();
      return fold(ite(regress_formula(theory, i.guard), regress_term(theory, i.then_term),
                      regress_term(theory, i.else_term)));
    }
    default: return t;
  }
}

Formula regress_formula(const ActionTheory& theory, const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::Truth: return phi;
    case Formula::Kind::Cmp: {
      const auto& c = *phi.as<node::Cmp>();
      return cmp(c.rel, regress_term(theory, c.lhs), regress_term(theory, c.rhs));
    }
    case Formula::Kind::And: {
      std::vector<Formula> parts;
      for (const auto& p : phi.as<node::And>()->parts) parts.push_back(regress_formula(theory, p));
      return conj(std::move(parts));
    }
    case Formula::Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& p : phi.as<node::Or>()->parts) parts.push_back(regress_formula(theory, p));
      return disj(std::move(parts));
    }
    case Formula::Kind::Not: return negate(regress_formula(theory, phi.as<node::Not>()->body));
    case Formula::Kind::Exists: {
      const auto& e = *phi.as<node::Exists>();
      return exists(e.var, regress_formula(theory, e.body));
    }
    case Formula::Kind::Poss: {
      const auto& p = *phi.as<node::Poss>();
      Formula pre = precondition_of(theory, p.action);
      return fold(regress_formula(theory, substitute_now(pre, p.situation)));
    }
  }
  return phi;
}

// Belief ----------------------------------------------------------------------

DensityStep step_density(const ActionTheory& theory, const DensityPseudoTerm& d) {
  if (d.situation.empty()) throw std::invalid_argument("step_density needs a nonempty situation");
  const Term a = d.situation.actions.back();
  DensityStep out;
  out.next = d;
  out.next.situation = d.situation.parent();
  const std::string a_text = to_string(a);

  if (is_sensing(theory, a)) {
    check_action(theory, a);
    out.factor = likelihood_at_now(theory, a);
    out.next.likelihood =
        fold(d.likelihood == constant(1) ? out.factor : apply(Op::Mul, {out.factor, d.likelihood}));
    out.steps.push_back({"sense " + a_text + ": multiply by Err(z, f(now))", to_string(d),
                         to_string(out.next)});
    return out;
  }

  out.factor = constant(1);
  const SitTerm after{SitBase::Now, {a}};
  std::set<std::string> reserved;
  for (const auto& v : d.vars) reserved.insert(v);

  DensityPseudoTerm cur = d;
  Formula normal = normalize_fluent_atoms(d.condition, reserved);
  if (!(normal == d.condition)) {
    DensityPseudoTerm next = cur;
    next.condition = normal;
    out.steps.push_back({"normalize fluent atoms", to_string(cur), to_string(next)});
    cur = next;
  }

  Formula regressed = regress_formula(theory, substitute_now(normal, after));
  const Formula pre = fold(precondition_of(theory, a));
  if (!(pre == truth(true))) regressed = disj({negate(pre), regressed});
  Term likelihood = regress_term(theory, substitute_now(d.likelihood, after));
  {
    DensityPseudoTerm next = cur;
    next.situation = out.next.situation;
    next.condition = regressed;
    next.likelihood = likelihood;
    out.steps.push_back({"regress through " + a_text + ": Poss(a, now) implies R[phi[do(a, now)]]",
                         to_string(cur), to_string(next)});
    cur = next;
  }

  Formula simplified = fold(one_point_elim(regressed));
  if (!(simplified == regressed)) {
    DensityPseudoTerm next = cur;
    next.condition = simplified;
    out.steps.push_back({"eliminate definitional existentials", to_string(cur), to_string(next)});
    cur = next;
  }
  out.next = cur;
  return out;
}

namespace {

DensityPseudoTerm peel_all(const ActionTheory& theory, DensityPseudoTerm d,
                           std::vector<TraceStep>* steps) {
  while (!d.situation.empty()) {
    DensityStep s = step_density(theory, d);
    if (steps) steps->insert(steps->end(), s.steps.begin(), s.steps.end());
    d = std::move(s.next);
  }
  return d;
}

}  // namespace

InitialBeliefExpr regress_belief(const ActionTheory& theory, const Formula& phi,
                                 const Situation& alpha) {
  if (!situation_suppressed(phi)) {
    throw Error("query must be situation-suppressed: fluents may not carry situation arguments");
  }
  for (const auto& a : alpha.actions) check_action(theory, a);

  InitialBeliefExpr out;
  out.vars = theory.value_vars();
  for (const auto& f : theory.fluents) out.domains.push_back(f.domain);
  out.prior = theory.prior;
  for (const auto& a : alpha.actions) {
    if (!is_sensing(theory, a) && !(fold(precondition_of(theory, a)) == truth(true))) {
      out.precondition_sensitive = true;
    }
  }

  DensityPseudoTerm start{out.vars, phi, alpha, constant(1)};
  DensityPseudoTerm at_s0 = peel_all(theory, start, &out.trace.steps);

  DensityPseudoTerm gamma_start{out.vars, truth(true), alpha, constant(1)};
  DensityPseudoTerm gamma_s0 = peel_all(theory, gamma_start, nullptr);

  out.condition = fold(one_point_elim(to_value_vars(at_s0.condition)), kFinalFold);
  out.gamma_condition = fold(one_point_elim(to_value_vars(gamma_s0.condition)), kFinalFold);
  out.likelihood = fold(to_value_vars(at_s0.likelihood));

  out.trace.steps.push_back({"initial situation: fluents become value variables, then simplify",
                             to_string(at_s0), to_string(out)});
  return out;
}

Formula regress_projection(const ActionTheory& theory, const Formula& phi, const Situation& alpha) {
  if (!situation_suppressed(phi)) {
    throw Error("query must be situation-suppressed: fluents may not carry situation arguments");
  }
  for (const auto& a : alpha.actions) check_action(theory, a);
  return fold(regress_formula(theory, substitute_now(phi, alpha.as_sit_term())));
}

}  // namespace beliefreg
