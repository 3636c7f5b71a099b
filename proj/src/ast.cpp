#include "beliefreg/ast.hpp"

#include "beliefreg/errors.hpp"
#include "beliefreg/printer.hpp"

#include <algorithm>
#include <cassert>
#include <numbers>

namespace beliefreg {

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Neg: return "neg";
    case Op::Min: return "min";
    case Op::Max: return "max";
    case Op::Abs: return "abs";
    case Op::Exp: return "exp";
    case Op::Pow: return "^";
    case Op::Gauss: return "gauss";
    case Op::Pi: return "pi";
  }
  return "?";
}

std::string_view rel_symbol(Rel rel) {
  switch (rel) {
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  return "?";
}

std::size_t op_arity(Op op) {
  switch (op) {
    case Op::Pi: return 0;
    case Op::Neg:
    case Op::Abs:
    case Op::Exp: return 1;
    case Op::Gauss: return 3;
    default: return 2;
  }
}

Rel mirror(Rel rel) {
  switch (rel) {
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Gt: return Rel::Lt;
    case Rel::Ge: return Rel::Le;
    default: return rel;
  }
}

Rel complement(Rel rel) {
  switch (rel) {
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
  }
  return rel;
}

namespace {

const Term& zero_term() {
  static const Term t = constant(Number(0));
  return t;
}

const Formula& true_formula() {
  static const Formula f = truth(true);
  return f;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Term::Term() : Term(zero_term()) {}
Formula::Formula() : Formula(true_formula()) {}

Term::Kind Term::kind() const { return static_cast<Kind>(node_->v.index()); }
Formula::Kind Formula::kind() const { return static_cast<Kind>(node_->v.index()); }

bool operator==(const SitTerm& a, const SitTerm& b) {
  return a.base == b.base && a.actions == b.actions;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->v.index() != b.node_->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const node::Const& x) { return x.value.identical(b.as<node::Const>()->value); },
          [&](const node::Var& x) { return x.name == b.as<node::Var>()->name; },
          [&](const node::Fluent& x) {
            const auto* y = b.as<node::Fluent>();
            return x.name == y->name && x.situation == y->situation;
          },
          [&](const node::Action& x) {
            const auto* y = b.as<node::Action>();
            return x.name == y->name && x.args == y->args;
          },
          [&](const node::Symbol& x) { return x.name == b.as<node::Symbol>()->name; },
          [&](const node::Apply& x) {
            const auto* y = b.as<node::Apply>();
            return x.op == y->op && x.args == y->args;
          },
          [&](const node::Ite& x) {
            const auto* y = b.as<node::Ite>();
            return x.guard == y->guard && x.then_term == y->then_term &&
                   x.else_term == y->else_term;
          },
      },
      a.node_->v);
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->v.index() != b.node_->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const node::Truth& x) { return x.value == b.as<node::Truth>()->value; },
          [&](const node::Cmp& x) {
            const auto* y = b.as<node::Cmp>();
            return x.rel == y->rel && x.lhs == y->lhs && x.rhs == y->rhs;
          },
          [&](const node::And& x) { return x.parts == b.as<node::And>()->parts; },
          [&](const node::Or& x) { return x.parts == b.as<node::Or>()->parts; },
          [&](const node::Not& x) { return x.body == b.as<node::Not>()->body; },
          [&](const node::Exists& x) {
            const auto* y = b.as<node::Exists>();
            return x.var == y->var && x.body == y->body;
          },
          [&](const node::Poss& x) {
            const auto* y = b.as<node::Poss>();
            return x.action == y->action && x.situation == y->situation;
          },
      },
      a.node_->v);
}

Situation Situation::parent() const {
  assert(!actions.empty());
  return Situation{std::vector<Term>(actions.begin(), actions.end() - 1)};
}

Situation Situation::prefix(std::size_t n) const {
  n = std::min(n, actions.size());
  return Situation{std::vector<Term>(actions.begin(), actions.begin() + static_cast<long>(n))};
}

// Construction ---------------------------------------------------------------

Term constant(Number value) {
  return Term(std::make_shared<const TermNode>(TermNode{node::Const{std::move(value)}}));
}
Term var(std::string name) {
  return Term(std::make_shared<const TermNode>(TermNode{node::Var{std::move(name)}}));
}
Term fluent(std::string name, SitTerm situation) {
  return Term(std::make_shared<const TermNode>(
      TermNode{node::Fluent{std::move(name), std::move(situation)}}));
}
Term action(std::string name, std::vector<Term> args) {
  return Term(std::make_shared<const TermNode>(
      TermNode{node::Action{std::move(name), std::move(args)}}));
}
Term symbol(std::string name) {
  return Term(std::make_shared<const TermNode>(TermNode{node::Symbol{std::move(name)}}));
}
Term apply(Op op, std::vector<Term> args) {
  assert(args.size() == op_arity(op));
  return Term(std::make_shared<const TermNode>(TermNode{node::Apply{op, std::move(args)}}));
}
Term ite(Formula guard, Term then_term, Term else_term) {
  return Term(std::make_shared<const TermNode>(
      TermNode{node::Ite{std::move(guard), std::move(then_term), std::move(else_term)}}));
}

Term operator+(const Term& a, const Term& b) { return apply(Op::Add, {a, b}); }
Term operator-(const Term& a, const Term& b) { return apply(Op::Sub, {a, b}); }
Term operator*(const Term& a, const Term& b) { return apply(Op::Mul, {a, b}); }
Term operator/(const Term& a, const Term& b) { return apply(Op::Div, {a, b}); }
Term operator-(const Term& a) { return apply(Op::Neg, {a}); }

Formula truth(bool value) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{node::Truth{value}}));
}
Formula cmp(Rel rel, Term lhs, Term rhs) {
  return Formula(std::make_shared<const FormulaNode>(
      FormulaNode{node::Cmp{rel, std::move(lhs), std::move(rhs)}}));
}
Formula conj(std::vector<Formula> parts) {
  if (parts.empty()) return truth(true);
  if (parts.size() == 1) return parts.front();
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{node::And{std::move(parts)}}));
}
Formula disj(std::vector<Formula> parts) {
  if (parts.empty()) return truth(false);
  if (parts.size() == 1) return parts.front();
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{node::Or{std::move(parts)}}));
}
Formula negate(Formula body) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{node::Not{std::move(body)}}));
}
Formula exists(std::string var, Formula body) {
  return Formula(std::make_shared<const FormulaNode>(
      FormulaNode{node::Exists{std::move(var), std::move(body)}}));
}
Formula poss(Term action, SitTerm situation) {
  return Formula(std::make_shared<const FormulaNode>(
      FormulaNode{node::Poss{std::move(action), std::move(situation)}}));
}
Formula implies(Formula a, Formula b) { return disj({negate(std::move(a)), std::move(b)}); }

// Generic rebuilding ---------------------------------------------------------

namespace {

// Rebuilds a tree bottom-up, letting the callbacks replace nodes. Returning
// nullopt from a callback means "keep descending".
struct Rewriter {
  std::function<std::optional<Term>(const Term&)> on_term;
  std::function<std::optional<Formula>(const Formula&)> on_formula;
  std::function<SitTerm(const SitTerm&)> on_sit;

  SitTerm sit(const SitTerm& s) const {
    SitTerm out{s.base, {}};
    out.actions.reserve(s.actions.size());
    for (const auto& a : s.actions) out.actions.push_back(term(a));
    return on_sit ? on_sit(out) : out;
  }

  Term term(const Term& t) const {
    if (on_term) {
      if (auto r = on_term(t)) return *r;
    }
    return std::visit(
        overloaded{
            [&](const node::Const&) { return t; },
            [&](const node::Var&) { return t; },
            [&](const node::Symbol&) { return t; },
            [&](const node::Fluent& f) { return fluent(f.name, sit(f.situation)); },
            [&](const node::Action& a) {
              std::vector<Term> args;
              for (const auto& x : a.args) args.push_back(term(x));
              return action(a.name, std::move(args));
            },
            [&](const node::Apply& a) {
              std::vector<Term> args;
              for (const auto& x : a.args) args.push_back(term(x));
              return apply(a.op, std::move(args));
            },
            [&](const node::Ite& i) {
              return ite(formula(i.guard), term(i.then_term), term(i.else_term));
            },
        },
        t.node().v);
  }

  Formula formula(const Formula& f) const {
    if (on_formula) {
      if (auto r = on_formula(f)) return *r;
    }
    return std::visit(
        overloaded{
            [&](const node::Truth&) { return f; },
            [&](const node::Cmp& c) { return cmp(c.rel, term(c.lhs), term(c.rhs)); },
            [&](const node::And& a) {
              std::vector<Formula> parts;
              for (const auto& p : a.parts) parts.push_back(formula(p));
              return Formula(
                  std::make_shared<const FormulaNode>(FormulaNode{node::And{std::move(parts)}}));
            },
            [&](const node::Or& o) {
              std::vector<Formula> parts;
              for (const auto& p : o.parts) parts.push_back(formula(p));
              return Formula(
                  std::make_shared<const FormulaNode>(FormulaNode{node::Or{std::move(parts)}}));
            },
            [&](const node::Not& n) { return negate(formula(n.body)); },
            [&](const node::Exists& e) { return exists(e.var, formula(e.body)); },
            [&](const node::Poss& p) { return poss(term(p.action), sit(p.situation)); },
        },
        f.node().v);
  }
};

// Substitution with capture avoidance and sort checks.
class Substituter {
 public:
  Substituter(const std::string& var, const Term& replacement)
      : var_(var), replacement_(replacement), replacement_vars_(free_vars(replacement)) {
    if (replacement.kind() == Term::Kind::Action) {
      throw SortError("cannot substitute action term " + to_string(replacement) +
                      " for variable " + var);
    }
  }

  Term term(const Term& t, bool in_action_arg) const {
    return std::visit(
        overloaded{
            [&](const node::Const&) { return t; },
            [&](const node::Symbol&) { return t; },
            [&](const node::Var& v) {
              if (v.name != var_) return t;
              if (!in_action_arg && replacement_.kind() == Term::Kind::Symbol) {
                throw SortError("object constant " + to_string(replacement_) +
                                " substituted for " + var_ + " in an arithmetic position");
              }
              return replacement_;
            },
            [&](const node::Fluent& f) { return fluent(f.name, sit(f.situation)); },
            [&](const node::Action& a) {
              std::vector<Term> args;
              for (const auto& x : a.args) args.push_back(term(x, true));
              return action(a.name, std::move(args));
            },
            [&](const node::Apply& a) {
              std::vector<Term> args;
              for (const auto& x : a.args) {
                try {
                  args.push_back(term(x, false));
                } catch (const SortError& e) {
                  throw SortError(std::string(e.what()) + " (inside " + to_string(t) + ")");
                }
              }
              return apply(a.op, std::move(args));
            },
            [&](const node::Ite& i) {
              return ite(formula(i.guard), term(i.then_term, false), term(i.else_term, false));
            },
        },
        t.node().v);
  }

  SitTerm sit(const SitTerm& s) const {
    SitTerm out{s.base, {}};
    for (const auto& a : s.actions) out.actions.push_back(term(a, false));
    return out;
  }

  Formula formula(const Formula& f) const {
    return std::visit(
        overloaded{
            [&](const node::Truth&) { return f; },
            [&](const node::Cmp& c) {
              try {
                return cmp(c.rel, term(c.lhs, false), term(c.rhs, false));
              } catch (const SortError& e) {
                throw SortError(std::string(e.what()) + " (in atom " + to_string(f) + ")");
              }
            },
            [&](const node::And& a) {
              std::vector<Formula> parts;
              for (const auto& p : a.parts) parts.push_back(formula(p));
              return Formula(
                  std::make_shared<const FormulaNode>(FormulaNode{node::And{std::move(parts)}}));
            },
            [&](const node::Or& o) {
              std::vector<Formula> parts;
              for (const auto& p : o.parts) parts.push_back(formula(p));
              return Formula(
                  std::make_shared<const FormulaNode>(FormulaNode{node::Or{std::move(parts)}}));
            },
            [&](const node::Not& n) { return negate(formula(n.body)); },
            [&](const node::Exists& e) {
              if (e.var == var_) return f;  // bound occurrence shadows
              if (!replacement_vars_.contains(e.var)) return exists(e.var, formula(e.body));
              // Rename the bound variable away from the replacement's free variables.
              std::set<std::string> used = replacement_vars_;
              collect_names(e.body, used);
              used.insert(var_);
              std::string fresh = e.var;
              for (int k = 1; used.contains(fresh); ++k) fresh = e.var + "_" + std::to_string(k);
              const Formula renamed = substitute(e.body, e.var, beliefreg::var(fresh));
              return exists(fresh, formula(renamed));
            },
            [&](const node::Poss& p) { return poss(term(p.action, false), sit(p.situation)); },
        },
        f.node().v);
  }

 private:
  const std::string& var_;
  const Term& replacement_;
  std::set<std::string> replacement_vars_;
};

SitTerm rebase(const SitTerm& slot, const SitTerm& s) {
  if (slot.base != SitBase::Now) return slot;
  SitTerm out = s;
  out.actions.insert(out.actions.end(), slot.actions.begin(), slot.actions.end());
  return out;
}

}  // namespace

Term substitute(const Term& t, const std::string& var, const Term& replacement) {
  return Substituter(var, replacement).term(t, false);
}

Formula substitute(const Formula& f, const std::string& var, const Term& replacement) {
  return Substituter(var, replacement).formula(f);
}

Term substitute_now(const Term& t, const SitTerm& s) {
  Rewriter r;
  r.on_sit = [&](const SitTerm& slot) { return rebase(slot, s); };
  return r.term(t);
}

Formula substitute_now(const Formula& f, const SitTerm& s) {
  Rewriter r;
  r.on_sit = [&](const SitTerm& slot) { return rebase(slot, s); };
  return r.formula(f);
}

namespace {

Rewriter initial_fluent_rewriter(const std::function<Term(const std::string&)>& value_of) {
  Rewriter r;
  r.on_term = [&value_of](const Term& t) -> std::optional<Term> {
    if (const auto* f = t.as<node::Fluent>(); f && f->situation.actions.empty()) {
      return value_of(f->name);
    }
    return std::nullopt;
  };
  return r;
}

}  // namespace

Term replace_initial_fluents(const Term& t,
                             const std::function<Term(const std::string&)>& value_of) {
  return initial_fluent_rewriter(value_of).term(t);
}

Formula replace_initial_fluents(const Formula& f,
                                const std::function<Term(const std::string&)>& value_of) {
  return initial_fluent_rewriter(value_of).formula(f);
}

// Queries ----------------------------------------------------------------------

namespace {

void free_vars_into(const Term& t, std::set<std::string>& out);
void free_vars_into(const Formula& f, std::set<std::string>& out);

void free_vars_into(const SitTerm& s, std::set<std::string>& out) {
  for (const auto& a : s.actions) free_vars_into(a, out);
}

void free_vars_into(const Term& t, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const node::Const&) {},
                 [](const node::Symbol&) {},
                 [&](const node::Var& v) { out.insert(v.name); },
                 [&](const node::Fluent& f) { free_vars_into(f.situation, out); },
                 [&](const node::Action& a) {
                   for (const auto& x : a.args) free_vars_into(x, out);
                 },
                 [&](const node::Apply& a) {
                   for (const auto& x : a.args) free_vars_into(x, out);
                 },
                 [&](const node::Ite& i) {
                   free_vars_into(i.guard, out);
                   free_vars_into(i.then_term, out);
                   free_vars_into(i.else_term, out);
                 },
             },
             t.node().v);
}

void free_vars_into(const Formula& f, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const node::Truth&) {},
                 [&](const node::Cmp& c) {
                   free_vars_into(c.lhs, out);
                   free_vars_into(c.rhs, out);
                 },
                 [&](const node::And& a) {
                   for (const auto& p : a.parts) free_vars_into(p, out);
                 },
                 [&](const node::Or& o) {
                   for (const auto& p : o.parts) free_vars_into(p, out);
                 },
                 [&](const node::Not& n) { free_vars_into(n.body, out); },
                 [&](const node::Exists& e) {
                   std::set<std::string> inner;
                   free_vars_into(e.body, inner);
                   inner.erase(e.var);
                   out.insert(inner.begin(), inner.end());
                 },
                 [&](const node::Poss& p) {
                   free_vars_into(p.action, out);
                   free_vars_into(p.situation, out);
                 },
             },
             f.node().v);
}

// Pre-order search over a tree for a node satisfying a predicate.
bool any_term(const Term& t, const std::function<bool(const Term&)>& pred);
bool any_term(const Formula& f, const std::function<bool(const Term&)>& pred,
              const std::function<bool(const Formula&)>& fpred);

bool any_term(const Term& t, const std::function<bool(const Term&)>& pred) {
  if (pred(t)) return true;
  return std::visit(
      overloaded{
          [](const node::Const&) { return false; },
          [](const node::Var&) { return false; },
          [](const node::Symbol&) { return false; },
          [&](const node::Fluent& f) {
            return std::any_of(f.situation.actions.begin(), f.situation.actions.end(),
                               [&](const Term& a) { return any_term(a, pred); });
          },
          [&](const node::Action& a) {
            return std::any_of(a.args.begin(), a.args.end(),
                               [&](const Term& x) { return any_term(x, pred); });
          },
          [&](const node::Apply& a) {
            return std::any_of(a.args.begin(), a.args.end(),
                               [&](const Term& x) { return any_term(x, pred); });
          },
          [&](const node::Ite& i) {
            return any_term(i.guard, pred, nullptr) || any_term(i.then_term, pred) ||
                   any_term(i.else_term, pred);
          },
      },
      t.node().v);
}

bool any_term(const Formula& f, const std::function<bool(const Term&)>& pred,
              const std::function<bool(const Formula&)>& fpred) {
  if (fpred && fpred(f)) return true;
  return std::visit(
      overloaded{
          [](const node::Truth&) { return false; },
          [&](const node::Cmp& c) { return any_term(c.lhs, pred) || any_term(c.rhs, pred); },
          [&](const node::And& a) {
            return std::any_of(a.parts.begin(), a.parts.end(),
                               [&](const Formula& p) { return any_term(p, pred, fpred); });
          },
          [&](const node::Or& o) {
            return std::any_of(o.parts.begin(), o.parts.end(),
                               [&](const Formula& p) { return any_term(p, pred, fpred); });
          },
          [&](const node::Not& n) { return any_term(n.body, pred, fpred); },
          [&](const node::Exists& e) { return any_term(e.body, pred, fpred); },
          [&](const node::Poss& p) {
            return any_term(p.action, pred) ||
                   std::any_of(p.situation.actions.begin(), p.situation.actions.end(),
                               [&](const Term& a) { return any_term(a, pred); });
          },
      },
      f.node().v);
}

bool has_do(const Term& t) {
  const auto* f = t.as<node::Fluent>();
  return f && f->situation.mentions_do();
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  free_vars_into(t, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  free_vars_into(f, out);
  return out;
}

bool mentions_do(const Term& t) { return any_term(t, has_do); }

bool mentions_do(const Formula& f) {
  return any_term(f, has_do, [](const Formula& g) {
    const auto* p = g.as<node::Poss>();
    return p && p->situation.mentions_do();
  });
}

bool mentions_fluent(const Term& t) {
  return any_term(t, [](const Term& x) { return x.kind() == Term::Kind::Fluent; });
}

bool mentions_fluent(const Formula& f) {
  return any_term(
      f, [](const Term& x) { return x.kind() == Term::Kind::Fluent; }, nullptr);
}

void collect_names(const Term& t, std::set<std::string>& out) {
  any_term(t, [&](const Term& x) {
    if (const auto* v = x.as<node::Var>()) out.insert(v->name);
    if (const auto* i = x.as<node::Ite>()) collect_names(i->guard, out);
    return false;
  });
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  any_term(
      f,
      [&](const Term& x) {
        if (const auto* v = x.as<node::Var>()) out.insert(v->name);
        if (const auto* i = x.as<node::Ite>()) collect_names(i->guard, out);
        return false;
      },
      [&](const Formula& g) {
        if (const auto* e = g.as<node::Exists>()) out.insert(e->var);
        return false;
      });
}

Formula actions_equal(const Term& a, const Term& b) {
  const auto* x = a.as<node::Action>();
  const auto* y = b.as<node::Action>();
  if (!x || !y) throw SortError("unique-names equality needs two action terms");
  if (x->name != y->name || x->args.size() != y->args.size()) return truth(false);
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < x->args.size(); ++i) {
    const Term& l = x->args[i];
    const Term& r = y->args[i];
    const bool l_sym = l.kind() == Term::Kind::Symbol;
    const bool r_sym = r.kind() == Term::Kind::Symbol;
    if (l_sym && r_sym) {
      if (!(l == r)) return truth(false);
      continue;
    }
    if (l_sym != r_sym && l.kind() != Term::Kind::Var && r.kind() != Term::Kind::Var) {
      return truth(false);  // object constants never equal numbers
    }
    parts.push_back(cmp(Rel::Eq, l, r));
  }
  return conj(std::move(parts));
}

bool is_ground_action(const Term& t) {
  const auto* a = t.as<node::Action>();
  return a && free_vars(t).empty() && !mentions_fluent(t);
}

}  // namespace beliefreg

namespace beliefreg {

Number apply_op(Op op, const std::vector<Number>& args) {
  switch (op) {
    case Op::Add: return args[0] + args[1];
    case Op::Sub: return args[0] - args[1];
    case Op::Mul: return args[0] * args[1];
    case Op::Div: return args[0] / args[1];
    case Op::Neg: return -args[0];
    case Op::Min: return min(args[0], args[1]);
    case Op::Max: return max(args[0], args[1]);
    case Op::Abs: return abs(args[0]);
    case Op::Exp: return exp(args[0]);
    case Op::Pow: return pow(args[0], args[1]);
    case Op::Gauss: return gauss(args[0], args[1], args[2]);
    case Op::Pi: return Number(std::numbers::pi);
  }
  throw EvalError("unknown operator");
}

}  // namespace beliefreg
