#include "beliefreg/simplify.hpp"

#include "beliefreg/errors.hpp"
#include "beliefreg/printer.hpp"

#include <algorithm>

namespace beliefreg {

namespace {

const Number* const_of(const Term& t) {
  const auto* c = t.as<node::Const>();
  return c ? &c->value : nullptr;
}

bool is_exact_value(const Term& t, int v) {
  const Number* n = const_of(t);
  return n && n->is_exact() && n->exact() == v;
}

const node::Apply* apply_of(const Term& t, Op op) {
  const auto* a = t.as<node::Apply>();
  return a && a->op == op ? a : nullptr;
}

Term fold_apply(Op op, std::vector<Term> a) {
  const bool all_const = std::all_of(a.begin(), a.end(), [](const Term& x) { return const_of(x); });
  if (all_const && op != Op::Pi) {
    std::vector<Number> vals;
    for (const auto& x : a) vals.push_back(*const_of(x));
    try {
      Number r = apply_op(op, vals);
      if (r.is_exact()) return constant(std::move(r));
    } catch (const EvalError&) {
      // left symbolic; evaluation reports it
    }
  }
  switch (op) {
    case Op::Add:
      if (is_exact_value(a[0], 0)) return a[1];
      if (is_exact_value(a[1], 0)) return a[0];
      if (const Number* c = const_of(a[1]); c && c->is_negative()) {
        return apply(Op::Sub, {a[0], constant(-*c)});
      }
      break;
    case Op::Sub:
      if (is_exact_value(a[1], 0)) return a[0];
      if (const Number* c = const_of(a[1]); c && c->is_negative()) {
        return apply(Op::Add, {a[0], constant(-*c)});
      }
      if (a[0] == a[1]) return constant(0);
      if (is_exact_value(a[0], 0)) return fold_apply(Op::Neg, {a[1]});
      break;
    case Op::Mul:
      if (is_exact_value(a[0], 0) || is_exact_value(a[1], 0)) return constant(0);
      if (is_exact_value(a[0], 1)) return a[1];
      if (is_exact_value(a[1], 1)) return a[0];
      break;
    case Op::Div:
      if (is_exact_value(a[1], 1)) return a[0];
      if (is_exact_value(a[0], 0) && const_of(a[1]) && !const_of(a[1])->is_zero()) {
        return constant(0);
      }
      break;
    case Op::Neg:
      if (const auto* inner = apply_of(a[0], Op::Neg)) return inner->args[0];
      break;
    case Op::Min:
    case Op::Max:
      if (a[0] == a[1]) return a[0];
      break;
    case Op::Abs:
      if (apply_of(a[0], Op::Abs)) return a[0];
      break;
    case Op::Pow:
      if (is_exact_value(a[1], 1)) return a[0];
      if (is_exact_value(a[1], 0)) return constant(1);
      break;
    default: break;
  }
  return apply(op, std::move(a));
}

}  // namespace

Term fold(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Const:
    case Term::Kind::Var:
    case Term::Kind::Symbol: return t;
    case Term::Kind::Fluent: {
      const auto& f = *t.as<node::Fluent>();
      SitTerm s{f.situation.base, {}};
      for (const auto& a : f.situation.actions) s.actions.push_back(fold(a));
      return fluent(f.name, std::move(s));
    }
    case Term::Kind::Action: {
      const auto& a = *t.as<node::Action>();
      std::vector<Term> args;
      for (const auto& x : a.args) args.push_back(fold(x));
      return action(a.name, std::move(args));
    }
    case Term::Kind::Apply: {
      const auto& a = *t.as<node::Apply>();
      std::vector<Term> args;
      for (const auto& x : a.args) args.push_back(fold(x));
      return fold_apply(a.op, std::move(args));
    }
    case Term::Kind::Ite: {
      const auto& i = *t.as<node::Ite>();
      Formula g = fold(i.guard);
      if (const auto* tr = g.as<node::Truth>()) return fold(tr->value ? i.then_term : i.else_term);
      Term th = fold(i.then_term);
      Term el = fold(i.else_term);
      if (th == el) return th;
      return ite(std::move(g), std::move(th), std::move(el));
    }
  }
  return t;
}

// Linear forms -----------------------------------------------------------------

namespace {

void add_scaled(LinearForm& into, const LinearForm& from, const Rational& k) {
  for (const auto& [v, c] : from.coeffs) into.coeffs[v] += k * c;
  into.constant += k * from.constant;
}

void drop_zeros(LinearForm& f) {
  for (auto it = f.coeffs.begin(); it != f.coeffs.end();) {
    it = it->second.is_zero() ? f.coeffs.erase(it) : std::next(it);
  }
}

}  // namespace

std::optional<LinearForm> linear_form(const Term& t) {
  if (const Number* c = const_of(t)) {
    if (!c->is_exact()) return std::nullopt;
    return LinearForm{{}, c->exact()};
  }
  if (const auto* v = t.as<node::Var>()) return LinearForm{{{v->name, Rational(1)}}, Rational(0)};
  const auto* a = t.as<node::Apply>();
  if (!a) return std::nullopt;
  switch (a->op) {
    case Op::Add:
    case Op::Sub: {
      auto l = linear_form(a->args[0]);
      auto r = l ? linear_form(a->args[1]) : std::nullopt;
      if (!r) return std::nullopt;
      add_scaled(*l, *r, Rational(a->op == Op::Add ? 1 : -1));
      drop_zeros(*l);
      return l;
    }
    case Op::Neg: {
      auto x = linear_form(a->args[0]);
      if (!x) return std::nullopt;
      LinearForm out;
      add_scaled(out, *x, Rational(-1));
      return out;
    }
    case Op::Mul: {
      auto l = linear_form(a->args[0]);
      auto r = l ? linear_form(a->args[1]) : std::nullopt;
      if (!r) return std::nullopt;
      if (!l->coeffs.empty() && !r->coeffs.empty()) return std::nullopt;
      const LinearForm& k = l->coeffs.empty() ? *l : *r;
      const LinearForm& x = l->coeffs.empty() ? *r : *l;
      LinearForm out;
      add_scaled(out, x, k.constant);
      drop_zeros(out);
      return out;
    }
    case Op::Div: {
      auto l = linear_form(a->args[0]);
      auto r = l ? linear_form(a->args[1]) : std::nullopt;
      if (!r || !r->coeffs.empty() || r->constant.is_zero()) return std::nullopt;
      LinearForm out;
      add_scaled(out, *l, Rational(1 / r->constant));
      return out;
    }
    default: return std::nullopt;
  }
}

// Formula folding --------------------------------------------------------------

namespace {

bool holds_exact(Rel rel, const Rational& l, const Rational& r) {
  switch (rel) {
    case Rel::Eq: return l == r;
    case Rel::Ne: return l != r;
    case Rel::Lt: return l < r;
    case Rel::Le: return l <= r;
    case Rel::Gt: return l > r;
    case Rel::Ge: return l >= r;
  }
  return false;
}

Formula fold_cmp(Rel rel, const Term& lhs, const Term& rhs, const FoldOptions& opt);

Formula split_bound(Rel rel, const Term& l, const Term& r, const FoldOptions& opt) {
  // Expects the min/max on the left.
  const auto* mx = apply_of(l, Op::Max);
  const auto* mn = apply_of(l, Op::Min);
  const node::Apply* m = mx ? mx : mn;
  if (!m || rel == Rel::Eq || rel == Rel::Ne) return cmp(rel, l, r);
  const bool upper = rel == Rel::Le || rel == Rel::Lt;
  Formula a = fold_cmp(rel, m->args[0], r, opt);
  Formula b = fold_cmp(rel, m->args[1], r, opt);
  // max <= c needs both; max >= c needs one. Dually for min.
  const bool both = mx ? upper : !upper;
  return fold(both ? conj({a, b}) : disj({a, b}), opt);
}

Formula fold_cmp(Rel rel, const Term& lhs, const Term& rhs, const FoldOptions& opt) {
  Term l = fold(lhs);
  Term r = fold(rhs);
  const Number* lc = const_of(l);
  const Number* rc = const_of(r);
  if (lc && rc && lc->is_exact() && rc->is_exact()) {
    return truth(holds_exact(rel, lc->exact(), rc->exact()));
  }
  if (l == r) return truth(rel == Rel::Eq || rel == Rel::Le || rel == Rel::Ge);
  if (opt.split_minmax_bounds) {
    const bool l_mm = apply_of(l, Op::Max) || apply_of(l, Op::Min);
    const bool r_mm = apply_of(r, Op::Max) || apply_of(r, Op::Min);
    if (l_mm) return split_bound(rel, l, r, opt);
    if (r_mm) return split_bound(mirror(rel), r, l, opt);
  }
  if (opt.isolate_linear) {
    const bool already = l.kind() == Term::Kind::Var && rc && rc->is_exact();
    if (!already) {
      if (auto lf = linear_form(apply(Op::Sub, {l, r}))) {
        if (lf->coeffs.empty()) return truth(holds_exact(rel, lf->constant, Rational(0)));
        if (lf->coeffs.size() == 1) {
          const auto& [name, a] = *lf->coeffs.begin();
          const Rational bound = -lf->constant / a;
          return cmp(a.sign() < 0 ? mirror(rel) : rel, var(name), constant(bound));
        }
      }
    }
  }
  return cmp(rel, std::move(l), std::move(r));
}

// Bounds implied by atoms `v rel c`; used to drop unsatisfiable conjunctions.
struct Bound {
  std::optional<Rational> lo, hi;
  bool lo_strict = false, hi_strict = false;

  void lower(const Rational& c, bool strict) {
    if (!lo || c > *lo || (c == *lo && strict)) {
      lo = c;
      lo_strict = strict;
    }
  }
  void upper(const Rational& c, bool strict) {
    if (!hi || c < *hi || (c == *hi && strict)) {
      hi = c;
      hi_strict = strict;
    }
  }
  bool empty() const {
    if (!lo || !hi) return false;
    return *lo > *hi || (*lo == *hi && (lo_strict || hi_strict));
  }
};

bool unsatisfiable_bounds(const std::vector<Formula>& parts) {
  std::map<std::string, Bound> bounds;
  for (const auto& p : parts) {
    const auto* c = p.as<node::Cmp>();
    if (!c) continue;
    Rel rel = c->rel;
    const node::Var* v = c->lhs.as<node::Var>();
    const Number* k = const_of(c->rhs);
    if (!v) {
      v = c->rhs.as<node::Var>();
      k = const_of(c->lhs);
      rel = mirror(rel);
    }
    if (!v || !k || !k->is_exact()) continue;
    Bound& b = bounds[v->name];
    switch (rel) {
      case Rel::Eq:
        b.lower(k->exact(), false);
        b.upper(k->exact(), false);
        break;
      case Rel::Lt: b.upper(k->exact(), true); break;
      case Rel::Le: b.upper(k->exact(), false); break;
      case Rel::Gt: b.lower(k->exact(), true); break;
      case Rel::Ge: b.lower(k->exact(), false); break;
      case Rel::Ne: break;
    }
    if (b.empty()) return true;
  }
  return false;
}

bool complementary(const Formula& a, const Formula& b) {
  const auto* x = a.as<node::Cmp>();
  const auto* y = b.as<node::Cmp>();
  if (x && y) return x->rel == complement(y->rel) && x->lhs == y->lhs && x->rhs == y->rhs;
  if (const auto* n = a.as<node::Not>()) return n->body == b;
  if (const auto* n = b.as<node::Not>()) return n->body == a;
  return false;
}

Formula fold_junction(const std::vector<Formula>& in, bool is_and, const FoldOptions& opt) {
  std::vector<Formula> parts;
  auto add = [&](auto&& self, const Formula& f) -> bool {
    Formula g = fold(f, opt);
    if (const auto* t = g.as<node::Truth>()) return t->value != is_and;  // absorbing element
    const auto* sub_and = g.as<node::And>();
    const auto* sub_or = g.as<node::Or>();
    if (is_and && sub_and) {
      for (const auto& p : sub_and->parts) {
        if (self(self, p)) return true;
      }
      return false;
    }
    if (!is_and && sub_or) {
      for (const auto& p : sub_or->parts) {
        if (self(self, p)) return true;
      }
      return false;
    }
    for (const auto& p : parts) {
      if (p == g) return false;
      if (complementary(p, g)) return true;
    }
    parts.push_back(std::move(g));
    return false;
  };
  for (const auto& f : in) {
    if (add(add, f)) return truth(!is_and);
  }
  if (is_and && unsatisfiable_bounds(parts)) return truth(false);
  return is_and ? conj(std::move(parts)) : disj(std::move(parts));
}

}  // namespace

Formula fold(const Formula& f, const FoldOptions& opt) {
  switch (f.kind()) {
    case Formula::Kind::Truth: return f;
    case Formula::Kind::Cmp: {
      const auto& c = *f.as<node::Cmp>();
      return fold_cmp(c.rel, c.lhs, c.rhs, opt);
    }
    case Formula::Kind::And: return fold_junction(f.as<node::And>()->parts, true, opt);
    case Formula::Kind::Or: return fold_junction(f.as<node::Or>()->parts, false, opt);
    case Formula::Kind::Not: {
      Formula b = fold(f.as<node::Not>()->body, opt);
      if (const auto* t = b.as<node::Truth>()) return truth(!t->value);
      if (const auto* n = b.as<node::Not>()) return n->body;
      if (const auto* c = b.as<node::Cmp>()) return fold_cmp(complement(c->rel), c->lhs, c->rhs, opt);
      return negate(std::move(b));
    }
    case Formula::Kind::Exists: {
      const auto& e = *f.as<node::Exists>();
      Formula b = fold(e.body, opt);
      if (!free_vars(b).contains(e.var)) return b;
      return exists(e.var, std::move(b));
    }
    case Formula::Kind::Poss: {
      const auto& p = *f.as<node::Poss>();
      return poss(fold(p.action), p.situation);
    }
  }
  return f;
}

// Fluent-atom normalization ------------------------------------------------------

namespace {

Term replace_term(const Term& t, const Term& from, const Term& to);
Formula replace_term(const Formula& f, const Term& from, const Term& to);

Term replace_term(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  if (const auto* a = t.as<node::Apply>()) {
    std::vector<Term> args;
    for (const auto& x : a->args) args.push_back(replace_term(x, from, to));
    return apply(a->op, std::move(args));
  }
  if (const auto* i = t.as<node::Ite>()) {
    return ite(replace_term(i->guard, from, to), replace_term(i->then_term, from, to),
               replace_term(i->else_term, from, to));
  }
  return t;
}

Formula replace_term(const Formula& f, const Term& from, const Term& to) {
  if (const auto* c = f.as<node::Cmp>()) {
    return cmp(c->rel, replace_term(c->lhs, from, to), replace_term(c->rhs, from, to));
  }
  if (const auto* a = f.as<node::And>()) {
    std::vector<Formula> parts;
    for (const auto& p : a->parts) parts.push_back(replace_term(p, from, to));
    return conj(std::move(parts));
  }
  if (const auto* o = f.as<node::Or>()) {
    std::vector<Formula> parts;
    for (const auto& p : o->parts) parts.push_back(replace_term(p, from, to));
    return disj(std::move(parts));
  }
  if (const auto* n = f.as<node::Not>()) return negate(replace_term(n->body, from, to));
  if (const auto* e = f.as<node::Exists>()) return exists(e->var, replace_term(e->body, from, to));
  return f;
}

void collect_fluents(const Term& t, std::vector<Term>& out);
void collect_fluents(const Formula& f, std::vector<Term>& out);

void collect_fluents(const Term& t, std::vector<Term>& out) {
  if (t.kind() == Term::Kind::Fluent) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  } else if (const auto* a = t.as<node::Apply>()) {
    for (const auto& x : a->args) collect_fluents(x, out);
  } else if (const auto* i = t.as<node::Ite>()) {
    collect_fluents(i->guard, out);
    collect_fluents(i->then_term, out);
    collect_fluents(i->else_term, out);
  }
}

void collect_fluents(const Formula& f, std::vector<Term>& out) {
  if (const auto* c = f.as<node::Cmp>()) {
    collect_fluents(c->lhs, out);
    collect_fluents(c->rhs, out);
  } else if (const auto* a = f.as<node::And>()) {
    for (const auto& p : a->parts) collect_fluents(p, out);
  } else if (const auto* o = f.as<node::Or>()) {
    for (const auto& p : o->parts) collect_fluents(p, out);
  } else if (const auto* n = f.as<node::Not>()) {
    collect_fluents(n->body, out);
  } else if (const auto* e = f.as<node::Exists>()) {
    collect_fluents(e->body, out);
  }
}

class Normalizer {
 public:
  explicit Normalizer(std::set<std::string> used) : used_(std::move(used)) {}

  Formula formula(const Formula& f) {
    if (const auto* c = f.as<node::Cmp>()) return atom(*c, f);
    if (const auto* a = f.as<node::And>()) {
      std::vector<Formula> parts;
      for (const auto& p : a->parts) parts.push_back(formula(p));
      return conj(std::move(parts));
    }
    if (const auto* o = f.as<node::Or>()) {
      std::vector<Formula> parts;
      for (const auto& p : o->parts) parts.push_back(formula(p));
      return disj(std::move(parts));
    }
    if (const auto* n = f.as<node::Not>()) return negate(formula(n->body));
    if (const auto* e = f.as<node::Exists>()) return exists(e->var, formula(e->body));
    return f;
  }

 private:
  std::string fresh() {
    std::string name = "u";
    for (int k = 1; used_.contains(name); ++k) name = "u" + std::to_string(k);
    used_.insert(name);
    return name;
  }

  static bool normal(const node::Cmp& c) {
    if (c.rel != Rel::Eq) return false;
    const bool lf = c.lhs.kind() == Term::Kind::Fluent;
    const bool rf = c.rhs.kind() == Term::Kind::Fluent;
    return (lf && (rf || !mentions_fluent(c.rhs))) || (rf && !mentions_fluent(c.lhs));
  }

  Formula atom(const node::Cmp& c, const Formula& f) {
    if (normal(c)) return f;
    std::vector<Term> fluents;
    collect_fluents(f, fluents);
    if (fluents.empty()) return f;
    std::vector<std::string> names;
    Formula body = f;
    for (const auto& fl : fluents) {
      names.push_back(fresh());
      body = replace_term(body, fl, var(names.back()));
    }
    for (std::size_t i = fluents.size(); i-- > 0;) {
      body = exists(names[i], conj({cmp(Rel::Eq, fluents[i], var(names[i])), body}));
    }
    return body;
  }

  std::set<std::string> used_;
};

}  // namespace

Formula normalize_fluent_atoms(const Formula& phi, const std::set<std::string>& reserved) {
  std::set<std::string> used = reserved;
  collect_names(phi, used);
  return Normalizer(std::move(used)).formula(phi);
}

// One-point rule -----------------------------------------------------------------

namespace {

Formula eliminate(const std::string& v, const Formula& body);

Formula one_point(const Formula& f) {
  if (const auto* a = f.as<node::And>()) {
    std::vector<Formula> parts;
    for (const auto& p : a->parts) parts.push_back(one_point(p));
    return conj(std::move(parts));
  }
  if (const auto* o = f.as<node::Or>()) {
    std::vector<Formula> parts;
    for (const auto& p : o->parts) parts.push_back(one_point(p));
    return disj(std::move(parts));
  }
  if (const auto* n = f.as<node::Not>()) return negate(one_point(n->body));
  if (const auto* e = f.as<node::Exists>()) return eliminate(e->var, one_point(e->body));
  return f;
}

Formula eliminate(const std::string& v, const Formula& body) {
  std::vector<Formula> parts;
  if (const auto* a = body.as<node::And>()) {
    parts = a->parts;
  } else {
    parts = {body};
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto* c = parts[i].as<node::Cmp>();
    if (!c || c->rel != Rel::Eq) continue;
    std::optional<Term> def;
    if (const auto* lv = c->lhs.as<node::Var>(); lv && lv->name == v && !free_vars(c->rhs).contains(v)) {
      def = c->rhs;
    } else if (const auto* rv = c->rhs.as<node::Var>();
               rv && rv->name == v && !free_vars(c->lhs).contains(v)) {
      def = c->lhs;
    }
    if (!def) continue;
    std::vector<Formula> rest;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (j != i) rest.push_back(parts[j]);
    }
    try {
      return one_point(substitute(conj(std::move(rest)), v, *def));
    } catch (const SortError&) {
      continue;
    }
  }
  return exists(v, body);
}

}  // namespace

Formula one_point_elim(const Formula& phi) { return one_point(phi); }

bool has_exists(const Formula& phi) {
  if (phi.kind() == Formula::Kind::Exists) return true;
  if (const auto* a = phi.as<node::And>()) {
    return std::any_of(a->parts.begin(), a->parts.end(), has_exists);
  }
  if (const auto* o = phi.as<node::Or>()) {
    return std::any_of(o->parts.begin(), o->parts.end(), has_exists);
  }
  if (const auto* n = phi.as<node::Not>()) return has_exists(n->body);
  return false;
}

// Piecewise expansion ------------------------------------------------------------

namespace {

const FoldOptions kGuardFold{false, true};

class Expander {
 public:
  explicit Expander(std::size_t max_pieces) : max_pieces_(max_pieces) {}

  std::vector<Piece> term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Apply: return apply_pieces(*t.as<node::Apply>());
      case Term::Kind::Ite: return ite_pieces(*t.as<node::Ite>());
      default: return {Piece{truth(true), t}};
    }
  }

  Formula formula(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Cmp: {
        const auto& c = *f.as<node::Cmp>();
        auto pl = term(c.lhs);
        auto pr = term(c.rhs);
        std::vector<Formula> alts;
        for (const auto& a : pl) {
          for (const auto& b : pr) {
            Formula g = fold(conj({a.guard, b.guard, cmp(c.rel, a.body, b.body)}), kGuardFold);
            if (const auto* t = g.as<node::Truth>(); t && !t->value) continue;
            alts.push_back(std::move(g));
          }
        }
        return fold(disj(std::move(alts)), kGuardFold);
      }
      case Formula::Kind::And: {
        std::vector<Formula> parts;
        for (const auto& p : f.as<node::And>()->parts) parts.push_back(formula(p));
        return fold(conj(std::move(parts)), kGuardFold);
      }
      case Formula::Kind::Or: {
        std::vector<Formula> parts;
        for (const auto& p : f.as<node::Or>()->parts) parts.push_back(formula(p));
        return fold(disj(std::move(parts)), kGuardFold);
      }
      case Formula::Kind::Not: return fold(negate(formula(f.as<node::Not>()->body)), kGuardFold);
      case Formula::Kind::Exists: {
        const auto& e = *f.as<node::Exists>();
        return exists(e.var, formula(e.body));
      }
      default: return f;
    }
  }

  std::vector<std::string> diagnostics;

 private:
  void push(std::vector<Piece>& out, const Formula& guard, const Term& body) {
    Formula g = fold(guard, kGuardFold);
    if (const auto* t = g.as<node::Truth>(); t && !t->value) return;
    out.push_back(Piece{std::move(g), fold(body)});
    if (out.size() > max_pieces_) {
      throw EvalError("piecewise expansion exceeds " + std::to_string(max_pieces_) + " pieces");
    }
  }

  std::vector<Piece> apply_pieces(const node::Apply& a) {
    std::vector<std::vector<Piece>> arg_pieces;
    for (const auto& x : a.args) arg_pieces.push_back(term(x));
    // Cross product of the argument pieces.
    std::vector<Piece> combos{Piece{truth(true), constant(0)}};
    std::vector<std::vector<Term>> bodies{{}};
    for (const auto& pieces : arg_pieces) {
      std::vector<Piece> next;
      std::vector<std::vector<Term>> next_bodies;
      for (std::size_t i = 0; i < combos.size(); ++i) {
        for (const auto& p : pieces) {
          Formula g = fold(conj({combos[i].guard, p.guard}), kGuardFold);
          if (const auto* t = g.as<node::Truth>(); t && !t->value) continue;
          next.push_back(Piece{std::move(g), constant(0)});
          next_bodies.push_back(bodies[i]);
          next_bodies.back().push_back(p.body);
          if (next.size() > max_pieces_) {
            throw EvalError("piecewise expansion exceeds " + std::to_string(max_pieces_) +
                            " pieces");
          }
        }
      }
      combos = std::move(next);
      bodies = std::move(next_bodies);
    }
    std::vector<Piece> out;
    for (std::size_t i = 0; i < combos.size(); ++i) {
      const Formula& g = combos[i].guard;
      const auto& b = bodies[i];
      switch (a.op) {
        case Op::Max:
        case Op::Min: {
          Term folded = fold(apply(a.op, b));
          if (const auto* ap = folded.as<node::Apply>(); !ap || ap->op != a.op) {
            push(out, g, folded);
            break;
          }
          const Rel first = a.op == Op::Max ? Rel::Ge : Rel::Le;
          push(out, conj({g, cmp(first, b[0], b[1])}), b[0]);
          push(out, conj({g, cmp(complement(first), b[0], b[1])}), b[1]);
          break;
        }
        case Op::Abs: {
          Term folded = fold(apply(Op::Abs, b));
          if (!folded.as<node::Apply>() || folded.as<node::Apply>()->op != Op::Abs) {
            push(out, g, folded);
            break;
          }
          push(out, conj({g, cmp(Rel::Ge, b[0], constant(0))}), b[0]);
          push(out, conj({g, cmp(Rel::Lt, b[0], constant(0))}), fold(apply(Op::Neg, {b[0]})));
          break;
        }
        case Op::Div: {
          Term divisor = fold(b[1]);
          if (const Number* c = const_of(divisor); c && c->is_zero()) {
            diagnostics.push_back("division by zero where " + to_string(g) + " holds");
          }
          push(out, g, apply(a.op, b));
          break;
        }
        default: push(out, g, apply(a.op, b)); break;
      }
    }
    return out;
  }

  std::vector<Piece> ite_pieces(const node::Ite& i) {
    Formula g = formula(i.guard);
    Formula ng = fold(negate(g), kGuardFold);
    std::vector<Piece> out;
    if (!(g.as<node::Truth>() && !g.as<node::Truth>()->value)) {
      for (const auto& p : term(i.then_term)) push(out, conj({g, p.guard}), p.body);
    }
    if (!(ng.as<node::Truth>() && !ng.as<node::Truth>()->value)) {
      for (const auto& p : term(i.else_term)) push(out, conj({ng, p.guard}), p.body);
    }
    return out;
  }

  std::size_t max_pieces_;
};

void atoms_into(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::Cmp) {
    out.push_back(f);
  } else if (const auto* a = f.as<node::And>()) {
    for (const auto& p : a->parts) atoms_into(p, out);
  } else if (const auto* o = f.as<node::Or>()) {
    for (const auto& p : o->parts) atoms_into(p, out);
  } else if (const auto* n = f.as<node::Not>()) {
    atoms_into(n->body, out);
  } else if (const auto* e = f.as<node::Exists>()) {
    atoms_into(e->body, out);
  }
}

}  // namespace

PiecewiseTerm to_piecewise(const Term& t, std::size_t max_pieces) {
  Expander ex(max_pieces);
  PiecewiseTerm out;
  out.pieces = ex.term(fold(t));
  out.diagnostics = std::move(ex.diagnostics);
  return out;
}

Formula guard_free(const Formula& f, std::size_t max_pieces) {
  Expander ex(max_pieces);
  return ex.formula(f);
}

std::vector<Formula> atoms_of(const Formula& f) {
  std::vector<Formula> out;
  atoms_into(f, out);
  return out;
}

}  // namespace beliefreg
