#include "beliefreg/theory.hpp"

#include "beliefreg/printer.hpp"
#include "beliefreg/simplify.hpp"
#include "parser_detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace beliefreg {

// Domains --------------------------------------------------------------------

std::vector<Number> FluentDomain::enumerate() const {
  if (kind == DomainKind::FiniteSet) return values;
  if (kind != DomainKind::IntRange) throw EvalError("cannot enumerate a real interval");
  std::vector<Number> out;
  for (Rational v = lo.exact(); v <= hi.exact(); v += 1) out.emplace_back(v);
  return out;
}

std::size_t FluentDomain::size() const {
  if (kind == DomainKind::FiniteSet) return values.size();
  if (kind != DomainKind::IntRange) throw EvalError("real interval has no finite size");
  const Rational n = hi.exact() - lo.exact() + 1;
  return static_cast<std::size_t>(numerator(n));
}

bool FluentDomain::contains(const Number& v) const {
  switch (kind) {
    case DomainKind::IntRange: return v.is_integer() && lo <= v && v <= hi;
    case DomainKind::FiniteSet:
      return std::any_of(values.begin(), values.end(),
                         [&](const Number& x) { return compare(x, v) == 0; });
    case DomainKind::RealInterval: return lo <= v && v <= hi;
  }
  return false;
}

std::string FluentDomain::to_string() const {
  switch (kind) {
    case DomainKind::IntRange: return "int in [" + lo.to_string() + ", " + hi.to_string() + "]";
    case DomainKind::RealInterval:
      return "real in [" + lo.to_string() + ", " + hi.to_string() + "]";
    case DomainKind::FiniteSet: {
      std::string out = "set {";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += values[i].to_string();
      }
      return out + "}";
    }
  }
  return {};
}

const Term* ActionDecl::effect_for(const std::string& fluent) const {
  for (const auto& [name, e] : effects) {
    if (name == fluent) return &e;
  }
  return nullptr;
}

// Theory lookups -------------------------------------------------------------

const FluentDecl* ActionTheory::find_fluent(std::string_view name) const {
  for (const auto& f : fluents) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const ActionDecl* ActionTheory::find_action(std::string_view name) const {
  for (const auto& a : actions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const SensorDecl* ActionTheory::find_sensor(std::string_view name) const {
  for (const auto& s : sensors) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool ActionTheory::all_discrete() const {
  return std::all_of(fluents.begin(), fluents.end(),
                     [](const FluentDecl& f) { return f.domain.is_discrete(); });
}

Scope ActionTheory::scope() const {
  Scope s;
  for (const auto& f : fluents) s.fluents.insert(f.name);
  return s;
}

std::vector<std::string> ActionTheory::value_vars() const {
  std::vector<std::string> out;
  for (const auto& f : fluents) out.push_back(value_var(f.name));
  return out;
}

std::string value_var(std::string_view fluent) { return "x_" + std::string(fluent); }

// Parsing --------------------------------------------------------------------

namespace {

using detail::ExprParser;
using detail::SyntaxError;
using detail::TokKind;
using detail::Token;

bool is_top_keyword(const Token& t) {
  return t.kind == TokKind::Ident &&
         (t.text == "fluent" || t.text == "action" || t.text == "sensor" || t.text == "prior");
}

const std::set<std::string>& reserved_names() {
  static const std::set<std::string> words{
      "and", "or",   "not",  "exists", "implies", "if",     "then",   "else",  "true",
      "false", "now", "S0",  "do",     "poss",    "pi",     "min",    "max",   "abs",
      "exp",  "gauss", "pow", "power", "Bel",     "fluent", "action", "sensor", "prior",
      "requires", "on", "in", "int",   "real",    "set",    "object", "inf"};
  return words;
}

// True when every fluent reference sits at `now` without actions.
bool only_now_fluents(const Term& t);
bool only_now_fluents(const Formula& f);

bool only_now_fluents(const Term& t) {
  if (const auto* f = t.as<node::Fluent>()) {
    return f->situation.base == SitBase::Now && f->situation.actions.empty();
  }
  if (const auto* a = t.as<node::Apply>()) {
    return std::all_of(a->args.begin(), a->args.end(),
                       [](const Term& x) { return only_now_fluents(x); });
  }
  if (const auto* a = t.as<node::Action>()) {
    return std::all_of(a->args.begin(), a->args.end(),
                       [](const Term& x) { return only_now_fluents(x); });
  }
  if (const auto* i = t.as<node::Ite>()) {
    return only_now_fluents(i->guard) && only_now_fluents(i->then_term) &&
           only_now_fluents(i->else_term);
  }
  return true;
}

bool only_now_fluents(const Formula& f) {
  if (const auto* c = f.as<node::Cmp>()) return only_now_fluents(c->lhs) && only_now_fluents(c->rhs);
  if (const auto* a = f.as<node::And>()) {
    return std::all_of(a->parts.begin(), a->parts.end(),
                       [](const Formula& x) { return only_now_fluents(x); });
  }
  if (const auto* o = f.as<node::Or>()) {
    return std::all_of(o->parts.begin(), o->parts.end(),
                       [](const Formula& x) { return only_now_fluents(x); });
  }
  if (const auto* n = f.as<node::Not>()) return only_now_fluents(n->body);
  if (const auto* e = f.as<node::Exists>()) return only_now_fluents(e->body);
  if (f.as<node::Poss>()) return false;
  return true;
}

void fluent_names(const Term& t, std::set<std::string>& out);
void fluent_names(const Formula& f, std::set<std::string>& out);

void fluent_names(const Term& t, std::set<std::string>& out) {
  if (const auto* f = t.as<node::Fluent>()) {
    out.insert(f->name);
  } else if (const auto* a = t.as<node::Apply>()) {
    for (const auto& x : a->args) fluent_names(x, out);
  } else if (const auto* ac = t.as<node::Action>()) {
    for (const auto& x : ac->args) fluent_names(x, out);
  } else if (const auto* i = t.as<node::Ite>()) {
    fluent_names(i->guard, out);
    fluent_names(i->then_term, out);
    fluent_names(i->else_term, out);
  }
}

void fluent_names(const Formula& f, std::set<std::string>& out) {
  if (const auto* c = f.as<node::Cmp>()) {
    fluent_names(c->lhs, out);
    fluent_names(c->rhs, out);
  } else if (const auto* a = f.as<node::And>()) {
    for (const auto& x : a->parts) fluent_names(x, out);
  } else if (const auto* o = f.as<node::Or>()) {
    for (const auto& x : o->parts) fluent_names(x, out);
  } else if (const auto* n = f.as<node::Not>()) {
    fluent_names(n->body, out);
  } else if (const auto* e = f.as<node::Exists>()) {
    fluent_names(e->body, out);
  }
}

class TheoryParser {
 public:
  explicit TheoryParser(std::string_view source)
      : tokens_(detail::tokenize(source)), p_(tokens_, Scope{}) {
    // Fluents may be referenced before their declaration.
    for (std::size_t i = 0; i + 1 < tokens_.size(); ++i) {
      if (tokens_[i].kind == TokKind::Ident && tokens_[i].text == "fluent" &&
          tokens_[i].first_on_line && tokens_[i + 1].kind == TokKind::Ident) {
        fluent_names_.insert(tokens_[i + 1].text);
      }
    }
  }

  ActionTheory run() {
    while (!p_.at_end()) {
      try {
        declaration();
      } catch (const SyntaxError& e) {
        report(e.pos, e.message);
        recover();
      } catch (const SortError& e) {
        report(p_.peek().pos, e.what());
        recover();
      }
    }
    if (!prior_seen_) report(SourcePos{0, 0}, "missing prior declaration");
    if (!diagnostics_.empty()) throw ParseError(diagnostics_);
    return std::move(theory_);
  }

 private:
  void report(SourcePos pos, std::string message) {
    diagnostics_.push_back(Diagnostic{pos, std::move(message)});
  }

  void recover() {
    p_.next();
    while (!p_.at_end() && !(p_.peek().first_on_line && is_top_keyword(p_.peek()))) p_.next();
  }

  void set_scope(std::set<std::string> variables) {
    p_.scope().fluents = fluent_names_;
    p_.scope().variables = std::move(variables);
    p_.scope().free_identifiers_are_variables = false;
  }

  void check_new_name(const Token& tok, const std::string& name, const char* what) {
    if (reserved_names().contains(name)) {
      report(tok.pos, std::string(what) + " name '" + name + "' is a reserved word");
      return;
    }
    if (!declared_.insert(name).second) {
      report(tok.pos, "duplicate declaration of '" + name + "'");
    }
  }

  void declaration() {
    const Token& tok = p_.peek();
    if (tok.kind != TokKind::Ident) p_.fail("expected a declaration");
    if (tok.text == "fluent") return fluent_decl();
    if (tok.text == "action") return action_decl();
    if (tok.text == "sensor") return sensor_decl();
    if (tok.text == "prior") return prior_decl();
    p_.fail("expected 'fluent', 'action', 'sensor' or 'prior'");
  }

  Number signed_number(bool allow_inf) {
    bool negative = p_.accept("-");
    if (!negative) p_.accept("+");
    const Token& tok = p_.peek();
    if (allow_inf && tok.kind == TokKind::Ident && tok.text == "inf") {
      p_.next();
      const double inf = std::numeric_limits<double>::infinity();
      return Number(negative ? -inf : inf);
    }
    if (tok.kind != TokKind::Number) p_.fail("expected a number");
    Number v = detail::literal_value(p_.next());
    return negative ? -v : v;
  }

  void fluent_decl() {
    p_.expect("fluent");
    const Token name_tok = p_.peek();
    FluentDecl decl;
    decl.name = p_.expect_ident();
    decl.pos = name_tok.pos;
    check_new_name(name_tok, decl.name, "fluent");
    p_.expect(":");
    const Token kind_tok = p_.peek();
    const std::string kind = p_.expect_ident();
    if (kind == "int" || kind == "real") {
      p_.expect("in");
      p_.expect("[");
      decl.domain.lo = signed_number(kind == "real");
      p_.expect(",");
      decl.domain.hi = signed_number(kind == "real");
      p_.expect("]");
      decl.domain.kind = kind == "int" ? DomainKind::IntRange : DomainKind::RealInterval;
      if (kind == "int" && !(decl.domain.lo.is_integer() && decl.domain.hi.is_integer())) {
        report(kind_tok.pos, "int domain of '" + decl.name + "' needs integer bounds");
      } else if (decl.domain.hi < decl.domain.lo) {
        report(kind_tok.pos, "empty domain for '" + decl.name + "': lower bound exceeds upper");
      } else if (kind == "real" && decl.domain.lo.to_double() == decl.domain.hi.to_double()) {
        report(kind_tok.pos, "real domain of '" + decl.name + "' has zero width");
      } else if (kind == "int" && decl.domain.size() > 1000000) {
        report(kind_tok.pos, "int domain of '" + decl.name + "' is too large to enumerate");
      }
    } else if (kind == "set") {
      decl.domain.kind = DomainKind::FiniteSet;
      p_.expect("{");
      if (!p_.at("}")) {
        do {
          decl.domain.values.push_back(signed_number(false));
        } while (p_.accept(","));
      }
      p_.expect("}");
      auto& vals = decl.domain.values;
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end(),
                             [](const Number& a, const Number& b) { return compare(a, b) == 0; }),
                 vals.end());
      if (vals.empty()) report(kind_tok.pos, "empty set domain for '" + decl.name + "'");
    } else {
      p_.fail_at(kind_tok, "expected 'int', 'real' or 'set'");
    }
    p_.accept(";");
    theory_.fluents.push_back(std::move(decl));
  }

  std::vector<Param> params(const std::string& owner) {
    std::vector<Param> out;
    if (!p_.accept("(")) return out;
    if (!p_.at(")")) {
      do {
        const Token tok = p_.peek();
        Param prm;
        prm.name = p_.expect_ident();
        if (p_.accept(":")) {
          const Token sort_tok = p_.peek();
          const std::string sort = p_.expect_ident();
          if (sort == "real") {
            prm.sort = ParamSort::Real;
          } else if (sort == "int") {
            prm.sort = ParamSort::Int;
          } else if (sort == "object") {
            prm.sort = ParamSort::Object;
          } else {
            p_.fail_at(sort_tok, "expected parameter sort 'real', 'int' or 'object'");
          }
        }
        if (reserved_names().contains(prm.name)) {
          report(tok.pos, "parameter name '" + prm.name + "' is a reserved word");
        } else if (fluent_names_.contains(prm.name)) {
          report(tok.pos, "parameter '" + prm.name + "' of '" + owner + "' shadows a fluent");
        } else if (prm.name.rfind("x_", 0) == 0 && fluent_names_.contains(prm.name.substr(2))) {
          report(tok.pos, "parameter '" + prm.name + "' of '" + owner +
                              "' clashes with the value variable of fluent '" +
                              prm.name.substr(2) + "'");
        }
        for (const auto& other : out) {
          if (other.name == prm.name) {
            report(tok.pos, "duplicate parameter '" + prm.name + "' in '" + owner + "'");
          }
        }
        out.push_back(prm);
      } while (p_.accept(","));
    }
    p_.expect(")");
    return out;
  }

  static std::set<std::string> param_names(const std::vector<Param>& ps) {
    std::set<std::string> out;
    for (const auto& p : ps) out.insert(p.name);
    return out;
  }

  void check_object_params(const ActionDecl& decl, const Token& at) {
    std::set<std::string> used;
    for (const auto& [f, e] : decl.effects) {
      auto fv = free_vars(e);
      used.insert(fv.begin(), fv.end());
    }
    auto fv = free_vars(decl.precondition);
    used.insert(fv.begin(), fv.end());
    for (const auto& prm : decl.params) {
      if (prm.sort == ParamSort::Object && used.contains(prm.name)) {
        report(at.pos, "object parameter '" + prm.name + "' of '" + decl.name +
                           "' is used in a numeric expression");
      }
    }
  }

  void action_decl() {
    p_.expect("action");
    const Token name_tok = p_.peek();
    ActionDecl decl;
    decl.name = p_.expect_ident();
    decl.pos = name_tok.pos;
    check_new_name(name_tok, decl.name, "action");
    decl.params = params(decl.name);
    set_scope(param_names(decl.params));
    if (p_.accept("requires")) {
      const Token pre_tok = p_.peek();
      decl.precondition = p_.formula();
      if (!only_now_fluents(decl.precondition)) {
        report(pre_tok.pos, "precondition of '" + decl.name +
                                "' may only mention fluents in the current situation");
      }
    }
    p_.expect("{");
    while (!p_.at("}")) {
      if (p_.accept(";")) continue;
      const Token f_tok = p_.peek();
      if (f_tok.kind != TokKind::Ident) p_.fail("expected 'fluent := term'");
      const std::string fname = p_.next().text;
      p_.expect(":=");
      Term effect = p_.term();
      if (!fluent_names_.contains(fname)) {
        report(f_tok.pos, "unknown fluent '" + fname + "' in effect of action '" + decl.name + "'");
      } else if (decl.effect_for(fname)) {
        report(f_tok.pos, "more than one effect for fluent '" + fname + "' in action '" +
                              decl.name + "'");
      } else if (!only_now_fluents(effect)) {
        report(f_tok.pos, "effect of '" + decl.name +
                              "' may only mention fluents in the current situation");
      } else {
        decl.effects.emplace_back(fname, std::move(effect));
      }
    }
    p_.expect("}");
    check_object_params(decl, name_tok);
    theory_.actions.push_back(std::move(decl));
  }

  void sensor_decl() {
    p_.expect("sensor");
    const Token name_tok = p_.peek();
    SensorDecl decl;
    decl.name = p_.expect_ident();
    decl.pos = name_tok.pos;
    check_new_name(name_tok, decl.name, "sensor");
    auto ps = params(decl.name);
    if (ps.size() != 1) {
      report(name_tok.pos, "sensor '" + decl.name + "' needs exactly one reading parameter");
      if (ps.empty()) ps.push_back(Param{"z", ParamSort::Real});
    }
    decl.reading = ps.front();
    if (decl.reading.sort == ParamSort::Object) {
      report(name_tok.pos, "sensor reading of '" + decl.name + "' must be numeric");
    }
    p_.expect("on");
    const Token f_tok = p_.peek();
    decl.fluent = p_.expect_ident();
    if (!fluent_names_.contains(decl.fluent)) {
      report(f_tok.pos, "unknown fluent '" + decl.fluent + "' for sensor '" + decl.name + "'");
    }
    set_scope({decl.reading.name});
    p_.expect("{");
    const Token body_tok = p_.peek();
    decl.error = p_.term();
    p_.expect("}");
    std::set<std::string> used;
    fluent_names(decl.error, used);
    for (const auto& f : used) {
      if (f != decl.fluent) {
        report(body_tok.pos, "likelihood depends on extra fluent '" + f + "' in sensor '" +
                                 decl.name + "'");
      }
    }
    if (!only_now_fluents(decl.error)) {
      report(body_tok.pos, "likelihood of '" + decl.name +
                               "' may only mention fluents in the current situation");
    }
    theory_.sensors.push_back(std::move(decl));
  }

  void prior_decl() {
    const Token kw = p_.peek();
    p_.expect("prior");
    if (prior_seen_) report(kw.pos, "duplicate prior declaration");
    prior_seen_ = true;
    set_scope({});
    p_.expect("{");
    const Token body_tok = p_.peek();
    Term body = p_.term();
    p_.expect("}");
    if (!only_now_fluents(body)) {
      report(body_tok.pos, "prior may only mention fluents, not situations");
    }
    theory_.prior = replace_initial_fluents(
        body, [](const std::string& name) { return var(value_var(name)); });
    theory_.prior_pos = kw.pos;
  }

  std::vector<Token> tokens_;
  ExprParser p_;
  std::set<std::string> fluent_names_;
  std::set<std::string> declared_;
  ActionTheory theory_;
  std::vector<Diagnostic> diagnostics_;
  bool prior_seen_ = false;
};

}  // namespace

ActionTheory parse_theory(std::string_view source) { return TheoryParser(source).run(); }

ActionTheory load_theory(std::string_view source) {
  ActionTheory theory = parse_theory(source);
  auto diagnostics = validate_theory(theory);
  if (!diagnostics.empty()) throw ParseError(std::move(diagnostics));
  return theory;
}

// Actions ----------------------------------------------------------------------

namespace {

const std::vector<Param>& params_of(const ActionTheory& theory, const std::string& name) {
  if (const auto* a = theory.find_action(name)) return a->params;
  if (const auto* s = theory.find_sensor(name)) {
    static thread_local std::vector<Param> one;
    one.assign(1, s->reading);
    return one;
  }
  throw DeclarationError("undeclared action '" + name + "'");
}

const node::Action& action_node(const Term& t) {
  const auto* a = t.as<node::Action>();
  if (!a) throw SortError("expected an action term, got " + to_string(t));
  return *a;
}

}  // namespace

void check_action(const ActionTheory& theory, const Term& action_term) {
  const auto& a = action_node(action_term);
  const auto& ps = params_of(theory, a.name);
  if (ps.size() != a.args.size()) {
    throw DeclarationError("action '" + a.name + "' takes " + std::to_string(ps.size()) +
                           " argument(s), got " + std::to_string(a.args.size()));
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Term& arg = a.args[i];
    const std::string where = "argument " + std::to_string(i + 1) + " of " + to_string(action_term);
    if (ps[i].sort == ParamSort::Object) {
      if (arg.kind() != Term::Kind::Symbol) {
        throw DeclarationError(where + " must be an object constant");
      }
      continue;
    }
    const auto* c = arg.as<node::Const>();
    if (!c) throw DeclarationError(where + " must be a ground number");
    if (ps[i].sort == ParamSort::Int && !c->value.is_integer()) {
      throw DeclarationError(where + " must be an integer");
    }
  }
}

Situation parse_actions(const ActionTheory& theory, std::string_view text) {
  Situation raw = parse_situation(text, theory.scope());
  Situation out;
  for (const auto& t : raw.actions) {
    const auto& a = action_node(t);
    std::vector<Term> args;
    for (const auto& x : a.args) args.push_back(fold(x));
    Term folded = action(a.name, std::move(args));
    check_action(theory, folded);
    out.actions.push_back(std::move(folded));
  }
  return out;
}

Formula parse_query(const ActionTheory& theory, std::string_view text) {
  return parse_formula(text, theory.scope());
}

bool is_sensing(const ActionTheory& theory, const Term& action_term) {
  const auto& a = action_node(action_term);
  if (theory.find_sensor(a.name)) return true;
  if (theory.find_action(a.name)) return false;
  throw DeclarationError("undeclared action '" + a.name + "'");
}

namespace {

template <class Expr>
Expr bind_params(const Expr& e, const std::vector<Param>& ps, const node::Action& a) {
  Expr out = e;
  for (std::size_t i = 0; i < ps.size(); ++i) out = substitute(out, ps[i].name, a.args[i]);
  return out;
}

}  // namespace

Term ssa_rhs(const ActionTheory& theory, const std::string& fluent_name, const Term& action_term) {
  if (!theory.find_fluent(fluent_name)) {
    throw DeclarationError("undeclared fluent '" + fluent_name + "'");
  }
  check_action(theory, action_term);
  const auto& a = action_node(action_term);
  if (const auto* decl = theory.find_action(a.name)) {
    if (const Term* e = decl->effect_for(fluent_name)) return bind_params(*e, decl->params, a);
  }
  return fluent(fluent_name);
}

Formula precondition_of(const ActionTheory& theory, const Term& action_term) {
  check_action(theory, action_term);
  const auto& a = action_node(action_term);
  if (const auto* decl = theory.find_action(a.name)) {
    return bind_params(decl->precondition, decl->params, a);
  }
  return truth(true);
}

Term likelihood_at_now(const ActionTheory& theory, const Term& action_term) {
  check_action(theory, action_term);
  const auto& a = action_node(action_term);
  const auto* s = theory.find_sensor(a.name);
  if (!s) return constant(1);
  return substitute(s->error, s->reading.name, a.args.front());
}

Term likelihood_of(const ActionTheory& theory, const Term& action_term) {
  return replace_initial_fluents(likelihood_at_now(theory, action_term),
                                 [](const std::string& f) { return var(value_var(f)); });
}

}  // namespace beliefreg
