#include "beliefreg/printer.hpp"

namespace beliefreg {

namespace {

// Binding strength of the outermost construct; operands binding weaker than
// their context get parenthesized.
enum Level : int {
  kIte = 0,
  kSum = 1,
  kProduct = 2,
  kUnary = 3,
  kPower = 4,
  kPrimary = 5,
};

int level(const Term& t) {
  if (t.kind() == Term::Kind::Ite) return kIte;
  if (const auto* c = t.as<node::Const>()) return c->value.is_negative() ? kUnary : kPrimary;
  const auto* a = t.as<node::Apply>();
  if (!a) return kPrimary;
  switch (a->op) {
    case Op::Add:
    case Op::Sub: return kSum;
    case Op::Mul:
    case Op::Div: return kProduct;
    case Op::Neg: return kUnary;
    case Op::Pow: return kPower;
    default: return kPrimary;
  }
}

void print(const Term& t, int min_level, std::string& out);
void print(const Formula& f, int min_level, std::string& out);

void print_sit(const SitTerm& s, std::string& out) {
  const char* base = s.base == SitBase::Now ? "now" : "S0";
  if (s.actions.empty()) {
    out += base;
    return;
  }
  out += "do([";
  for (std::size_t i = 0; i < s.actions.size(); ++i) {
    if (i) out += ", ";
    print(s.actions[i], kIte, out);
  }
  out += "], ";
  out += base;
  out += ')';
}

void print_args(const std::vector<Term>& args, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    print(args[i], kSum, out);
  }
  out += ')';
}

void print_apply(const node::Apply& a, std::string& out) {
  switch (a.op) {
    case Op::Add:
    case Op::Sub:
      print(a.args[0], kSum, out);
      out += a.op == Op::Add ? " + " : " - ";
      print(a.args[1], kProduct, out);
      return;
    case Op::Mul:
    case Op::Div:
      print(a.args[0], kProduct, out);
      out += a.op == Op::Mul ? " * " : " / ";
      print(a.args[1], kUnary, out);
      return;
    case Op::Neg: {
      const Term& x = a.args[0];
      const auto* pw = x.as<node::Apply>();
      const bool numeric_lead = x.kind() == Term::Kind::Const ||
                                (pw && pw->op == Op::Pow && level(pw->args[0]) != kPrimary) ||
                                (pw && pw->op == Op::Pow && pw->args[0].kind() == Term::Kind::Const);
      out += '-';
      print(x, numeric_lead ? kPrimary + 1 : kUnary, out);
      return;
    }
    case Op::Pow: {
      const Term& base = a.args[0];
      const auto* c = base.as<node::Const>();
      // A negative literal base reads back as a literal, so it needs no parens.
      print(base, (c && c->value.is_negative()) ? kUnary : kPrimary, out);
      out += " ^ ";
      print(a.args[1], kUnary, out);
      return;
    }
    case Op::Pi: out += "pi"; return;
    default:
      out += op_name(a.op);
      print_args(a.args, out);
      return;
  }
}

void print(const Term& t, int min_level, std::string& out) {
  const bool parens = level(t) < min_level;
  if (parens) out += '(';
  if (const auto* c = t.as<node::Const>()) {
    out += c->value.to_string();
  } else if (const auto* v = t.as<node::Var>()) {
    out += v->name;
  } else if (const auto* s = t.as<node::Symbol>()) {
    out += s->name;
  } else if (const auto* f = t.as<node::Fluent>()) {
    out += f->name;
    if (f->situation.base != SitBase::Now || f->situation.mentions_do()) {
      out += '(';
      print_sit(f->situation, out);
      out += ')';
    }
  } else if (const auto* a = t.as<node::Action>()) {
    out += a->name;
    if (!a->args.empty()) print_args(a->args, out);
  } else if (const auto* ap = t.as<node::Apply>()) {
    print_apply(*ap, out);
  } else if (const auto* i = t.as<node::Ite>()) {
    out += "if ";
    print(i->guard, 1, out);
    out += " then ";
    print(i->then_term, kIte, out);
    out += " else ";
    print(i->else_term, kIte, out);
  }
  if (parens) out += ')';
}

int level(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    default: return 3;
  }
}

void print(const Formula& f, int min_level, std::string& out) {
  const bool parens = level(f) < min_level;
  if (parens) out += '(';
  if (const auto* t = f.as<node::Truth>()) {
    out += t->value ? "true" : "false";
  } else if (const auto* c = f.as<node::Cmp>()) {
    print(c->lhs, kSum, out);
    out += ' ';
    out += rel_symbol(c->rel);
    out += ' ';
    print(c->rhs, kSum, out);
  } else if (const auto* a = f.as<node::And>()) {
    for (std::size_t i = 0; i < a->parts.size(); ++i) {
      if (i) out += " and ";
      print(a->parts[i], 3, out);
    }
  } else if (const auto* o = f.as<node::Or>()) {
    for (std::size_t i = 0; i < o->parts.size(); ++i) {
      if (i) out += " or ";
      print(o->parts[i], 2, out);
    }
  } else if (const auto* n = f.as<node::Not>()) {
    out += "not ";
    print(n->body, 3, out);
  } else if (const auto* e = f.as<node::Exists>()) {
    out += "exists ";
    out += e->var;
    out += " (";
    print(e->body, 0, out);
    out += ')';
  } else if (const auto* p = f.as<node::Poss>()) {
    out += "poss(";
    print(p->action, kIte, out);
    if (p->situation.base != SitBase::Now || p->situation.mentions_do()) {
      out += ", ";
      print_sit(p->situation, out);
    }
    out += ')';
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print(t, kIte, out);
  return out;
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

std::string to_string(const SitTerm& s) {
  std::string out;
  print_sit(s, out);
  return out;
}

std::string to_string(const Situation& s) {
  std::string out;
  for (std::size_t i = 0; i < s.actions.size(); ++i) {
    if (i) out += "; ";
    print(s.actions[i], kIte, out);
  }
  return out;
}

}  // namespace beliefreg
