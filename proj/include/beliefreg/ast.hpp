// ============================================================================
// Term and formula language of the situation-calculus fragment.
// ============================================================================
//
// Terms and formulas are immutable trees held by shared pointers, so copies
// are cheap and values can be shared across threads. Node payloads are
// variants; inspect them with `as<T>()` or `std::visit(..., t.node())`.
//
// Fluents carry one situation slot, a SitTerm: a base (the situation
// variable `now` or the constant S0) plus the actions performed on top of it
// in execution order, so h(do([a1, a2], now)) has actions {a1, a2}.
// ============================================================================

#ifndef BELIEFREG_AST_HPP
#define BELIEFREG_AST_HPP

#include "beliefreg/number.hpp"

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace beliefreg {

struct TermNode;
struct FormulaNode;

enum class Op { Add, Sub, Mul, Div, Neg, Min, Max, Abs, Exp, Pow, Gauss, Pi };
enum class Rel { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view op_name(Op op);
std::string_view rel_symbol(Rel rel);
/// Number of arguments an operator takes.
std::size_t op_arity(Op op);
/// Relation with arguments swapped: a < b iff b > a.
Rel mirror(Rel rel);
/// Relation of the negated atom: not (a < b) iff a >= b.
Rel complement(Rel rel);

class Term {
 public:
  enum class Kind { Const, Var, Fluent, Action, Symbol, Apply, Ite };

  Term();  // the constant 0
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

  Kind kind() const;
  const TermNode& node() const { return *node_; }
  template <class T>
  const T* as() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  std::shared_ptr<const TermNode> node_;
};

class Formula {
 public:
  enum class Kind { Truth, Cmp, And, Or, Not, Exists, Poss };

  Formula();  // true
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}

  Kind kind() const;
  const FormulaNode& node() const { return *node_; }
  template <class T>
  const T* as() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  std::shared_ptr<const FormulaNode> node_;
};

enum class SitBase { Now, S0 };

/// do([a1, ..., an], base). An empty action list is the base itself.
struct SitTerm {
  SitBase base = SitBase::Now;
  std::vector<Term> actions;

  bool mentions_do() const { return !actions.empty(); }
  friend bool operator==(const SitTerm& a, const SitTerm& b);
};

/// A ground action sequence executed from S0, in execution order.
struct Situation {
  std::vector<Term> actions;

  bool empty() const { return actions.empty(); }
  std::size_t size() const { return actions.size(); }
  SitTerm as_sit_term() const { return SitTerm{SitBase::S0, actions}; }
  /// The situation without its last action.
  Situation parent() const;
  Situation prefix(std::size_t n) const;
  friend bool operator==(const Situation& a, const Situation& b) { return a.actions == b.actions; }
};

namespace node {

struct Const {
  Number value;
};
struct Var {
  std::string name;
};
struct Fluent {
  std::string name;
  SitTerm situation;
};
struct Action {
  std::string name;
  std::vector<Term> args;
};
/// Uninterpreted object constant such as obj5; only appears as an action argument.
struct Symbol {
  std::string name;
};
struct Apply {
  Op op;
  std::vector<Term> args;
};
/// IF guard THEN then_term ELSE else_term.
struct Ite {
  Formula guard;
  Term then_term;
  Term else_term;
};

struct Truth {
  bool value;
};
struct Cmp {
  Rel rel;
  Term lhs;
  Term rhs;
};
struct And {
  std::vector<Formula> parts;
};
struct Or {
  std::vector<Formula> parts;
};
struct Not {
  Formula body;
};
struct Exists {
  std::string var;
  Formula body;
};
/// Poss(action, situation).
struct Poss {
  Term action;
  SitTerm situation;
};

}  // namespace node

struct TermNode {
  std::variant<node::Const, node::Var, node::Fluent, node::Action, node::Symbol, node::Apply,
               node::Ite>
      v;
};

struct FormulaNode {
  std::variant<node::Truth, node::Cmp, node::And, node::Or, node::Not, node::Exists, node::Poss> v;
};

template <class T>
const T* Term::as() const {
  return std::get_if<T>(&node_->v);
}

template <class T>
const T* Formula::as() const {
  return std::get_if<T>(&node_->v);
}

// Construction ---------------------------------------------------------------

Term constant(Number value);
Term var(std::string name);
Term fluent(std::string name, SitTerm situation = {});
Term action(std::string name, std::vector<Term> args = {});
Term symbol(std::string name);
Term apply(Op op, std::vector<Term> args);
Term ite(Formula guard, Term then_term, Term else_term);

Term operator+(const Term& a, const Term& b);
Term operator-(const Term& a, const Term& b);
Term operator*(const Term& a, const Term& b);
Term operator/(const Term& a, const Term& b);
Term operator-(const Term& a);

Formula truth(bool value);
Formula cmp(Rel rel, Term lhs, Term rhs);
Formula conj(std::vector<Formula> parts);
Formula disj(std::vector<Formula> parts);
Formula negate(Formula body);
Formula exists(std::string var, Formula body);
Formula poss(Term action, SitTerm situation = {});
/// a implies b, represented as (not a) or b.
Formula implies(Formula a, Formula b);

// Kernel operations ----------------------------------------------------------

/// Capture-avoiding substitution of a term for a free variable. Throws
/// SortError when an action term or object symbol would land in an
/// arithmetic position.
Term substitute(const Term& t, const std::string& var, const Term& replacement);
Formula substitute(const Formula& f, const std::string& var, const Term& replacement);

/// phi[s]: replaces the situation variable `now` by `s` in every fluent and
/// Poss slot, so f(do(b, now)) becomes f(do(s.actions ++ b, s.base)).
Term substitute_now(const Term& t, const SitTerm& s);
Formula substitute_now(const Formula& f, const SitTerm& s);

/// Replaces every fluent reference f(S0) (or f(now) with no actions) by the
/// term chosen by `value_of`. Used to move from initial-situation fluents to
/// value variables.
Term replace_initial_fluents(const Term& t, const std::function<Term(const std::string&)>& value_of);
Formula replace_initial_fluents(const Formula& f,
                                const std::function<Term(const std::string&)>& value_of);

std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Formula& f);

/// True iff some situation slot holds a nonempty action sequence.
bool mentions_do(const Term& t);
bool mentions_do(const Formula& f);

bool mentions_fluent(const Term& t);
bool mentions_fluent(const Formula& f);

/// Every variable name used, free or bound.
void collect_names(const Term& t, std::set<std::string>& out);
void collect_names(const Formula& f, std::set<std::string>& out);

/// Unique-names equality of two action terms: false for different names,
/// componentwise argument equality otherwise.
Formula actions_equal(const Term& a, const Term& b);

bool is_ground_action(const Term& t);

/// Value of a builtin applied to numbers; exact whenever the operation and
/// its arguments allow it. Throws EvalError on division by zero or a
/// nonpositive gauss variance.
Number apply_op(Op op, const std::vector<Number>& args);

}  // namespace beliefreg

#endif  // BELIEFREG_AST_HPP
