// Parsing of the textual term/formula syntax.
//
//   term    := sum;  sum := product (("+"|"-") product)*
//   product := unary (("*"|"/") unary)*;  unary := "-" unary | power
//   power   := primary ("^" unary)?
//   primary := number | ident | ident "(" args ")" | "(" term ")" | "|" term "|"
//            | "if" formula "then" term "else" term | "pi"
//   formula := disj ("implies" formula)?;  disj := conj ("or" conj)*
//   conj    := unary_f ("and" unary_f)*
//   unary_f := "not" unary_f | "exists" ident ("." formula | unary_f)
//            | "true" | "false" | "poss" "(" action ("," sit)? ")"
//            | term rel term (rel term)* | "(" formula ")"
//   sit     := "now" | "S0" | "do" "(" action "," sit ")"
//            | "do" "(" "[" action ("," action)* "]" "," sit ")"
//
// Fluent names stand for f(now); f(S0) and f(do(...)) give explicit slots.
// Common Unicode spellings (≤ ≥ ≠ − × ÷ ¬ ∧ ∨ ∃ ⊃) are accepted.

#ifndef BELIEFREG_PARSER_HPP
#define BELIEFREG_PARSER_HPP

#include "beliefreg/ast.hpp"

#include <set>
#include <string>
#include <string_view>

namespace beliefreg {

struct Scope {
  std::set<std::string> fluents;
  std::set<std::string> variables;
  /// Unknown identifiers become variables instead of errors.
  bool free_identifiers_are_variables = false;
};

Term parse_term(std::string_view text, const Scope& scope);
Formula parse_formula(std::string_view text, const Scope& scope);
/// Semicolon-separated ground action terms, in execution order. Only the
/// syntax is checked; use parse_actions(theory, ...) for declaration checks.
Situation parse_situation(std::string_view text, const Scope& scope);

}  // namespace beliefreg

#endif  // BELIEFREG_PARSER_HPP
