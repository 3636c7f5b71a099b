#ifndef BELIEFREG_TESTS_HELPERS_HPP
#define BELIEFREG_TESTS_HELPERS_HPP

#include "beliefreg/parser.hpp"
#include "beliefreg/printer.hpp"
#include "beliefreg/query.hpp"
#include "beliefreg/theory.hpp"

#include <string>

namespace testing {

inline beliefreg::ActionTheory discrete() {
  return beliefreg::load_theory(*beliefreg::bundled_theory("wall-discrete"));
}
inline beliefreg::ActionTheory continuous() {
  return beliefreg::load_theory(*beliefreg::bundled_theory("wall-continuous"));
}

inline beliefreg::Scope wall_scope() {
  beliefreg::Scope s;
  s.fluents = {"h"};
  s.free_identifiers_are_variables = true;
  return s;
}
inline beliefreg::Term T(const std::string& s) { return beliefreg::parse_term(s, wall_scope()); }
inline beliefreg::Formula F(const std::string& s) { return beliefreg::parse_formula(s, wall_scope()); }
inline std::string str(const beliefreg::Term& t) { return beliefreg::to_string(t); }
inline std::string str(const beliefreg::Formula& f) { return beliefreg::to_string(f); }

}  // namespace testing

#endif  // BELIEFREG_TESTS_HELPERS_HPP
