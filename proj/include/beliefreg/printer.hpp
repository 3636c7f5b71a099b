#ifndef BELIEFREG_PRINTER_HPP
#define BELIEFREG_PRINTER_HPP

#include "beliefreg/ast.hpp"

#include <string>

namespace beliefreg {

/// Canonical DSL text. parse(to_string(e)) reproduces e structurally.
std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const SitTerm& s);
std::string to_string(const Situation& s);

}  // namespace beliefreg

#endif  // BELIEFREG_PRINTER_HPP
