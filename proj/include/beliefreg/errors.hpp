#ifndef BELIEFREG_ERRORS_HPP
#define BELIEFREG_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace beliefreg {

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;

  std::string to_string() const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax errors and declaration errors, carrying every diagnostic found.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// A substitution would put a term of the wrong sort into a position.
class SortError : public Error {
 public:
  using Error::Error;
};

/// Reference to an action, sensor or fluent the theory does not declare,
/// or a wrong argument count.
class DeclarationError : public Error {
 public:
  using Error::Error;
};

/// Numeric evaluation failed (division by zero, unsupported construct).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// The normalization factor vanished; belief is not defined.
class UndefinedBelief : public Error {
 public:
  using Error::Error;
};

}  // namespace beliefreg

#endif  // BELIEFREG_ERRORS_HPP
