// Query front-end shared by the command-line tool and the tests: load a
// theory, run a belief, projection or density query, and render the report.

#ifndef BELIEFREG_QUERY_HPP
#define BELIEFREG_QUERY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace beliefreg {

enum class QueryMode { Belief, Projection, Density };
enum class OutputFormat { Text, Json, Csv };

/// Process exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInvalid = 2,    // usage, parse or validation error
  kExitUndefined = 3,  // normalization factor is zero
};

struct QueryRequest {
  /// Path to a theory file, or the name of a bundled theory.
  std::string theory;
  std::string query = "true";
  /// "a1(..); a2(..)" in execution order.
  std::string after;
  QueryMode mode = QueryMode::Belief;
  double tol = 1e-6;
  bool show_regression = false;
  std::size_t oracle_samples = 0;
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::Text;
  /// Output file; for density mode, the stem of one CSV per action prefix.
  std::string out;
  /// Projection mode: initial valuation "f1 = v1, f2 = v2" to evaluate at.
  std::string at;
  /// Density mode: target fluent and grid "lo:hi:n".
  std::string fluent;
  std::string grid = "";
};

struct QueryReport {
  int exit_code = kExitOk;
  /// What to print on stdout.
  std::string output;
  /// Diagnostics for stderr.
  std::string errors;
  /// Files written (density mode with --out).
  std::vector<std::string> files;
};

/// Source text of a bundled theory ("wall-discrete", "wall-continuous").
std::optional<std::string> bundled_theory(const std::string& name);
std::vector<std::string> bundled_theory_names();

/// Never throws; failures are reported through exit_code and errors.
QueryReport run_query(const QueryRequest& req);

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

/// Parses "lo:hi:n". Throws std::invalid_argument.
Grid parse_grid(const std::string& text);

}  // namespace beliefreg

#endif  // BELIEFREG_QUERY_HPP
