// beliefreg: degrees of belief after noisy sensing and acting, by regression.

#include "beliefreg/query.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>

int main(int argc, char** argv) {
  using namespace beliefreg;
  CLI::App app{"Regression-based belief queries over probabilistic action theories"};
  app.set_version_flag("--version", "beliefreg 0.1.0");

  QueryRequest req;
  std::string mode = "belief";
  bool json = false;
  bool list = false;

  app.add_option("--theory", req.theory, "Theory file, or a bundled theory name");
  app.add_option("--query", req.query, "Query formula over the fluents")->capture_default_str();
  app.add_option("--after", req.after, "Actions in execution order, separated by ';'");
  app.add_option("--mode", mode, "belief | projection | density")
      ->check(CLI::IsMember({"belief", "projection", "density", "density-profile"}))
      ->capture_default_str();
  app.add_option("--tol", req.tol, "Absolute tolerance for quadrature")->capture_default_str();
  app.add_flag("--show-regression", req.show_regression, "Print the regression derivation");
  app.add_option("--oracle", req.oracle_samples, "Monte Carlo cross-check with N samples");
  app.add_option("--seed", req.seed, "Seed for the Monte Carlo oracle")->capture_default_str();
  app.add_flag("--json", json, "Emit a JSON report");
  app.add_option("--out", req.out, "Write the report here; density mode writes OUT.<k>.csv");
  app.add_option("--at", req.at, "Projection mode: initial values 'f = v, ...'");
  app.add_option("--fluent", req.fluent, "Density mode: target fluent");
  app.add_option("--grid", req.grid, "Density mode: grid lo:hi:n");
  app.add_flag("--list-theories", list, "List bundled theories and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  if (list) {
    for (const auto& n : bundled_theory_names()) std::cout << n << "\n";
    return kExitOk;
  }
  if (req.theory.empty()) {
    std::cerr << "error: --theory is required\n";
    return kExitInvalid;
  }

  static const std::map<std::string, QueryMode> modes{{"belief", QueryMode::Belief},
                                                     {"projection", QueryMode::Projection},
                                                     {"density", QueryMode::Density},
                                                     {"density-profile", QueryMode::Density}};
  req.mode = modes.at(mode);
  req.format = json ? OutputFormat::Json
                    : (req.mode == QueryMode::Density ? OutputFormat::Csv : OutputFormat::Text);

  // In density mode --out names the CSV stem; elsewhere it receives the report.
  std::string report_file;
  if (req.mode != QueryMode::Density) std::swap(report_file, req.out);

  const QueryReport rep = run_query(req);
  std::cerr << rep.errors;
  if (!report_file.empty() && rep.exit_code != kExitInvalid) {
    std::ofstream of(report_file, std::ios::binary);
    if (!of) {
      std::cerr << "error: cannot write '" << report_file << "'\n";
      return kExitFailure;
    }
    of << rep.output;
  } else {
    std::cout << rep.output;
  }
  return rep.exit_code;
}
