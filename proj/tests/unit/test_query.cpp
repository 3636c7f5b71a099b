#include "beliefreg/query.hpp"
#include "doctest.h"
#include "json.hpp"

#include <filesystem>
#include <fstream>

using namespace beliefreg;

namespace {

QueryReport run(const std::string& theory, const std::string& q, const std::string& after,
                OutputFormat fmt = OutputFormat::Text) {
  QueryRequest req;
  req.theory = theory;
  req.query = q;
  req.after = after;
  req.format = fmt;
  return run_query(req);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exact value rendering") {
    const QueryReport r = run("wall-discrete", "h <= 5", "sonar(5)");
    CHECK(r.exit_code == kExitOk);
    CHECK(r.output.find("value: 2/3 (0.666667)") != std::string::npos);
    CHECK(r.output.find("gamma: 1/10") != std::string::npos);
  }

  TEST_CASE("continuous value") {
    const QueryReport r = run("wall-continuous", "h = 4", "fwd(4); fwd(-4)");
    CHECK(r.exit_code == kExitOk);
    CHECK(r.output.find("value: 1/5 (0.2)") != std::string::npos);
  }

  TEST_CASE("empty action sequence") {
    const QueryReport r = run("wall-discrete", "h <= 5", "");
    CHECK(r.exit_code == kExitOk);
    CHECK(r.output.find("Bel(h <= 5, S0)") != std::string::npos);
    CHECK(r.output.find("value: 2/5") != std::string::npos);
  }

  TEST_CASE("json report") {
    QueryRequest req;
    req.theory = "wall-discrete";
    req.query = "h <= 5";
    req.after = "sonar(5)";
    req.format = OutputFormat::Json;
    req.oracle_samples = 10000;
    req.seed = 7;
    const QueryReport r = run_query(req);
    REQUIRE(r.exit_code == kExitOk);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["query"] == "h <= 5");
    CHECK(j["actions"] == nlohmann::json::array({"sonar(5)"}));
    CHECK(j["value"]["exact"]["numerator"] == "2");
    CHECK(j["value"]["exact"]["denominator"] == "3");
    CHECK(j["value"]["float"].get<double>() == 2.0 / 3.0);
    CHECK(j["gamma"]["exact"]["denominator"] == "10");
    CHECK(j["regressed"]["condition"] == "x_h <= 5");
    CHECK(j["regressed"]["trace"].is_array());
    CHECK(j["oracle"]["n"] == 10000);
    CHECK(j["oracle"]["seed"] == 7);
    // Identical invocations give identical output.
    CHECK(run_query(req).output == r.output);
  }

  TEST_CASE("json floats round-trip") {
    const QueryReport r = run("wall-continuous", "4 <= h <= 6", "sonar(5)", OutputFormat::Json);
    const auto j = nlohmann::json::parse(r.output);
    const double v = j["value"]["float"].get<double>();
    CHECK(nlohmann::json(v).dump() == j["value"]["float"].dump());
    CHECK(j["value"]["exact"].is_null());
  }

  TEST_CASE("exit codes") {
    CHECK(run("wall-discrete", "h <= ", "").exit_code == kExitInvalid);
    CHECK(run("wall-discrete", "h <= 5", "jump(1)").exit_code == kExitInvalid);
    CHECK(run("no-such-theory", "h <= 5", "").exit_code == kExitInvalid);
    const QueryReport u = run("wall-discrete", "h <= 5", "sonar(30)");
    CHECK(u.exit_code == kExitUndefined);
    CHECK_FALSE(u.errors.empty());
  }

  TEST_CASE("theory diagnostics are reported with positions") {
    const auto path = std::filesystem::temp_directory_path() / "beliefreg-bad.bel";
    {
      std::ofstream out(path);
      out << "fluent h : int in [0, 3]\naction a(z: real) { g := z }\nprior { 1 }\n";
    }
    QueryRequest req;
    req.theory = path.string();
    const QueryReport r = run_query(req);
    CHECK(r.exit_code == kExitInvalid);
    CHECK(r.errors.find(":2:") != std::string::npos);
  }

  TEST_CASE("show regression") {
    QueryRequest req;
    req.theory = "wall-continuous";
    req.query = "h = 4";
    req.after = "fwd(4); fwd(-4)";
    req.show_regression = true;
    const QueryReport r = run_query(req);
    CHECK(r.output.find("(i) regress through fwd(-4)") != std::string::npos);
  }

  TEST_CASE("projection mode") {
    QueryRequest req;
    req.theory = "wall-discrete";
    req.query = "h <= 5";
    req.after = "fwd(2)";
    req.mode = QueryMode::Projection;
    req.at = "h = 7";
    QueryReport r = run_query(req);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.output.find("regressed: max(0, h(S0) - 2) <= 5") != std::string::npos);
    CHECK(r.output.find("value: true") != std::string::npos);
    req.at = "h = 8";
    CHECK(run_query(req).output.find("value: false") != std::string::npos);
    req.at = "h = 99";
    CHECK(run_query(req).exit_code == kExitInvalid);
  }

  TEST_CASE("density mode writes one CSV per prefix") {
    const auto dir = std::filesystem::temp_directory_path() / "beliefreg-unit-density";
    std::filesystem::create_directories(dir);
    QueryRequest req;
    req.theory = "wall-continuous";
    req.mode = QueryMode::Density;
    req.after = "sonar(5);sonar(5)";
    req.grid = "5:5:1";
    req.out = (dir / "h").string();
    const QueryReport r = run_query(req);
    REQUIRE(r.exit_code == kExitOk);
    REQUIRE(r.files.size() == 3);
    std::ifstream in(r.files[0]);
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "value,density");
    CHECK(row == "5,0.1");
    CHECK_FALSE(std::getline(in, extra));
  }

  TEST_CASE("density mode rejects a finite fluent and bad grids") {
    QueryRequest req;
    req.theory = "wall-discrete";
    req.mode = QueryMode::Density;
    CHECK(run_query(req).exit_code == kExitInvalid);
    req.theory = "wall-continuous";
    req.grid = "1:2";
    CHECK(run_query(req).exit_code == kExitInvalid);
    req.grid = "3:1:5";
    CHECK(run_query(req).exit_code == kExitInvalid);
  }

  TEST_CASE("parse_grid") {
    const Grid g = parse_grid("0:15:301");
    CHECK(g.lo == 0.0);
    CHECK(g.hi == 15.0);
    CHECK(g.n == 301);
    CHECK_THROWS(parse_grid("a:b:c"));
    CHECK_THROWS(parse_grid("0:1:0"));
  }
}
