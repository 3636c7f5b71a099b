#include "beliefreg/query.hpp"

#include "beliefreg/errors.hpp"
#include "beliefreg/evaluate.hpp"
#include "beliefreg/parser.hpp"
#include "beliefreg/printer.hpp"
#include "beliefreg/simplify.hpp"
#include "beliefreg/theory.hpp"
#include "bundled_theories.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beliefreg {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double d) { return Number(d).to_string(); }

std::string short_float(double d) {
  std::ostringstream os;
  os << d;
  return os.str();
}

std::string load_source(const std::string& theory) {
  if (std::filesystem::is_regular_file(theory)) {
    std::ifstream in(theory, std::ios::binary);
    if (!in) throw UsageError("cannot read theory file '" + theory + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (auto src = bundled_theory(theory)) return *src;
  std::string names;
  for (const auto& n : bundled_theory_names()) names += (names.empty() ? "" : ", ") + n;
  throw UsageError("no theory file '" + theory + "' (bundled theories: " + names + ")");
}

json number_json(const Number& n) {
  json j;
  if (n.is_exact()) {
    j["exact"] = {{"numerator", numerator(n.exact()).str()},
                  {"denominator", denominator(n.exact()).str()}};
  } else {
    j["exact"] = nullptr;
  }
  j["float"] = n.to_double();
  return j;
}

std::string number_text(const Number& n) {
  if (n.is_exact() && !n.exact().is_zero() && denominator(n.exact()) != 1) {
    return n.to_string() + " (" + short_float(n.to_double()) + ")";
  }
  return n.to_string();
}

json actions_json(const Situation& s) {
  json a = json::array();
  for (const auto& t : s.actions) a.push_back(to_string(t));
  return a;
}

std::string actions_text(const Situation& s) {
  return to_string(s.as_sit_term());
}

Valuation parse_valuation(const ActionTheory& theory, const std::string& text) {
  Valuation v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected 'fluent = value' in --at, got '" + trim(item) + "'");
    const std::string name = trim(item.substr(0, eq));
    const FluentDecl* f = theory.find_fluent(name);
    if (!f) throw UsageError("--at names undeclared fluent '" + name + "'");
    const Term t = fold(parse_term(item.substr(eq + 1), Scope{}));
    const auto* c = t.as<node::Const>();
    if (!c) throw UsageError("--at value for '" + name + "' is not a number");
    if (!f->domain.contains(c->value)) {
      throw UsageError("--at value " + c->value.to_string() + " is outside the domain of '" + name + "'");
    }
    v[name] = c->value;
  }
  for (const auto& f : theory.fluents) {
    if (!v.contains(f.name)) throw UsageError("--at gives no value for fluent '" + f.name + "'");
  }
  return v;
}

json trace_json(const RegressionTrace& tr) {
  json steps = json::array();
  for (const auto& s : tr.steps) {
    steps.push_back({{"rule", s.rule}, {"input", s.input}, {"output", s.output}});
  }
  return steps;
}

QueryReport belief_query(const ActionTheory& theory, const QueryRequest& req) {
  const Formula phi = parse_query(theory, req.query);
  const Situation alpha = parse_actions(theory, req.after);
  const InitialBeliefExpr e = regress_belief(theory, phi, alpha);

  json j;
  j["query"] = to_string(phi);
  j["actions"] = actions_json(alpha);
  j["mode"] = "belief";
  j["regressed"] = {{"condition", to_string(e.condition)},
                    {"gamma_condition", to_string(e.gamma_condition)},
                    {"likelihood", to_string(e.likelihood)},
                    {"prior", to_string(e.prior)},
                    {"expression", to_string(e)},
                    {"trace", trace_json(e.trace)}};

  std::ostringstream text;
  text << "query: Bel(" << to_string(phi) << ", " << actions_text(alpha) << ")\n";
  if (req.show_regression) text << "regression:\n" << e.trace.to_text();
  text << "regressed: " << to_string(e) << "\n";

  QueryReport rep;
  try {
    const EvalResult r = eval_belief(theory, e, req.tol);
    j["value"] = number_json(r.value);
    j["gamma"] = number_json(r.gamma);
    j["error"] = r.error;
    j["cells"] = r.cells;
    j["flags"] = r.flags;
    text << "value: " << number_text(r.value) << "\n";
    text << "gamma: " << number_text(r.gamma) << "\n";
    text << "error: " << fmt(r.error) << "\n";
    if (!r.flags.empty()) {
      text << "flags:";
      for (const auto& f : r.flags) text << " " << f << (&f == &r.flags.back() ? "" : ";");
      text << "\n";
    }
  } catch (const UndefinedBelief& ex) {
    rep.exit_code = kExitUndefined;
    rep.errors = std::string("error: ") + ex.what() + "\n";
    j["value"] = nullptr;
    j["gamma"] = number_json(Number(0));
    j["error"] = nullptr;
    text << "value: undefined (" << ex.what() << ")\n";
  }

  if (req.oracle_samples > 0) {
    try {
      const OracleEstimate o = mc_oracle(theory, phi, alpha, req.oracle_samples, req.seed);
      j["oracle"] = {{"estimate", o.estimate}, {"stderr", o.stderr_}, {"n", o.n}, {"seed", o.seed}};
      text << "oracle: " << short_float(o.estimate) << " +- " << short_float(o.stderr_)
           << " (n = " << o.n << ", seed = " << o.seed << ")\n";
    } catch (const UndefinedBelief& ex) {
      j["oracle"] = {{"estimate", nullptr}, {"stderr", nullptr}, {"n", req.oracle_samples},
                     {"seed", req.seed}, {"error", ex.what()}};
      text << "oracle: undefined (" << ex.what() << ")\n";
    }
  } else {
    j["oracle"] = nullptr;
  }

  rep.output = req.format == OutputFormat::Json ? j.dump(2) + "\n" : text.str();
  return rep;
}

QueryReport projection_query(const ActionTheory& theory, const QueryRequest& req) {
  const Formula phi = parse_query(theory, req.query);
  const Situation alpha = parse_actions(theory, req.after);
  const Formula r = regress_projection(theory, phi, alpha);
  json j;
  j["query"] = to_string(phi);
  j["actions"] = actions_json(alpha);
  j["mode"] = "projection";
  j["regressed"] = {{"condition", to_string(r)}};
  std::ostringstream text;
  text << "query: " << to_string(phi) << " after " << actions_text(alpha) << "\n";
  text << "regressed: " << to_string(r) << "\n";
  if (!trim(req.at).empty()) {
    const Valuation v = parse_valuation(theory, req.at);
    const bool holds = eval_formula_at(r, v);
    json at = json::object();
    for (const auto& [k, val] : v) at[k] = number_json(val);
    j["at"] = at;
    j["value"] = holds;
    text << "value: " << (holds ? "true" : "false") << "\n";
  } else {
    j["at"] = nullptr;
    j["value"] = nullptr;
  }
  QueryReport rep;
  rep.output = req.format == OutputFormat::Json ? j.dump(2) + "\n" : text.str();
  return rep;
}

std::string csv_for(const DensityProfile& p) {
  std::ostringstream os;
  os << "value,density\n";
  for (const auto& pt : p.points) {
    os << fmt(pt.value.to_double()) << "," << fmt(pt.density / p.gamma) << "\n";
  }
  return os.str();
}

QueryReport density_query(const ActionTheory& theory, const QueryRequest& req) {
  if (req.fluent.empty()) {
    if (theory.fluents.size() != 1) throw UsageError("density mode needs --fluent");
  }
  const std::string name = req.fluent.empty() ? theory.fluents.front().name : req.fluent;
  const FluentDecl* decl = theory.find_fluent(name);
  if (!decl) throw UsageError("undeclared fluent '" + name + "'");
  if (decl->domain.is_discrete()) {
    throw UsageError("density mode needs a real-valued fluent; '" + name + "' is finite");
  }
  Grid g;
  if (trim(req.grid).empty()) {
    g = {decl->domain.lo.to_double(), decl->domain.hi.to_double(), 201};
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) {
      throw UsageError("fluent '" + name + "' has an unbounded domain; pass --grid lo:hi:n");
    }
  } else {
    g = parse_grid(req.grid);
  }
  std::vector<Number> grid;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double v = g.n == 1 ? g.lo : g.lo + (g.hi - g.lo) * static_cast<double>(i) / (g.n - 1);
    grid.push_back(Number::exact_from_double(v));
  }

  const Situation alpha = parse_actions(theory, req.after);
  QueryReport rep;
  json profiles = json::array();
  std::ostringstream text;
  const std::filesystem::path stem = req.out;
  for (std::size_t k = 0; k <= alpha.size(); ++k) {
    const Situation prefix = alpha.prefix(k);
    const DensityProfile p = density_profile(theory, prefix, name, grid, std::min(req.tol, 1e-9));
    if (!(p.gamma > 0.0)) throw UndefinedBelief("normalization is zero after " + actions_text(prefix));
    const std::string csv = csv_for(p);
    json pts = json::array();
    for (const auto& pt : p.points) pts.push_back({pt.value.to_double(), pt.density / p.gamma});
    profiles.push_back({{"actions", actions_json(prefix)}, {"gamma", p.gamma},
                        {"flags", p.flags}, {"points", pts}});
    if (!req.out.empty()) {
      std::filesystem::path file = stem;
      file += "." + std::to_string(k) + ".csv";
      std::ofstream of(file, std::ios::binary);
      if (!of) throw std::runtime_error("cannot write '" + file.string() + "'");
      of << csv;
      rep.files.push_back(file.string());
      text << "wrote " << file.string() << " for " << actions_text(prefix) << "\n";
    } else {
      text << "# " << actions_text(prefix) << "\n" << csv;
    }
    for (const auto& f : p.flags) rep.errors += "warning: " + actions_text(prefix) + ": " + f + "\n";
  }
  if (req.format == OutputFormat::Json) {
    json j{{"mode", "density"}, {"fluent", name}, {"actions", actions_json(alpha)},
           {"profiles", profiles}, {"files", rep.files}};
    rep.output = j.dump(2) + "\n";
  } else {
    rep.output = text.str();
  }
  return rep;
}

}  // namespace

std::optional<std::string> bundled_theory(const std::string& name) {
  for (const auto& [n, src] : detail::kBundledTheories) {
    if (name == n || name == std::string(n) + ".bel") return std::string(src);
  }
  return std::nullopt;
}

std::vector<std::string> bundled_theory_names() {
  std::vector<std::string> out;
  for (const auto& [n, src] : detail::kBundledTheories) out.emplace_back(n);
  return out;
}

Grid parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(trim(p));
  if (parts.size() != 3) throw std::invalid_argument("grid must look like lo:hi:n, got '" + text + "'");
  Grid g;
  try {
    std::size_t used = 0;
    g.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("");
    g.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    const long long n = std::stoll(parts[2], &used);
    if (used != parts[2].size() || n < 1) throw std::invalid_argument("");
    g.n = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like lo:hi:n with n >= 1, got '" + text + "'");
  }
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.hi < g.lo) {
    throw std::invalid_argument("grid bounds must be finite with lo <= hi, got '" + text + "'");
  }
  return g;
}

QueryReport run_query(const QueryRequest& req) {
  QueryReport rep;
  auto fail = [&](int code, const std::string& msg) {
    rep = QueryReport{};
    rep.exit_code = code;
    rep.errors = msg;
    if (!rep.errors.empty() && rep.errors.back() != '\n') rep.errors += "\n";
    return rep;
  };
  try {
    if (!(req.tol > 0.0)) return fail(kExitInvalid, "error: --tol must be positive");
    const std::string source = load_source(req.theory);
    ActionTheory theory;
    try {
      theory = load_theory(source);
    } catch (const ParseError& ex) {
      std::string msg;
      for (const auto& d : ex.diagnostics()) msg += req.theory + ":" + d.to_string() + "\n";
      return fail(kExitInvalid, msg);
    }
    switch (req.mode) {
      case QueryMode::Belief: return belief_query(theory, req);
      case QueryMode::Projection: return projection_query(theory, req);
      case QueryMode::Density: return density_query(theory, req);
    }
    return fail(kExitFailure, "error: unknown mode");
  } catch (const UsageError& ex) {
    return fail(kExitInvalid, std::string("error: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    return fail(kExitInvalid, std::string("error: ") + ex.what());
  } catch (const ParseError& ex) {
    std::string msg;
    for (const auto& d : ex.diagnostics()) msg += "error: " + d.to_string() + "\n";
    return fail(kExitInvalid, msg);
  } catch (const DeclarationError& ex) {
    return fail(kExitInvalid, std::string("error: ") + ex.what());
  } catch (const SortError& ex) {
    return fail(kExitInvalid, std::string("error: ") + ex.what());
  } catch (const UndefinedBelief& ex) {
    return fail(kExitUndefined, std::string("error: ") + ex.what());
  } catch (const std::exception& ex) {
    return fail(kExitFailure, std::string("error: ") + ex.what());
  }
}

}  // namespace beliefreg
