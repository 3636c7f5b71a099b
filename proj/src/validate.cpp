#include "beliefreg/evaluate.hpp"
#include "beliefreg/printer.hpp"
#include "beliefreg/theory.hpp"
#include "compile.hpp"

#include <cmath>

namespace beliefreg {

namespace {

constexpr std::size_t kGridBudget = 20000;

// Sample values for one fluent; `per_dim` bounds the count.
std::vector<double> sample_values(const FluentDomain& d, std::size_t per_dim) {
  std::vector<double> out;
  if (d.is_discrete()) {
    const auto all = d.enumerate();
    const std::size_t step = std::max<std::size_t>(1, all.size() / per_dim);
    for (std::size_t i = 0; i < all.size(); i += step) out.push_back(all[i].to_double());
    if (!all.empty() && out.back() != all.back().to_double()) out.push_back(all.back().to_double());
    return out;
  }
  double lo = d.lo.to_double();
  double hi = d.hi.to_double();
  if (std::isinf(lo) || std::isinf(hi)) {
    for (double v : {-1000.0, -100.0, -30.0, -10.0, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0, 10.0,
                     30.0, 100.0, 1000.0}) {
      if (v >= lo && v <= hi) out.push_back(v);
    }
    if (std::isfinite(lo)) out.push_back(lo);
    if (std::isfinite(hi)) out.push_back(hi);
    if (out.empty()) out.push_back(0.0);
    return out;
  }
  const std::size_t n = std::max<std::size_t>(2, per_dim);
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

std::string fmt(double v) { return Number(v).to_string(); }

}  // namespace

std::vector<Diagnostic> validate_theory(const ActionTheory& theory) {
  std::vector<Diagnostic> out;
  const std::size_t nf = theory.fluents.size();
  if (nf == 0) {
    out.push_back({SourcePos{}, "theory declares no fluents"});
    return out;
  }
  const std::size_t per_dim = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::pow(static_cast<double>(kGridBudget), 1.0 / nf)));

  std::vector<std::vector<double>> grid;
  for (const auto& f : theory.fluents) grid.push_back(sample_values(f.domain, std::min<std::size_t>(per_dim, 201)));

  // Prior nonnegativity on the product grid.
  detail::Slots vars;
  for (std::size_t i = 0; i < nf; ++i) vars.vars[value_var(theory.fluents[i].name)] = static_cast<int>(i);
  try {
    const detail::RealFn prior = detail::compile(theory.prior, vars);
    std::vector<std::size_t> idx(nf, 0);
    std::vector<double> x(nf);
    bool done = false;
    while (!done) {
      for (std::size_t k = 0; k < nf; ++k) x[k] = grid[k][idx[k]];
      const double p = prior(x.data());
      if (!(p >= 0.0)) {
        std::string at;
        for (std::size_t k = 0; k < nf; ++k) {
          if (k) at += ", ";
          at += theory.fluents[k].name + " = " + fmt(x[k]);
        }
        out.push_back({theory.prior_pos, "prior negative at sample (" + at + "): " + fmt(p)});
        break;
      }
      done = true;
      for (std::size_t k = nf; k-- > 0;) {
        if (++idx[k] < grid[k].size()) {
          done = false;
          break;
        }
        idx[k] = 0;
      }
    }
  } catch (const Error& e) {
    out.push_back({theory.prior_pos, std::string("prior cannot be evaluated: ") + e.what()});
  }

  // Error models nonnegative over (reading, value) samples.
  for (const auto& s : theory.sensors) {
    const FluentDecl* f = theory.find_fluent(s.fluent);
    if (!f) continue;
    detail::Slots slots;
    slots.vars[s.reading.name] = 0;
    slots.fluents[s.fluent] = 1;
    try {
      const detail::RealFn err = detail::compile(s.error, slots);
      std::vector<double> values = sample_values(f->domain, 101);
      std::vector<double> readings = values;
      for (double z : {-1.0, 0.0, 1.0}) readings.push_back(z);
      bool reported = false;
      for (double z : readings) {
        for (double v : values) {
          const double x[2] = {z, v};
          const double e = err(x);
          if (!(e >= 0.0)) {
            out.push_back({s.pos, "likelihood of sensor '" + s.name + "' negative at sample (" +
                                      s.reading.name + " = " + fmt(z) + ", " + s.fluent + " = " +
                                      fmt(v) + "): " + fmt(e)});
            reported = true;
            break;
          }
        }
        if (reported) break;
      }
    } catch (const Error& e) {
      out.push_back({s.pos, "likelihood of sensor '" + s.name + "' cannot be evaluated: " + e.what()});
    }
  }

  if (out.empty()) {
    try {
      const EvalResult m = prior_mass(theory, 1e-9);
      const double g = m.gamma.to_double();
      if (!std::isfinite(g) || !(g > 0.0)) {
        out.push_back({theory.prior_pos,
                       "prior mass must be finite and positive, got " + m.gamma.to_string()});
      }
    } catch (const Error& e) {
      out.push_back({theory.prior_pos, std::string("prior mass cannot be computed: ") + e.what()});
    }
  }
  return out;
}

}  // namespace beliefreg
