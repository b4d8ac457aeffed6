#include "portsynth/config.hpp"

#include <json.hpp>

#include "portsynth/errors.hpp"

namespace portsynth {

namespace {

using nlohmann::json;

double require_positive(const json& j, const std::string& name, double fallback) {
  if (!j.contains(name)) return fallback;
  if (!j[name].is_number()) throw ValidationError(name + " must be a number");
  const double v = j[name].get<double>();
  if (!(v > 0.0)) throw ValidationError(name + " must be positive");
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("config root must be an object");

  RunConfig cfg;
  if (j.contains("circuit")) {
    const json& c = j["circuit"];
    if (!c.is_object()) throw ValidationError("circuit must be an object");
    cfg.circuit.R1 = require_positive(c, "R1", cfg.circuit.R1);
    cfg.circuit.R2 = require_positive(c, "R2", cfg.circuit.R2);
    cfg.circuit.L1 = require_positive(c, "L1", cfg.circuit.L1);
    cfg.circuit.L2 = require_positive(c, "L2", cfg.circuit.L2);
    cfg.circuit.C1 = require_positive(c, "C1", cfg.circuit.C1);
  }

  if (j.contains("tolerance_pct")) {
    if (!j["tolerance_pct"].is_number())
      throw ValidationError("tolerance_pct must be a number");
    cfg.tolerance_pct = j["tolerance_pct"].get<double>();
  }
  if (!(cfg.tolerance_pct >= 0.0 && cfg.tolerance_pct < 100.0))
    throw ValidationError("tolerance_pct must lie in [0, 100)");

  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) throw ValidationError("grid must be an object");
    cfg.grid.min_omega = require_positive(g, "min_omega", cfg.grid.min_omega);
    cfg.grid.max_omega = require_positive(g, "max_omega", cfg.grid.max_omega);
    if (g.contains("points")) {
      if (!g["points"].is_number_integer())
        throw ValidationError("grid.points must be an integer");
      cfg.grid.points = g["points"].get<int>();
    }
    if (g.contains("spacing")) {
      const std::string s = g["spacing"].get<std::string>();
      if (s == "log")
        cfg.grid.spacing = GridSpec::Spacing::Log;
      else if (s == "linear")
        cfg.grid.spacing = GridSpec::Spacing::Linear;
      else
        throw ValidationError("grid.spacing must be 'log' or 'linear'");
    }
  }
  if (cfg.grid.points < 2) throw ValidationError("grid.points must be >= 2");
  if (!(cfg.grid.min_omega < cfg.grid.max_omega))
    throw ValidationError("grid.min_omega must be below grid.max_omega");

  if (j.contains("bound")) {
    const json& b = j["bound"];
    if (!b.is_object() || !b.contains("mode"))
      throw ValidationError("bound must be an object with a mode");
    const std::string mode = b["mode"].get<std::string>();
    if (mode == "manual") {
      ManualBound mb;
      if (!b.contains("num") || !b.contains("den"))
        throw ValidationError("manual bound needs num and den coefficient arrays");
      mb.num = b["num"].get<std::vector<double>>();
      mb.den = b["den"].get<std::vector<double>>();
      if (mb.num.empty() || mb.den.empty())
        throw ValidationError("manual bound coefficient arrays must be nonempty");
      cfg.manual_bound = std::move(mb);
    } else if (mode != "auto") {
      throw ValidationError("bound.mode must be 'auto' or 'manual'");
    }
  }

  if (j.contains("beta_tol")) cfg.beta_tol = j["beta_tol"].get<double>();
  if (!(cfg.beta_tol > 0.0)) throw ValidationError("beta_tol must be positive");
  if (j.contains("cancel_tol")) cfg.cancel_tol = j["cancel_tol"].get<double>();
  if (!(cfg.cancel_tol > 0.0)) throw ValidationError("cancel_tol must be positive");

  return cfg;
}

FrequencyGrid build_grid(const GridSpec& spec) {
  if (spec.spacing == GridSpec::Spacing::Log)
    return FrequencyGrid::log_spaced(spec.min_omega, spec.max_omega, spec.points, true);
  return FrequencyGrid::linear(spec.min_omega, spec.max_omega, spec.points);
}

}  // namespace portsynth
