#ifndef PORTSYNTH_CONFIG_HPP_
#define PORTSYNTH_CONFIG_HPP_

#include <optional>
#include <string>
#include <vector>

#include "portsynth/rational.hpp"
#include "portsynth/synthesis.hpp"

namespace portsynth {

struct GridSpec {
  double min_omega = 1e-2;
  double max_omega = 1e2;
  int points = 400;
  enum class Spacing { Log, Linear } spacing = Spacing::Log;
};

struct ManualBound {
  std::vector<double> num;  // ascending degree
  std::vector<double> den;
};

/// Fully deterministic run description; every field has the documented
/// default so a config containing only the circuit is complete.
struct RunConfig {
  CircuitParams circuit;
  double tolerance_pct = 5.0;
  GridSpec grid;
  std::optional<ManualBound> manual_bound;  // absent = auto fit
  double beta_tol = 0.05;
  double cancel_tol = 0.02;
};

/// Parses and validates a JSON config document. Throws ParseError on
/// malformed input and ValidationError naming the violated invariant.
RunConfig parse_config(const std::string& text);

/// The evaluation grid described by the config; log spacing prepends w = 0.
FrequencyGrid build_grid(const GridSpec& spec);

}  // namespace portsynth

#endif  // PORTSYNTH_CONFIG_HPP_
