#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "upsc/params.hpp"
#include "upsc/passivity.hpp"
#include "upsc/simulator.hpp"
#include "upsc/stability.hpp"

namespace upsc {

/// Parsed scenario file: key = value pairs under [params], [sweep], [grid]
/// and [sim] sections. Unknown keys are rejected with their line number;
/// missing [params] keys fall back to the base-case defaults (the defaulted
/// names are reported so callers can log them).
struct Scenario {
  ControllerParams params;
  std::vector<std::string> defaulted_params;  ///< params not named in the file

  std::optional<SweepSpec> sweep;       ///< present iff [sweep] appears
  std::optional<GridImpedance> grid;    ///< present iff [grid] appears
  double v_g = 1.0;                     ///< stiff-source magnitude ([grid])

  bool has_sim = false;                 ///< [sim] section present
  double dt = 5e-3;
  double t_end = 0.0;
  SimMode mode = SimMode::ForcedPccVoltage;
  Perturbation perturb;
  std::vector<ParamEvent> events;
  int output_decimation = 1;
};

Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_string(const std::string& text);

/// Normalized textual form; re-parsing yields an identical configuration.
std::string dump_scenario(const Scenario& sc);

/// Builds the sim config implied by a scenario (grid/v_g wired in).
SimConfig sim_config_from(const Scenario& sc);

/// Frequency token in pu, or with an "hz" suffix converted on the 60 Hz
/// base ("12 hz" -> 0.2). Throws ConfigError on malformed input.
double parse_frequency(const std::string& token);

/// Shortest-faithful float formatting used by every CSV emitter (17
/// significant digits, round-trip stable).
std::string format_float(double v);

}  // namespace upsc
