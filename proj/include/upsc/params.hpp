#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "upsc/errors.hpp"

namespace upsc {

/// Physical frequency base: 60 Hz grid in per-unit normalization.
inline constexpr double kFreqBaseHz = 60.0;

/// Full tunable parameter set of the control scheme, per-unit throughout.
/// Defaults are the base-case tuning used by every sweep unless overridden.
struct ControllerParams {
  double k_m = 20.0;      ///< PSL droop constant
  double T_d = 15.0;      ///< damper-winding emulation time constant
  double M = 565.0;       ///< inertia constant
  double K_P = 0.1;       ///< PV droop proportional gain
  double K_PI = 0.0;      ///< PV droop integral gain
  double alpha_P = 0.5;   ///< PV power filter bandwidth
  double K_Q = 0.1;       ///< QV droop proportional gain
  double alpha_Q = 0.5;   ///< QV power filter bandwidth
  double L = 0.15;        ///< converter filter inductance
  double R_a = 0.3;       ///< active resistance / current-controller gain
  double alpha_a = 0.025; ///< AVC integral bandwidth
  double alpha_F = 2.0;   ///< PCC-voltage feedforward filter bandwidth
  double omega_1 = 1.0;   ///< nominal synchronous frequency
  double E_set = 1.0;     ///< PCC voltage magnitude setpoint
  double P_ref = 0.0;     ///< active power reference
  double Q_ref = 0.0;     ///< reactive power reference
};

/// Throws InvalidParameter / InvalidSetpoint on an inadmissible set.
void validate(const ControllerParams& p);

/// Steady-state current components, grid dq frame.
struct OperatingPoint {
  double i_d0 = 0.0;
  double i_q0 = 0.0;
};

/// i0 = (P_ref - j Q_ref)/E_set.
OperatingPoint operating_point(const ControllerParams& p);

/// Names of all ControllerParams fields, in declaration order.
const std::vector<std::string>& param_names();

/// Field access by name; throws UnknownParameter.
double get_param(const ControllerParams& p, std::string_view name);
void set_param(ControllerParams& p, std::string_view name, double value);

}  // namespace upsc
