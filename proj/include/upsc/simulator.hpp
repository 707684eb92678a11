#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "upsc/admittance.hpp"
#include "upsc/params.hpp"
#include "upsc/stability.hpp"

namespace upsc {

/// Flat state of the nonlinear dq-frame simulation.
///
/// Layout (complex quantities stored as d/q pairs):
///   [0..1]   i        converter current, grid dq frame
///   [2]      dtheta   converter-frame angle minus grid-frame angle
///   [3]      x_psl    lag state realizing the PSL gain's pole
///   [4..5]   x_avc1   AVC integrator state
///   [6..7]   x_avc2   AVC lag state (integrator feeding 1/(sL+R_a); the
///                     numerator zero is realized as an output blend)
///   [8..9]   x_ff     PCC-voltage feedforward filter state
///   [10]     x_qf     QV power filter state
///   [11]     x_pf     PV power filter state
///   [12]     x_pi     PV droop integrator state
inline constexpr int kSimStateDim = 13;
using StateVector = Eigen::Matrix<double, kSimStateDim, 1>;

struct SimState {
  StateVector x = StateVector::Zero();

  std::complex<double> current() const { return {x[0], x[1]}; }
  double dtheta() const { return x[2]; }
};

/// Any state component beyond this magnitude aborts the run as divergent.
inline constexpr double kDivergenceBound = 1e3;

enum class SimMode { ForcedPccVoltage, GridImpedanceClosure };

/// Sinusoidal PCC-voltage perturbation on one axis (forced mode only).
struct Perturbation {
  char axis = 'd';
  double amplitude = 0.0;
  double omega = 0.0;
  double start = 0.0;
};

/// Parameter change applied mid-run at the first step boundary >= time.
struct ParamEvent {
  double time = 0.0;
  std::string parameter;
  double value = 0.0;
};

struct SimConfig {
  ControllerParams params;
  double dt = 5e-3;
  double t_end = 0.0;
  SimMode mode = SimMode::ForcedPccVoltage;
  Perturbation perturb;
  GridImpedance grid;   ///< closure mode; must be series R-L compatible
  double v_g = 1.0;     ///< stiff-source magnitude behind the grid impedance
  std::vector<ParamEvent> events;
  int output_decimation = 1;
  /// Identification settle override in injection periods (testing hook);
  /// unset means max(20 periods, bandwidth-based bound).
  std::optional<double> settle_periods;
};

/// Instantaneous outputs alongside the state derivative.
struct SimOutputs {
  std::complex<double> E;      ///< PCC voltage, grid dq frame
  std::complex<double> v;      ///< converter voltage, grid dq frame
  double P = 0.0, Q = 0.0;
  double E_ref = 0.0;
};

/// Steady state for constant references with E held at E_set.
SimState equilibrium_state(const ControllerParams& p);

/// One classical RK4 step from t to t + dt; throws Divergence when the new
/// state leaves the admissible region.
SimState step(const SimState& state, const SimConfig& config, double t);

/// State derivative and outputs at (state, t); exposed for tests.
StateVector derivative(const StateVector& x, const SimConfig& config, double t,
                       SimOutputs* out = nullptr);

/// Empirical admittance sample assembled from a d-axis and a q-axis
/// injection experiment at one frequency, sign convention di = -Y dE.
struct IdentifiedResponse {
  double omega = 0.0;
  Eigen::Matrix2cd Y_hat = Eigen::Matrix2cd::Zero();
};

/// Sinusoidal-injection frequency-response identification in forced mode.
/// Negative frequencies are synthesized from conjugate symmetry.
std::vector<IdentifiedResponse> identify_admittance(
    const SimConfig& config, const std::vector<double>& omegas);

struct ScenarioSample {
  double t;
  double i_d, i_q;
  double P, Q;
  double E_d, E_q;
  double E_ref;
  double dtheta;
};

struct ScenarioResult {
  std::vector<ScenarioSample> samples;
  bool diverged = false;
  double t_last = 0.0;  ///< last finite time when diverged
};

/// Closed-loop run against the stiff source behind the grid impedance,
/// applying parameter events at their times. Divergence is reported in the
/// result rather than thrown; the partial series is preserved.
ScenarioResult run_scenario(const SimConfig& config);

/// Frequency of the strongest sinusoidal component of a detrended series,
/// searched over [omega_lo, omega_hi] by dense single-bin projection.
double dominant_frequency(std::span<const double> values, double dt,
                          double omega_lo, double omega_hi);

}  // namespace upsc
