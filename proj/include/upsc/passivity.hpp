#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "upsc/admittance.hpp"

namespace upsc {

/// Ascending per-unit frequency grid.
struct FrequencyGrid {
  enum class Spacing { Linear, Log };
  double omega_min = 1e-3;
  double omega_max = 0.2;
  int points = 400;
  Spacing spacing = Spacing::Log;

  /// Default grid of the low-frequency passivity analysis band.
  static FrequencyGrid passivity_default() { return FrequencyGrid{}; }

  std::vector<double> sample() const;
};

/// Half the minimum eigenvalue of the Hermitian part Y + Y^H, via the
/// closed-form 2x2 Hermitian eigenvalues.
double passivity_index(const Eigen::Matrix2cd& Y);

/// Both eigenvalues of a 2x2 Hermitian matrix, ascending; closed form.
Eigen::Vector2d hermitian_eigenvalues(const Eigen::Matrix2cd& H);

/// Passivity index sampled over a frequency grid, with sign-change zero
/// crossings located by linear interpolation.
struct PassivityCurve {
  std::vector<double> omegas;
  std::vector<double> nu;
  std::vector<double> zero_crossings;

  double min_nu() const;
  double argmin_omega() const;
  /// Lowest positive-to-negative crossing, or NaN when none exists.
  double first_zero_crossing() const;
};

using MatrixEvaluator = std::function<Eigen::Matrix2cd(double)>;

PassivityCurve sweep(const MatrixEvaluator& Y_of_omega, const FrequencyGrid& grid);
PassivityCurve sweep(const AdmittanceModel& model, const FrequencyGrid& grid);

/// One-parameter sensitivity study: everything else stays at the supplied
/// base values (including the operating case P_ref/Q_ref).
struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  FrequencyGrid grid = FrequencyGrid::passivity_default();
};

std::vector<std::pair<double, PassivityCurve>> sensitivity_study(
    const ControllerParams& base, const SweepSpec& spec);

}  // namespace upsc
