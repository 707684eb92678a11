#include "upsc/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace upsc {

std::vector<double> FrequencyGrid::sample() const {
  std::vector<double> out;
  if (points <= 0) return out;
  out.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    out.push_back(omega_min);
    return out;
  }
  if (spacing == Spacing::Log) {
    const double ratio = std::log(omega_max / omega_min);
    for (int i = 0; i < points; ++i) {
      out.push_back(omega_min * std::exp(ratio * i / (points - 1)));
    }
  } else {
    const double step = (omega_max - omega_min) / (points - 1);
    for (int i = 0; i < points; ++i) out.push_back(omega_min + step * i);
  }
  // guard against roundoff pushing the last sample past omega_max
  out.back() = omega_max;
  return out;
}

Eigen::Vector2d hermitian_eigenvalues(const Eigen::Matrix2cd& H) {
  // H = [[a, b], [conj(b), c]] with a, c real; eigenvalues
  // (a+c)/2 -+ sqrt(((a-c)/2)^2 + |b|^2), algebraically identical to
  // (tr -+ sqrt(tr^2 - 4 det))/2 but without cancellation in the radicand.
  const double a = H(0, 0).real();
  const double c = H(1, 1).real();
  const double half_diff = 0.5 * (a - c);
  const double r = std::hypot(half_diff, std::abs(H(0, 1)));
  const double mid = 0.5 * (a + c);
  return Eigen::Vector2d(mid - r, mid + r);
}

double passivity_index(const Eigen::Matrix2cd& Y) {
  if (!Y.allFinite()) throw Error("passivity index of non-finite matrix");
  const Eigen::Matrix2cd H = Y + Y.adjoint();
  return 0.5 * hermitian_eigenvalues(H)(0);
}

double PassivityCurve::min_nu() const {
  return *std::min_element(nu.begin(), nu.end());
}

double PassivityCurve::argmin_omega() const {
  const auto it = std::min_element(nu.begin(), nu.end());
  return omegas[static_cast<std::size_t>(it - nu.begin())];
}

double PassivityCurve::first_zero_crossing() const {
  for (std::size_t k = 0; k + 1 < nu.size(); ++k) {
    if (nu[k] > 0.0 && nu[k + 1] < 0.0) {
      return omegas[k] + (omegas[k + 1] - omegas[k]) * nu[k] / (nu[k] - nu[k + 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

PassivityCurve sweep(const MatrixEvaluator& Y_of_omega, const FrequencyGrid& grid) {
  PassivityCurve curve;
  curve.omegas = grid.sample();
  curve.nu.reserve(curve.omegas.size());
  for (double w : curve.omegas) curve.nu.push_back(passivity_index(Y_of_omega(w)));
  for (std::size_t k = 0; k + 1 < curve.nu.size(); ++k) {
    if (curve.nu[k] * curve.nu[k + 1] < 0.0) {
      const double w0 = curve.omegas[k];
      const double w1 = curve.omegas[k + 1];
      curve.zero_crossings.push_back(
          w0 + (w1 - w0) * curve.nu[k] / (curve.nu[k] - curve.nu[k + 1]));
    }
  }
  return curve;
}

PassivityCurve sweep(const AdmittanceModel& model, const FrequencyGrid& grid) {
  return sweep([&model](double w) { return eval_Y(model, w).m; }, grid);
}

std::vector<std::pair<double, PassivityCurve>> sensitivity_study(
    const ControllerParams& base, const SweepSpec& spec) {
  std::vector<std::pair<double, PassivityCurve>> out;
  out.reserve(spec.values.size());
  for (double v : spec.values) {
    ControllerParams p = base;
    set_param(p, spec.parameter, v);  // throws UnknownParameter
    out.emplace_back(v, sweep(make_model(p), spec.grid));
  }
  return out;
}

}  // namespace upsc
