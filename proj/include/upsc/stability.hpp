#pragma once

#include <complex>
#include <string>
#include <vector>

#include "upsc/admittance.hpp"
#include "upsc/passivity.hpp"

namespace upsc {

/// Scalar grid impedance topologies between the PCC and the stiff source.
/// All elements are per-unit; the synchronous frame shift enters every
/// reactive element as s -> s + j omega_1.
enum class GridKind {
  StiffInductive,     ///< (s + jw1) L_g
  SeriesRL,           ///< R_g + (s + jw1) L_g
  SeriesRLC,          ///< R_g + (s + jw1) L_g + 1/((s + jw1) C_g)
  ParallelRCBehindRL  ///< (s + jw1) L_g + R_g / (1 + (s + jw1) R_g C_g)
};

struct GridImpedance {
  GridKind kind = GridKind::SeriesRL;
  double R_g = 0.0;
  double L_g = 0.0;
  double C_g = 0.0;
};

/// Scalar impedance of the topology at stationary-frame frequency nu,
/// i.e. z evaluated at s = j nu with no frame shift.
std::complex<double> grid_impedance_scalar(const GridImpedance& g, double nu);

/// dq 2x2 form [[r, -x], [x, r]] where r and x are the d/q component
/// responses of z(s + j omega_1): r = (z(j(w+w1)) + z(j(w-w1)))/2 and
/// x = (z(j(w+w1)) - z(j(w-w1)))/(2j). This is the exact dq-frame matrix of
/// the scalar branch impedance; it keeps conjugate symmetry between +w and
/// -w, which the contour closure relies on.
FreqResponseMatrix eval_Zg(const GridImpedance& g, double omega,
                           double omega_1 = 1.0);

enum class Verdict { Stable, Unstable, Inconclusive };

/// Characteristic loci of Y(jw) Zg(jw) over the grid plus the winding count
/// of the conjugate-closed contours around -1.
struct NyquistResult {
  std::vector<double> omegas;
  std::vector<std::complex<double>> locus1;  ///< continuity-ordered
  std::vector<std::complex<double>> locus2;
  int encirclements = 0;   ///< net counterclockwise windings around -1
  Verdict verdict = Verdict::Inconclusive;
  double nearest_approach = 0.0;  ///< min distance of sampled loci to -1
  int open_loop_rhp_poles_assumed = 0;
  std::string note;
};

/// Distance to -1 below which the verdict is Inconclusive (marginal).
inline constexpr double kNyquistMarginGuard = 1e-3;

/// Cost-difference threshold below which distinct-eigenvalue continuity
/// matching is rejected as ambiguous.
inline constexpr double kMatchAmbiguityGuard = 1e-9;

/// Default Nyquist grid; wider than the passivity band so encirclements can
/// close at higher frequencies.
FrequencyGrid nyquist_default_grid();

NyquistResult nyquist(const MatrixEvaluator& Y_of_omega, const GridImpedance& g,
                      const FrequencyGrid& grid, double omega_1 = 1.0);
NyquistResult nyquist(const AdmittanceModel& model, const GridImpedance& g,
                      const FrequencyGrid& grid);
NyquistResult nyquist(const AdmittanceModel& model, const GridImpedance& g);

}  // namespace upsc
