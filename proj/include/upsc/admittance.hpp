#pragma once

#include <Eigen/Dense>
#include <complex>

#include "upsc/blocks.hpp"
#include "upsc/params.hpp"

namespace upsc {

/// 2x2 complex frequency-response sample at one per-unit frequency.
struct FreqResponseMatrix {
  double omega = 0.0;
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
};

/// Everything needed to evaluate the converter input admittance
/// Y(jw) = D(jw)^{-1} W(jw), with the sign convention di = -Y dE.
struct AdmittanceModel {
  ControllerParams params;
  BlockSet blocks;
  OperatingPoint op;
};

/// Lower bound used by default frequency sweeps; the 1/s integrators make
/// w = 0 a genuine pole that sweeps must skirt.
inline constexpr double kOmegaSweepMin = 1e-4;

/// |det D| below this raises SingularD instead of returning garbage.
inline constexpr double kDetGuard = 1e-10;

AdmittanceModel make_model(const ControllerParams& p);

/// As above but with caller-supplied blocks (droop variants, debug overrides).
AdmittanceModel make_model(const ControllerParams& p, BlockSet blocks);

/// Closed-form 2x2 inversion with the det guard; omega only labels the error.
Eigen::Matrix2cd invert2x2(const Eigen::Matrix2cd& m, double omega);

FreqResponseMatrix eval_D(const AdmittanceModel& model, double omega);
FreqResponseMatrix eval_W(const AdmittanceModel& model, double omega);
FreqResponseMatrix eval_Y(const AdmittanceModel& model, double omega);

}  // namespace upsc
