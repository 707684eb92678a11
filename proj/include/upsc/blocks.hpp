#pragma once

#include "upsc/params.hpp"
#include "upsc/ratfun.hpp"

namespace upsc {

/// All scalar transfer-function blocks of the control scheme, built once per
/// parameter set. Every block has real coefficients.
///
/// Definitions:
///   H_aP, H_aQ, H_aF : first-order low-pass filters alpha/(s+alpha)
///   K_p  : PSL gain (s T_d + 1)/(s M + k_m)
///   F_P  : PV droop controller K_P + K_PI/s (constant K_P when K_PI = 0)
///   F_Q  : QV droop controller, pure proportional K_Q
///   G_c  : inner closed-loop gain R_a/(s L + R_a)
///   Y_i  : feedforward mismatch admittance (H_aF - 1)/(s L + R_a)
///   Y_c  : AVC admittance (s + alpha_a)/(s (s L + R_a))
///   Y_cp : G_c * Y_c
///   Y_ip : Y_i - G_c * Y_c
///   Ft_P : F_P * H_aP,  Ft_Q : F_Q * H_aQ
struct BlockSet {
  RationalFunctiond H_aP, H_aQ, H_aF;
  RationalFunctiond K_p;
  RationalFunctiond F_P, F_Q;
  RationalFunctiond G_c, Y_i, Y_c;
  RationalFunctiond Y_cp, Y_ip;
  RationalFunctiond Ft_P, Ft_Q;
};

/// Constructs every block from a validated parameter set. Callers wanting a
/// different droop structure can replace F_P/F_Q afterwards and recompose
/// Ft_P/Ft_Q via recompose_droop.
BlockSet build_blocks(const ControllerParams& p);

/// Rebuilds the composites that depend on F_P/F_Q after an override.
void recompose_droop(BlockSet& b);

}  // namespace upsc
