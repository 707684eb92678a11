#include "upsc/blocks.hpp"

namespace upsc {

BlockSet build_blocks(const ControllerParams& p) {
  validate(p);

  BlockSet b;
  b.H_aP = lowpass(p.alpha_P);
  b.H_aQ = lowpass(p.alpha_Q);
  b.H_aF = lowpass(p.alpha_F);

  b.K_p = RationalFunctiond(Polynomiald{1.0, p.T_d}, Polynomiald{p.k_m, p.M});

  // PI droop; when the integral gain is zero keep the plain proportional form
  // so F_P carries no removable pole at the origin.
  if (p.K_PI == 0.0) {
    b.F_P = constant(p.K_P);
  } else {
    b.F_P = RationalFunctiond(Polynomiald{p.K_PI, p.K_P}, Polynomiald{0.0, 1.0});
  }
  b.F_Q = constant(p.K_Q);

  const Polynomiald sL_Ra{p.R_a, p.L};
  b.G_c = RationalFunctiond(Polynomiald{p.R_a}, sL_Ra);
  // (H_aF - 1)/(sL + R_a) = -s / ((s + alpha_F)(sL + R_a))
  b.Y_i = (b.H_aF - constant(1.0)) / RationalFunctiond(sL_Ra, Polynomiald{1.0});
  b.Y_c = RationalFunctiond(Polynomiald{p.alpha_a, 1.0},
                            Polynomiald{0.0, 1.0} * sL_Ra);

  b.Y_cp = b.G_c * b.Y_c;
  b.Y_ip = b.Y_i - b.Y_cp;
  recompose_droop(b);
  return b;
}

void recompose_droop(BlockSet& b) {
  b.Ft_P = b.F_P * b.H_aP;
  b.Ft_Q = b.F_Q * b.H_aQ;
}

}  // namespace upsc
