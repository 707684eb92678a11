#include "upsc/admittance.hpp"

namespace upsc {

namespace {

using Complex = std::complex<double>;

/// Pointwise block values entering the D/W entries at s = jw.
struct BlockValues {
  Complex G_c, Y_cp, Y_ip, Ft_P, Ft_Q;
  Complex Kp_over_s;  // K_p(s)/s
};

BlockValues sample_blocks(const AdmittanceModel& model, double omega) {
  const Complex s{0.0, omega};
  BlockValues v;
  v.G_c = model.blocks.G_c.eval(s);
  v.Y_cp = model.blocks.Y_cp.eval(s);
  v.Y_ip = model.blocks.Y_ip.eval(s);
  v.Ft_P = model.blocks.Ft_P.eval(s);
  v.Ft_Q = model.blocks.Ft_Q.eval(s);
  v.Kp_over_s = model.blocks.K_p.eval(s) / s;
  return v;
}

}  // namespace

AdmittanceModel make_model(const ControllerParams& p) {
  return AdmittanceModel{p, build_blocks(p), operating_point(p)};
}

AdmittanceModel make_model(const ControllerParams& p, BlockSet blocks) {
  validate(p);
  return AdmittanceModel{p, std::move(blocks), operating_point(p)};
}

// The synchronization-path terms (every K_p/s product) carry the sign implied
// by the angle law d(dtheta)/dt = K_p (P_ref - P): rising power decelerates
// the converter frame. The nonlinear simulator independently confirms these
// signs; flipping them breaks the cross-validation by ~200%.

FreqResponseMatrix eval_D(const AdmittanceModel& model, double omega) {
  if (omega == 0.0) throw PoleProximity(Complex{0.0, 0.0}, 0.0);
  const auto v = sample_blocks(model, omega);
  const double E = model.params.E_set;
  const double id0 = model.op.i_d0;
  const double iq0 = model.op.i_q0;

  FreqResponseMatrix D;
  D.omega = omega;
  D.m(0, 0) = 1.0 + v.Y_cp * v.Ft_P * E - v.G_c * iq0 * v.Kp_over_s * E;
  D.m(0, 1) = -v.Y_cp * v.Ft_Q * E;
  D.m(1, 0) = (v.G_c * id0 - v.Y_ip * E) * v.Kp_over_s * E;
  D.m(1, 1) = 1.0;
  return D;
}

FreqResponseMatrix eval_W(const AdmittanceModel& model, double omega) {
  if (omega == 0.0) throw PoleProximity(Complex{0.0, 0.0}, 0.0);
  const auto v = sample_blocks(model, omega);
  const double E = model.params.E_set;
  const double id0 = model.op.i_d0;
  const double iq0 = model.op.i_q0;
  const Complex psl = (v.G_c * id0 - v.Y_ip * E) * v.Kp_over_s;

  FreqResponseMatrix W;
  W.omega = omega;
  W.m(0, 0) = -v.Y_ip + v.Y_cp * (v.Ft_P * id0 - v.Ft_Q * iq0) -
              v.G_c * iq0 * v.Kp_over_s * id0;
  W.m(0, 1) = v.Y_cp * (v.Ft_P * iq0 + v.Ft_Q * id0) -
              v.G_c * iq0 * iq0 * v.Kp_over_s;
  W.m(1, 0) = psl * id0;
  W.m(1, 1) = -v.Y_ip + psl * iq0;
  return W;
}

Eigen::Matrix2cd invert2x2(const Eigen::Matrix2cd& m, double omega) {
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (std::abs(det) < kDetGuard) throw SingularD(omega, std::abs(det));
  Eigen::Matrix2cd inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  inv /= det;
  return inv;
}

FreqResponseMatrix eval_Y(const AdmittanceModel& model, double omega) {
  const FreqResponseMatrix D = eval_D(model, omega);
  const FreqResponseMatrix W = eval_W(model, omega);
  FreqResponseMatrix Y;
  Y.omega = omega;
  Y.m = invert2x2(D.m, omega) * W.m;
  return Y;
}

}  // namespace upsc
