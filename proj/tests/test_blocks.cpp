#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "upsc/blocks.hpp"

using namespace upsc;
using Complex = std::complex<double>;
using Catch::Approx;

TEST_CASE("base-case DC values") {
  BlockSet b = build_blocks(ControllerParams{});
  CHECK(b.K_p.eval(0.0).real() == Approx(0.05));
  CHECK(b.G_c.eval(0.0).real() == Approx(1.0));
  CHECK(std::abs(b.Y_i.eval(0.0)) < 1e-15);
  CHECK(b.Ft_Q.eval(0.0).real() == Approx(0.1));
}

TEST_CASE("proportional-only PV controller is constant") {
  ControllerParams p;  // K_PI = 0 in the base case
  BlockSet b = build_blocks(p);
  CHECK(b.F_P.num().degree() == 0);
  CHECK(b.F_P.den().degree() == 0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int k = 0; k < 10; ++k) {
    Complex s{dist(rng), dist(rng)};
    CHECK(std::abs(b.F_P.eval(s) - 0.1) < 1e-15);
  }
}

TEST_CASE("PI PV controller has the integral pole") {
  ControllerParams p;
  p.K_PI = 0.3;
  BlockSet b = build_blocks(p);
  CHECK(b.F_P.den().degree() == 1);
  Complex v = b.F_P.eval(Complex{0.0, 1.0});  // K_P + K_PI/(j1)
  CHECK(v.real() == Approx(0.1));
  CHECK(v.imag() == Approx(-0.3));
}

TEST_CASE("operating point") {
  ControllerParams p;
  SECTION("zero references") {
    auto op = operating_point(p);
    CHECK(op.i_d0 == 0.0);
    CHECK(op.i_q0 == 0.0);
  }
  SECTION("rated export") {
    p.P_ref = 1.0;
    p.Q_ref = 0.5;
    auto op = operating_point(p);
    CHECK(op.i_d0 == Approx(1.0));
    CHECK(op.i_q0 == Approx(-0.5));
  }
  SECTION("reactive absorption flips the sign") {
    p.P_ref = 0.5;
    p.Q_ref = -0.2;
    auto op = operating_point(p);
    CHECK(op.i_d0 == Approx(0.5));
    CHECK(op.i_q0 == Approx(0.2));
  }
  SECTION("invalid setpoint") {
    p.E_set = 0.0;
    CHECK_THROWS_AS(operating_point(p), InvalidSetpoint);
  }
}

TEST_CASE("composite identities hold pointwise") {
  BlockSet b = build_blocks(ControllerParams{});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> wdist(1e-3, 5.0);
  for (int k = 0; k < 50; ++k) {
    const Complex s{0.0, wdist(rng)};
    const Complex ycp = b.Y_cp.eval(s);
    const Complex yip = b.Y_ip.eval(s);
    const Complex gc_yc = b.G_c.eval(s) * b.Y_c.eval(s);
    const Complex yi = b.Y_i.eval(s);
    CHECK(std::abs(ycp - gc_yc) <= 1e-10 * (std::abs(gc_yc) + 1e-30));
    CHECK(std::abs(yip - (yi - gc_yc)) <= 1e-10 * (std::abs(yi - gc_yc) + 1e-12));
    CHECK(std::abs(b.Ft_P.eval(s) - b.F_P.eval(s) * b.H_aP.eval(s)) < 1e-12);
    CHECK(std::abs(b.Ft_Q.eval(s) - b.F_Q.eval(s) * b.H_aQ.eval(s)) < 1e-12);
  }
}

TEST_CASE("all blocks satisfy conjugate symmetry") {
  BlockSet b = build_blocks(ControllerParams{});
  const RationalFunctiond* blocks[] = {&b.H_aP, &b.H_aQ, &b.H_aF, &b.K_p,
                                       &b.F_P,  &b.F_Q,  &b.G_c,  &b.Y_i,
                                       &b.Y_c,  &b.Y_cp, &b.Y_ip, &b.Ft_P,
                                       &b.Ft_Q};
  for (double w : {0.01, 0.1, 0.7, 3.0}) {
    for (const auto* f : blocks) {
      const Complex up = f->eval(Complex{0.0, w});
      const Complex dn = f->eval(Complex{0.0, -w});
      CHECK(std::abs(dn - std::conj(up)) < 1e-12 * (std::abs(up) + 1.0));
    }
  }
}

TEST_CASE("fast feedforward filter kills Y_i at low frequency") {
  ControllerParams p;
  p.alpha_F = 1e6;
  BlockSet b = build_blocks(p);
  for (double w : {0.01, 0.1, 1.0, 10.0}) {
    CHECK(std::abs(b.Y_i.eval(Complex{0.0, w})) < 1e-4);
  }
}

TEST_CASE("invalid parameter sets are rejected") {
  ControllerParams p;
  SECTION("negative inductance") {
    p.L = -0.1;
    CHECK_THROWS_AS(build_blocks(p), InvalidParameter);
  }
  SECTION("zero droop time constant") {
    p.T_d = 0.0;
    CHECK_THROWS_AS(build_blocks(p), InvalidParameter);
  }
  SECTION("negative gain") {
    p.K_Q = -0.1;
    CHECK_THROWS_AS(build_blocks(p), InvalidParameter);
  }
  SECTION("zero bandwidth") {
    p.alpha_Q = 0.0;
    CHECK_THROWS_AS(build_blocks(p), InvalidParameter);
  }
}

TEST_CASE("parameter access by name") {
  ControllerParams p;
  set_param(p, "K_Q", 0.2);
  CHECK(get_param(p, "K_Q") == Approx(0.2));
  CHECK(get_param(p, "M") == Approx(565.0));
  CHECK_THROWS_AS(get_param(p, "bogus"), UnknownParameter);
  CHECK_THROWS_AS(set_param(p, "k_q", 1.0), UnknownParameter);
  CHECK(param_names().size() == 16);
}
