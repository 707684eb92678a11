#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "upsc/ratfun.hpp"

using namespace upsc;
using Complex = std::complex<double>;
using Catch::Approx;

namespace {

Complex rand_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  return {dist(rng), dist(rng)};
}

RationalFunctiond rand_ratfun(std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(0, 3);
  auto poly = [&](bool nonzero) {
    std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& v : c) v = dist(rng);
    if (nonzero && c.back() == 0.0) c.back() = 1.0;
    return Polynomiald(c);
  };
  Polynomiald den = poly(true);
  while (den.is_zero()) den = poly(true);
  return RationalFunctiond(poly(false), den);
}

}  // namespace

TEST_CASE("lowpass evaluation") {
  auto h2 = lowpass(2.0);
  CHECK(h2.eval(0.0).real() == Approx(1.0));
  CHECK(h2.eval(0.0).imag() == Approx(0.0));

  // -3 dB at the bandwidth: 2/(2+2j) = 0.5 - 0.5j
  Complex v = h2.eval(Complex{0.0, 2.0});
  CHECK(v.real() == Approx(0.5));
  CHECK(v.imag() == Approx(-0.5));
  CHECK(std::abs(v) == Approx(1.0 / std::sqrt(2.0)));

  auto hq = lowpass(0.5);
  CHECK(hq.num().coeffs() == std::vector<double>{0.5});
  CHECK(hq.den().coeffs() == std::vector<double>{0.5, 1.0});

  for (double a : {0.025, 0.5, 2.0, 17.0}) {
    CHECK(lowpass(a).eval(0.0).real() == Approx(1.0));
  }
}

TEST_CASE("lowpass rejects nonpositive bandwidth") {
  CHECK_THROWS_AS(lowpass(0.0), InvalidBandwidth);
  CHECK_THROWS_AS(lowpass(-1.5), InvalidBandwidth);
}

TEST_CASE("lowpass has exactly one pole at -a") {
  auto h = lowpass(0.7);
  REQUIRE(h.den().degree() == 1);
  // den = a + s -> root at -a
  const auto& c = h.den().coeffs();
  CHECK(-c[0] / c[1] == Approx(-0.7));
}

TEST_CASE("PSL gain DC value") {
  // (s T_d + 1)/(s M + k_m) with the base tuning
  RationalFunctiond kp(Polynomiald{1.0, 15.0}, Polynomiald{20.0, 565.0});
  CHECK(kp.eval(0.0).real() == Approx(0.05));
}

TEST_CASE("additive identity") {
  RationalFunctiond f(Polynomiald{1.0}, Polynomiald{1.0, 1.0});
  RationalFunctiond zero;
  auto sum = add(f, zero);
  std::mt19937 rng(7);
  for (int k = 0; k < 10; ++k) {
    Complex s = rand_point(rng);
    CHECK(std::abs(sum.eval(s) - f.eval(s)) < 1e-14);
  }
}

TEST_CASE("AVC composite G_c * Y_c") {
  const double L = 0.15, Ra = 0.3, aa = 0.025;
  RationalFunctiond gc(Polynomiald{Ra}, Polynomiald{Ra, L});
  RationalFunctiond yc(Polynomiald{aa, 1.0}, Polynomiald{0.0, Ra, L});
  auto prod = mul(gc, yc);

  // R_a (s + alpha_a) / (s (sL + R_a)^2)
  RationalFunctiond expect(Polynomiald{Ra * aa, Ra},
                           Polynomiald{0.0, 1.0} * Polynomiald{Ra, L} *
                               Polynomiald{Ra, L});
  std::mt19937 rng(11);
  for (int k = 0; k < 20; ++k) {
    Complex s = rand_point(rng) + Complex{0.0, 0.5};
    if (std::abs(s) < 0.1) continue;
    CHECK(std::abs(prod.eval(s) - expect.eval(s)) < 1e-12 * std::abs(expect.eval(s)) + 1e-14);
  }
}

TEST_CASE("partition of unity: G_c + sL/(sL+R_a) = 1") {
  const double L = 0.15, Ra = 0.3;
  RationalFunctiond gc(Polynomiald{Ra}, Polynomiald{Ra, L});
  RationalFunctiond rest(Polynomiald{0.0, L}, Polynomiald{Ra, L});
  auto sum = add(gc, rest);
  std::mt19937 rng(13);
  for (int k = 0; k < 20; ++k) {
    CHECK(std::abs(sum.eval(rand_point(rng)) - 1.0) < 1e-12);
  }
}

TEST_CASE("composition consistency of mul at random points") {
  std::mt19937 rng(17);
  int checked = 0;
  while (checked < 100) {
    auto f = rand_ratfun(rng);
    auto g = rand_ratfun(rng);
    Complex s = rand_point(rng);
    Complex fv, gv, pv;
    try {
      fv = f.eval(s);
      gv = g.eval(s);
      pv = mul(f, g).eval(s);
    } catch (const PoleProximity&) {
      continue;
    }
    const double scale = std::abs(fv * gv) + 1.0;
    REQUIRE(std::abs(pv - fv * gv) < 1e-10 * scale);
    ++checked;
  }
}

TEST_CASE("conjugate symmetry for real coefficients") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> wdist(0.01, 10.0);
  for (int k = 0; k < 50; ++k) {
    auto f = rand_ratfun(rng);
    const double w = wdist(rng);
    Complex up, down;
    try {
      up = f.eval(Complex{0.0, w});
      down = f.eval(Complex{0.0, -w});
    } catch (const PoleProximity&) {
      continue;
    }
    CHECK(std::abs(down - std::conj(up)) < 1e-12 * (std::abs(up) + 1.0));
  }
}

TEST_CASE("pole guard raises PoleProximity") {
  // AVC admittance has a genuine pole at the origin
  RationalFunctiond yc(Polynomiald{0.025, 1.0}, Polynomiald{0.0, 0.3, 0.15});
  CHECK_THROWS_AS(yc.eval(Complex{0.0, 0.0}), PoleProximity);
  CHECK_THROWS_AS(yc.eval(Complex{0.0, 1e-14}), PoleProximity);
  CHECK_NOTHROW(yc.eval(Complex{0.0, 1e-4}));
}

TEST_CASE("division by the zero function") {
  RationalFunctiond f(Polynomiald{1.0}, Polynomiald{1.0, 1.0});
  RationalFunctiond zero;
  CHECK_THROWS_AS(div(f, zero), DivisionByZeroFunction);
  CHECK_THROWS_AS(RationalFunctiond(Polynomiald{1.0}, Polynomiald{0.0}),
                  DivisionByZeroFunction);
}

TEST_CASE("polynomial trimming and degree") {
  Polynomiald p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  Polynomiald z({0.0, 0.0});
  CHECK(z.degree() == 0);
  CHECK(z.is_zero());
}

TEST_CASE("scale distributes over evaluation") {
  std::mt19937 rng(23);
  auto f = rand_ratfun(rng);
  auto g = scale(f, 2.5);
  for (int k = 0; k < 10; ++k) {
    Complex s = rand_point(rng);
    try {
      CHECK(std::abs(g.eval(s) - 2.5 * f.eval(s)) <
            1e-12 * (std::abs(f.eval(s)) + 1.0));
    } catch (const PoleProximity&) {
      continue;
    }
  }
}
