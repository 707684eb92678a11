#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "upsc/passivity.hpp"

using namespace upsc;
using Complex = std::complex<double>;
using Catch::Approx;

TEST_CASE("identity admittance has index one") {
  CHECK(passivity_index(Eigen::Matrix2cd::Identity()) == Approx(1.0));
}

TEST_CASE("skew part cancels in the Hermitian part") {
  Eigen::Matrix2cd Y;
  Y << 0.3, 5.0, -5.0, 0.3;
  CHECK(passivity_index(Y) == Approx(0.3));
}

TEST_CASE("golden value at 0.1 pu, base case") {
  // frozen from an independent run of Eigen's Hermitian eigensolver on
  // Y + Y^H assembled from eval_Y at the base tuning, zero power
  const double kGolden = 1.5343620726427525;
  auto model = make_model(ControllerParams{});
  auto Y = eval_Y(model, 0.1);
  CHECK(passivity_index(Y.m) == Approx(kGolden).epsilon(1e-10));

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(Y.m + Y.m.adjoint());
  CHECK(0.5 * es.eigenvalues()(0) == Approx(kGolden).epsilon(1e-12));
}

TEST_CASE("closed form matches the generic Hermitian eigensolver") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const double a = dist(rng), c = dist(rng);
    const Complex b{dist(rng), dist(rng)};
    Eigen::Matrix2cd H;
    H << a, b, std::conj(b), c;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(H);
    auto mine = hermitian_eigenvalues(H);
    CHECK(mine(0) == Approx(es.eigenvalues()(0)).margin(1e-10));
    CHECK(mine(1) == Approx(es.eigenvalues()(1)).margin(1e-10));
  }
}

TEST_CASE("index is even in frequency") {
  auto model = make_model(ControllerParams{});
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> wdist(1e-3, 1.0);
  for (int k = 0; k < 10; ++k) {
    const double w = wdist(rng);
    const double up = passivity_index(eval_Y(model, w).m);
    const double dn = passivity_index(eval_Y(model, -w).m);
    CHECK(up == Approx(dn).epsilon(1e-10));
  }
}

TEST_CASE("positive scaling scales the index") {
  auto model = make_model(ControllerParams{});
  for (double w : {0.01, 0.1, 0.3}) {
    auto Y = eval_Y(model, w).m;
    CHECK(passivity_index((2.0 * Y).eval()) ==
          Approx(2.0 * passivity_index(Y)).epsilon(1e-12));
  }
}

TEST_CASE("non-finite input is rejected") {
  Eigen::Matrix2cd Y = Eigen::Matrix2cd::Identity();
  Y(0, 1) = Complex{std::nan(""), 0.0};
  CHECK_THROWS_AS(passivity_index(Y), Error);
}

TEST_CASE("frequency grid sampling") {
  FrequencyGrid lin{0.1, 0.5, 5, FrequencyGrid::Spacing::Linear};
  auto ls = lin.sample();
  REQUIRE(ls.size() == 5);
  CHECK(ls.front() == Approx(0.1));
  CHECK(ls[1] == Approx(0.2));
  CHECK(ls.back() == Approx(0.5));

  FrequencyGrid log{1e-3, 0.2, 400, FrequencyGrid::Spacing::Log};
  auto gs = log.sample();
  REQUIRE(gs.size() == 400);
  CHECK(gs.front() == Approx(1e-3));
  CHECK(gs.back() == Approx(0.2));
  CHECK(std::is_sorted(gs.begin(), gs.end()));
  // log spacing: constant ratio
  CHECK(gs[1] / gs[0] == Approx(gs[200] / gs[199]).epsilon(1e-9));
}

TEST_CASE("identity evaluator sweep is flat with no crossings") {
  auto curve = sweep([](double) { return Eigen::Matrix2cd::Identity().eval(); },
                     FrequencyGrid::passivity_default());
  REQUIRE(curve.omegas.size() == curve.nu.size());
  for (double v : curve.nu) CHECK(v == Approx(1.0));
  CHECK(curve.zero_crossings.empty());
}

TEST_CASE("synthetic crossing located by linear interpolation") {
  auto curve = sweep(
      [](double w) {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
        return (m * (w - 0.1)).eval();
      },
      FrequencyGrid{0.05, 0.15, 200, FrequencyGrid::Spacing::Linear});
  REQUIRE(curve.zero_crossings.size() == 1);
  CHECK(curve.zero_crossings[0] == Approx(0.1).margin(1e-9));
}

TEST_CASE("large PV integral gain changes the in-band minimum") {
  ControllerParams p;
  auto base_curve = sweep(make_model(p), FrequencyGrid::passivity_default());
  p.K_PI = 0.5;
  auto big_curve = sweep(make_model(p), FrequencyGrid::passivity_default());
  // the two tunings must differ materially over the band
  CHECK(std::abs(big_curve.min_nu() - base_curve.min_nu()) > 0.1);
}

TEST_CASE("sensitivity study sweeps one parameter") {
  SweepSpec spec;
  spec.parameter = "K_Q";
  spec.values = {0.05, 0.1, 0.2};
  spec.grid = FrequencyGrid{1e-3, 0.2, 60, FrequencyGrid::Spacing::Log};
  auto study = sensitivity_study(ControllerParams{}, spec);
  REQUIRE(study.size() == 3);
  CHECK(study[0].first == Approx(0.05));
  CHECK(study[2].first == Approx(0.2));
  // stronger QV droop raises the index at the lowest sampled frequency
  CHECK(study[0].second.nu.front() < study[1].second.nu.front());
  CHECK(study[1].second.nu.front() < study[2].second.nu.front());
}

TEST_CASE("unknown sweep parameter is rejected") {
  SweepSpec spec;
  spec.parameter = "K_X";
  spec.values = {1.0};
  CHECK_THROWS_AS(sensitivity_study(ControllerParams{}, spec), UnknownParameter);
}

TEST_CASE("sweep propagates numeric guards with the frequency attached") {
  SweepSpec spec;
  spec.parameter = "K_Q";
  spec.values = {0.1};
  spec.grid = FrequencyGrid{0.0, 0.2, 10, FrequencyGrid::Spacing::Linear};
  CHECK_THROWS_AS(sensitivity_study(ControllerParams{}, spec), PoleProximity);
}
