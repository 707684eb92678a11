#include "upsc/stability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace upsc {

namespace {

using Complex = std::complex<double>;

/// Eigenvalues of a general complex 2x2 matrix, closed form.
std::pair<Complex, Complex> eigenvalues2x2(const Eigen::Matrix2cd& m) {
  const Complex tr = m(0, 0) + m(1, 1);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

}  // namespace

std::complex<double> grid_impedance_scalar(const GridImpedance& g, double nu) {
  const Complex s{0.0, nu};
  switch (g.kind) {
    case GridKind::StiffInductive:
      return s * g.L_g;
    case GridKind::SeriesRL:
      return g.R_g + s * g.L_g;
    case GridKind::SeriesRLC:
      return g.R_g + s * g.L_g + 1.0 / (s * g.C_g);
    case GridKind::ParallelRCBehindRL:
      return s * g.L_g + g.R_g / (1.0 + s * g.R_g * g.C_g);
  }
  throw Error("unreachable grid kind");
}

FreqResponseMatrix eval_Zg(const GridImpedance& g, double omega, double omega_1) {
  // positive- and negative-sequence samples of the frame-shifted impedance
  const Complex zp = grid_impedance_scalar(g, omega + omega_1);
  const Complex zn = grid_impedance_scalar(g, omega - omega_1);
  const Complex r = 0.5 * (zp + zn);
  const Complex x = (zp - zn) / Complex{0.0, 2.0};
  FreqResponseMatrix Z;
  Z.omega = omega;
  Z.m << r, -x, x, r;
  if (!Z.m.allFinite()) {
    throw Error("grid impedance not finite at omega = " + std::to_string(omega));
  }
  return Z;
}

FrequencyGrid nyquist_default_grid() {
  // The contour closes through conjugate reflection at +-omega_min and
  // +-omega_max, so both ends must sit where the loci have collapsed onto
  // the real axis: omega_min below the slow droop/AVC modes, omega_max past
  // the point where Y Zg has settled to its (real) inductive-divider limit.
  FrequencyGrid grid;
  grid.omega_min = 1e-5;
  grid.omega_max = 1e3;
  grid.points = 4000;
  grid.spacing = FrequencyGrid::Spacing::Log;
  return grid;
}

NyquistResult nyquist(const MatrixEvaluator& Y_of_omega, const GridImpedance& g,
                      const FrequencyGrid& grid, double omega_1) {
  NyquistResult res;
  res.omegas = grid.sample();
  const std::size_t n = res.omegas.size();
  res.locus1.reserve(n);
  res.locus2.reserve(n);
  std::vector<Complex> dets;
  dets.reserve(n);

  bool ambiguous = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = res.omegas[k];
    const Eigen::Matrix2cd L = Y_of_omega(w) * eval_Zg(g, w, omega_1).m;
    const Eigen::Matrix2cd A = Eigen::Matrix2cd::Identity() + L;
    dets.push_back(A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0));
    auto [la, lb] = eigenvalues2x2(L);
    if (k == 0) {
      res.locus1.push_back(la);
      res.locus2.push_back(lb);
      continue;
    }
    // nearest-neighbor continuity matching; only two assignments exist
    const double cost_keep =
        std::abs(la - res.locus1.back()) + std::abs(lb - res.locus2.back());
    const double cost_swap =
        std::abs(lb - res.locus1.back()) + std::abs(la - res.locus2.back());
    if (std::abs(cost_keep - cost_swap) < kMatchAmbiguityGuard &&
        std::abs(la - lb) >= kMatchAmbiguityGuard) {
      // distinct eigenvalues but equally plausible assignments: a collision
      // the grid cannot resolve
      ambiguous = true;
    }
    if (cost_swap < cost_keep) std::swap(la, lb);
    res.locus1.push_back(la);
    res.locus2.push_back(lb);
  }

  // Net turns of both eigenloci around -1 summed. Computed on the product
  // (1+lambda1)(1+lambda2) = det(I+L), whose winding around the origin
  // equals that sum exactly but needs no branch assignment. The contour runs
  // over the conjugate branch from -w_max to -w_min, then the sampled branch
  // from +w_min to +w_max, closing back at the ends.
  {
    std::vector<Complex> path;
    path.reserve(2 * n);
    for (std::size_t k = n; k-- > 0;) path.push_back(std::conj(dets[k]));
    path.insert(path.end(), dets.begin(), dets.end());
    double turns = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      turns += std::arg(path[(k + 1) % path.size()] / path[k]);
    }
    res.encirclements =
        static_cast<int>(std::lround(turns / (2.0 * std::numbers::pi)));
  }

  res.nearest_approach = std::numeric_limits<double>::infinity();
  for (const auto* locus : {&res.locus1, &res.locus2}) {
    for (const Complex& p : *locus) {
      res.nearest_approach =
          std::min({res.nearest_approach, std::abs(p + 1.0),
                    std::abs(std::conj(p) + 1.0)});
    }
  }

  if (res.nearest_approach < kNyquistMarginGuard) {
    res.verdict = Verdict::Inconclusive;
    res.note = "loci pass within " + std::to_string(res.nearest_approach) +
               " of -1";
  } else if (ambiguous) {
    res.verdict = Verdict::Inconclusive;
    res.note = "eigen-locus continuity matching ambiguous";
  } else {
    res.verdict = res.encirclements == 0 ? Verdict::Stable : Verdict::Unstable;
  }
  return res;
}

NyquistResult nyquist(const AdmittanceModel& model, const GridImpedance& g,
                      const FrequencyGrid& grid) {
  return nyquist([&model](double w) { return eval_Y(model, w).m; }, g, grid,
                 model.params.omega_1);
}

NyquistResult nyquist(const AdmittanceModel& model, const GridImpedance& g) {
  return nyquist(model, g, nyquist_default_grid());
}

}  // namespace upsc
