#include "upsc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace upsc {

namespace {

using Complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex forced_pcc_voltage(const SimConfig& c, double t) {
  Complex E{c.params.E_set, 0.0};
  const Perturbation& p = c.perturb;
  if (p.amplitude != 0.0 && t >= p.start) {
    const double w = p.amplitude * std::cos(p.omega * (t - p.start));
    if (p.axis == 'q') {
      E += Complex{0.0, w};
    } else {
      E += Complex{w, 0.0};
    }
  }
  return E;
}

bool grid_is_series_rl(const GridImpedance& g) {
  return g.kind == GridKind::StiffInductive || g.kind == GridKind::SeriesRL;
}

}  // namespace

SimState equilibrium_state(const ControllerParams& p) {
  validate(p);
  const OperatingPoint op = operating_point(p);
  SimState s;
  s.x[0] = op.i_d0;
  s.x[1] = op.i_q0;
  s.x[8] = p.E_set;  // feedforward filter settled on E_set, converter frame
  s.x[10] = p.Q_ref;
  s.x[11] = p.P_ref;
  return s;
}

StateVector derivative(const StateVector& x, const SimConfig& config, double t,
                       SimOutputs* out) {
  const ControllerParams& p = config.params;

  const Complex i{x[0], x[1]};
  const double dtheta = x[2];
  const double x_psl = x[3];
  const Complex x_avc1{x[4], x[5]};
  const Complex x_avc2{x[6], x[7]};
  const Complex x_ff{x[8], x[9]};
  const double x_qf = x[10];
  const double x_pf = x[11];
  const double x_pi = x[12];

  // exact frame rotation between grid and converter dq frames
  const Complex rot = std::polar(1.0, -dtheta);
  const Complex i_c = i * rot;

  // AVC admittance (s+alpha_a)/(s(sL+R_a)): integrator x_avc1 feeds the lag
  // x_avc2; the numerator zero appears as the output blend below
  const Complex i_ref_fb = x_avc1 / p.L + (p.alpha_a - p.R_a / p.L) * x_avc2;
  const Complex i0{p.P_ref / p.E_set, -p.Q_ref / p.E_set};
  const Complex i_ref_c = i0 + i_ref_fb;

  const Complex jw1L{0.0, p.omega_1 * p.L};
  const Complex v_c = p.R_a * (i_ref_c - i_c) + jw1L * i_c + x_ff;
  const Complex v = v_c * std::conj(rot);

  Complex E;
  Complex di_dt;
  if (config.mode == SimMode::GridImpedanceClosure) {
    // series R-L path to the stiff source shares the converter current, so
    // the grid inductance augments the current dynamics and the PCC voltage
    // follows algebraically
    const double Lg = config.grid.L_g;
    const double Rg = config.grid.kind == GridKind::StiffInductive
                          ? 0.0
                          : config.grid.R_g;
    const double Lt = p.L + Lg;
    const Complex v_g{config.v_g, 0.0};
    di_dt = (v - v_g - Rg * i - Complex{0.0, p.omega_1 * Lt} * i) / Lt;
    E = v - jw1L * i - p.L * di_dt;
  } else {
    E = forced_pcc_voltage(config, t);
    di_dt = (v - E - jw1L * i) / p.L;
  }

  const double P = E.real() * i.real() + E.imag() * i.imag();
  const double Q = E.imag() * i.real() - E.real() * i.imag();

  const Complex E_c = E * rot;
  const double E_ref = p.E_set + p.K_Q * (p.Q_ref - x_qf) +
                       p.K_P * (p.P_ref - x_pf) + p.K_PI * x_pi;

  // PSL gain (sT_d+1)/(sM+k_m) as feedthrough T_d/M plus one lag state
  const double u_psl = p.P_ref - P;
  const double dtheta_dot =
      (p.T_d / p.M) * u_psl + ((1.0 - p.T_d * p.k_m / p.M) / p.M) * x_psl;

  const Complex u_avc = Complex{E_ref, 0.0} - E_c;

  StateVector dx;
  dx[0] = di_dt.real();
  dx[1] = di_dt.imag();
  dx[2] = dtheta_dot;
  dx[3] = u_psl - (p.k_m / p.M) * x_psl;
  dx[4] = u_avc.real();
  dx[5] = u_avc.imag();
  dx[6] = (x_avc1.real() - p.R_a * x_avc2.real()) / p.L;
  dx[7] = (x_avc1.imag() - p.R_a * x_avc2.imag()) / p.L;
  dx[8] = p.alpha_F * (E_c.real() - x_ff.real());
  dx[9] = p.alpha_F * (E_c.imag() - x_ff.imag());
  dx[10] = p.alpha_Q * (Q - x_qf);
  dx[11] = p.alpha_P * (P - x_pf);
  dx[12] = p.P_ref - x_pf;

  if (out != nullptr) {
    out->E = E;
    out->v = v;
    out->P = P;
    out->Q = Q;
    out->E_ref = E_ref;
  }
  return dx;
}

namespace {

void rk4_advance(StateVector& x, const SimConfig& config, double t, double dt) {
  const StateVector k1 = derivative(x, config, t);
  const StateVector k2 = derivative(x + 0.5 * dt * k1, config, t + 0.5 * dt);
  const StateVector k3 = derivative(x + 0.5 * dt * k2, config, t + 0.5 * dt);
  const StateVector k4 = derivative(x + dt * k3, config, t + dt);
  x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_finite(const StateVector& x, double t) {
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergenceBound) {
    throw Divergence(t);
  }
}

}  // namespace

SimState step(const SimState& state, const SimConfig& config, double t) {
  SimState next = state;
  rk4_advance(next.x, config, t, config.dt);
  check_finite(next.x, t);
  return next;
}

namespace {

/// Per-period single-bin phasors of one real signal sampled N times per
/// period: x(t) = Re{X exp(jw tau)} with tau relative to the window start.
class PhasorAccumulator {
 public:
  PhasorAccumulator(double omega, double dt, int samples_per_period)
      : rot_step_(std::polar(1.0, -omega * dt)), n_(samples_per_period) {}

  void add(double value) {
    sum_ += value * w_;
    w_ *= rot_step_;
    if (++count_ == n_) {
      periods_.push_back(2.0 * sum_ / static_cast<double>(n_));
      sum_ = Complex{0.0, 0.0};
      w_ = Complex{1.0, 0.0};  // window start is period-aligned
      count_ = 0;
    }
  }

  const std::vector<Complex>& periods() const { return periods_; }

  Complex mean() const {
    Complex acc{0.0, 0.0};
    for (const Complex& c : periods_) acc += c;
    return acc / static_cast<double>(periods_.size());
  }

 private:
  Complex sum_{0.0, 0.0};
  Complex w_{1.0, 0.0};
  const Complex rot_step_;
  const int n_;
  int count_ = 0;
  std::vector<Complex> periods_;
};

struct InjectionPhasors {
  Complex input;  ///< injected-axis PCC voltage deviation
  Complex i_d, i_q;
};

/// One injection experiment: returns settled phasors or throws NotSettled.
InjectionPhasors run_injection(const SimConfig& base, double omega, char axis) {
  const ControllerParams& p = base.params;
  const double period = kTwoPi / omega;

  // snap the step so an integer number of samples covers each period; the
  // single-bin projection is then leakage-free
  const int n = std::max(64, static_cast<int>(std::lround(period / base.dt)));
  const double dt = period / n;

  double settle_p;
  if (base.settle_periods.has_value()) {
    settle_p = *base.settle_periods;
  } else {
    const double slowest =
        std::min({p.alpha_a, p.alpha_P, p.alpha_Q, p.k_m / p.M});
    settle_p = std::max(20.0, std::ceil(10.0 / slowest / period));
  }
  const long settle_steps = std::lround(settle_p) * n;
  constexpr int kMeasurePeriods = 4;
  const long total_steps = settle_steps + kMeasurePeriods * n;

  SimConfig config = base;
  config.mode = SimMode::ForcedPccVoltage;
  config.dt = dt;
  config.perturb.axis = axis;
  config.perturb.omega = omega;
  config.perturb.start = 0.0;
  config.events.clear();

  const double eps = config.perturb.amplitude;

  PhasorAccumulator acc_in(omega, dt, n);
  PhasorAccumulator acc_id(omega, dt, n);
  PhasorAccumulator acc_iq(omega, dt, n);

  StateVector x = equilibrium_state(p).x;
  for (long k = 0; k < total_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k >= settle_steps) {
      const Complex E = forced_pcc_voltage(config, t);
      acc_in.add(axis == 'q' ? E.imag() : E.real() - p.E_set);
      acc_id.add(x[0]);
      acc_iq.add(x[1]);
    }
    rk4_advance(x, config, t, dt);
    check_finite(x, t);
  }

  // drift between the last two per-period phasors must stay under 1%
  // relative (absolute floor scaled so that admittance entries at the 0.01 pu
  // reporting threshold are unaffected)
  const double floor = 1e-4 * eps;
  for (const auto* acc : {&acc_id, &acc_iq}) {
    const auto& per = acc->periods();
    const Complex last = per[per.size() - 1];
    const Complex prev = per[per.size() - 2];
    if (std::abs(last - prev) > std::max(0.01 * std::abs(last), floor)) {
      throw NotSettled("identification phasor drift at omega = " +
                       std::to_string(omega) + ", axis " + axis);
    }
  }

  return InjectionPhasors{acc_in.mean(), acc_id.mean(), acc_iq.mean()};
}

}  // namespace

std::vector<IdentifiedResponse> identify_admittance(
    const SimConfig& config, const std::vector<double>& omegas) {
  validate(config.params);
  if (config.mode != SimMode::ForcedPccVoltage) {
    throw InvalidParameter("identification requires forced-PCC-voltage mode");
  }
  SimConfig c = config;
  if (c.perturb.amplitude == 0.0) c.perturb.amplitude = 0.005;
  if (!(c.perturb.amplitude > 0.0) || c.perturb.amplitude > 0.01) {
    throw InvalidParameter("identification amplitude must be in (0, 0.01] pu");
  }

  std::vector<IdentifiedResponse> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    if (w == 0.0) throw PoleProximity(Complex{0.0, 0.0}, 0.0);
    const double wa = std::abs(w);
    const InjectionPhasors pd = run_injection(c, wa, 'd');
    const InjectionPhasors pq = run_injection(c, wa, 'q');

    IdentifiedResponse r;
    r.omega = w;
    r.Y_hat(0, 0) = -pd.i_d / pd.input;
    r.Y_hat(1, 0) = -pd.i_q / pd.input;
    r.Y_hat(0, 1) = -pq.i_d / pq.input;
    r.Y_hat(1, 1) = -pq.i_q / pq.input;
    if (w < 0.0) r.Y_hat = r.Y_hat.conjugate().eval();
    out.push_back(r);
  }
  return out;
}

ScenarioResult run_scenario(const SimConfig& config) {
  validate(config.params);
  if (config.mode == SimMode::GridImpedanceClosure &&
      !grid_is_series_rl(config.grid)) {
    throw InvalidParameter(
        "grid-impedance closure supports stiff-inductive and series-RL only");
  }
  if (!(config.dt > 0.0)) throw InvalidParameter("dt must be > 0");

  SimConfig c = config;
  std::vector<ParamEvent> events = c.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const ParamEvent& a, const ParamEvent& b) {
                     return a.time < b.time;
                   });
  std::size_t next_event = 0;

  const long n_steps = std::lround(c.t_end / c.dt);
  const int decim = std::max(1, c.output_decimation);

  ScenarioResult res;
  StateVector x = equilibrium_state(c.params).x;

  auto record = [&](long k) {
    const double t = static_cast<double>(k) * c.dt;
    SimOutputs outs;
    derivative(x, c, t, &outs);
    res.samples.push_back(ScenarioSample{t, x[0], x[1], outs.P, outs.Q,
                                         outs.E.real(), outs.E.imag(),
                                         outs.E_ref, x[2]});
  };

  for (long k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * c.dt;
    while (next_event < events.size() && t >= events[next_event].time) {
      set_param(c.params, events[next_event].parameter, events[next_event].value);
      validate(c.params);
      ++next_event;
    }
    if (k % decim == 0) record(k);
    try {
      rk4_advance(x, c, t, c.dt);
      check_finite(x, t);
    } catch (const Divergence&) {
      res.diverged = true;
      res.t_last = t;
      return res;
    }
  }
  if (n_steps > 0) record(n_steps);
  res.t_last = static_cast<double>(n_steps) * c.dt;
  return res;
}

double dominant_frequency(std::span<const double> values, double dt,
                          double omega_lo, double omega_hi) {
  if (values.size() < 8) throw Error("series too short for spectral summary");
  const std::size_t n = values.size();

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  // Hann window keeps truncation leakage from swamping nearby bins
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double hann =
        0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) /
                              static_cast<double>(n - 1)));
    w[k] = (values[k] - mean) * hann;
  }

  constexpr int kBins = 1200;
  double best_w = omega_lo;
  double best_mag = -1.0;
  for (int b = 0; b < kBins; ++b) {
    const double omega =
        omega_lo + (omega_hi - omega_lo) * b / static_cast<double>(kBins - 1);
    Complex acc{0.0, 0.0};
    const Complex rot = std::polar(1.0, -omega * dt);
    Complex ph{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      acc += w[k] * ph;
      ph *= rot;
    }
    const double mag = std::abs(acc);
    if (mag > best_mag) {
      best_mag = mag;
      best_w = omega;
    }
  }
  return best_w;
}

}  // namespace upsc
