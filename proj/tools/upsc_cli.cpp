// Command-line front end: admittance / passivity / nyquist / simulate /
// identify, all driven by a scenario file. Every command writes CSV to
// stdout or --out; floats carry 17 significant digits so outputs diff
// cleanly across runs.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "upsc/admittance.hpp"
#include "upsc/passivity.hpp"
#include "upsc/scenario.hpp"
#include "upsc/simulator.hpp"
#include "upsc/stability.hpp"

namespace {

using upsc::format_float;

constexpr int kExitConfig = 2;
constexpr int kExitNumericGuard = 3;
constexpr int kExitInconclusive = 4;
constexpr int kExitDivergence = 5;
constexpr int kExitNotSettled = 6;

struct Options {
  std::string scenario_path;
  std::vector<std::string> omega_tokens;
  std::string out_path;
  bool dump_config = false;
  bool debug_identity_admittance = false;
  bool debug_zero_admittance = false;
  bool debug_marginal_loop = false;
};

std::ostream& open_output(const Options& opt, std::ofstream& file) {
  if (opt.out_path.empty()) return std::cout;
  file.open(opt.out_path);
  if (!file) throw upsc::ConfigError("cannot open output file: " + opt.out_path);
  return file;
}

upsc::Scenario load_scenario(const Options& opt) {
  upsc::Scenario sc = upsc::parse_scenario_file(opt.scenario_path);
  for (const std::string& name : sc.defaulted_params) {
    std::cerr << "note: [params] " << name << " not set, using default "
              << format_float(get_param(sc.params, name)) << "\n";
  }
  return sc;
}

std::vector<double> parse_omegas(const std::vector<std::string>& tokens) {
  std::vector<double> out;
  for (const std::string& tok : tokens) {
    std::stringstream ss(tok);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      out.push_back(upsc::parse_frequency(item));
    }
  }
  return out;
}

void write_matrix_row(std::ostream& os, double omega, const Eigen::Matrix2cd& m) {
  os << format_float(omega);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      os << "," << format_float(m(i, j).real()) << ","
         << format_float(m(i, j).imag());
  os << "\n";
}

int cmd_admittance(const Options& opt) {
  upsc::Scenario sc = load_scenario(opt);
  auto model = upsc::make_model(sc.params);
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  os << "omega,Ydd_re,Ydd_im,Ydq_re,Ydq_im,Yqd_re,Yqd_im,Yqq_re,Yqq_im\n";
  for (double w : parse_omegas(opt.omega_tokens)) {
    write_matrix_row(os, w, upsc::eval_Y(model, w).m);
  }
  return 0;
}

void write_curve(std::ostream& os, const upsc::PassivityCurve& c,
                 const std::string& prefix) {
  for (std::size_t k = 0; k < c.omegas.size(); ++k) {
    os << prefix << format_float(c.omegas[k]) << "," << format_float(c.nu[k])
       << "\n";
  }
}

void write_curve_summary(std::ostream& os, const upsc::PassivityCurve& c,
                         const std::string& label) {
  os << "# " << label << "min_nu = " << format_float(c.min_nu())
     << " argmin_omega = " << format_float(c.argmin_omega())
     << " zero_crossings =";
  if (c.zero_crossings.empty()) {
    os << " none";
  } else {
    for (double z : c.zero_crossings) os << " " << format_float(z);
  }
  os << "\n";
}

int cmd_passivity(const Options& opt) {
  upsc::Scenario sc = load_scenario(opt);
  upsc::FrequencyGrid grid = upsc::FrequencyGrid::passivity_default();
  if (sc.sweep) grid = sc.sweep->grid;

  std::ofstream file;
  std::ostream& os = open_output(opt, file);

  if (opt.debug_identity_admittance) {
    auto curve = upsc::sweep(
        [](double) { return Eigen::Matrix2cd::Identity().eval(); }, grid);
    os << "omega,nu\n";
    write_curve(os, curve, "");
    write_curve_summary(os, curve, "");
    return 0;
  }

  if (sc.sweep && !sc.sweep->parameter.empty()) {
    auto study = upsc::sensitivity_study(sc.params, *sc.sweep);
    os << "param_value,omega,nu\n";
    for (const auto& [value, curve] : study) {
      write_curve(os, curve, format_float(value) + ",");
    }
    for (const auto& [value, curve] : study) {
      write_curve_summary(os, curve, sc.sweep->parameter + " = " +
                                         format_float(value) + " ");
    }
    return 0;
  }

  auto curve = upsc::sweep(upsc::make_model(sc.params), grid);
  os << "omega,nu\n";
  write_curve(os, curve, "");
  write_curve_summary(os, curve, "");
  return 0;
}

int cmd_nyquist(const Options& opt) {
  upsc::Scenario sc = load_scenario(opt);
  if (!sc.grid && !opt.debug_zero_admittance && !opt.debug_marginal_loop) {
    throw upsc::ConfigError("nyquist requires a [grid] section");
  }
  upsc::GridImpedance g =
      sc.grid.value_or(upsc::GridImpedance{upsc::GridKind::SeriesRL, 1.0, 0.0, 0.0});

  upsc::NyquistResult res;
  if (opt.debug_zero_admittance) {
    res = upsc::nyquist([](double) { return Eigen::Matrix2cd::Zero().eval(); },
                        g, upsc::nyquist_default_grid(), sc.params.omega_1);
  } else if (opt.debug_marginal_loop) {
    // synthetic locus holding within 1e-4 of -1
    auto evaluator = [](double) {
      Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
      m(0, 0) = std::complex<double>(-1.0 + 1e-4, 0.0);
      m(1, 1) = std::complex<double>(0.1, 0.0);
      return m;
    };
    res = upsc::nyquist(evaluator, g, upsc::nyquist_default_grid(),
                        sc.params.omega_1);
  } else {
    res = upsc::nyquist(upsc::make_model(sc.params), g);
  }

  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  os << "omega,lam1_re,lam1_im,lam2_re,lam2_im\n";
  for (std::size_t k = 0; k < res.omegas.size(); ++k) {
    os << format_float(res.omegas[k]) << ","
       << format_float(res.locus1[k].real()) << ","
       << format_float(res.locus1[k].imag()) << ","
       << format_float(res.locus2[k].real()) << ","
       << format_float(res.locus2[k].imag()) << "\n";
  }
  os << "# open_loop_rhp_poles_assumed = " << res.open_loop_rhp_poles_assumed
     << "\n";
  os << "# encirclements = " << res.encirclements << "\n";
  os << "# nearest_approach = " << format_float(res.nearest_approach) << "\n";
  os << "# verdict = "
     << (res.verdict == upsc::Verdict::Stable
             ? "stable"
             : res.verdict == upsc::Verdict::Unstable ? "unstable"
                                                      : "inconclusive")
     << "\n";
  if (res.verdict == upsc::Verdict::Inconclusive) {
    std::cerr << "inconclusive: " << res.note << "\n";
    return kExitInconclusive;
  }
  return 0;
}

int cmd_simulate(const Options& opt) {
  upsc::Scenario sc = load_scenario(opt);
  if (!sc.has_sim) throw upsc::ConfigError("simulate requires a [sim] section");
  upsc::SimConfig cfg = upsc::sim_config_from(sc);
  upsc::ScenarioResult res = upsc::run_scenario(cfg);

  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  os << "t,i_d,i_q,P,Q,E_d,E_q,E_ref,dtheta\n";
  for (const upsc::ScenarioSample& s : res.samples) {
    os << format_float(s.t) << "," << format_float(s.i_d) << ","
       << format_float(s.i_q) << "," << format_float(s.P) << ","
       << format_float(s.Q) << "," << format_float(s.E_d) << ","
       << format_float(s.E_q) << "," << format_float(s.E_ref) << ","
       << format_float(s.dtheta) << "\n";
  }
  if (res.diverged) {
    std::cerr << "divergence abort, last finite time t = "
              << format_float(res.t_last) << "\n";
    return kExitDivergence;
  }
  return 0;
}

int cmd_identify(const Options& opt) {
  upsc::Scenario sc = load_scenario(opt);
  if (!sc.has_sim) throw upsc::ConfigError("identify requires a [sim] section");
  upsc::SimConfig cfg = upsc::sim_config_from(sc);
  cfg.mode = upsc::SimMode::ForcedPccVoltage;

  const std::vector<double> omegas = parse_omegas(opt.omega_tokens);
  auto model = upsc::make_model(sc.params);
  auto responses = upsc::identify_admittance(cfg, omegas);

  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  os << "omega,Ydd_re_sim,Ydd_im_sim,Ydq_re_sim,Ydq_im_sim,Yqd_re_sim,"
        "Yqd_im_sim,Yqq_re_sim,Yqq_im_sim,Ydd_re,Ydd_im,Ydq_re,Ydq_im,"
        "Yqd_re,Yqd_im,Yqq_re,Yqq_im,max_rel_err\n";
  for (const upsc::IdentifiedResponse& r : responses) {
    const Eigen::Matrix2cd Ya = upsc::eval_Y(model, r.omega).m;
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (std::abs(Ya(i, j)) > 0.01)
          worst = std::max(worst, std::abs(r.Y_hat(i, j) - Ya(i, j)) /
                                      std::abs(Ya(i, j)));
    os << format_float(r.omega);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        os << "," << format_float(r.Y_hat(i, j).real()) << ","
           << format_float(r.Y_hat(i, j).imag());
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        os << "," << format_float(Ya(i, j).real()) << ","
           << format_float(Ya(i, j).imag());
    os << "," << format_float(worst) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-forming converter input-admittance toolkit"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd, bool with_omega) {
    cmd->add_option("--scenario", opt.scenario_path, "scenario file")
        ->required();
    cmd->add_option("--out", opt.out_path, "output CSV path (default stdout)");
    cmd->add_flag("--dump-config", opt.dump_config,
                  "echo the normalized scenario and exit");
    if (with_omega) {
      cmd->add_option("--omega", opt.omega_tokens,
                      "frequencies, pu or '<x> hz' (comma or repeat)");
    }
  };

  CLI::App* adm = app.add_subcommand("admittance", "analytic Y(jw) samples");
  add_common(adm, true);
  CLI::App* pas = app.add_subcommand("passivity", "passivity-index sweep");
  add_common(pas, false);
  pas->add_flag("--debug-identity-admittance", opt.debug_identity_admittance,
                "replace Y with the identity (diagnostic)");
  CLI::App* nyq = app.add_subcommand("nyquist", "eigen-loci and verdict");
  add_common(nyq, false);
  nyq->add_flag("--debug-zero-admittance", opt.debug_zero_admittance,
                "replace Y with zero (diagnostic)");
  nyq->add_flag("--debug-marginal-loop", opt.debug_marginal_loop,
                "synthetic loop passing near -1 (diagnostic)");
  CLI::App* sim = app.add_subcommand("simulate", "closed-loop time series");
  add_common(sim, false);
  CLI::App* idf = app.add_subcommand("identify",
                                     "sinusoidal-injection identification");
  add_common(idf, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (opt.dump_config) {
      upsc::Scenario sc = load_scenario(opt);
      std::ofstream file;
      std::ostream& os = open_output(opt, file);
      os << upsc::dump_scenario(sc);
      return 0;
    }
    if (adm->parsed()) return cmd_admittance(opt);
    if (pas->parsed()) return cmd_passivity(opt);
    if (nyq->parsed()) return cmd_nyquist(opt);
    if (sim->parsed()) return cmd_simulate(opt);
    if (idf->parsed()) return cmd_identify(opt);
  } catch (const upsc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const upsc::InvalidSetpoint& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const upsc::InvalidBandwidth& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const upsc::InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const upsc::UnknownParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const upsc::PoleProximity& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return kExitNumericGuard;
  } catch (const upsc::SingularD& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return kExitNumericGuard;
  } catch (const upsc::Divergence& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const upsc::NotSettled& e) {
    std::cerr << "not settled: " << e.what() << "\n";
    return kExitNotSettled;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
