#include "upsc/params.hpp"

#include <array>
#include <cmath>

namespace upsc {

namespace {

struct Field {
  const char* name;
  double ControllerParams::*member;
};

constexpr std::array<Field, 16> kFields{{
    {"k_m", &ControllerParams::k_m},
    {"T_d", &ControllerParams::T_d},
    {"M", &ControllerParams::M},
    {"K_P", &ControllerParams::K_P},
    {"K_PI", &ControllerParams::K_PI},
    {"alpha_P", &ControllerParams::alpha_P},
    {"K_Q", &ControllerParams::K_Q},
    {"alpha_Q", &ControllerParams::alpha_Q},
    {"L", &ControllerParams::L},
    {"R_a", &ControllerParams::R_a},
    {"alpha_a", &ControllerParams::alpha_a},
    {"alpha_F", &ControllerParams::alpha_F},
    {"omega_1", &ControllerParams::omega_1},
    {"E_set", &ControllerParams::E_set},
    {"P_ref", &ControllerParams::P_ref},
    {"Q_ref", &ControllerParams::Q_ref},
}};

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be strictly positive, got " +
                           std::to_string(v));
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be >= 0, got " +
                           std::to_string(v));
  }
}

}  // namespace

void validate(const ControllerParams& p) {
  require_positive(p.alpha_P, "alpha_P");
  require_positive(p.alpha_Q, "alpha_Q");
  require_positive(p.alpha_a, "alpha_a");
  require_positive(p.alpha_F, "alpha_F");
  require_positive(p.L, "L");
  require_positive(p.R_a, "R_a");
  require_positive(p.M, "M");
  require_positive(p.k_m, "k_m");
  require_positive(p.T_d, "T_d");
  require_nonnegative(p.K_P, "K_P");
  require_nonnegative(p.K_PI, "K_PI");
  require_nonnegative(p.K_Q, "K_Q");
  require_positive(p.omega_1, "omega_1");
  if (!(p.E_set > 0.0) || !std::isfinite(p.E_set)) throw InvalidSetpoint(p.E_set);
  if (!std::isfinite(p.P_ref) || !std::isfinite(p.Q_ref)) {
    throw InvalidParameter("power references must be finite");
  }
}

OperatingPoint operating_point(const ControllerParams& p) {
  if (!(p.E_set > 0.0)) throw InvalidSetpoint(p.E_set);
  return OperatingPoint{p.P_ref / p.E_set, -p.Q_ref / p.E_set};
}

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    out.reserve(kFields.size());
    for (const auto& f : kFields) out.emplace_back(f.name);
    return out;
  }();
  return names;
}

double get_param(const ControllerParams& p, std::string_view name) {
  for (const auto& f : kFields) {
    if (name == f.name) return p.*(f.member);
  }
  throw UnknownParameter(std::string(name));
}

void set_param(ControllerParams& p, std::string_view name, double value) {
  for (const auto& f : kFields) {
    if (name == f.name) {
      p.*(f.member) = value;
      return;
    }
  }
  throw UnknownParameter(std::string(name));
}

}  // namespace upsc
