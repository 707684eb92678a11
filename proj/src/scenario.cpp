#include "upsc/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace upsc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_double(const std::string& token, int line) {
  const std::string t = trim(token);
  try {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + t + "'");
  }
}

double parse_frequency_at(const std::string& token, int line) {
  std::string t = trim(token);
  const std::string lt = lower(t);
  bool hz = false;
  if (lt.size() > 2 && lt.substr(lt.size() - 2) == "hz") {
    hz = true;
    t = trim(t.substr(0, t.size() - 2));
  }
  const double v = parse_double(t, line);
  return hz ? v / kFreqBaseHz : v;
}

std::vector<double> parse_list(const std::string& token, int line) {
  std::vector<double> out;
  std::stringstream ss(token);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(item, line));
  }
  if (out.empty()) throw ConfigError(line, "expected a nonempty value list");
  return out;
}

GridKind parse_grid_kind(const std::string& token, int line) {
  const std::string t = lower(trim(token));
  if (t == "stiff-inductive") return GridKind::StiffInductive;
  if (t == "series-rl") return GridKind::SeriesRL;
  if (t == "series-rlc") return GridKind::SeriesRLC;
  if (t == "parallel-rc-behind-rl") return GridKind::ParallelRCBehindRL;
  throw ConfigError(line, "unknown grid kind '" + token + "'");
}

const char* grid_kind_name(GridKind k) {
  switch (k) {
    case GridKind::StiffInductive: return "stiff-inductive";
    case GridKind::SeriesRL: return "series-RL";
    case GridKind::SeriesRLC: return "series-RLC";
    case GridKind::ParallelRCBehindRL: return "parallel-RC-behind-RL";
  }
  return "?";
}

}  // namespace

double parse_frequency(const std::string& token) {
  return parse_frequency_at(token, 0);
}

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  std::set<std::string> seen_params;

  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "malformed section header");
      section = lower(trim(s.substr(1, s.size() - 2)));
      if (section != "params" && section != "sweep" && section != "grid" &&
          section != "sim") {
        throw ConfigError(line, "unknown section [" + section + "]");
      }
      if (section == "sweep") sc.sweep.emplace();
      if (section == "grid") sc.grid.emplace();
      if (section == "sim") sc.has_sim = true;
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (section.empty()) throw ConfigError(line, "key outside any section");

    if (section == "params") {
      try {
        set_param(sc.params, key, parse_double(value, line));
      } catch (const UnknownParameter&) {
        throw ConfigError(line, "unknown [params] key '" + key + "'");
      }
      seen_params.insert(key);
    } else if (section == "sweep") {
      SweepSpec& sw = *sc.sweep;
      if (key == "parameter") {
        sw.parameter = value;
      } else if (key == "values") {
        sw.values = parse_list(value, line);
      } else if (key == "omega_min") {
        sw.grid.omega_min = parse_frequency_at(value, line);
      } else if (key == "omega_max") {
        sw.grid.omega_max = parse_frequency_at(value, line);
      } else if (key == "points") {
        sw.grid.points = static_cast<int>(parse_double(value, line));
      } else if (key == "spacing") {
        const std::string sp = lower(value);
        if (sp == "log") {
          sw.grid.spacing = FrequencyGrid::Spacing::Log;
        } else if (sp == "linear") {
          sw.grid.spacing = FrequencyGrid::Spacing::Linear;
        } else {
          throw ConfigError(line, "spacing must be log or linear");
        }
      } else {
        throw ConfigError(line, "unknown [sweep] key '" + key + "'");
      }
    } else if (section == "grid") {
      GridImpedance& g = *sc.grid;
      if (key == "kind") {
        g.kind = parse_grid_kind(value, line);
      } else if (key == "R_g") {
        g.R_g = parse_double(value, line);
      } else if (key == "L_g") {
        g.L_g = parse_double(value, line);
      } else if (key == "C_g") {
        g.C_g = parse_double(value, line);
      } else if (key == "v_g") {
        sc.v_g = parse_double(value, line);
      } else {
        throw ConfigError(line, "unknown [grid] key '" + key + "'");
      }
    } else {  // sim
      if (key == "dt") {
        sc.dt = parse_double(value, line);
      } else if (key == "t_end") {
        sc.t_end = parse_double(value, line);
      } else if (key == "mode") {
        const std::string m = lower(value);
        if (m == "forced") {
          sc.mode = SimMode::ForcedPccVoltage;
        } else if (m == "closure") {
          sc.mode = SimMode::GridImpedanceClosure;
        } else {
          throw ConfigError(line, "mode must be forced or closure");
        }
      } else if (key == "perturb_axis") {
        const std::string a = lower(value);
        if (a != "d" && a != "q") throw ConfigError(line, "axis must be d or q");
        sc.perturb.axis = a[0];
      } else if (key == "perturb_amplitude") {
        sc.perturb.amplitude = parse_double(value, line);
      } else if (key == "perturb_omega") {
        sc.perturb.omega = parse_frequency_at(value, line);
      } else if (key == "perturb_start") {
        sc.perturb.start = parse_double(value, line);
      } else if (key == "decimation") {
        sc.output_decimation = static_cast<int>(parse_double(value, line));
      } else if (key == "event") {
        // event = time, parameter, value
        std::vector<std::string> parts;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(trim(item));
        if (parts.size() != 3) {
          throw ConfigError(line, "event needs: time, parameter, value");
        }
        ParamEvent ev;
        ev.time = parse_double(parts[0], line);
        ev.parameter = parts[1];
        ev.value = parse_double(parts[2], line);
        if (std::find(param_names().begin(), param_names().end(),
                      ev.parameter) == param_names().end()) {
          throw ConfigError(line, "event names unknown parameter '" +
                                      ev.parameter + "'");
        }
        sc.events.push_back(ev);
      } else {
        throw ConfigError(line, "unknown [sim] key '" + key + "'");
      }
    }
  }

  for (const std::string& name : param_names()) {
    if (!seen_params.count(name)) sc.defaulted_params.push_back(name);
  }
  validate(sc.params);
  if (sc.sweep && !sc.sweep->parameter.empty() && sc.sweep->values.empty()) {
    throw ConfigError("[sweep] parameter given without values");
  }
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  return parse_scenario(in);
}

Scenario parse_scenario_string(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

std::string dump_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "[params]\n";
  for (const std::string& name : param_names()) {
    out << name << " = " << format_float(get_param(sc.params, name)) << "\n";
  }
  if (sc.sweep) {
    const SweepSpec& sw = *sc.sweep;
    out << "\n[sweep]\n";
    if (!sw.parameter.empty()) out << "parameter = " << sw.parameter << "\n";
    if (!sw.values.empty()) {
      out << "values = ";
      for (std::size_t k = 0; k < sw.values.size(); ++k) {
        if (k) out << ", ";
        out << format_float(sw.values[k]);
      }
      out << "\n";
    }
    out << "omega_min = " << format_float(sw.grid.omega_min) << "\n";
    out << "omega_max = " << format_float(sw.grid.omega_max) << "\n";
    out << "points = " << sw.grid.points << "\n";
    out << "spacing = "
        << (sw.grid.spacing == FrequencyGrid::Spacing::Log ? "log" : "linear")
        << "\n";
  }
  if (sc.grid) {
    out << "\n[grid]\n";
    out << "kind = " << grid_kind_name(sc.grid->kind) << "\n";
    out << "R_g = " << format_float(sc.grid->R_g) << "\n";
    out << "L_g = " << format_float(sc.grid->L_g) << "\n";
    out << "C_g = " << format_float(sc.grid->C_g) << "\n";
    out << "v_g = " << format_float(sc.v_g) << "\n";
  }
  if (sc.has_sim) {
    out << "\n[sim]\n";
    out << "dt = " << format_float(sc.dt) << "\n";
    out << "t_end = " << format_float(sc.t_end) << "\n";
    out << "mode = "
        << (sc.mode == SimMode::GridImpedanceClosure ? "closure" : "forced")
        << "\n";
    out << "perturb_axis = " << sc.perturb.axis << "\n";
    out << "perturb_amplitude = " << format_float(sc.perturb.amplitude) << "\n";
    out << "perturb_omega = " << format_float(sc.perturb.omega) << "\n";
    out << "perturb_start = " << format_float(sc.perturb.start) << "\n";
    out << "decimation = " << sc.output_decimation << "\n";
    for (const ParamEvent& ev : sc.events) {
      out << "event = " << format_float(ev.time) << ", " << ev.parameter
          << ", " << format_float(ev.value) << "\n";
    }
  }
  return out.str();
}

SimConfig sim_config_from(const Scenario& sc) {
  SimConfig c;
  c.params = sc.params;
  c.dt = sc.dt;
  c.t_end = sc.t_end;
  c.mode = sc.mode;
  c.perturb = sc.perturb;
  if (sc.grid) c.grid = *sc.grid;
  c.v_g = sc.v_g;
  c.events = sc.events;
  c.output_decimation = sc.output_decimation;
  return c;
}

}  // namespace upsc
