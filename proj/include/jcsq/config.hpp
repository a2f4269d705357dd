#pragma once

// INI-style run configuration. Unknown sections or keys are rejected so a
// typo never silently falls back to a default.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jcsq/errors.hpp"
#include "jcsq/hilbert.hpp"
#include "jcsq/io.hpp"
#include "jcsq/propagator.hpp"

namespace jcsq {

struct SystemConfig {
  LadderKind kind = LadderKind::oscillator;
  int n_cut = 300;
  SpinValue j{20};
  std::string k_file;  ///< custom kind: matrix text file
  bool operator==(const SystemConfig&) const = default;
};

struct ScheduleConfig {
  double g = 1.0;
  double T = 100.0;
  double dt = 0.005;
  ExpMethod method = ExpMethod::automatic;
  bool operator==(const ScheduleConfig&) const = default;
};

struct SweepConfig {
  double u_min = 0.0;
  double u_max = 0.5;
  int u_points = 51;
  int k = 21;
  bool operator==(const SweepConfig&) const = default;
};

struct StatesConfig {
  std::vector<double> g2_over_g1{0.25};
  double g1 = 1.0;
  bool operator==(const StatesConfig&) const = default;
};

struct EvolveConfig {
  int decimation = 100;
  std::vector<double> snapshots;
  bool maps = true;         ///< phase-space rasters at each snapshot
  bool convergence = true;  ///< dt-halving re-run
  double leakage_threshold = 1e-6;
  bool operator==(const EvolveConfig&) const = default;
};

struct PhaseConfig {
  std::string input;  ///< snapshot blob or amplitude CSV; empty: analytic state
  bool auto_grid = true;
  double x_min = -8.0, x_max = 8.0, p_min = -8.0, p_max = 8.0;
  double step = 0.05;
  int theta_points = 181;
  int phi_points = 361;
  bool csv = false;
  bool operator==(const PhaseConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  SystemConfig system;
  ScheduleConfig schedule;
  SweepConfig sweep;
  StatesConfig states;
  EvolveConfig evolve;
  PhaseConfig phase;
  OutputConfig output;
  bool operator==(const RunConfig&) const = default;
};

namespace cfgdetail {

using boost::property_tree::ptree;

inline const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"system", {"kind", "n_cut", "j", "k_file"}},
      {"schedule", {"g", "T", "dt", "method"}},
      {"sweep", {"u_min", "u_max", "u_points", "k"}},
      {"states", {"g2_over_g1", "g1"}},
      {"evolve", {"decimation", "snapshots", "maps", "convergence", "leakage_threshold"}},
      {"phase", {"input", "auto_grid", "x_min", "x_max", "p_min", "p_max", "step", "theta_points", "phi_points", "csv"}},
      {"output", {"dir"}},
  };
  return s;
}

inline std::string where(const std::string& sec, const std::string& key) { return "[" + sec + "] " + key; }

inline double to_double(const std::string& sec, const std::string& key, const std::string& v) {
  try {
    const double d = io::parse_double(io::trim(v));
    if (!std::isfinite(d)) throw std::invalid_argument("not finite");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(where(sec, key) + ": expected a number, got '" + v + "'");
  }
}

inline int to_int(const std::string& sec, const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const std::string t = io::trim(v);
    const int i = std::stoi(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing");
    return i;
  } catch (const std::exception&) {
    throw ConfigError(where(sec, key) + ": expected an integer, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& sec, const std::string& key, const std::string& v) {
  const std::string t = io::trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(where(sec, key) + ": expected true/false, got '" + v + "'");
}

inline std::vector<double> to_list(const std::string& sec, const std::string& key, const std::string& v) {
  std::vector<double> out;
  const std::string t = io::trim(v);
  if (t.empty()) return out;
  for (const auto& item : io::split(t, ',')) out.push_back(to_double(sec, key, item));
  return out;
}

inline std::string list_str(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + io::fmt(v[i]);
  return s;
}

inline void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (c.system.kind == LadderKind::oscillator && c.system.n_cut < 1) fail("[system] n_cut must be >= 1");
  if (c.system.kind == LadderKind::spin && c.system.j.twice < 1) fail("[system] j must be >= 1/2");
  if (c.system.kind == LadderKind::custom && c.system.k_file.empty()) fail("[system] k_file is required for kind = custom");
  if (!(c.schedule.g > 0)) fail("[schedule] g must be positive");
  if (!(c.schedule.T > 0)) fail("[schedule] T must be positive");
  if (!(c.schedule.dt > 0)) fail("[schedule] dt must be positive");
  if (!(c.sweep.u_min >= 0 && c.sweep.u_max <= 1 && c.sweep.u_min <= c.sweep.u_max)) fail("[sweep] need 0 <= u_min <= u_max <= 1");
  if (c.sweep.u_points < 1) fail("[sweep] u_points must be >= 1");
  if (c.sweep.u_points > 1 && c.sweep.u_min == c.sweep.u_max) fail("[sweep] u_min == u_max with several points");
  if (c.sweep.k < 1) fail("[sweep] k must be >= 1");
  for (double r : c.states.g2_over_g1)
    if (!(r >= 0)) fail("[states] g2_over_g1 entries must be non-negative");
  if (!(c.states.g1 > 0)) fail("[states] g1 must be positive");
  if (c.evolve.decimation < 1) fail("[evolve] decimation must be >= 1");
  for (double u : c.evolve.snapshots)
    if (!(u >= 0 && u <= 1)) fail("[evolve] snapshots must lie in [0, 1]");
  if (!(c.evolve.leakage_threshold > 0)) fail("[evolve] leakage_threshold must be positive");
  if (!(c.phase.step > 0)) fail("[phase] step must be positive");
  if (!c.phase.auto_grid && !(c.phase.x_max > c.phase.x_min && c.phase.p_max > c.phase.p_min))
    fail("[phase] grid bounds must be increasing");
  if (c.phase.theta_points < 2 || c.phase.phi_points < 3) fail("[phase] sphere mesh is degenerate");
  if (c.output.dir.empty()) fail("[output] dir must not be empty");
}

}  // namespace cfgdetail

/// Builds a config from a property tree (sections -> keys). Missing keys keep
/// their defaults.
inline RunConfig config_from_tree(const boost::property_tree::ptree& tree) {
  using namespace cfgdetail;
  RunConfig c;
  for (const auto& [sec, body] : tree) {
    const auto it = schema().find(sec);
    if (it == schema().end()) throw ConfigError("unknown config section [" + sec + "]");
    if (!body.data().empty() && body.empty()) throw ConfigError("config key '" + sec + "' outside any section");
    for (const auto& [key, node] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown config key " + where(sec, key));
      const std::string v = io::trim(node.data());
      if (sec == "system") {
        if (key == "kind") {
          if (v == "oscillator") c.system.kind = LadderKind::oscillator;
          else if (v == "spin") c.system.kind = LadderKind::spin;
          else if (v == "custom") c.system.kind = LadderKind::custom;
          else throw ConfigError("[system] kind must be oscillator, spin or custom");
        } else if (key == "n_cut") {
          c.system.n_cut = to_int(sec, key, v);
        } else if (key == "j") {
          try {
            c.system.j = SpinValue::parse(v);
          } catch (const std::exception&) {
            throw ConfigError("[system] j must be a positive integer or half-integer, got '" + v + "'");
          }
        } else {
          c.system.k_file = v;
        }
      } else if (sec == "schedule") {
        if (key == "method") {
          try {
            c.schedule.method = parse_exp_method(v);
          } catch (const std::exception& e) {
            throw ConfigError(std::string("[schedule] ") + e.what());
          }
        } else {
          const double d = to_double(sec, key, v);
          (key == "g" ? c.schedule.g : key == "T" ? c.schedule.T : c.schedule.dt) = d;
        }
      } else if (sec == "sweep") {
        if (key == "u_points") c.sweep.u_points = to_int(sec, key, v);
        else if (key == "k") c.sweep.k = to_int(sec, key, v);
        else (key == "u_min" ? c.sweep.u_min : c.sweep.u_max) = to_double(sec, key, v);
      } else if (sec == "states") {
        if (key == "g2_over_g1") c.states.g2_over_g1 = to_list(sec, key, v);
        else c.states.g1 = to_double(sec, key, v);
      } else if (sec == "evolve") {
        if (key == "decimation") c.evolve.decimation = to_int(sec, key, v);
        else if (key == "snapshots") c.evolve.snapshots = to_list(sec, key, v);
        else if (key == "maps") c.evolve.maps = to_bool(sec, key, v);
        else if (key == "convergence") c.evolve.convergence = to_bool(sec, key, v);
        else c.evolve.leakage_threshold = to_double(sec, key, v);
      } else if (sec == "phase") {
        if (key == "input") c.phase.input = v;
        else if (key == "auto_grid") c.phase.auto_grid = to_bool(sec, key, v);
        else if (key == "csv") c.phase.csv = to_bool(sec, key, v);
        else if (key == "theta_points") c.phase.theta_points = to_int(sec, key, v);
        else if (key == "phi_points") c.phase.phi_points = to_int(sec, key, v);
        else {
          const double d = to_double(sec, key, v);
          if (key == "x_min") c.phase.x_min = d;
          else if (key == "x_max") c.phase.x_max = d;
          else if (key == "p_min") c.phase.p_min = d;
          else if (key == "p_max") c.phase.p_max = d;
          else c.phase.step = d;
        }
      } else {
        c.output.dir = v;
      }
    }
  }
  validate(c);
  return c;
}

inline boost::property_tree::ptree parse_ini_tree(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  return tree;
}

/// Applies "section.key=value" overrides to a tree.
inline void apply_overrides(boost::property_tree::ptree& tree, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not of the form section.key=value");
    const std::string path = io::trim(o.substr(0, eq));
    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
      throw ConfigError("override key '" + path + "' must be section.key");
    tree.put(boost::property_tree::ptree::path_type(path, '.'), io::trim(o.substr(eq + 1)));
  }
}

inline RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {}) {
  auto tree = parse_ini_tree(text);
  apply_overrides(tree, overrides);
  return config_from_tree(tree);
}

/// Canonical INI text; every key is written so the text fully determines the run.
inline std::string serialize_config(const RunConfig& c) {
  using cfgdetail::list_str;
  using io::fmt;
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  std::ostringstream o;
  o << "[system]\n"
    << "kind = " << to_string(c.system.kind) << "\n"
    << "n_cut = " << c.system.n_cut << "\n"
    << "j = " << c.system.j.str() << "\n"
    << "k_file = " << c.system.k_file << "\n\n"
    << "[schedule]\n"
    << "g = " << fmt(c.schedule.g) << "\n"
    << "T = " << fmt(c.schedule.T) << "\n"
    << "dt = " << fmt(c.schedule.dt) << "\n"
    << "method = " << to_string(c.schedule.method) << "\n\n"
    << "[sweep]\n"
    << "u_min = " << fmt(c.sweep.u_min) << "\n"
    << "u_max = " << fmt(c.sweep.u_max) << "\n"
    << "u_points = " << c.sweep.u_points << "\n"
    << "k = " << c.sweep.k << "\n\n"
    << "[states]\n"
    << "g2_over_g1 = " << list_str(c.states.g2_over_g1) << "\n"
    << "g1 = " << fmt(c.states.g1) << "\n\n"
    << "[evolve]\n"
    << "decimation = " << c.evolve.decimation << "\n"
    << "snapshots = " << list_str(c.evolve.snapshots) << "\n"
    << "maps = " << b(c.evolve.maps) << "\n"
    << "convergence = " << b(c.evolve.convergence) << "\n"
    << "leakage_threshold = " << fmt(c.evolve.leakage_threshold) << "\n\n"
    << "[phase]\n"
    << "input = " << c.phase.input << "\n"
    << "auto_grid = " << b(c.phase.auto_grid) << "\n"
    << "x_min = " << fmt(c.phase.x_min) << "\n"
    << "x_max = " << fmt(c.phase.x_max) << "\n"
    << "p_min = " << fmt(c.phase.p_min) << "\n"
    << "p_max = " << fmt(c.phase.p_max) << "\n"
    << "step = " << fmt(c.phase.step) << "\n"
    << "theta_points = " << c.phase.theta_points << "\n"
    << "phi_points = " << c.phase.phi_points << "\n"
    << "csv = " << b(c.phase.csv) << "\n\n"
    << "[output]\n"
    << "dir = " << c.output.dir << "\n";
  return o.str();
}

}  // namespace jcsq
