#pragma once

// Batch front end: spectrum | evolve | states | wigner | husimi.
// Every run writes into one output directory and finishes with manifest.json
// listing each artifact with its SHA-256.
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical guard, 1 anything else.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "jcsq/analytic_states.hpp"
#include "jcsq/config.hpp"
#include "jcsq/evolve.hpp"
#include "jcsq/io.hpp"
#include "jcsq/phase_space.hpp"
#include "jcsq/spectra.hpp"
#include "jcsq/version.hpp"

namespace jcsq::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

inline LadderRep make_rep(const SystemConfig& s) {
  switch (s.kind) {
    case LadderKind::oscillator: return osc_ladder(s.n_cut);
    case LadderKind::spin: return spin_ladder(s.j);
    case LadderKind::custom: {
      CMat k;
      try {
        k = io::read_matrix_text(io::read_file(s.k_file));
        return custom_ladder(std::move(k));
      } catch (const std::exception& e) {
        throw ConfigError("[system] k_file '" + s.k_file + "': " + e.what());
      }
    }
  }
  throw ConfigError("[system] unknown kind");
}

inline json rep_json(const LadderRep& rep) {
  json j;
  j["kind"] = to_string(rep.kind());
  j["ancilla_dim"] = rep.dim();
  j["joint_dim"] = 2 * rep.dim();
  if (rep.kind() == LadderKind::oscillator) j["n_cut"] = rep.dim() - 1;
  if (rep.kind() == LadderKind::spin) {
    j["j"] = rep.spin().str();
    j["integer_j"] = rep.spin().is_integer();
  }
  return j;
}

inline std::string u_tag(double u) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u%.4f", u);
  return buf;
}

/// Output directory plus the manifest under construction.
class Run {
 public:
  Run(std::string verb, RunConfig cfg, std::ostream& log)
      : verb_(std::move(verb)), cfg_(std::move(cfg)), log_(log), start_(std::chrono::steady_clock::now()) {
    dir_ = cfg_.output.dir;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("[output] dir '" + dir_.string() + "': " + ec.message());
    const std::string cfg_text = serialize_config(cfg_);
    manifest_["tool"] = "jcsq";
    manifest_["version"] = kVersion;
    manifest_["verb"] = verb_;
    manifest_["started_utc"] = utc_now();
    manifest_["units"] = {{"rates", "g (g1, g2, energies)"},
                          {"times", "1/g (t, T, dt)"},
                          {"E_scaled", "E / g1 (oscillator, custom), E / (g1 sqrt(2J)) (spin); raw E in g at g1 = 0"},
                          {"entropy", "nats"},
                          {"phase_space", "x = a + a^dag, p = i(a^dag - a), [x,p] = 2i"}};
    manifest_["config"] = cfg_text;
    manifest_["config_sha256"] = sha256_hex(cfg_text);
    manifest_["outputs"] = json::array();
    manifest_["timings_s"] = json::object();
    manifest_["diagnostics"] = json::object();
  }

  const RunConfig& cfg() const { return cfg_; }
  json& manifest() { return manifest_; }
  json& diagnostics() { return manifest_["diagnostics"]; }
  std::ostream& log() { return log_; }

  void emit(const std::string& name, const std::string& bytes, const std::string& what) {
    io::write_file((dir_ / name).string(), bytes);
    manifest_["outputs"].push_back(
        {{"path", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}, {"content", what}});
  }

  template <class F>
  auto timed(const std::string& label, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(label, t0);
    } else {
      auto r = f();
      record(label, t0);
      return r;
    }
  }

  void finish(const std::string& status, int code, const std::string& message = {}) {
    manifest_["status"] = status;
    manifest_["exit_code"] = code;
    if (!message.empty()) manifest_["message"] = message;
    manifest_["timings_s"]["total"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    io::write_file((dir_ / "manifest.json").string(), manifest_.dump(2) + "\n");
  }

 private:
  static std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }
  void record(const std::string& label, std::chrono::steady_clock::time_point t0) {
    manifest_["timings_s"][label] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  std::string verb_;
  RunConfig cfg_;
  std::ostream& log_;
  std::chrono::steady_clock::time_point start_;
  fs::path dir_;
  json manifest_;
};

// ---- phase-space helpers ----------------------------------------------------

inline json map_header(const PhaseSpaceMap& m, const std::string& source) {
  auto axis = [](const Axis& a) { return json{{"name", a.name}, {"lo", a.lo}, {"step", a.step}, {"points", a.points}}; };
  json h{{"kind", m.kind},           {"convention", m.convention}, {"rows", axis(m.rows)},
         {"cols", axis(m.cols)},     {"layout", "row-major values(row, col)"},
         {"normalization_residual", m.normalization_residual},
         {"min", m.min()},           {"max", m.max()},            {"source", source}};
  if (!std::isnan(m.boundary_max)) h["boundary_max_abs"] = m.boundary_max;
  return h;
}

inline void emit_map(Run& run, const PhaseSpaceMap& m, const std::string& stem, const std::string& source) {
  run.emit(stem + ".bin", io::raster_blob(m), m.kind + " raster (uint64 rows, cols; 4 float64 axis params; float64 values)");
  run.emit(stem + ".json", map_header(m, source).dump(2) + "\n", m.kind + " raster header");
  if (run.cfg().phase.csv) run.emit(stem + ".csv", io::raster_csv(m), m.kind + " long-format CSV");
}

inline PhaseSpaceMap wigner_for(const RunConfig& cfg, const Ensemble& ens) {
  const WignerGrid grid = cfg.phase.auto_grid
                              ? auto_wigner_grid(ens, cfg.phase.step)
                              : WignerGrid{cfg.phase.x_min, cfg.phase.x_max, cfg.phase.p_min, cfg.phase.p_max, cfg.phase.step};
  return wigner(ens, grid);
}

inline SphereMesh mesh_for(const RunConfig& cfg) {
  return SphereMesh{cfg.phase.theta_points, cfg.phase.phi_points};
}

// ---- verbs ------------------------------------------------------------------

inline int cmd_spectrum(Run& run) {
  const RunConfig& c = run.cfg();
  const LadderRep rep = make_rep(c.system);
  run.manifest()["rep"] = rep_json(rep);
  const auto grid = linear_grid(c.sweep.u_min, c.sweep.u_max, c.sweep.u_points);
  const SpectrumSweep sw = run.timed("sweep", [&] { return sweep(rep, c.schedule.g, grid, c.sweep.k); });
  run.emit("sweep.csv", io::sweep_csv(sw), "u, branch_index, E_scaled (lowest non-negative levels)");
  run.emit("spectrum_diagnostics.csv", io::sweep_diagnostics_csv(sw), "per-u pairing residual and zero-mode gap");

  double pairing = 0.0, gap_rel = 0.0;
  for (const auto& pt : sw.points) {
    const double r = std::max(pt.spectral_radius, 1e-300);
    pairing = std::max(pairing, pt.pairing_residual / r);
    gap_rel = std::max(gap_rel, pt.zero_mode_gap / r);
  }
  const bool zero = sw.zero_mode_everywhere(1e-8);
  auto& d = run.diagnostics();
  d["rows"] = sw.points.size() * static_cast<std::size_t>(sw.k);
  d["max_relative_pairing_residual"] = pairing;
  d["max_relative_zero_mode_gap"] = gap_rel;
  d["zero_mode"] = zero;
  d["flags"] = zero ? json::array() : json::array({"no zero mode"});
  run.log() << "spectrum: " << sw.points.size() << " u points x " << sw.k << " branches, zero mode "
            << (zero ? "present" : "absent") << "\n";
  return 0;
}

inline int cmd_states(Run& run) {
  const RunConfig& c = run.cfg();
  const LadderRep rep = make_rep(c.system);
  run.manifest()["rep"] = rep_json(rep);
  if (c.states.g2_over_g1.empty()) throw ConfigError("[states] g2_over_g1 is empty");
  std::string table =
      "g2_over_g1,regime,theta,phi,mu,nu,tau,gamma,var_x,var_p,var_x_expected,var_p_expected,var_jx,var_jy,mean_jz,"
      "var_jx_expected,var_jy_expected\n";
  std::optional<CMat> rx;
  if (rep.is_integer_spin()) rx = rx_parity_op(rep);

  for (double ratio : c.states.g2_over_g1) {
    const CouplingPoint p(c.states.g1, ratio * c.states.g1);
    const Regime regime = regime_of(p);
    if (rep.kind() == LadderKind::oscillator && regime != Regime::sub)
      throw RegimeError("states: g2/g1 = " + io::fmt(ratio) +
                        " is at or above the critical drive g2 = g1/2; the oscillator has no normalizable "
                        "zero-energy product state there");
    if (rep.kind() == LadderKind::spin && !rep.is_integer_spin())
      throw RegimeError("states: half-integer J has no zero-energy product state");
    const auto ansatz = zero_product_state(rep, p);
    if (!ansatz) throw NumericalGuard("states: custom K has no null vector of (mu K + nu K^dag) at g2/g1 = " + io::fmt(ratio));

    double var_x = NAN, var_p = NAN, vx_e = NAN, vp_e = NAN;
    double var_jx = NAN, var_jy = NAN, mean_jz = NAN, vjx_e = NAN, vjy_e = NAN, gamma = NAN;
    if (rep.kind() != LadderKind::spin) {
      const auto meas = measured_quadratures(rep, ansatz->phi_state);
      var_x = meas.var_x;
      var_p = meas.var_p;
      const auto ex = quad_variances(ansatz->theta);
      vx_e = ex.var_x;
      vp_e = ex.var_p;
    } else {
      const SpinMoments m = spin_moments(rep, ansatz->phi_state);
      var_jx = m.var_x;
      var_jy = m.var_y;
      mean_jz = m.mean_z;
      if (regime == Regime::sub) {
        vjx_e = std::abs(m.mean_z) / (2.0 * std::cos(ansatz->theta));
        vjy_e = std::cos(ansatz->theta) * std::abs(m.mean_z) / 2.0;
      }
      const CVec rv = *rx * ansatz->joint.amplitudes();
      gamma = ansatz->joint.amplitudes().dot(rv).real();
    }
    using io::fmt;
    table += fmt(ratio) + "," + to_string(regime) + "," + fmt(ansatz->theta) + "," + fmt(ansatz->phi_angle) + "," +
             fmt(ansatz->mu) + "," + fmt(ansatz->nu) + "," + fmt(ansatz->tau) + "," + fmt(gamma) + "," + fmt(var_x) +
             "," + fmt(var_p) + "," + fmt(vx_e) + "," + fmt(vp_e) + "," + fmt(var_jx) + "," + fmt(var_jy) + "," +
             fmt(mean_jz) + "," + fmt(vjx_e) + "," + fmt(vjy_e) + "\n";
    run.emit("state_r" + fmt(ratio) + ".csv", io::state_csv(ansatz->joint, rep),
             "zero-energy product state (tls, ancilla, re, im) at g2/g1 = " + fmt(ratio));
    if (rep.is_integer_spin()) {
      const JointState ref = AdiabaticReference(rep)(p);
      run.emit("reference_r" + fmt(ratio) + ".csv", io::state_csv(ref, rep),
               "adiabatic doublet reference at g2/g1 = " + fmt(ratio));
    }
  }
  run.emit("states_table.csv", table, "angles, Bogoliubov coefficients, gamma and variance report");
  run.diagnostics()["points"] = c.states.g2_over_g1.size();
  run.log() << "states: " << c.states.g2_over_g1.size() << " coupling points written\n";
  return 0;
}

inline int cmd_evolve(Run& run) {
  const RunConfig& c = run.cfg();
  const LadderRep rep = make_rep(c.system);
  run.manifest()["rep"] = rep_json(rep);
  const RampSchedule schedule{c.schedule.g, c.schedule.T};
  PropagateOptions opt;
  opt.dt = c.schedule.dt;
  opt.decimation = c.evolve.decimation;
  opt.method = c.schedule.method;
  opt.snapshot_u = c.evolve.snapshots;
  opt.leakage_threshold = c.evolve.leakage_threshold;
  run.manifest()["schedule"] = {{"g", schedule.g}, {"T", schedule.T}, {"dt", opt.dt},
                                {"steps", std::lround(schedule.T / opt.dt)}, {"integrator", "midpoint exponential"}};
  run.manifest()["guards"] = {{"leakage_fraction_of_levels", opt.leakage_fraction},
                              {"leakage_threshold", opt.leakage_threshold},
                              {"leakage_applies", rep.kind() == LadderKind::oscillator},
                              {"max_dt_g", 0.01}};

  Trajectory traj;
  try {
    traj = run.timed("propagate", [&] { return propagate(rep, schedule, opt); });
  } catch (const LeakageGuardTrip& trip) {
    run.emit("trajectory.csv", io::trajectory_csv(trip.partial()), "partial trajectory up to the leakage guard trip");
    run.manifest()["guards"]["tripped"] = {{"t", trip.t()}, {"u", trip.u()}, {"leakage", trip.leakage()}};
    throw;
  }
  run.manifest()["schedule"]["exp_method"] = to_string(traj.method);
  run.emit("trajectory.csv", io::trajectory_csv(traj), "t, u and observables along the ramp");

  double max_drift = 0.0, max_leak = 0.0, rx_lo = INFINITY, rx_hi = -INFINITY, fid_min = INFINITY;
  for (const auto& s : traj.samples) {
    max_drift = std::max(max_drift, s.norm_drift);
    max_leak = std::max(max_leak, s.leakage);
    if (!std::isnan(s.rx_parity)) {
      rx_lo = std::min(rx_lo, s.rx_parity);
      rx_hi = std::max(rx_hi, s.rx_parity);
    }
    if (!std::isnan(s.fidelity) && std::abs(s.u - 0.5) >= 0.01) fid_min = std::min(fid_min, s.fidelity);
  }
  auto& d = run.diagnostics();
  d["samples"] = traj.samples.size();
  d["max_norm_drift"] = max_drift;
  d["max_leakage"] = max_leak;
  d["final_fidelity"] = traj.samples.empty() ? NAN : traj.samples.back().fidelity;
  d["min_fidelity_outside_critical_window"] = std::isfinite(fid_min) ? json(fid_min) : json(nullptr);
  if (std::isfinite(rx_lo)) d["rx_parity_drift"] = rx_hi - rx_lo;

  for (const auto& snap : traj.snapshots) {
    const std::string tag = u_tag(snap.u);
    run.emit("snapshot_" + tag + ".bin", io::snapshot_blob(snap.state),
             "joint state at u = " + io::fmt(snap.u) + " (uint64 tls_dim, anc_dim; interleaved re/im float64)");
    if (!c.evolve.maps) continue;
    const Ensemble ens = ancilla_ensemble(snap.state);
    if (rep.kind() == LadderKind::oscillator) {
      const PhaseSpaceMap w = run.timed("wigner_" + tag, [&] { return wigner_for(c, ens); });
      emit_map(run, w, "wigner_" + tag, "evolve snapshot at u = " + io::fmt(snap.u));
    } else if (rep.kind() == LadderKind::spin) {
      const PhaseSpaceMap q = run.timed("husimi_" + tag, [&] { return husimi_sphere(ens, rep.spin(), mesh_for(c)); });
      emit_map(run, q, "husimi_" + tag, "evolve snapshot at u = " + io::fmt(snap.u));
    }
  }

  if (c.evolve.convergence) {
    PropagateOptions half = opt;
    half.dt *= 0.5;
    half.observe = false;
    half.snapshot_u.clear();
    const Trajectory fine = run.timed("convergence", [&] { return propagate(rep, schedule, half); });
    const double delta = 1.0 - fidelity(traj.final_state, fine.final_state);
    run.manifest()["convergence"] = {{"method", "dt halving"},
                                     {"metric", "1 - |<psi_dt(T)|psi_dt/2(T)>|^2"},
                                     {"dt", opt.dt},
                                     {"final_fidelity_delta", delta},
                                     {"contract", 1e-8},
                                     {"met", delta <= 1e-8}};
  }
  run.log() << "evolve: " << traj.steps << " steps, " << traj.samples.size() << " samples, "
            << traj.snapshots.size() << " snapshots\n";
  return 0;
}

/// Ancilla ensemble from [phase] input, or the analytic zero-energy state at
/// the first [states] coupling when no input is given.
inline Ensemble phase_input(Run& run, const LadderRep& rep) {
  const RunConfig& c = run.cfg();
  if (c.phase.input.empty()) {
    if (c.states.g2_over_g1.empty()) throw ConfigError("[phase] input is empty and [states] g2_over_g1 is empty");
    const double ratio = c.states.g2_over_g1.front();
    const auto a = zero_product_state(rep, CouplingPoint(c.states.g1, ratio * c.states.g1));
    if (!a) throw NumericalGuard("no zero-energy product state at g2/g1 = " + io::fmt(ratio));
    run.manifest()["source"] = "analytic zero-energy state at g2/g1 = " + io::fmt(ratio);
    return ancilla_ensemble(a->joint);
  }
  std::string bytes;
  try {
    bytes = io::read_file(c.phase.input);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[phase] input: ") + e.what());
  }
  run.manifest()["source"] = {{"path", c.phase.input}, {"sha256", sha256_hex(bytes)}};
  const bool blob = c.phase.input.size() >= 4 && c.phase.input.substr(c.phase.input.size() - 4) == ".bin";
  CVec v;
  try {
    v = blob ? io::read_snapshot_blob(bytes).amplitudes() : io::read_amplitudes_csv(bytes);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[phase] input: ") + e.what());
  }
  if (v.size() == 2 * rep.dim()) return ancilla_ensemble(JointState(std::move(v)));
  if (v.size() == rep.dim()) {
    const double n = v.norm();
    if (!(n > 0)) throw ConfigError("[phase] input: zero vector");
    return Ensemble{{1.0}, {v / n}};
  }
  throw ConfigError("[phase] input: vector length " + std::to_string(v.size()) + " fits neither the ancilla (" +
                    std::to_string(rep.dim()) + ") nor the joint space");
}

inline int cmd_wigner(Run& run) {
  const RunConfig& c = run.cfg();
  if (c.system.kind != LadderKind::oscillator) throw ConfigError("wigner: requires [system] kind = oscillator");
  const LadderRep rep = make_rep(c.system);
  run.manifest()["rep"] = rep_json(rep);
  const Ensemble ens = phase_input(run, rep);
  const PhaseSpaceMap w = run.timed("wigner", [&] { return wigner_for(c, ens); });
  emit_map(run, w, "wigner", run.manifest()["source"].dump());
  run.diagnostics()["min"] = w.min();
  run.diagnostics()["normalization_residual"] = w.normalization_residual;
  run.log() << "wigner: " << w.rows.points << " x " << w.cols.points << ", min " << io::fmt(w.min()) << "\n";
  return 0;
}

inline int cmd_husimi(Run& run) {
  const RunConfig& c = run.cfg();
  if (c.system.kind != LadderKind::spin) throw ConfigError("husimi: requires [system] kind = spin");
  const LadderRep rep = make_rep(c.system);
  run.manifest()["rep"] = rep_json(rep);
  const Ensemble ens = phase_input(run, rep);
  const PhaseSpaceMap q = run.timed("husimi", [&] { return husimi_sphere(ens, rep.spin(), mesh_for(c)); });
  emit_map(run, q, "husimi", run.manifest()["source"].dump());
  run.diagnostics()["max"] = q.max();
  run.diagnostics()["normalization_residual"] = q.normalization_residual;
  run.log() << "husimi: " << q.rows.points << " x " << q.cols.points << ", max " << io::fmt(q.max()) << "\n";
  return 0;
}

// ---- entry point --------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Driven Jaynes-Cummings squeezing simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  std::string config_path, out_dir, snapshots;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "INI run configuration");
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--set", overrides, "section.key=value override, repeatable")->take_all();
  app.add_option("--snapshots", snapshots, "comma-separated u values (overrides [evolve] snapshots)");
  for (const char* verb : {"spectrum", "evolve", "states", "wigner", "husimi"}) {
    auto* sub = app.add_subcommand(verb);
    sub->fallthrough();
  }
  const char* descr[] = {"eigenvalue sweep over u", "ramp propagation with observers", "analytic zero-energy states",
                         "Wigner raster of an oscillator state", "Husimi raster of a spin state"};
  int i = 0;
  for (auto* sub : app.get_subcommands({})) sub->description(descr[i++]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const std::string verb = app.get_subcommands().front()->get_name();

  std::optional<Run> run_ctx;
  try {
    std::string text;
    if (!config_path.empty()) {
      try {
        text = io::read_file(config_path);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    }
    if (!out_dir.empty()) overrides.push_back("output.dir=" + out_dir);
    if (!snapshots.empty()) overrides.push_back("evolve.snapshots=" + snapshots);
    RunConfig cfg = parse_config(text, overrides);
    run_ctx.emplace(verb, std::move(cfg), out);
    if (!config_path.empty()) run_ctx->manifest()["config_path"] = config_path;
    int code = 0;
    if (verb == "spectrum") code = cmd_spectrum(*run_ctx);
    else if (verb == "evolve") code = cmd_evolve(*run_ctx);
    else if (verb == "states") code = cmd_states(*run_ctx);
    else if (verb == "wigner") code = cmd_wigner(*run_ctx);
    else code = cmd_husimi(*run_ctx);
    run_ctx->finish("ok", code);
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    if (run_ctx) run_ctx->finish("config_error", 2, e.what());
    return 2;
  } catch (const RegimeError& e) {
    err << "config error: " << e.what() << "\n";
    if (run_ctx) run_ctx->finish("config_error", 2, e.what());
    return 2;
  } catch (const NumericalGuard& e) {
    err << "numerical guard: " << e.what() << "\n";
    if (run_ctx) run_ctx->finish("numerical_guard", 3, e.what());
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (run_ctx) run_ctx->finish("error", 1, e.what());
    return 1;
  }
}

}  // namespace jcsq::cli
