// Acceptance suite: one PASS/FAIL line per criterion, thresholds pinned below.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "jcsq/cli.hpp"
#include "jcsq/jcsq.hpp"

using namespace jcsq;
namespace fs = std::filesystem;

namespace {

namespace tol {
constexpr double spectrum_abs = 1e-6;
constexpr double spectrum_seconds = 10.0;
constexpr double collapse_ratio = 1e-4;
constexpr double collapse_u_max = 0.45;
constexpr double collapse_u_edge = 0.4999;
constexpr double collapse_edge = 1e-3;
constexpr double pairing_rel = 1e-8;
constexpr double zero_mode_rel = 1e-8;
constexpr double half_integer_gap = 0.01;
constexpr double squeeze_residual = 1e-10;
constexpr double squeeze_moment = 1e-9;
constexpr double intelligent_residual = 1e-10;
constexpr double intelligent_moment = 1e-9;
constexpr double commutator = 1e-12;
constexpr double orthonormal = 1e-10;
constexpr double continuity = 0.999;
constexpr double continuity_eps = 1e-3;
constexpr double osc_fidelity = 0.99;
constexpr double osc_fidelity_u = 0.40;
constexpr double wigner_min = -0.005;
constexpr double osc_seconds = 300.0;
constexpr double spin_fidelity = 0.95;
constexpr double spin_window = 0.01;
constexpr double spin_final = 0.99;
constexpr double entropy_final = 0.05;
constexpr double entropy_peak = 0.5;
constexpr double spin_seconds = 900.0;
constexpr double norm_drift_per_1e4 = 1e-9;
constexpr double dt_halving = 1e-8;
constexpr double parity_drift = 1e-6;
}  // namespace tol

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back((ok ? "" : "!") + what);
  }
};

int failures = 0;

void report(int id, const std::string& name, const Verdict& v) {
  if (!v.pass) ++failures;
  std::string line = "AC" + std::to_string(id) + (v.pass ? " PASS " : " FAIL ") + name + ":";
  for (const auto& n : v.notes) line += " " + n + ";";
  std::puts(line.c_str());
  std::fflush(stdout);
}

template <class F>
void criterion(int id, const std::string& name, F&& body) {
  Verdict v;
  try {
    body(v);
  } catch (const std::exception& e) {
    v.check(false, std::string("threw: ") + e.what());
  }
  report(id, name, v);
}

// --- 1 ------------------------------------------------------------------------

void analytic_spectrum(Verdict& v) {
  const auto t0 = Clock::now();
  const LadderRep rep = osc_ladder(300);
  double worst = 0.0;
  for (double g2 : {0.0, 0.1, 0.2, 0.3, 0.4}) {
    const CouplingPoint p(1.0, g2);
    const auto low = lowest_nonnegative(eigvals_herm(build_interaction(rep, p)), 11);
    for (int n = 0; n <= 10; ++n) worst = std::max(worst, std::abs(low[n] - analytic_E(n, p)));
  }
  const double secs = seconds_since(t0);
  v.check(worst <= tol::spectrum_abs, "max|E_num - E_closed| = " + num(worst));
  v.check(secs <= tol::spectrum_seconds, "runtime " + num(secs) + " s");
}

// --- 2 ------------------------------------------------------------------------

void spectral_collapse(Verdict& v) {
  const LadderRep rep = osc_ladder(300);
  std::vector<double> grid = linear_grid(0.0, tol::collapse_u_max, 46);
  grid.push_back(tol::collapse_u_edge);
  const SpectrumSweep sw = sweep(rep, 1.0, grid, 11);
  const double e1_0 = sw.points.front().lowest[1];
  double worst = 0.0, worst_u = 0.0;
  for (const auto& pt : sw.points) {
    if (pt.u > tol::collapse_u_max) continue;
    const double r = 2.0 * pt.g2 / pt.g1;
    const double err = std::abs(pt.lowest[1] / e1_0 - std::pow(1.0 - r * r, 0.75));
    if (err > worst) worst = err, worst_u = pt.u;
  }
  v.check(worst <= tol::collapse_ratio, "ratio error " + num(worst) + " at u = " + num(worst_u));
  const SpectrumPoint& edge = sw.points.back();
  double top = 0.0;
  for (double e : edge.lowest) top = std::max(top, std::abs(e));
  const double r = 2.0 * edge.g2 / edge.g1;
  v.check(top <= tol::collapse_edge, "max branch at u = 0.4999: " + num(top) + " (closed-form E1 " +
                                         num(std::pow(1.0 - r * r, 0.75)) + ")");
}

// --- 3 ------------------------------------------------------------------------

void symmetry_and_zero_mode(Verdict& v) {
  const std::vector<double> grid = linear_grid(0.0, 1.0, 51);
  for (const auto& [label, rep] : std::vector<std::pair<std::string, LadderRep>>{
           {"oscillator N=300", osc_ladder(300)}, {"spin J=20", spin_ladder(SpinValue{40})}}) {
    const SpectrumSweep sw = sweep(rep, 1.0, grid, 4);
    double pair = 0.0, gap = 0.0;
    for (const auto& pt : sw.points) {
      pair = std::max(pair, pt.pairing_residual / pt.spectral_radius);
      gap = std::max(gap, pt.zero_mode_gap / pt.spectral_radius);
    }
    v.check(pair <= tol::pairing_rel, label + " pairing/max|E| " + num(pair));
    v.check(gap <= tol::zero_mode_rel, label + " zero gap/max|E| " + num(gap));
  }
  const SpinValue j{9};
  const LadderRep half = spin_ladder(j);
  const SpectrumPoint pt = spectrum_at(half, InteractionBlocks(half), 0.3, 1.0, 4);
  const double threshold = tol::half_integer_gap * pt.g1 * std::sqrt(double(j.twice));
  v.check(pt.zero_mode_gap > threshold,
          "j=9/2 gap at u=0.3 " + num(pt.zero_mode_gap) + " vs required > " + num(threshold));
}

// --- 4 ------------------------------------------------------------------------

void squeezed_identities(Verdict& v) {
  const int n_cut = 200;
  const LadderRep rep = osc_ladder(n_cut);
  double res = 0.0, product = 0.0, var_p = 0.0;
  for (double th : {-0.1, -kPi / 6.0, -1.2}) {
    const Bogoliubov b = bogoliubov_coeffs(th);
    const CVec phi = squeezed_vacuum(b.mu, b.nu, n_cut);
    res = std::max(res, ((b.mu * rep.K() + b.nu * rep.Kdag()) * phi).norm());
    const QuadratureVariances m = measured_quadratures(rep, phi);
    product = std::max(product, std::abs(m.var_x * m.var_p - 1.0));
    var_p = std::max(var_p, std::abs(m.var_p - std::cos(th)));
  }
  v.check(res <= tol::squeeze_residual, "annihilation residual " + num(res));
  v.check(product <= tol::squeeze_moment, "|Var x Var p - 1| " + num(product));
  v.check(var_p <= tol::squeeze_moment, "|Var p - cos theta| " + num(var_p));
}

// --- 5 ------------------------------------------------------------------------

void intelligent_states(Verdict& v) {
  const SpinValue j{40};
  const LadderRep rep = spin_ladder(j);
  const double jm_norm = rep.K().operatorNorm();
  double res = 0.0, product = 0.0, ratio = 0.0;
  for (double th : {-0.1, -kPi / 6.0, -1.2}) {
    const Bogoliubov b = bogoliubov_coeffs(th);
    const CVec phi = intelligent_spin_state(j, th);
    res = std::max(res, ((b.mu * rep.K() + b.nu * rep.Kdag()) * phi).norm() / jm_norm);
    const SpinMoments m = spin_moments(rep, phi);
    const double half_jz = 0.5 * std::abs(m.mean_z);
    product = std::max(product, std::abs(std::sqrt(m.var_x * m.var_y) - half_jz));
    ratio = std::max(ratio, std::abs(m.var_y / half_jz - std::cos(th)));
  }
  v.check(res <= tol::intelligent_residual, "(mu J- + nu J+) residual " + num(res));
  v.check(product <= tol::intelligent_moment, "|dJx dJy - |<Jz>|/2| " + num(product));
  v.check(ratio <= tol::intelligent_moment, "|dJy^2/(|<Jz>|/2) - cos theta| " + num(ratio));
}

// --- 6 ------------------------------------------------------------------------

void degeneracy_machinery(Verdict& v) {
  const LadderRep rep = spin_ladder(SpinValue{20});
  const CMat rx = symmetry_op(rep, Symmetry::rx);
  const InteractionBlocks blocks(rep);
  double comm = 0.0;
  for (double u : linear_grid(0.0, 1.0, 11)) {
    const CouplingPoint p = CouplingPoint::from_u(u);
    const CMat h = blocks.dense(p.g1(), p.g2());
    comm = std::max(comm, max_abs(CMat(h * rx - rx * h)));
  }
  v.check(comm <= tol::commutator, "max|[H,R_x]| " + num(comm));

  const CMat parity = rx_parity_op(rep);
  double ortho = 0.0;
  for (double u : {0.1, 0.3, 0.45}) {
    const auto a = zero_product_state(rep, CouplingPoint::from_u(u));
    const SymmetrizedPair pr = symmetrized_pair(a->joint, parity);
    const CVec& x = pr.plus.amplitudes();
    const CVec& y = pr.minus.amplitudes();
    ortho = std::max({ortho, std::abs(x.norm() - 1.0), std::abs(y.norm() - 1.0), std::abs(x.dot(y))});
  }
  v.check(ortho <= tol::orthonormal, "Psi+- orthonormality " + num(ortho));

  const AdiabaticReference ref(rep);
  const JointState below = ref(CouplingPoint::from_u(0.5 - tol::continuity_eps));
  const JointState above = ref(CouplingPoint::from_u(0.5 + tol::continuity_eps));
  const double overlap = std::abs(below.amplitudes().dot(above.amplitudes()));
  v.check(overlap >= tol::continuity, "|<ref(0.5-e)|ref(0.5+e)>| " + num(overlap));
}

// --- 7 ------------------------------------------------------------------------

void oscillator_ramp(Verdict& v) {
  const auto t0 = Clock::now();
  const LadderRep rep = osc_ladder(400);
  PropagateOptions opt;
  opt.dt = 0.005;
  opt.decimation = 200;
  const Trajectory tr = propagate(rep, RampSchedule{1.0, 100.0}, opt);
  double worst = 1.0, leak = 0.0;
  for (const auto& s : tr.samples) {
    if (s.u <= tol::osc_fidelity_u) worst = std::min(worst, s.fidelity);
    leak = std::max(leak, s.leakage);
  }
  const Ensemble ens = ancilla_ensemble(tr.final_state);
  const PhaseSpaceMap w = wigner(ens, auto_wigner_grid(ens, 0.05));
  const double secs = seconds_since(t0);
  v.check(worst >= tol::osc_fidelity, "min fidelity for u <= 0.4 " + num(worst));
  v.check(w.min() <= tol::wigner_min, "final Wigner min " + num(w.min()));
  v.check(secs <= tol::osc_seconds, "runtime " + num(secs) + " s (max leakage " + num(leak) + ")");
}

// --- 8, 9 ---------------------------------------------------------------------

struct SpinRampRun {
  Trajectory tr;
  double seconds = 0.0;
};

SpinRampRun spin_ramp() {
  const auto t0 = Clock::now();
  const LadderRep rep = spin_ladder(SpinValue{20});
  PropagateOptions opt;
  opt.dt = 0.01;
  opt.decimation = 2000;
  SpinRampRun run{propagate(rep, RampSchedule{1.0, 20000.0}, opt), 0.0};
  run.seconds = seconds_since(t0);
  return run;
}

void spin_adiabaticity(Verdict& v, const SpinRampRun& run) {
  const SpinValue j{20};
  double worst = 1.0, worst_u = 0.0, peak = 0.0;
  for (const auto& s : run.tr.samples) {
    if (std::abs(s.u - 0.5) >= tol::spin_window && s.fidelity < worst) worst = s.fidelity, worst_u = s.u;
    if (s.u > 0.3 && s.u < 0.7) peak = std::max(peak, s.entropy);
  }
  v.check(worst >= tol::spin_fidelity, "min reference fidelity " + num(worst) + " at u = " + num(worst_u));

  CVec ground(2);
  ground << 1.0, 0.0;
  const JointState target = JointState::product(ground, super_state(j, CouplingPoint(0.0, 1.0)).phi_state);
  const double final_fid = fidelity(target, run.tr.final_state);
  v.check(final_fid >= tol::spin_final, "final fidelity to |g>|Jx=0> " + num(final_fid));
  const double final_entropy = run.tr.samples.back().entropy;
  v.check(final_entropy <= tol::entropy_final, "entropy at u=1 " + num(final_entropy));
  v.check(peak >= tol::entropy_peak, "peak entropy in (0.3,0.7) " + num(peak));
  v.check(run.seconds <= tol::spin_seconds, "runtime " + num(run.seconds) + " s");
}

void propagator_properties(Verdict& v, const SpinRampRun& run) {
  double drift = 0.0, parity = 0.0;
  const double p0 = run.tr.samples.front().rx_parity;
  for (const auto& s : run.tr.samples) {
    drift = std::max(drift, s.norm_drift);
    parity = std::max(parity, std::abs(s.rx_parity - p0));
  }
  const double per_block = drift / std::max(1.0, double(run.tr.steps) / 1e4);
  v.check(per_block <= tol::norm_drift_per_1e4,
          "norm drift per 1e4 steps " + num(per_block) + " over " + std::to_string(run.tr.steps) + " steps");

  PropagateOptions opt;
  opt.dt = 0.01;
  const double spin_inf = dt_halving_infidelity(spin_ladder(SpinValue{20}), RampSchedule{1.0, 200.0}, opt);
  const double osc_inf = dt_halving_infidelity(osc_ladder(60), RampSchedule{1.0, 20.0}, opt);
  const double halving = std::max(std::abs(spin_inf), std::abs(osc_inf));
  v.check(halving <= tol::dt_halving, "dt-halving final infidelity " + num(halving));
  v.check(parity <= tol::parity_drift, "<i(-1)^J R_x> drift " + num(parity));
}

// --- 10 -----------------------------------------------------------------------

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") out[e.path().filename().string()] = io::read_file(e.path().string());
  return out;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"jcsq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

void reproducibility(Verdict& v) {
  const std::vector<std::vector<std::string>> jobs{
      {"--set", "system.n_cut=60", "--set", "sweep.u_points=11", "spectrum"},
      {"--set", "system.kind=spin", "--set", "system.j=4", "states"},
      {"--set", "system.kind=spin", "--set", "system.j=2", "--set", "schedule.T=20", "--set", "schedule.dt=0.01",
       "--snapshots", "0.5,1", "--set", "phase.theta_points=19", "--set", "phase.phi_points=37", "evolve"},
  };
  const fs::path root = fs::temp_directory_path() / "jcsq_acceptance_repro";
  fs::remove_all(root);
  std::size_t compared = 0;
  int idx = 0;
  for (const auto& job : jobs) {
    std::vector<std::map<std::string, std::string>> runs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (std::to_string(idx) + "_" + std::to_string(rep));
      std::vector<std::string> args{"--out", dir.string()};
      args.insert(args.end(), job.begin(), job.end());
      const int code = run_cli(args);
      v.check(code == 0, job.back() + " run " + std::to_string(rep) + " exit " + std::to_string(code));
      runs.push_back(csv_files(dir));
    }
    const bool same = !runs[0].empty() && runs[0] == runs[1];
    v.check(same, job.back() + ": " + std::to_string(runs[0].size()) + " CSV files " +
                      (same ? "byte-identical" : "differ"));
    compared += runs[0].size();
    ++idx;
  }
  fs::remove_all(root);
  v.notes.push_back(std::to_string(compared) + " files compared");
}

}  // namespace

int main() {
  criterion(1, "analytic spectrum", analytic_spectrum);
  criterion(2, "spectral collapse", spectral_collapse);
  criterion(3, "symmetry and zero mode", symmetry_and_zero_mode);
  criterion(4, "squeezed-state identities", squeezed_identities);
  criterion(5, "spin intelligent states", intelligent_states);
  criterion(6, "degeneracy machinery", degeneracy_machinery);
  criterion(7, "oscillator ramp", oscillator_ramp);

  SpinRampRun run;
  std::string ramp_error;
  try {
    run = spin_ramp();
  } catch (const std::exception& e) {
    ramp_error = e.what();
  }
  criterion(8, "spin ramp adiabaticity", [&](Verdict& v) {
    if (!ramp_error.empty()) throw std::runtime_error(ramp_error);
    spin_adiabaticity(v, run);
  });
  criterion(9, "propagator properties", [&](Verdict& v) {
    if (!ramp_error.empty()) throw std::runtime_error(ramp_error);
    propagator_properties(v, run);
  });
  criterion(10, "reproducibility", reproducibility);

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
