#pragma once

// Time-dependent Schroedinger propagation along the coupling ramp with
// periodic observers (reference fidelity, TLS reduced state and entropy,
// truncation leakage, norm drift, R_x parity).

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jcsq/analytic_states.hpp"
#include "jcsq/errors.hpp"
#include "jcsq/observables.hpp"
#include "jcsq/propagator.hpp"

namespace jcsq {

using CouplingFn = std::function<CouplingPoint(double t)>;
using ReferenceFn = std::function<std::optional<JointState>(const CouplingPoint&)>;

struct PropagateOptions {
  double dt = 0.01;
  int decimation = 100;
  /// Sample 10x more densely for u in [0.45, 0.75].
  bool refine_window = true;
  bool observe = true;
  bool leakage_guard = true;
  double leakage_threshold = 1e-6;
  double leakage_fraction = 0.1;
  ExpMethod method = ExpMethod::automatic;
  std::vector<double> snapshot_u;
  /// Empty: default_reference(rep).
  ReferenceFn reference;
  std::optional<JointState> initial;
};

struct TrajectorySample {
  double t = 0.0;
  double u = 0.0;
  double fidelity = NAN;  ///< to the reference; NaN where none exists
  double rho_gg = NAN;
  double rho_ee = NAN;
  double re_rho_ge = NAN;
  double im_rho_ge = NAN;
  double entropy = NAN;
  double leakage = 0.0;
  double norm_drift = 0.0;
  double rx_parity = NAN;  ///< <i(-1)^J R_x>, integer spin only
};

struct Snapshot {
  double u = 0.0;
  double t = 0.0;
  JointState state;
};

struct Trajectory {
  double T = 0.0;
  double dt = 0.0;
  long steps = 0;
  ExpMethod method = ExpMethod::automatic;
  std::vector<TrajectorySample> samples;
  std::vector<Snapshot> snapshots;
  JointState final_state;
};

class LeakageGuardTrip : public NumericalGuard {
 public:
  LeakageGuardTrip(double t, double u, double pop, Trajectory partial)
      : NumericalGuard("leakage guard tripped at t = " + std::to_string(t) + " (u = " + std::to_string(u) +
                       "): top-level population " + std::to_string(pop)),
        t_(t), u_(u), leakage_(pop), partial_(std::move(partial)) {}

  double t() const { return t_; }
  double u() const { return u_; }
  double leakage() const { return leakage_; }
  const Trajectory& partial() const { return partial_; }

 private:
  double t_, u_, leakage_;
  Trajectory partial_;
};

/// |g> (x) lowest ancilla basis state (|0> or |J,-J>).
inline JointState ground_initial_state(const LadderRep& rep) { return JointState::basis(rep.dim(), 0, 0); }

/// Integer spin: the adiabatic doublet reference. Oscillator/custom: the
/// zero-energy product state wherever it exists and is tail-converged.
inline ReferenceFn default_reference(const LadderRep& rep) {
  if (rep.kind() == LadderKind::spin) {
    if (!rep.is_integer_spin()) return {};
    auto ref = std::make_shared<AdiabaticReference>(rep);
    return [ref](const CouplingPoint& p) -> std::optional<JointState> { return (*ref)(p); };
  }
  return [rep](const CouplingPoint& p) -> std::optional<JointState> {
    if (regime_of(p) != Regime::sub) return std::nullopt;
    try {
      auto a = zero_product_state(rep, p);
      if (!a) return std::nullopt;
      return a->joint;
    } catch (const NumericalGuard&) {
      return std::nullopt;
    }
  };
}

namespace detail {

inline TrajectorySample observe(const LadderRep& rep, const CVec& psi, double t, const CouplingPoint& p,
                                const ReferenceFn& ref, const CMat* rx_parity, double leak_fraction) {
  TrajectorySample s;
  s.t = t;
  s.u = p.u();
  const double nrm = psi.norm();
  s.norm_drift = std::abs(nrm - 1.0);
  const JointState st = JointState::unchecked(psi / nrm);
  if (ref) {
    if (auto r = ref(p)) s.fidelity = fidelity(*r, st);
  }
  const CMat rho = reduced_density(st, Subsystem::tls);
  s.rho_gg = rho(0, 0).real();
  s.rho_ee = rho(1, 1).real();
  s.re_rho_ge = rho(0, 1).real();
  s.im_rho_ge = rho(0, 1).imag();
  s.entropy = von_neumann_entropy(rho);
  if (rep.kind() == LadderKind::oscillator) s.leakage = leakage(psi, rep.dim(), leak_fraction);
  if (rx_parity) s.rx_parity = psi.dot(*rx_parity * psi).real();
  return s;
}

}  // namespace detail

/// Midpoint propagation over [0, T] with an arbitrary coupling schedule.
/// `g` is the rate scale used for the dt g <= 0.01 precondition.
inline Trajectory propagate(const LadderRep& rep, const CouplingFn& couplings, double T, double g,
                            const PropagateOptions& opt) {
  if (!(opt.dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("propagate: dt and T must be positive");
  if (opt.dt * g > 0.01 + 1e-12) throw NumericalGuard("propagate: dt too large (dt g must be <= 0.01)");
  if (opt.decimation < 1) throw std::invalid_argument("propagate: decimation must be >= 1");
  const long n = std::lround(T / opt.dt);
  if (n < 1 || std::abs(n * opt.dt - T) > 1e-9 * T)
    throw std::invalid_argument("propagate: T must be an integer multiple of dt");

  MidpointPropagator prop(rep, opt.method);
  const bool is_osc = rep.kind() == LadderKind::oscillator;
  const ReferenceFn ref = opt.reference ? opt.reference : default_reference(rep);
  std::optional<CMat> rxp;
  if (opt.observe && rep.is_integer_spin()) rxp = rx_parity_op(rep);

  Trajectory traj;
  traj.T = T;
  traj.dt = opt.dt;
  traj.steps = n;
  traj.method = prop.method();

  CVec psi = opt.initial ? opt.initial->amplitudes() : ground_initial_state(rep).amplitudes();
  if (psi.size() != 2 * rep.dim()) throw std::invalid_argument("propagate: initial state dimension mismatch");

  std::vector<bool> snap_taken(opt.snapshot_u.size(), false);
  const int fine = std::max(1, opt.decimation / 10);
  auto sample_now = [&](long k, double u) {
    if (k == 0 || k == n) return true;
    const bool in_window = opt.refine_window && u >= 0.45 && u <= 0.75;
    return k % (in_window ? fine : opt.decimation) == 0;
  };
  auto take_snapshots = [&](double t, double u) {
    for (std::size_t i = 0; i < opt.snapshot_u.size(); ++i) {
      if (!snap_taken[i] && u >= opt.snapshot_u[i] - 1e-12) {
        snap_taken[i] = true;
        traj.snapshots.push_back({opt.snapshot_u[i], t, JointState::unchecked(psi / psi.norm())});
      }
    }
  };

  {
    const CouplingPoint p0 = couplings(0.0);
    if (opt.observe) traj.samples.push_back(detail::observe(rep, psi, 0.0, p0, ref, rxp ? &*rxp : nullptr, opt.leakage_fraction));
    take_snapshots(0.0, p0.u());
  }
  for (long k = 1; k <= n; ++k) {
    const double t_mid = (static_cast<double>(k) - 0.5) * opt.dt;
    const CouplingPoint pm = couplings(t_mid);
    prop.step(pm.g1(), pm.g2(), opt.dt, psi);
    const double t = k == n ? T : static_cast<double>(k) * opt.dt;
    const CouplingPoint p = couplings(t);
    if (is_osc && opt.leakage_guard) {
      const double leak = leakage(psi, rep.dim(), opt.leakage_fraction);
      if (leak > opt.leakage_threshold) {
        traj.final_state = JointState::unchecked(psi);
        throw LeakageGuardTrip(t, p.u(), leak, std::move(traj));
      }
    }
    if (opt.observe && sample_now(k, p.u()))
      traj.samples.push_back(detail::observe(rep, psi, t, p, ref, rxp ? &*rxp : nullptr, opt.leakage_fraction));
    take_snapshots(t, p.u());
  }
  traj.final_state = JointState::unchecked(psi);
  return traj;
}

/// Propagation along the linear ramp; initial state |g> (x) ground ancilla.
inline Trajectory propagate(const LadderRep& rep, const RampSchedule& schedule, const PropagateOptions& opt) {
  schedule.validate();
  const RampSchedule s = schedule;
  return propagate(rep, [s](double t) { return ramp_at(s, std::min(t, s.T)); }, s.T, s.g, opt);
}

/// 1 - |<psi_dt|psi_{dt/2}>|^2 for the final states of two runs.
inline double dt_halving_infidelity(const LadderRep& rep, const RampSchedule& schedule, PropagateOptions opt) {
  opt.observe = false;
  opt.snapshot_u.clear();
  const Trajectory a = propagate(rep, schedule, opt);
  opt.dt *= 0.5;
  const Trajectory b = propagate(rep, schedule, opt);
  return 1.0 - fidelity(a.final_state, b.final_state);
}

}  // namespace jcsq
