#pragma once

// Closed-form zero-energy states of the driven interaction Hamiltonian.
//
// Product ansatz |Psi> = |chi> (x) |phi>. Below the critical drive
// (g2 < g1/2) the TLS is chi = (cos th/2, sin th/2) with sin th = -2 g2/g1 and
// the ancilla solves (mu K + nu K^dag) phi = 0. Above it (spin only) the TLS is
// chi = (e^{-i phi/2}, -e^{i phi/2})/sqrt2 with cos phi = g1/(2 g2) and the
// ancilla is exp(i phi Jz)|J,0>_y.

#include <Eigen/SVD>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "jcsq/errors.hpp"
#include "jcsq/hamiltonian.hpp"

namespace jcsq {

enum class Regime { sub, critical, super };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::sub: return "sub";
    case Regime::critical: return "critical";
    case Regime::super: return "super";
  }
  return "?";
}

inline Regime regime_of(const CouplingPoint& p) {
  const double twice_g2 = 2.0 * p.g2();
  if (twice_g2 < p.g1()) return Regime::sub;
  if (twice_g2 == p.g1()) return Regime::critical;
  return Regime::super;
}

struct Bogoliubov {
  double mu = 1.0;
  double nu = 0.0;
};

struct QuadratureVariances {
  double var_x = 1.0;
  double var_p = 1.0;
};

struct ZeroEnergyAnsatz {
  Regime regime = Regime::sub;
  double theta = NAN;      ///< TLS mixing angle (sub regime)
  double phi_angle = NAN;  ///< rotation angle (super regime)
  double mu = NAN;
  double nu = NAN;
  double tau = NAN;  ///< log|cot(theta/2)| (spin, sub regime)
  CVec chi;          ///< TLS 2-vector
  CVec phi_state;    ///< ancilla D-vector
  JointState joint;
};

/// theta = arcsin(-2 g2/g1) in (-pi/2, 0].
inline double tls_angle(const CouplingPoint& p) {
  if (!(p.g1() > 0.0) || !(p.g2() / p.g1() < 0.5))
    throw RegimeError("tls_angle: requires g2/g1 < 1/2 (critical drive g2 = g1/2 reached); "
                      "use the super-regime constructor");
  return std::asin(-2.0 * p.g2() / p.g1());
}

inline CVec tls_sub_vector(double theta) {
  CVec chi(2);
  chi << std::cos(0.5 * theta), std::sin(0.5 * theta);
  return chi;
}

inline Bogoliubov bogoliubov_coeffs(double theta) {
  if (!(std::abs(theta) < 0.5 * kPi)) throw std::domain_error("bogoliubov_coeffs: |theta| must be < pi/2");
  const double root_sec = std::sqrt(1.0 / std::cos(theta));
  const double s = std::sin(0.5 * theta);
  const double c = std::cos(0.5 * theta);
  return {c * c * root_sec, -s * s * root_sec};
}

inline QuadratureVariances quad_variances(double theta) {
  if (!(std::abs(theta) < 0.5 * kPi)) throw std::domain_error("quad_variances: |theta| must be < pi/2");
  return {1.0 / std::cos(theta), std::cos(theta)};
}

/// Even-only Fock vector annihilated by mu a + nu a^dag, from the recursion
/// c_{n+2} = -(nu/mu) sqrt((n+1)/(n+2)) c_n. Throws NumericalGuard when the
/// population missing beyond the truncation exceeds `tail_tol`.
inline CVec squeezed_vacuum(double mu, double nu, int n_cut, double tail_tol = 1e-14) {
  if (n_cut < 2) throw std::invalid_argument("squeezed_vacuum: n_cut must be >= 2");
  if (std::abs(mu * mu - nu * nu - 1.0) > 1e-10 * std::max(1.0, mu * mu))
    throw std::invalid_argument("squeezed_vacuum: mu^2 - nu^2 must equal 1");
  const double ratio = -nu / mu;
  if (!(std::abs(ratio) < 1.0)) throw NumericalGuard("squeezed_vacuum: |nu/mu| >= 1, state not normalizable");
  RVec c = RVec::Zero(n_cut + 1);
  c(0) = 1.0;
  for (int n = 0; n + 2 <= n_cut; n += 2)
    c(n + 2) = ratio * std::sqrt((n + 1.0) / (n + 2.0)) * c(n);
  const double norm2 = c.squaredNorm();
  // |c_{n+2}|^2 / |c_n|^2 < ratio^2, so the dropped tail is bounded geometrically.
  const int last = n_cut % 2 == 0 ? n_cut : n_cut - 1;
  const double r2 = ratio * ratio;
  const double tail = c(last) * c(last) * r2 / (1.0 - r2) / norm2;
  if (tail > tail_tol)
    throw NumericalGuard("squeezed_vacuum: n_cut = " + std::to_string(n_cut) +
                         " too small for requested squeezing (tail population " + std::to_string(tail) + ")");
  return (c / std::sqrt(norm2)).cast<cplx>();
}

/// Measured <x^2> - <x>^2 and <p^2> - <p>^2 with x = a + a^dag, p = i(a^dag - a).
inline QuadratureVariances measured_quadratures(const LadderRep& rep, const CVec& phi) {
  const CMat x = rep.K() + rep.Kdag();
  const CMat p = kI * (rep.Kdag() - rep.K());
  const CVec xv = x * phi;
  const CVec pv = p * phi;
  const double n = phi.squaredNorm();
  const double mx = phi.dot(xv).real() / n;
  const double mp = phi.dot(pv).real() / n;
  return {xv.squaredNorm() / n - mx * mx, pv.squaredNorm() / n - mp * mp};
}

// --- spin branch -------------------------------------------------------------

namespace detail {
inline void require_integer_spin(SpinValue j, const char* who) {
  if (j.twice < 2 || !j.is_integer())
    throw RegimeError(std::string(who) + ": requires a positive integer spin (no zero-energy product state for half-integer J)");
}
}  // namespace detail

/// Null vector of Jy, |J,0>_y, with real positive Dicke components.
inline CVec j0y_state(SpinValue j) {
  detail::require_integer_spin(j, "j0y_state");
  const LadderRep rep = spin_ladder(j);
  const CMat& K = rep.K();
  const Index d = rep.dim();
  // Row i of (J+ - J-) v = 0 links v[i-1] and v[i+1].
  RVec v = RVec::Zero(d);
  v(0) = 1.0;
  for (Index i = 1; i + 1 < d; i += 2) v(i + 1) = K(i - 1, i).real() / K(i, i + 1).real() * v(i - 1);
  return (v / v.norm()).cast<cplx>();
}

inline CVec j0y_state(int j) { return j0y_state(SpinValue{2 * j}); }

/// tau = log|cot(theta/2)|; +inf at theta = 0.
inline double spin_tau(double theta) {
  if (theta == 0.0) return INFINITY;
  return std::log(std::abs(1.0 / std::tan(0.5 * theta)));
}

/// C(tau) exp(-tau Jz) |J,0>_y; theta = 0 gives the exact limit |J,-J>.
inline CVec intelligent_spin_state(SpinValue j, double theta) {
  detail::require_integer_spin(j, "intelligent_spin_state");
  if (!(std::abs(theta) < 0.5 * kPi)) throw std::domain_error("intelligent_spin_state: |theta| must be < pi/2");
  const Index d = j.dim();
  const double tau = spin_tau(theta);
  if (!std::isfinite(tau) || tau * j.twice > 700.0) {
    CVec v = CVec::Zero(d);
    v(0) = 1.0;
    return v;
  }
  CVec v = j0y_state(j);
  // exp(-tau M) relative to M = -J keeps every factor <= 1 for tau >= 0.
  for (Index k = 0; k < d; ++k) v(k) *= std::exp(-tau * static_cast<double>(k));
  return v / v.norm();
}

struct SpinMoments {
  double mean_x = 0, mean_y = 0, mean_z = 0;
  double var_x = 0, var_y = 0;
};

inline SpinMoments spin_moments(const LadderRep& rep, const CVec& phi) {
  const double n = phi.squaredNorm();
  auto mean = [&](const CMat& op) { return phi.dot(op * phi).real() / n; };
  const CMat jx = rep.jx(), jy = rep.jy(), jz = rep.jz();
  SpinMoments m;
  m.mean_x = mean(jx);
  m.mean_y = mean(jy);
  m.mean_z = mean(jz);
  m.var_x = mean(jx * jx) - m.mean_x * m.mean_x;
  m.var_y = mean(jy * jy) - m.mean_y * m.mean_y;
  return m;
}

/// cos(phi) = g1/(2 g2), phi in [0, pi/2]; pi/2 exactly when g1 = 0.
inline double super_angle(const CouplingPoint& p) {
  if (p.g1() == 0.0) return 0.5 * kPi;
  if (2.0 * p.g2() < p.g1())
    throw RegimeError("super_angle: requires g2 >= g1/2 (below the critical drive use the sub-regime constructor)");
  return std::acos(std::min(1.0, p.g1() / (2.0 * p.g2())));
}

inline CVec tls_super_vector(double phi) {
  CVec chi(2);
  chi << std::exp(-0.5 * kI * phi), -std::exp(0.5 * kI * phi);
  return chi / std::sqrt(2.0);
}

/// e^{-i(phi + pi/2)} J- + e^{i(phi + pi/2)} J+ (Hermitian).
inline CMat super_condition_op(const LadderRep& rep, double phi) {
  const cplx w = std::exp(kI * (phi + 0.5 * kPi));
  return std::conj(w) * rep.jminus() + w * rep.jplus();
}

struct SuperState {
  double phi_angle = 0.0;
  CVec chi;
  CVec phi_state;
};

/// Super-regime product state. The ancilla exp(i phi Jz)|J,0>_y is
/// cross-checked against the null vector of super_condition_op.
inline SuperState super_state(SpinValue j, const CouplingPoint& p) {
  detail::require_integer_spin(j, "super_state");
  const double phi = super_angle(p);
  const LadderRep rep = spin_ladder(j);
  CVec anc = j0y_state(j);
  for (Index k = 0; k < rep.dim(); ++k) anc(k) *= std::exp(kI * (phi * rep.quantum_number(k)));

  const EigenSystem es = eig_herm(super_condition_op(rep, phi), 1e-10);
  Index best = 0;
  es.values.cwiseAbs().minCoeff(&best);
  const double overlap = std::abs(es.vectors.col(best).dot(anc));
  if (std::abs(1.0 - overlap) > 1e-8)
    throw std::logic_error("super_state: closed form disagrees with null-space solution");
  return {phi, tls_super_vector(phi), anc};
}

// --- generic dispatch ----------------------------------------------------------

/// Zero-energy product state for any ladder representation. Returns nullopt
/// for a custom K whose (mu K + nu K^dag) has no null vector. Throws
/// RegimeError where no normalizable product state exists.
inline std::optional<ZeroEnergyAnsatz> zero_product_state(const LadderRep& rep, const CouplingPoint& p,
                                                          double null_tol = 1e-10) {
  ZeroEnergyAnsatz a;
  a.regime = regime_of(p);
  switch (rep.kind()) {
    case LadderKind::oscillator: {
      a.theta = tls_angle(p);
      const Bogoliubov b = bogoliubov_coeffs(a.theta);
      a.mu = b.mu;
      a.nu = b.nu;
      a.chi = tls_sub_vector(a.theta);
      a.phi_state = squeezed_vacuum(b.mu, b.nu, static_cast<int>(rep.dim() - 1));
      break;
    }
    case LadderKind::spin: {
      detail::require_integer_spin(rep.spin(), "zero_product_state");
      if (a.regime == Regime::sub) {
        a.theta = tls_angle(p);
        const Bogoliubov b = bogoliubov_coeffs(a.theta);
        a.mu = b.mu;
        a.nu = b.nu;
        a.tau = spin_tau(a.theta);
        a.chi = tls_sub_vector(a.theta);
        a.phi_state = intelligent_spin_state(rep.spin(), a.theta);
      } else {
        SuperState s = super_state(rep.spin(), p);
        a.phi_angle = s.phi_angle;
        a.chi = std::move(s.chi);
        a.phi_state = std::move(s.phi_state);
      }
      break;
    }
    case LadderKind::custom: {
      a.theta = tls_angle(p);
      const Bogoliubov b = bogoliubov_coeffs(a.theta);
      a.mu = b.mu;
      a.nu = b.nu;
      a.chi = tls_sub_vector(a.theta);
      const CMat op = b.mu * rep.K() + b.nu * rep.Kdag();
      Eigen::JacobiSVD<CMat> svd(op, Eigen::ComputeFullV);
      const RVec& sv = svd.singularValues();
      const Index last = sv.size() - 1;
      if (sv(last) > null_tol * std::max(1.0, sv(0))) return std::nullopt;
      a.phi_state = svd.matrixV().col(last);
      // Real-positive first nonzero component fixes the phase.
      for (Index k = 0; k < a.phi_state.size(); ++k) {
        if (std::abs(a.phi_state(k)) > 1e-12) {
          a.phi_state *= std::abs(a.phi_state(k)) / a.phi_state(k);
          break;
        }
      }
      break;
    }
  }
  a.joint = JointState::product(a.chi, a.phi_state);
  return a;
}

// --- degenerate E = 0 doublet (integer spin) -------------------------------------

struct SymmetrizedPair {
  JointState plus;   ///< +1 eigenvector of i(-1)^J R_x
  JointState minus;  ///< -1 eigenvector
  double gamma = 0.0;
};

/// Psi_pm = (Psi +- R Psi) / (sqrt2 sqrt(1 +- gamma)), R = i(-1)^J R_x.
inline SymmetrizedPair symmetrized_pair(const JointState& psi, const CMat& rx_parity) {
  if (rx_parity.rows() != psi.size()) throw std::invalid_argument("symmetrized_pair: dimension mismatch");
  const CVec& v = psi.amplitudes();
  const CVec rv = rx_parity * v;
  const double gamma = v.dot(rv).real();
  if (std::abs(std::abs(gamma) - 1.0) < 1e-12)
    throw NumericalGuard("symmetrized_pair: |gamma| = 1, state is already an R_x eigenvector");
  SymmetrizedPair out;
  out.gamma = gamma;
  out.plus = JointState::unchecked((v + rv) / (std::sqrt(2.0) * std::sqrt(1.0 + gamma)));
  out.minus = JointState::unchecked((v - rv) / (std::sqrt(2.0) * std::sqrt(1.0 - gamma)));
  return out;
}

inline SymmetrizedPair symmetrized_pair(const JointState& psi, const LadderRep& rep) {
  return symmetrized_pair(psi, rx_parity_op(rep));
}

/// Adiabatic reference for the integer-spin ramp: (Psi+ + Psi-)/sqrt2 below
/// the critical drive and (Psi+ - i Psi-)/sqrt2 above it. Caches R_x.
class AdiabaticReference {
 public:
  /// g2/g1 offset below 1/2 used for the limit at the critical point.
  static constexpr double kCriticalOffset = 1e-9;

  explicit AdiabaticReference(const LadderRep& rep) : rep_(rep) {
    if (!rep.is_integer_spin()) throw RegimeError("adiabatic_reference: requires an integer-J spin rep");
    rx_parity_ = rx_parity_op(rep);
  }

  struct Result {
    JointState state;
    ZeroEnergyAnsatz ansatz;
    double gamma = 0.0;
  };

  Result evaluate(const CouplingPoint& p) const {
    Regime regime = regime_of(p);
    CouplingPoint eval = p;
    if (regime == Regime::critical) {
      eval = CouplingPoint(p.g1(), p.g1() * (0.5 - kCriticalOffset));
      regime = Regime::sub;
    }
    Result r{JointState{}, *zero_product_state(rep_, eval), 0.0};
    const SymmetrizedPair pair = symmetrized_pair(r.ansatz.joint, rx_parity_);
    r.gamma = pair.gamma;
    const CVec& a = pair.plus.amplitudes();
    const CVec& b = pair.minus.amplitudes();
    CVec sum = regime == Regime::sub ? CVec(a + b) : CVec(a - kI * b);
    r.state = JointState(std::move(sum / std::sqrt(2.0)));
    return r;
  }

  JointState operator()(const CouplingPoint& p) const { return evaluate(p).state; }
  const CMat& rx_parity() const { return rx_parity_; }

 private:
  LadderRep rep_;
  CMat rx_parity_;
};

inline JointState adiabatic_reference(const LadderRep& rep, const CouplingPoint& p) {
  return AdiabaticReference(rep)(p);
}

}  // namespace jcsq
