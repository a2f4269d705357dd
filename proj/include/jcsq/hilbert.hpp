#pragma once

// Subsystem operators: two-level system (TLS), truncated oscillator, spin-J,
// and their embedding into the joint TLS (x) ancilla space.
//
// Layout conventions used throughout the library:
//   TLS basis      index 0 = |g>, index 1 = |e>
//   oscillator     ascending Fock number n = 0..n_cut
//   spin           ascending M = -J..+J
//   joint vector   row-major over (tls, ancilla): amp[tls * D + k]

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcsq/linalg.hpp"

namespace jcsq {

enum class LadderKind { oscillator, spin, custom };

inline const char* to_string(LadderKind kind) {
  switch (kind) {
    case LadderKind::oscillator: return "oscillator";
    case LadderKind::spin: return "spin";
    case LadderKind::custom: return "custom";
  }
  return "?";
}

/// Spin magnitude stored as 2J so half-integers are exact.
struct SpinValue {
  int twice = 0;

  double value() const { return 0.5 * twice; }
  bool is_integer() const { return twice % 2 == 0; }
  int dim() const { return twice + 1; }

  /// Parses "10", "9/2", "4.5".
  static SpinValue parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const int num = std::stoi(text.substr(0, slash));
      const int den = std::stoi(text.substr(slash + 1));
      if (den == 1) return SpinValue{2 * num};
      if (den == 2) return SpinValue{num};
      throw std::invalid_argument("spin value must be integer or half-integer: " + text);
    }
    const double v = std::stod(text);
    const double tw = 2.0 * v;
    if (std::abs(tw - std::round(tw)) > 1e-12)
      throw std::invalid_argument("spin value must be integer or half-integer: " + text);
    return SpinValue{static_cast<int>(std::lround(tw))};
  }

  std::string str() const {
    return is_integer() ? std::to_string(twice / 2) : std::to_string(twice) + "/2";
  }

  friend bool operator==(const SpinValue&, const SpinValue&) = default;
};

/// Matrix representation of the ancilla lowering operator K together with
/// basis metadata. Immutable after construction.
class LadderRep {
 public:
  LadderKind kind() const { return kind_; }
  Index dim() const { return K_.rows(); }
  const CMat& K() const { return K_; }
  CMat Kdag() const { return K_.adjoint(); }

  /// Spin magnitude; only meaningful for spin kind.
  SpinValue spin() const { return spin_; }
  bool is_integer_spin() const { return kind_ == LadderKind::spin && spin_.is_integer(); }

  /// Basis quantum number of index k: n for oscillator, M for spin, k for custom.
  double quantum_number(Index k) const {
    return kind_ == LadderKind::spin ? k - spin_.value() : static_cast<double>(k);
  }

  std::string label(Index k) const {
    switch (kind_) {
      case LadderKind::oscillator: return "n=" + std::to_string(k);
      case LadderKind::spin: {
        const int two_m = 2 * static_cast<int>(k) - spin_.twice;
        return two_m % 2 == 0 ? "M=" + std::to_string(two_m / 2)
                              : "M=" + std::to_string(two_m) + "/2";
      }
      case LadderKind::custom: return "k=" + std::to_string(k);
    }
    return {};
  }

  // Spin accessors (valid for any kind, but physically meaningful for spin).
  CMat jminus() const { return K_; }
  CMat jplus() const { return K_.adjoint(); }
  CMat jx() const { return 0.5 * (K_.adjoint() + K_); }
  CMat jy() const { return (K_.adjoint() - K_) / (2.0 * kI); }
  CMat jz() const {
    CMat z = CMat::Zero(dim(), dim());
    for (Index k = 0; k < dim(); ++k) z(k, k) = quantum_number(k);
    return z;
  }

  friend LadderRep osc_ladder(int n_cut);
  friend LadderRep spin_ladder(SpinValue j);
  friend LadderRep custom_ladder(CMat K);

 private:
  LadderRep(LadderKind kind, CMat K, SpinValue spin) : kind_(kind), K_(std::move(K)), spin_(spin) {}

  LadderKind kind_;
  CMat K_;
  SpinValue spin_;
};

/// Truncated Fock-space annihilation operator, K[n-1, n] = sqrt(n).
inline LadderRep osc_ladder(int n_cut) {
  if (n_cut < 1) throw std::invalid_argument("osc_ladder: n_cut must be >= 1");
  CMat K = CMat::Zero(n_cut + 1, n_cut + 1);
  for (int n = 1; n <= n_cut; ++n) K(n - 1, n) = std::sqrt(static_cast<double>(n));
  return LadderRep(LadderKind::oscillator, std::move(K), SpinValue{});
}

/// K = J- in the Dicke basis, <M-1|J-|M> = sqrt(J(J+1) - M(M-1)).
inline LadderRep spin_ladder(SpinValue j) {
  if (j.twice < 1) throw std::invalid_argument("spin_ladder: 2j must be a positive integer");
  const int d = j.dim();
  const double jj = j.value();
  CMat K = CMat::Zero(d, d);
  for (int k = 1; k < d; ++k) {
    const double m = k - jj;
    K(k - 1, k) = std::sqrt(jj * (jj + 1.0) - m * (m - 1.0));
  }
  return LadderRep(LadderKind::spin, std::move(K), j);
}

inline LadderRep spin_ladder(const std::string& j) { return spin_ladder(SpinValue::parse(j)); }

inline LadderRep custom_ladder(CMat K) {
  if (K.rows() != K.cols()) throw std::invalid_argument("custom_ladder: K must be square");
  if (K.rows() < 2) throw std::invalid_argument("custom_ladder: dim must be >= 2");
  return LadderRep(LadderKind::custom, std::move(K), SpinValue{});
}

// --- two-level system ------------------------------------------------------

/// sigma_+ = |e><g|
inline CMat sigma_plus() {
  CMat s = CMat::Zero(2, 2);
  s(1, 0) = 1.0;
  return s;
}

/// sigma_- = |g><e|
inline CMat sigma_minus() {
  CMat s = CMat::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

inline CMat sigma_x() { return sigma_plus() + sigma_minus(); }

/// tls_op (x) anc_op with the TLS as the slow index.
inline CMat joint_embed(const CMat& tls_op, const CMat& anc_op) {
  if (tls_op.rows() != 2 || tls_op.cols() != 2)
    throw std::invalid_argument("joint_embed: TLS operator must be 2x2");
  if (anc_op.rows() != anc_op.cols() || anc_op.rows() < 1)
    throw std::invalid_argument("joint_embed: ancilla operator must be square");
  return kron(tls_op, anc_op);
}

// --- joint state -----------------------------------------------------------

/// Normalized amplitude vector on TLS (x) ancilla, length 2*D.
class JointState {
 public:
  JointState() = default;

  /// Normalizes; rejects odd length and zero vectors.
  explicit JointState(CVec amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() < 2 || amp_.size() % 2 != 0)
      throw std::invalid_argument("JointState: length must be 2*D");
    const double n = amp_.norm();
    if (!(n > 0.0)) throw std::invalid_argument("JointState: zero vector");
    amp_ /= n;
  }

  static JointState product(const CVec& tls, const CVec& anc) {
    if (tls.size() != 2) throw std::invalid_argument("JointState::product: TLS vector must have 2 entries");
    return JointState(kron(tls, anc));
  }

  /// |g> (x) |k>
  static JointState basis(Index anc_dim, Index tls, Index k) {
    CVec v = CVec::Zero(2 * anc_dim);
    v(tls * anc_dim + k) = 1.0;
    return JointState(std::move(v));
  }

  /// Wraps an already-normalized vector as-is (propagation output).
  static JointState unchecked(CVec amplitudes) {
    JointState s;
    s.amp_ = std::move(amplitudes);
    return s;
  }

  const CVec& amplitudes() const { return amp_; }
  Index anc_dim() const { return amp_.size() / 2; }
  Index size() const { return amp_.size(); }
  double norm() const { return amp_.norm(); }

  /// Ancilla component attached to TLS level `tls` (unnormalized).
  CVec component(Index tls) const { return amp_.segment(tls * anc_dim(), anc_dim()); }

 private:
  CVec amp_;
};

}  // namespace jcsq
