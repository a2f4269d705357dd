#pragma once

// Driven interaction Hamiltonian
//   H = g1 (sigma- (x) K^dag + sigma+ (x) K) + g2 I (x) (K + K^dag)
// in the interaction picture, plus the linear ramp and the symmetry operators.

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

#include "jcsq/hilbert.hpp"

namespace jcsq {

/// A (g1, g2) pair in units of the reference rate g.
class CouplingPoint {
 public:
  CouplingPoint(double g1, double g2) : g1_(g1), g2_(g2) {
    if (!(g1 >= 0.0) || !(g2 >= 0.0))
      throw std::invalid_argument("CouplingPoint: g1 and g2 must be non-negative");
    if (g1 == 0.0 && g2 == 0.0) throw std::invalid_argument("CouplingPoint: g1 and g2 both zero");
  }

  /// Point on the u-line: g1 = (1-u) g, g2 = (u/2) g, so that 2 g2 / (g1 + 2 g2) = u.
  static CouplingPoint from_u(double u, double g = 1.0) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("CouplingPoint::from_u: u outside [0, 1]");
    if (!(g > 0.0)) throw std::invalid_argument("CouplingPoint::from_u: g must be positive");
    return CouplingPoint((1.0 - u) * g, 0.5 * u * g);
  }

  double g1() const { return g1_; }
  double g2() const { return g2_; }
  double u() const { return 2.0 * g2_ / (g1_ + 2.0 * g2_); }
  /// g2/g1; +inf when g1 = 0.
  double ratio() const { return g1_ > 0.0 ? g2_ / g1_ : INFINITY; }

 private:
  double g1_;
  double g2_;
};

/// Linear ramp g1(t) = (1 - t/T) g, g2(t) = (t / 2T) g; u(t) = t/T.
struct RampSchedule {
  double g = 1.0;
  double T = 100.0;

  void validate() const {
    if (!(g > 0.0)) throw std::invalid_argument("RampSchedule: g must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("RampSchedule: T must be positive");
  }
};

inline CouplingPoint ramp_at(const RampSchedule& s, double t) {
  s.validate();
  if (!(t >= 0.0 && t <= s.T)) throw std::invalid_argument("ramp_at: t outside [0, T]");
  const double x = t / s.T;
  return CouplingPoint((1.0 - x) * s.g, 0.5 * x * s.g);
}

/// Cached joint-space blocks: H(g1, g2) = g1 * jc + g2 * drive.
class InteractionBlocks {
 public:
  using SparseMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  explicit InteractionBlocks(const LadderRep& rep)
      : jc_(joint_embed(sigma_minus(), rep.Kdag()) + joint_embed(sigma_plus(), rep.K())),
        drive_(joint_embed(CMat::Identity(2, 2), rep.K() + rep.Kdag())) {
    jc_sparse_ = jc_.sparseView();
    drive_sparse_ = drive_.sparseView();
  }

  Index dim() const { return jc_.rows(); }
  const CMat& jc() const { return jc_; }
  const CMat& drive() const { return drive_; }

  CMat dense(double g1, double g2) const {
    CMat h = g1 * jc_ + g2 * drive_;
    return 0.5 * (h + h.adjoint());
  }

  /// y = H(g1, g2) x using the sparse blocks.
  template <class Derived>
  void apply(double g1, double g2, const Eigen::MatrixBase<Derived>& x, CVec& y) const {
    y.noalias() = g1 * (jc_sparse_ * x);
    y.noalias() += g2 * (drive_sparse_ * x);
  }

 private:
  CMat jc_;
  CMat drive_;
  SparseMat jc_sparse_;
  SparseMat drive_sparse_;
};

inline CMat build_interaction(const LadderRep& rep, const CouplingPoint& p) {
  return InteractionBlocks(rep).dense(p.g1(), p.g2());
}

enum class Symmetry {
  osc_parity,  ///< I (x) (-1)^n; maps E -> -E
  spin_pi_z,   ///< I (x) exp(-i pi Jz); maps E -> -E
  rx,          ///< exp(-i pi sigma_x/2) (x) exp(-i pi Jx); commutes with H
};

inline CMat symmetry_op(const LadderRep& rep, Symmetry kind) {
  const Index d = rep.dim();
  switch (kind) {
    case Symmetry::osc_parity: {
      if (rep.kind() != LadderKind::oscillator)
        throw std::invalid_argument("symmetry_op: osc_parity needs an oscillator rep");
      CMat p = CMat::Zero(d, d);
      for (Index n = 0; n < d; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
      return joint_embed(CMat::Identity(2, 2), p);
    }
    case Symmetry::spin_pi_z: {
      if (rep.kind() != LadderKind::spin)
        throw std::invalid_argument("symmetry_op: spin_pi_z needs a spin rep");
      CMat p = CMat::Zero(d, d);
      for (Index k = 0; k < d; ++k) p(k, k) = std::exp(-kI * (kPi * rep.quantum_number(k)));
      return joint_embed(CMat::Identity(2, 2), p);
    }
    case Symmetry::rx: {
      if (rep.kind() != LadderKind::spin)
        throw std::invalid_argument("symmetry_op: R_x needs a spin rep");
      return joint_embed(expm_herm(0.5 * sigma_x(), kPi), expm_herm(rep.jx(), kPi));
    }
  }
  throw std::invalid_argument("symmetry_op: unknown kind");
}

/// i (-1)^J R_x for integer J: Hermitian, squares to the identity.
inline CMat rx_parity_op(const LadderRep& rep) {
  if (!rep.is_integer_spin()) throw std::invalid_argument("rx_parity_op: needs integer-J spin rep");
  const double sign = (rep.spin().twice / 2) % 2 == 0 ? 1.0 : -1.0;
  return (kI * sign) * symmetry_op(rep, Symmetry::rx);
}

}  // namespace jcsq
