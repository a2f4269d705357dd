#pragma once

// Midpoint exponential propagator: psi <- exp(-i H(t + dt/2) dt) psi.
// The exponential is applied either by full spectral decomposition of the
// dense H or by a Lanczos (Krylov) projection on the sparse blocks.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jcsq/hamiltonian.hpp"

namespace jcsq {

enum class ExpMethod { automatic, spectral, krylov };

inline const char* to_string(ExpMethod m) {
  switch (m) {
    case ExpMethod::automatic: return "auto";
    case ExpMethod::spectral: return "spectral";
    case ExpMethod::krylov: return "krylov";
  }
  return "?";
}

inline ExpMethod parse_exp_method(const std::string& s) {
  if (s == "auto") return ExpMethod::automatic;
  if (s == "spectral") return ExpMethod::spectral;
  if (s == "krylov") return ExpMethod::krylov;
  throw std::invalid_argument("unknown exponential method: " + s);
}

/// Joint dimension at or below which `automatic` picks the spectral applicator.
inline constexpr Index kSpectralDimLimit = 24;

/// Lanczos approximation of exp(-i H dt) x for Hermitian H given as a matvec.
/// Full reorthogonalization; stops once the a-posteriori error estimate drops
/// below `tol` (relative to |x|) or the Krylov space becomes invariant.
class KrylovExp {
 public:
  explicit KrylovExp(int max_dim = 40, double tol = 1e-15) : max_dim_(max_dim), tol_(tol) {}

  template <class MatVec>
  void apply(const MatVec& matvec, double dt, CVec& x) {
    const Index n = x.size();
    const int mmax = static_cast<int>(std::min<Index>(max_dim_, n));
    const double beta = x.norm();
    if (beta == 0.0) return;
    basis_.resize(n, mmax + 1);
    alpha_.assign(mmax, 0.0);
    offdiag_.assign(mmax, 0.0);
    basis_.col(0) = x / beta;

    int m = 0;
    CVec small;
    for (int j = 0; j < mmax; ++j) {
      matvec(basis_.col(j), w_);
      alpha_[j] = basis_.col(j).dot(w_).real();
      w_ -= alpha_[j] * basis_.col(j);
      if (j > 0) w_ -= offdiag_[j - 1] * basis_.col(j - 1);
      for (int k = 0; k <= j; ++k) w_ -= basis_.col(k).dot(w_) * basis_.col(k);
      const double h = w_.norm();
      offdiag_[j] = h;
      m = j + 1;
      small = small_exp(m, dt);
      last_dim_ = m;
      const bool invariant = h <= 1e-14 * std::abs(alpha_[0]) + 1e-300;
      if (invariant || h * std::abs(small(m - 1)) < tol_) break;
      if (m == mmax) break;
      basis_.col(j + 1) = w_ / h;
    }
    x.noalias() = beta * (basis_.leftCols(m) * small);
  }

  int last_dim() const { return last_dim_; }

 private:
  // exp(-i T dt) e_1 for the m x m tridiagonal Lanczos matrix.
  CVec small_exp(int m, double dt) {
    if (m == 1) return CVec::Constant(1, std::exp(-kI * (alpha_[0] * dt)));
    RVec diag(m), sub(m - 1);
    for (int i = 0; i < m; ++i) diag(i) = alpha_[i];
    for (int i = 0; i + 1 < m; ++i) sub(i) = offdiag_[i];
    Eigen::SelfAdjointEigenSolver<RMat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const RMat& v = es.eigenvectors();
    CVec out = CVec::Zero(m);
    for (int k = 0; k < m; ++k) {
      const cplx c = std::exp(-kI * (es.eigenvalues()(k) * dt)) * v(0, k);
      out += c * v.col(k).cast<cplx>();
    }
    return out;
  }

  int max_dim_;
  double tol_;
  CMat basis_;
  std::vector<double> alpha_;
  std::vector<double> offdiag_;
  CVec w_;
  int last_dim_ = 0;
};

class MidpointPropagator {
 public:
  MidpointPropagator(const LadderRep& rep, ExpMethod method = ExpMethod::automatic)
      : blocks_(rep), method_(method) {
    if (method_ == ExpMethod::automatic)
      method_ = blocks_.dim() <= kSpectralDimLimit ? ExpMethod::spectral : ExpMethod::krylov;
  }

  ExpMethod method() const { return method_; }
  const InteractionBlocks& blocks() const { return blocks_; }

  /// One step with the Hamiltonian frozen at (g1, g2) for duration dt.
  void step(double g1, double g2, double dt, CVec& psi) {
    if (method_ == ExpMethod::spectral) {
      const EigenSystem es = eig_herm(blocks_.dense(g1, g2));
      CVec coeff = es.vectors.adjoint() * psi;
      for (Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::exp(-kI * (es.values(k) * dt));
      psi.noalias() = es.vectors * coeff;
    } else {
      krylov_.apply([&](const auto& in, CVec& out) { blocks_.apply(g1, g2, in, out); }, dt, psi);
    }
  }

 private:
  InteractionBlocks blocks_;
  ExpMethod method_;
  KrylovExp krylov_;
};

}  // namespace jcsq
