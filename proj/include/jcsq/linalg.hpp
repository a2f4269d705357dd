#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace jcsq {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

inline double max_abs(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |A - A^dagger| relative to max(1, max|A|).
inline double hermiticity_residual(const CMat& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m - m.adjoint()) / std::max(1.0, max_abs(m));
}

inline bool is_real(const CMat& m) {
  return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0;
}

struct EigenSystem {
  RVec values;   // ascending
  CMat vectors;  // columns, orthonormal
};

/// Dense Hermitian eigen-decomposition. Real symmetric input takes the
/// (much faster) real path.
inline EigenSystem eig_herm(const CMat& h, double herm_tol = 1e-12) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eig_herm: matrix is not square");
  if (hermiticity_residual(h) > herm_tol)
    throw std::invalid_argument("eig_herm: matrix is not Hermitian");
  EigenSystem out;
  if (is_real(h)) {
    Eigen::SelfAdjointEigenSolver<RMat> es(h.real());
    if (es.info() != Eigen::Success) throw std::runtime_error("eig_herm: no convergence");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("eig_herm: no convergence");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  return out;
}

inline RVec eigvals_herm(const CMat& h, double herm_tol = 1e-12) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigvals_herm: matrix is not square");
  if (hermiticity_residual(h) > herm_tol)
    throw std::invalid_argument("eigvals_herm: matrix is not Hermitian");
  if (is_real(h)) {
    Eigen::SelfAdjointEigenSolver<RMat> es(h.real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// exp(-i t G) for Hermitian G via spectral decomposition; unitary to round-off.
inline CMat expm_herm(const CMat& generator, double t) {
  const EigenSystem es = eig_herm(generator);
  CVec phases(es.values.size());
  for (Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * (t * es.values(k)));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

/// Kronecker product a (x) b; `a` is the slow index.
inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace jcsq
