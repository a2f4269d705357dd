#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jcsq/hilbert.hpp"

namespace jcsq {

enum class Subsystem { tls, ancilla };

inline CMat reduced_density(const JointState& state, Subsystem which) {
  const Index d = state.anc_dim();
  const CVec& v = state.amplitudes();
  if (which == Subsystem::tls) {
    CMat rho(2, 2);
    for (Index a = 0; a < 2; ++a)
      for (Index b = 0; b < 2; ++b) rho(a, b) = v.segment(b * d, d).dot(v.segment(a * d, d));
    return rho;
  }
  CMat rho = CMat::Zero(d, d);
  for (Index a = 0; a < 2; ++a) {
    const auto comp = v.segment(a * d, d);
    rho.noalias() += comp * comp.adjoint();
  }
  return rho;
}

/// -sum lambda ln lambda in nats; eigenvalues below 1e-15 count as zero.
inline double von_neumann_entropy(const CMat& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("von_neumann_entropy: matrix is not square");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-9)
    throw std::invalid_argument("von_neumann_entropy: trace differs from 1");
  const RVec lambda = eigvals_herm(rho, 1e-10);
  double s = 0.0;
  for (Index k = 0; k < lambda.size(); ++k)
    if (lambda(k) >= 1e-15) s -= lambda(k) * std::log(lambda(k));
  return std::max(0.0, s);
}

inline double fidelity(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::norm(a.dot(b));
}

/// |<a|b>|^2
inline double fidelity(const JointState& a, const JointState& b) {
  return fidelity(a.amplitudes(), b.amplitudes());
}

/// Number of top ancilla levels watched by the leakage guard.
inline Index leakage_levels(Index anc_dim, double fraction) {
  return std::max<Index>(1, static_cast<Index>(std::ceil(fraction * static_cast<double>(anc_dim))));
}

/// Population in the top `fraction` of ancilla levels, summed over the TLS.
inline double leakage(const CVec& amplitudes, Index anc_dim, double fraction = 0.1) {
  const Index top = leakage_levels(anc_dim, fraction);
  double pop = 0.0;
  for (Index a = 0; a < 2; ++a) pop += amplitudes.segment(a * anc_dim + anc_dim - top, top).squaredNorm();
  return pop;
}

inline double leakage(const JointState& s, double fraction = 0.1) {
  return leakage(s.amplitudes(), s.anc_dim(), fraction);
}

}  // namespace jcsq
