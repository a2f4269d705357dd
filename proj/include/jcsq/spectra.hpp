#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "jcsq/hamiltonian.hpp"

namespace jcsq {

/// Closed-form sub-critical energies sqrt(n) g1 (1 - (2 g2/g1)^2)^{3/4}; n = 0 gives 0.
inline double analytic_E(int n, const CouplingPoint& p) {
  if (n < 0) throw std::invalid_argument("analytic_E: n must be >= 0");
  if (!(2.0 * p.g2() < p.g1()))
    throw std::domain_error("analytic_E: formula valid only for g2 < g1/2");
  if (n == 0) return 0.0;
  const double r = 2.0 * p.g2() / p.g1();
  return std::sqrt(static_cast<double>(n)) * p.g1() * std::pow(1.0 - r * r, 0.75);
}

struct SpectrumPoint {
  double u = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  RVec eigenvalues;            ///< full spectrum, ascending, raw units of g
  double scale = 1.0;          ///< divisor applied to obtain scaled values
  bool scaled = true;          ///< false at g1 = 0: values reported raw
  std::vector<double> lowest;  ///< k smallest non-negative values, scaled
  double spectral_radius = 0.0;
  double zero_mode_gap = 0.0;     ///< min |E|
  double pairing_residual = 0.0;  ///< max |E_i + E_{rev(i)}|
};

struct SpectrumSweep {
  LadderKind kind = LadderKind::oscillator;
  Index dim = 0;
  int k = 0;
  std::vector<SpectrumPoint> points;

  /// True when every point has a zero mode within rel_tol * spectral radius.
  bool zero_mode_everywhere(double rel_tol = 1e-8) const {
    for (const auto& pt : points)
      if (pt.zero_mode_gap > rel_tol * pt.spectral_radius) return false;
    return true;
  }
};

/// Energy scale for plotting: g1 for the oscillator, g1 sqrt(2J) for a spin.
inline double spectrum_scale(const LadderRep& rep, double g1) {
  if (rep.kind() == LadderKind::spin) return g1 * std::sqrt(static_cast<double>(rep.spin().twice));
  return g1;
}

/// The +E partner of every +-E pair: upper half of the sorted spectrum.
/// A zero mode appears once; degenerate doublets stay repeated.
inline std::vector<double> lowest_nonnegative(const RVec& sorted, int k) {
  const Index n = sorted.size();
  const Index start = n / 2;
  std::vector<double> out;
  for (Index i = start; i < n && static_cast<int>(out.size()) < k; ++i) out.push_back(sorted(i));
  return out;
}

inline SpectrumPoint spectrum_at(const LadderRep& rep, const InteractionBlocks& blocks, double u, double g,
                                 int k) {
  const CouplingPoint p = CouplingPoint::from_u(u, g);
  SpectrumPoint pt;
  pt.u = u;
  pt.g1 = p.g1();
  pt.g2 = p.g2();
  pt.eigenvalues = eigvals_herm(blocks.dense(p.g1(), p.g2()));
  const Index n = pt.eigenvalues.size();
  pt.spectral_radius = pt.eigenvalues.cwiseAbs().maxCoeff();
  pt.zero_mode_gap = pt.eigenvalues.cwiseAbs().minCoeff();
  for (Index i = 0; i < n; ++i)
    pt.pairing_residual = std::max(pt.pairing_residual, std::abs(pt.eigenvalues(i) + pt.eigenvalues(n - 1 - i)));
  if (p.g1() > 0.0) {
    pt.scale = spectrum_scale(rep, p.g1());
  } else {
    pt.scale = 1.0;
    pt.scaled = false;
  }
  for (double e : lowest_nonnegative(pt.eigenvalues, k)) pt.lowest.push_back(e / pt.scale);
  return pt;
}

/// Diagonalizes H along the u grid, with g1 = (1-u) g and g2 = (u/2) g.
inline SpectrumSweep sweep(const LadderRep& rep, double g, const std::vector<double>& u_grid, int k) {
  if (k < 1) throw std::invalid_argument("sweep: k must be >= 1");
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    if (!(u_grid[i] >= 0.0 && u_grid[i] <= 1.0)) throw std::invalid_argument("sweep: u outside [0, 1]");
    if (i > 0 && !(u_grid[i] > u_grid[i - 1])) throw std::invalid_argument("sweep: u grid must ascend");
  }
  const InteractionBlocks blocks(rep);
  SpectrumSweep out;
  out.kind = rep.kind();
  out.dim = blocks.dim();
  out.k = k;
  out.points.reserve(u_grid.size());
  for (double u : u_grid) out.points.push_back(spectrum_at(rep, blocks, u, g, k));
  return out;
}

inline std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("linear_grid: need at least one point");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i)
    out[i] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  if (points > 1) out.back() = hi;
  return out;
}

/// Mean spacing of the listed branches at one point (u = 1 diagnostic).
inline double mean_branch_spacing(const SpectrumPoint& pt) {
  if (pt.lowest.size() < 2) return 0.0;
  return (pt.lowest.back() - pt.lowest.front()) / static_cast<double>(pt.lowest.size() - 1);
}

}  // namespace jcsq
