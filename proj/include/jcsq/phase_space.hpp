#pragma once

// Oscillator Wigner function (displaced-parity form) and the spherical
// Husimi Q function of a spin.
//
// Wigner convention: x = a + a^dag, p = i(a^dag - a), [x, p] = 2i,
//   W(x, p) = (1/2pi) Tr[rho D(alpha) P D(alpha)^dag],  alpha = (x + i p)/2,
// so that the vacuum is exp(-(x^2 + p^2)/2) / 2pi and the map integrates to 1
// over dx dp.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcsq/errors.hpp"
#include "jcsq/hilbert.hpp"
#include "jcsq/observables.hpp"

namespace jcsq {

inline constexpr const char* kWignerConvention =
    "x = a + a^dag, p = i(a^dag - a), [x,p] = 2i; vacuum W = exp(-(x^2+p^2)/2)/(2 pi); integral W dx dp = 1";
inline constexpr const char* kHusimiConvention =
    "Q = (2J+1)/(4 pi) <Omega|rho|Omega>, |Omega> = exp(-i phi Jz) exp(-i theta Jy)|J,+J>; integral Q sin(theta) dtheta dphi = 1";

/// Uniformly spaced axis: lo, lo + step, ..., lo + (points - 1) step.
struct Axis {
  std::string name;
  double lo = 0.0;
  double step = 0.0;
  Index points = 0;

  double at(Index i) const { return lo + step * static_cast<double>(i); }
  double hi() const { return at(points - 1); }
};

inline Axis make_axis(std::string name, double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw std::invalid_argument("axis " + name + ": need hi > lo and step > 0");
  const auto n = static_cast<Index>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (n < 2) throw std::invalid_argument("axis " + name + ": fewer than two points");
  return Axis{std::move(name), lo, step, n};
}

/// values(r, c) sits at (rows.at(r), cols.at(c)). Wigner: rows = p, cols = x.
/// Husimi: rows = theta, cols = phi.
struct PhaseSpaceMap {
  std::string kind;
  std::string convention;
  Axis rows;
  Axis cols;
  RMat values;
  double normalization_residual = NAN;
  double boundary_max = NAN;  ///< Wigner only

  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
};

// ---- Wigner ---------------------------------------------------------------

struct WignerGrid {
  double x_lo = -8.0, x_hi = 8.0;
  double p_lo = -8.0, p_hi = 8.0;
  double step = 0.05;
};

struct WignerOptions {
  /// Working dimension for the truncated quadratures = factor * state dim.
  double pad_factor = 2.0;
  /// Largest |W| tolerated on the grid edge.
  double boundary_tol = 1e-8;
  bool check_boundary = true;
  /// Components of rho with weight below this are dropped.
  double weight_floor = 1e-14;
};

/// Weighted pure components psi_i with rho = sum w_i |psi_i><psi_i|.
struct Ensemble {
  std::vector<double> weights;
  std::vector<CVec> vectors;
};

inline Ensemble ensemble_of(const CMat& rho, double floor = 1e-14) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix is not square");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-9) throw std::invalid_argument("density matrix trace differs from 1");
  const EigenSystem es = eig_herm(rho, 1e-10);
  Ensemble out;
  for (Index k = 0; k < es.values.size(); ++k) {
    if (es.values(k) < -1e-9) throw std::invalid_argument("density matrix is not positive semidefinite");
    if (es.values(k) > floor) {
      out.weights.push_back(es.values(k));
      out.vectors.push_back(es.vectors.col(k));
    }
  }
  return out;
}

/// Ancilla ensemble of a joint state: the two (unnormalized) TLS components.
inline Ensemble ancilla_ensemble(const JointState& s) {
  Ensemble out;
  for (int a = 0; a < 2; ++a) {
    CVec c = s.component(a);
    const double w = c.squaredNorm();
    if (w > 0.0) {
      out.weights.push_back(w);
      out.vectors.push_back(c / std::sqrt(w));
    }
  }
  return out;
}

struct QuadratureMoments {
  double mean_x, mean_p, var_x, var_p;
};

inline QuadratureMoments quadrature_moments(const Ensemble& ens) {
  QuadratureMoments m{0, 0, 0, 0};
  double x2 = 0.0, p2 = 0.0;
  for (std::size_t i = 0; i < ens.vectors.size(); ++i) {
    const CVec& v = ens.vectors[i];
    const Index d = v.size();
    cplx a = 0.0, a2 = 0.0;
    double n = 0.0;
    for (Index k = 1; k < d; ++k) {
      a += std::sqrt(double(k)) * std::conj(v(k - 1)) * v(k);
      n += double(k) * std::norm(v(k));
    }
    for (Index k = 2; k < d; ++k) a2 += std::sqrt(double(k) * double(k - 1)) * std::conj(v(k - 2)) * v(k);
    const double w = ens.weights[i];
    m.mean_x += w * 2.0 * a.real();
    m.mean_p += w * 2.0 * a.imag();
    // x^2 = a^2 + a^dag^2 + 2 n + 1, p^2 = -(a^2 + a^dag^2) + 2 n + 1
    x2 += w * (2.0 * a2.real() + 2.0 * n + 1.0);
    p2 += w * (-2.0 * a2.real() + 2.0 * n + 1.0);
  }
  m.var_x = x2 - m.mean_x * m.mean_x;
  m.var_p = p2 - m.mean_p * m.mean_p;
  return m;
}

/// Grid centered on the state's first moments, wide enough for a Gaussian
/// tail plus the separation of split components.
inline WignerGrid auto_wigner_grid(const Ensemble& ens, double step = 0.05) {
  const QuadratureMoments m = quadrature_moments(ens);
  auto half = [](double var) { return std::max(8.0, 3.0 * std::sqrt(std::max(var, 0.0)) + 5.0); };
  const double hx = half(m.var_x), hp = half(m.var_p);
  auto snap = [step](double v) { return step * std::round(v / step); };
  return WignerGrid{snap(m.mean_x - hx), snap(m.mean_x + hx), snap(m.mean_p - hp), snap(m.mean_p + hp), step};
}

inline PhaseSpaceMap wigner(const Ensemble& ens, const WignerGrid& grid, const WignerOptions& opt = {}) {
  if (ens.vectors.empty()) throw std::invalid_argument("wigner: empty state");
  const Index d = ens.vectors.front().size();
  for (const auto& v : ens.vectors)
    if (v.size() != d) throw std::invalid_argument("wigner: component dimension mismatch");
  const Axis xs = make_axis("x", grid.x_lo, grid.x_hi, grid.step);
  const Axis ps = make_axis("p", grid.p_lo, grid.p_hi, grid.step);

  // Truncated x quadrature in the padded space: real symmetric tridiagonal.
  // The padding must hold a coherent displacement across the grid around
  // the state's centroid.
  const QuadratureMoments cm = quadrature_moments(ens);
  const double reach = std::max({std::abs(grid.x_lo - cm.mean_x), std::abs(grid.x_hi - cm.mean_x),
                                 std::abs(grid.p_lo - cm.mean_p), std::abs(grid.p_hi - cm.mean_p)});
  const Index dw = std::max({d + 1, static_cast<Index>(std::ceil(opt.pad_factor * double(d))),
                             static_cast<Index>(std::ceil((reach + 4.0) * (reach + 4.0)))});
  RVec diag = RVec::Zero(dw), off(dw - 1);
  for (Index k = 0; k + 1 < dw; ++k) off(k) = std::sqrt(double(k + 1));
  Eigen::SelfAdjointEigenSolver<RMat> xsolve;
  xsolve.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const RVec& xi = xsolve.eigenvalues();
  const RMat& vx = xsolve.eigenvectors();
  // p = S^dag x S with S = diag((-i)^n): eigenvectors of p are S^dag vx.
  CVec phase(dw);
  for (Index n = 0; n < dw; ++n) {
    static const cplx pw[4] = {1.0, -kI, -1.0, kI};
    phase(n) = pw[n % 4];  // (-i)^n
  }
  RVec parity(dw);
  for (Index n = 0; n < dw; ++n) parity(n) = (n % 2 == 0) ? 1.0 : -1.0;

  // exp(-i x xi_k) for every grid x, built by repeated multiplication.
  CMat ex(xs.points, dw);
  for (Index k = 0; k < dw; ++k) {
    const cplx stepf = std::exp(-kI * (xs.step * xi(k)));
    cplx cur = std::exp(-kI * (xs.lo * xi(k)));
    for (Index j = 0; j < xs.points; ++j) {
      ex(j, k) = cur;
      cur *= stepf;
      if ((j & 63) == 63) cur = std::exp(-kI * (xs.at(j + 1) * xi(k)));
    }
  }

  std::vector<CVec> xcoef;  // vx^T psi_i
  for (const auto& v : ens.vectors) {
    CVec pad = CVec::Zero(dw);
    pad.head(d) = v;
    xcoef.push_back(vx.transpose().cast<cplx>() * pad);
  }

  PhaseSpaceMap map;
  map.kind = "wigner";
  map.convention = kWignerConvention;
  map.rows = ps;
  map.cols = xs;
  map.values = RMat::Zero(ps.points, xs.points);
  const CMat vxc = vx.cast<cplx>();
  CVec chi(dw), pchi(dw), a(dw), b(dw), acc(dw);
  for (Index r = 0; r < ps.points; ++r) {
    const double p0 = ps.at(r);
    acc.setZero();
    for (std::size_t i = 0; i < ens.vectors.size(); ++i) {
      // chi = exp(-i p0 x / 2) psi
      for (Index k = 0; k < dw; ++k) b(k) = std::exp(-kI * (0.5 * p0 * xi(k))) * xcoef[i](k);
      chi.noalias() = vxc * b;
      // Project chi and P chi onto the p eigenbasis: (S^dag vx)^dag = vx^T S.
      for (Index n = 0; n < dw; ++n) {
        b(n) = phase(n) * chi(n);
        pchi(n) = parity(n) * b(n);
      }
      a.noalias() = vxc.transpose() * b;
      b.noalias() = vxc.transpose() * pchi;
      acc += ens.weights[i] * a.conjugate().cwiseProduct(b);
    }
    map.values.row(r) = (ex * acc).real().transpose() / (2.0 * kPi);
  }

  double sum = map.values.sum() * xs.step * ps.step;
  map.normalization_residual = sum - 1.0;
  double edge = 0.0;
  edge = std::max(edge, map.values.row(0).cwiseAbs().maxCoeff());
  edge = std::max(edge, map.values.row(ps.points - 1).cwiseAbs().maxCoeff());
  edge = std::max(edge, map.values.col(0).cwiseAbs().maxCoeff());
  edge = std::max(edge, map.values.col(xs.points - 1).cwiseAbs().maxCoeff());
  map.boundary_max = edge;
  if (opt.check_boundary && edge > opt.boundary_tol)
    throw NumericalGuard("wigner: grid too narrow, |W| on the boundary reaches " + std::to_string(edge));
  return map;
}

inline PhaseSpaceMap wigner(const CMat& rho, const WignerGrid& grid, const WignerOptions& opt = {}) {
  return wigner(ensemble_of(rho, opt.weight_floor), grid, opt);
}

inline PhaseSpaceMap wigner(const JointState& s, const WignerGrid& grid, const WignerOptions& opt = {}) {
  return wigner(ancilla_ensemble(s), grid, opt);
}

/// First and second moments of the map by grid quadrature.
inline QuadratureMoments map_moments(const PhaseSpaceMap& w) {
  double n = 0, sx = 0, sp = 0, sxx = 0, spp = 0;
  for (Index r = 0; r < w.rows.points; ++r) {
    const double p = w.rows.at(r);
    for (Index c = 0; c < w.cols.points; ++c) {
      const double x = w.cols.at(c), v = w.values(r, c);
      n += v;
      sx += v * x;
      sp += v * p;
      sxx += v * x * x;
      spp += v * p * p;
    }
  }
  const double mx = sx / n, mp = sp / n;
  return {mx, mp, sxx / n - mx * mx, spp / n - mp * mp};
}

// ---- Husimi ---------------------------------------------------------------

struct SphereMesh {
  Index theta_points = 181;
  Index phi_points = 361;
};

/// <J,M|Omega> for the spin coherent state exp(-i phi Jz) exp(-i theta Jy)|J,+J>,
/// ascending M.
inline CVec spin_coherent_state(SpinValue j, double theta, double phi) {
  const int d = j.dim();
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  const double lc = std::log(std::abs(c)), ls = std::log(std::abs(s));
  const int tw = j.twice;
  CVec out(d);
  for (int k = 0; k < d; ++k) {
    const int up = k;          // J + M
    const int down = tw - k;   // J - M
    const double m = 0.5 * double(2 * k - tw);
    double mag;
    if ((up > 0 && c == 0.0) || (down > 0 && s == 0.0)) {
      mag = 0.0;
    } else {
      const double lbin = std::lgamma(tw + 1.0) - std::lgamma(up + 1.0) - std::lgamma(down + 1.0);
      mag = std::exp(0.5 * lbin + (up > 0 ? up * lc : 0.0) + (down > 0 ? down * ls : 0.0));
      if (up % 2 == 1 && c < 0.0) mag = -mag;
      if (down % 2 == 1 && s < 0.0) mag = -mag;
    }
    out(k) = std::exp(-kI * (phi * m)) * mag;
  }
  return out;
}

inline PhaseSpaceMap husimi_sphere(const Ensemble& ens, SpinValue j, const SphereMesh& mesh = {}) {
  if (mesh.theta_points < 2 || mesh.phi_points < 3) throw std::invalid_argument("husimi_sphere: degenerate mesh");
  const Index d = j.dim();
  for (const auto& v : ens.vectors)
    if (v.size() != d) throw std::invalid_argument("husimi_sphere: state dimension does not match the spin");
  PhaseSpaceMap map;
  map.kind = "husimi";
  map.convention = kHusimiConvention;
  map.rows = Axis{"theta", 0.0, kPi / double(mesh.theta_points - 1), mesh.theta_points};
  map.cols = Axis{"phi", 0.0, 2.0 * kPi / double(mesh.phi_points - 1), mesh.phi_points};
  map.values = RMat::Zero(mesh.theta_points, mesh.phi_points);
  const double pref = double(j.twice + 1) / (4.0 * kPi);

  // e^{i phi M} per column
  CMat rot(mesh.phi_points, d);
  for (Index c = 0; c < mesh.phi_points; ++c)
    for (Index k = 0; k < d; ++k) rot(c, k) = std::exp(kI * (map.cols.at(c) * (double(k) - 0.5 * j.twice)));

  for (Index r = 0; r < mesh.theta_points; ++r) {
    const CVec dm = spin_coherent_state(j, map.rows.at(r), 0.0);  // real
    RVec acc = RVec::Zero(mesh.phi_points);
    for (std::size_t i = 0; i < ens.vectors.size(); ++i) {
      const CVec b = dm.real().cast<cplx>().cwiseProduct(ens.vectors[i]);
      acc += ens.weights[i] * (rot * b).cwiseAbs2();
    }
    map.values.row(r) = pref * acc.transpose();
  }

  // Trapezoid in theta (sin weight), periodic rectangle rule in phi.
  double integral = 0.0;
  const Index nphi = mesh.phi_points - 1;
  for (Index r = 0; r < mesh.theta_points; ++r) {
    const double wt = (r == 0 || r + 1 == mesh.theta_points) ? 0.5 : 1.0;
    integral += wt * std::sin(map.rows.at(r)) * map.values.row(r).head(nphi).sum();
  }
  integral *= map.rows.step * map.cols.step;
  map.normalization_residual = integral - 1.0;
  return map;
}

inline PhaseSpaceMap husimi_sphere(const CMat& rho, SpinValue j, const SphereMesh& mesh = {}) {
  if (rho.rows() != j.dim()) throw std::invalid_argument("husimi_sphere: state dimension does not match the spin");
  return husimi_sphere(ensemble_of(rho), j, mesh);
}

inline PhaseSpaceMap husimi_sphere(const JointState& s, SpinValue j, const SphereMesh& mesh = {}) {
  if (s.anc_dim() != j.dim()) throw std::invalid_argument("husimi_sphere: state dimension does not match the spin");
  return husimi_sphere(ancilla_ensemble(s), j, mesh);
}

/// Azimuths (radians in [0, 2pi)) of local maxima of the equatorial Husimi row
/// whose value exceeds `rel` times the row maximum.
inline std::vector<double> equatorial_ridges(const PhaseSpaceMap& q, double rel = 0.5) {
  const Index r = (q.rows.points - 1) / 2;
  const Index n = q.cols.points - 1;
  const auto row = q.values.row(r);
  const double top = row.head(n).maxCoeff();
  std::vector<double> out;
  for (Index c = 0; c < n; ++c) {
    const double v = row(c), left = row((c + n - 1) % n), right = row((c + 1) % n);
    if (v >= rel * top && v > left && v >= right) out.push_back(q.cols.at(c));
  }
  return out;
}

}  // namespace jcsq
