#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's constructors for the quantity being checked: matrices are built
// from ket maps, exponentials from Taylor series, partial traces from the
// full density matrix, spectra from the general (non-Hermitian) solver.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
inline const double pi = std::acos(-1.0);

/// a|n> = sqrt(n)|n-1>, written column by column from the ket action.
inline CMat annihilation(int n_cut) {
  const int d = n_cut + 1;
  CMat a = CMat::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    std::map<int, double> image;
    if (n > 0) image[n - 1] = std::sqrt(double(n));
    for (auto [m, c] : image) a(m, n) = c;
  }
  return a;
}

/// J-|J,M> = sqrt((J+M)(J-M+1)) |J,M-1>, ascending M, 2J given.
inline CMat spin_lowering(int twice_j) {
  const int d = twice_j + 1;
  const double j = 0.5 * twice_j;
  CMat jm = CMat::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const double m = -j + col;
    if (col == 0) continue;
    jm(col - 1, col) = std::sqrt((j + m) * (j - m + 1.0));
  }
  return jm;
}

inline CMat spin_z(int twice_j) {
  const int d = twice_j + 1;
  CMat jz = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) jz(k, k) = -0.5 * twice_j + k;
  return jz;
}

/// Kronecker product by explicit index arithmetic.
inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// H = g1 (s- (x) K^dag + s+ (x) K) + g2 I (x) (K + K^dag), TLS index 0 = g.
inline CMat hamiltonian(const CMat& K, double g1, double g2) {
  CMat sp = CMat::Zero(2, 2), sm = CMat::Zero(2, 2);
  sp(1, 0) = 1.0;
  sm(0, 1) = 1.0;
  return g1 * (kron(sm, K.adjoint()) + kron(sp, K)) + g2 * kron(CMat::Identity(2, 2), K + K.adjoint());
}

/// exp(A) by scaling and squaring of a long Taylor series.
inline CMat expm(const CMat& a) {
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (nrm / std::pow(2.0, s) > 0.25) ++s;
  const CMat b = a / std::pow(2.0, s);
  CMat term = CMat::Identity(a.rows(), a.cols()), sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / double(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Sorted real parts of the eigenvalues from the general complex solver.
inline std::vector<double> eigenvalues(const CMat& h) {
  Eigen::ComplexEigenSolver<CMat> es(h, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

/// Right singular vector of the smallest singular value.
inline CVec null_vector(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().col(svd.matrixV().cols() - 1);
}

/// Tr_B or Tr_A of |psi><psi| for psi on C^2 (x) C^d.
inline CMat partial_trace(const CVec& psi, int d, bool keep_tls) {
  const CMat rho = psi * psi.adjoint();
  if (keep_tls) {
    CMat r = CMat::Zero(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int k = 0; k < d; ++k) r(a, b) += rho(a * d + k, b * d + k);
    return r;
  }
  CMat r = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int a = 0; a < 2; ++a) r(k, l) += rho(a * d + k, a * d + l);
  return r;
}

/// Gaussian Wigner function of a zero-mean state with diagonal covariance.
inline double gaussian_wigner(double x, double p, double var_x, double var_p) {
  return std::exp(-0.5 * x * x / var_x - 0.5 * p * p / var_p) / (2.0 * pi * std::sqrt(var_x * var_p));
}

/// exp(-i phi Jz) exp(-i theta Jy)|J,+J> by matrix exponentials.
inline CVec coherent_spin(int twice_j, double theta, double phi) {
  const CMat jm = spin_lowering(twice_j);
  const CMat jy = (jm.adjoint() - jm) / cplx(0.0, 2.0);
  const CMat jz = spin_z(twice_j);
  CVec top = CVec::Zero(twice_j + 1);
  top(twice_j) = 1.0;
  return expm(cplx(0, -phi) * jz) * (expm(cplx(0, -theta) * jy) * top);
}

/// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  CVec state(Eigen::Index n) {
    std::normal_distribution<double> g;
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(g(rng_), g(rng_));
    return v / v.norm();
  }
  CMat matrix(Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> g;
    CMat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(g(rng_), g(rng_));
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
