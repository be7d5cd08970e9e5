#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "gbspec/errors.hpp"
#include "gbspec/symbols.hpp"

namespace gbspec {

/// Fourier coefficients c_{-b}..c_b of a banded symbol; (T)_{jk} = c_{j-k}.
template <typename Scalar>
struct ToeplitzSpec {
  int bandwidth = 0;
  std::vector<Scalar> c;  // c[k + bandwidth]

  ToeplitzSpec() : c(1, Scalar(0)) {}
  explicit ToeplitzSpec(int b) : bandwidth(b), c(2 * b + 1, Scalar(0)) {}

  Scalar operator[](int k) const { return std::abs(k) > bandwidth ? Scalar(0) : c[k + bandwidth]; }
  Scalar& at(int k) { return c.at(k + bandwidth); }

  bool is_hermitian(double tol = 0.0) const {
    for (int k = 0; k <= bandwidth; ++k)
      if (std::abs((*this)[-k] - Eigen::numext::conj((*this)[k])) > tol) return false;
    return true;
  }
};

using RealToeplitzSpec = ToeplitzSpec<double>;
using ComplexToeplitzSpec = ToeplitzSpec<std::complex<double>>;

/// Real Toeplitz generator sampled from the same spline values as the symbol
/// (for G: the real sine-series matrix, i.e. the symbol times -i).
RealToeplitzSpec toeplitz_spec(const SymbolFn& s);

/// Generator with c_0 = diag and c_{±1} = off.
template <typename Scalar>
ToeplitzSpec<Scalar> tridiagonal_spec(Scalar diag, Scalar off) {
  ToeplitzSpec<Scalar> t(1);
  t.at(0) = diag;
  t.at(-1) = off;
  t.at(1) = off;
  return t;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> toeplitz(const ToeplitzSpec<Scalar>& spec, int m) {
  if (m < 1) throw UsageError("Toeplitz order must be positive");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> T =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = std::max(0, j - spec.bandwidth); k <= std::min(m - 1, j + spec.bandwidth); ++k)
      T(j, k) = spec[j - k];
  return T;
}

/// T_{m1,m2}(f⊗h), entry ((j1,j2),(k1,k2)) = f_{j1-k1} h_{j2-k2}, last index fastest.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> toeplitz_tensor(const ToeplitzSpec<Scalar>& cf,
                                                                      const ToeplitzSpec<Scalar>& ch,
                                                                      int m1, int m2) {
  if (m1 < 1 || m2 < 1) throw UsageError("Toeplitz order must be positive");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat T = Mat::Zero(static_cast<Eigen::Index>(m1) * m2, static_cast<Eigen::Index>(m1) * m2);
  for (int j1 = 0; j1 < m1; ++j1)
    for (int k1 = 0; k1 < m1; ++k1) {
      const Scalar a = cf[j1 - k1];
      if (a == Scalar(0)) continue;
      for (int j2 = 0; j2 < m2; ++j2)
        for (int k2 = 0; k2 < m2; ++k2) T(j1 * m2 + j2, k1 * m2 + k2) = a * ch[j2 - k2];
    }
  return T;
}

/// Largest order accepted by eigenvalues_dense.
inline constexpr int kEigenCap = 4096;

/// All eigenvalues. Symmetric input (to 1e-13 relative) uses the
/// self-adjoint solver; anything else the general real solver.
Eigen::VectorXcd eigenvalues_dense(const Eigen::MatrixXd& A, int cap = kEigenCap);

/// Sorted samples of a distribution function; called with the wanted count.
using Sampler = std::function<std::vector<double>(int)>;

struct DistributionReport {
  int d_n = 0;
  double mean_abs_discrepancy = 0.0;
  std::vector<double> moment_errors;  // r = 1..4
  double max_imag = 0.0;
  double symbol_min = 0.0, symbol_max = 0.0;
  std::vector<double> eps;
  std::vector<int> outliers;
};

/// Monotone-rearrangement comparison of Re λ against `sampler(d_n)`, moment
/// errors against a large sample, and box-ε outlier counts.
DistributionReport weyl_report(const Eigen::VectorXcd& eigs, const Sampler& sampler,
                               const std::vector<double>& eps = {}, int moment_samples = 1 << 16);

/// Plain comparison of two lists (sizes must match); moments from `samples`.
DistributionReport weyl_report(const Eigen::VectorXcd& eigs, const std::vector<double>& samples,
                               const std::vector<double>& eps = {});

using LatticeFn = std::function<double(const std::vector<double>& x, const std::vector<double>& theta)>;

/// Sorted values of fn on a near-square lattice: midpoints of (0,1)^dims in
/// x, uniform points of (0,π]^dims in θ ((-π,π]^dims with full_theta). The
/// lattice has at least oversample·count points and is subsampled to
/// `count` quantiles.
std::vector<double> lattice_samples(const LatticeFn& fn, int dims, int count, bool full_theta = false,
                                    int oversample = 16);

/// Sampler for κ̂(x)·s(θ) in one dimension.
Sampler symbol_sampler(std::function<double(double)> weight, std::function<double(double)> symbol);

}  // namespace gbspec
