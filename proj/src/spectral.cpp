#include "gbspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gbspec/parallel.hpp"

namespace gbspec {

RealToeplitzSpec toeplitz_spec(const SymbolFn& s) {
  RealToeplitzSpec t(s.bandwidth());
  for (int k = -s.bandwidth(); k <= s.bandwidth(); ++k) t.at(k) = s.toeplitz_coeff(k);
  return t;
}

Eigen::VectorXcd eigenvalues_dense(const Eigen::MatrixXd& A, int cap) {
  if (A.rows() != A.cols()) throw UsageError("eigenvalues need a square matrix");
  if (A.rows() > cap) throw UsageError("matrix order exceeds the eigensolver cap");
  if (A.rows() == 0) return {};
  const double scale = A.cwiseAbs().maxCoeff();
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym <= 1e-13 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
    return es.eigenvalues().cast<std::complex<double>>();
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return es.eigenvalues();
}

namespace {

std::vector<double> quantiles(const std::vector<double>& sorted, int count) {
  std::vector<double> out(count);
  const double L = static_cast<double>(sorted.size());
  for (int k = 0; k < count; ++k) {
    auto idx = static_cast<std::size_t>((k + 0.5) * L / count);
    out[k] = sorted[std::min(idx, sorted.size() - 1)];
  }
  return out;
}

DistributionReport compare(const Eigen::VectorXcd& eigs, const std::vector<double>& samples,
                           const std::vector<double>& moment_sample, const std::vector<double>& eps) {
  const int d = static_cast<int>(eigs.size());
  if (static_cast<int>(samples.size()) != d) throw UsageError("eigenvalue and sample counts differ");
  if (d == 0) throw UsageError("empty eigenvalue list");
  DistributionReport r;
  r.d_n = d;

  std::vector<double> re(d);
  for (int i = 0; i < d; ++i) {
    re[i] = eigs[i].real();
    r.max_imag = std::max(r.max_imag, std::abs(eigs[i].imag()));
  }
  std::sort(re.begin(), re.end());
  std::vector<double> s = samples;
  std::sort(s.begin(), s.end());
  double acc = 0.0;
  for (int i = 0; i < d; ++i) acc += std::abs(re[i] - s[i]);
  r.mean_abs_discrepancy = acc / d;

  const auto [mn, mx] = std::minmax_element(moment_sample.begin(), moment_sample.end());
  r.symbol_min = *mn;
  r.symbol_max = *mx;
  for (int power = 1; power <= 4; ++power) {
    std::complex<double> lam = 0.0;
    for (int i = 0; i < d; ++i) lam += std::pow(eigs[i], power);
    lam /= static_cast<double>(d);
    double integral = 0.0;
    for (double v : moment_sample) integral += std::pow(v, power);
    integral /= static_cast<double>(moment_sample.size());
    r.moment_errors.push_back(std::abs(lam - integral));
  }

  r.eps = eps;
  for (double e : eps) {
    int count = 0;
    for (int i = 0; i < d; ++i) {
      const auto z = eigs[i];
      if (z.real() < r.symbol_min - e || z.real() > r.symbol_max + e || std::abs(z.imag()) > e) ++count;
    }
    r.outliers.push_back(count);
  }
  return r;
}

}  // namespace

DistributionReport weyl_report(const Eigen::VectorXcd& eigs, const Sampler& sampler,
                               const std::vector<double>& eps, int moment_samples) {
  const int d = static_cast<int>(eigs.size());
  std::vector<double> samples = sampler(d);
  std::vector<double> big = sampler(std::max(d, moment_samples));
  return compare(eigs, samples, big, eps);
}

DistributionReport weyl_report(const Eigen::VectorXcd& eigs, const std::vector<double>& samples,
                               const std::vector<double>& eps) {
  return compare(eigs, samples, samples, eps);
}

std::vector<double> lattice_samples(const LatticeFn& fn, int dims, int count, bool full_theta,
                                    int oversample) {
  if (dims < 1 || count < 1) throw UsageError("lattice needs positive dimension and count");
  const double target = static_cast<double>(count) * std::max(1, oversample);
  int per_axis = static_cast<int>(std::ceil(std::pow(target, 1.0 / (2 * dims)) - 1e-9));
  per_axis = std::max(per_axis, 1);
  std::size_t total = 1;
  for (int a = 0; a < 2 * dims; ++a) total *= per_axis;

  const double pi = std::numbers::pi;
  std::vector<double> values(total);
  // one chunk per leading x index keeps the work coarse
  const std::size_t chunk = total / per_axis;
  parallel_for(per_axis, [&](std::size_t lead) {
    std::vector<double> x(dims), th(dims);
    for (std::size_t r = 0; r < chunk; ++r) {
      std::size_t idx = lead * chunk + r, rem = idx;
      std::vector<int> digit(2 * dims);
      for (int a = 2 * dims - 1; a >= 0; --a) {
        digit[a] = static_cast<int>(rem % per_axis);
        rem /= per_axis;
      }
      for (int a = 0; a < dims; ++a) {
        x[a] = (digit[a] + 0.5) / per_axis;
        const int j = digit[dims + a] + 1;
        th[a] = full_theta ? -pi + 2.0 * pi * j / per_axis : pi * j / per_axis;
      }
      values[idx] = fn(x, th);
    }
  });
  std::sort(values.begin(), values.end());
  if (static_cast<int>(values.size()) == count) return values;
  return quantiles(values, count);
}

Sampler symbol_sampler(std::function<double(double)> weight, std::function<double(double)> symbol) {
  // separable: evaluate each factor once per axis, same lattice as lattice_samples
  return [weight = std::move(weight), symbol = std::move(symbol)](int count) {
    const int oversample = 16;
    const int per_axis =
        std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count) * oversample) - 1e-9)));
    std::vector<double> w(per_axis), s(per_axis);
    for (int i = 0; i < per_axis; ++i) {
      w[i] = weight((i + 0.5) / per_axis);
      s[i] = symbol(std::numbers::pi * (i + 1) / per_axis);
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(per_axis) * per_axis);
    for (double a : w)
      for (double b : s) values.push_back(a * b);
    std::sort(values.begin(), values.end());
    return quantiles(values, count);
  };
}

}  // namespace gbspec
