#include "gbspec/cardinal.hpp"

#include <cmath>
#include <numbers>

#include "gbspec/errors.hpp"

namespace gbspec {

namespace {

std::vector<double> integer_breaks(int last) {
  std::vector<double> b(last + 1);
  for (int k = 0; k <= last; ++k) b[k] = k;
  return b;
}

// f on {0..m} extended by one zero piece, and the same shifted right by `shift`.
PiecewiseFn shifted(const PiecewiseFn& f, int shift, int last) {
  std::vector<Coeffs> pieces(last, Coeffs::Zero(f.degree() + 1));
  for (std::size_t k = 0; k < f.num_pieces(); ++k)
    if (static_cast<int>(k) + shift < last) pieces[k + shift] = f.pieces()[k];
  return PiecewiseFn(f.family(), f.degree(), integer_breaks(last), std::move(pieces));
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

SectionFamily effective(SectionFamily family) {
  if (family.tag != Family::Polynomial && family.phase < 1e-8) return SectionFamily::polynomial();
  return family;
}

}  // namespace

CardinalSpline cardinal_spline(SectionFamily family, int p) {
  if (p < 1) throw UsageError("cardinal spline degree must be at least 1");
  family.validate();
  if (family.tag == Family::Trigonometric && family.phase >= std::numbers::pi)
    throw ConstraintViolation("trigonometric cardinal spline needs phase below pi");

  CardinalSpline cs;
  cs.p = p;
  cs.family = family;

  // degree-1 seed: V~ = I c / I c(1) on [0,1), U~ = c - (c(1)/I c(1)) I c on [1,2)
  const Real lam = family.sign() * Real(family.phase) * Real(family.phase);
  const Real c1 = iterated_integral_ext(0, lam, 1);
  const Real ic1 = iterated_integral_ext(1, lam, 1);
  Coeffs v(2), u(2);
  v << 0, 1 / ic1;
  u << 1, -c1 / ic1;
  PiecewiseFn phi1(family, 1, integer_breaks(2), std::vector<Coeffs>{v, u});
  const Real delta1 = 1 / phi1.integral_ext();
  cs.delta1 = static_cast<double>(delta1);
  for (auto& c : phi1.pieces()) c *= delta1;
  cs.chain.push_back(phi1);

  for (int q = 2; q <= p; ++q) {
    const PiecewiseFn& prev = cs.chain.back();
    const PiecewiseFn diff = combine(1.0, shifted(prev, 0, q + 1), -1.0, shifted(prev, 1, q + 1));
    cs.chain.push_back(piecewise_antiderivative(diff));
  }
  cs.pw = cs.chain.back();
  return cs;
}

PiecewiseFn cardinal_derivative(const CardinalSpline& cs, int r) {
  if (r < 1 || r > cs.p - 1) throw UsageError("derivative order must be in 1..p-1");
  const PiecewiseFn& base = cs.degree(cs.p - r);
  PiecewiseFn out = PiecewiseFn::zero(cs.family, base.degree(), integer_breaks(cs.p + 1));
  for (int j = 0; j <= r; ++j) {
    const double w = ((j % 2) ? -1.0 : 1.0) * binomial(r, j);
    out = combine(1.0, out, w, shifted(base, j, cs.p + 1));
  }
  return out;
}

PiecewiseFn cardinal_derivative_direct(const CardinalSpline& cs, int r) {
  if (r < 0 || r > cs.p + 1) throw UsageError("derivative order out of range");
  PiecewiseFn out = cs.pw;
  for (int k = 0; k < r; ++k) out = piecewise_derivative(out);
  return out;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

double fourier_phi1_real(SectionFamily family, double theta) {
  family = effective(family);
  const double a = family.phase;
  switch (family.tag) {
    case Family::Polynomial: {
      const double s = sinc(0.5 * theta);
      return s * s;
    }
    case Family::Hyperbolic: {
      // α²/(cosh α − 1) · (cosh α − cos θ)/(θ² + α²), with both differences
      // written as squares of half-angle sines
      const double q = std::sin(0.5 * theta) / std::sinh(0.5 * a);
      return a * a * (1.0 + q * q) / (theta * theta + a * a);
    }
    case Family::Trigonometric: {
      // (cos α − cos θ)/(θ² − α²) factors into two sincs, no pole at θ = ±α
      const double sa = std::sin(0.5 * a);
      return a * a / (4.0 * sa * sa) * sinc(0.5 * (theta - a)) * sinc(0.5 * (theta + a));
    }
  }
  return 0.0;
}

std::complex<double> fourier_phi(SectionFamily family, int p, double theta) {
  if (p < 1) throw UsageError("cardinal spline degree must be at least 1");
  const double real = fourier_phi1_real(family, theta) * std::pow(sinc(0.5 * theta), p - 1);
  return real * std::polar(1.0, -0.5 * (p + 1) * theta);
}

}  // namespace gbspec
