#pragma once

#include <complex>
#include <vector>

#include "gbspec/section_space.hpp"

namespace gbspec {

/// Cardinal GB-spline φ_p on the integer knots {0, 1, ..., p+1}.
/// `chain[k]` holds φ_{k+1}, so lower degrees are available for the
/// derivative recurrence.
struct CardinalSpline {
  int p = 0;
  SectionFamily family;
  PiecewiseFn pw;
  double delta1 = 1.0;
  std::vector<PiecewiseFn> chain;

  double operator()(double t) const { return pw(t); }
  const PiecewiseFn& degree(int q) const { return chain.at(q - 1); }
  double center() const { return 0.5 * (p + 1); }
};

/// Throws ConstraintViolation for a trigonometric phase ≥ π.
CardinalSpline cardinal_spline(SectionFamily family, int p);

/// r-th derivative, 1 ≤ r ≤ p-1, through
/// φ_p^{(r)}(t) = Σ_j (-1)^j C(r,j) φ_{p-r}(t-j).
PiecewiseFn cardinal_derivative(const CardinalSpline& cs, int r);

/// r-th derivative by repeated exact differentiation, 0 ≤ r ≤ p+1.
PiecewiseFn cardinal_derivative_direct(const CardinalSpline& cs, int r);

/// sin(x)/x with the removable point handled.
double sinc(double x);

/// Real factor R_1(θ) = φ̂_1(θ) e^{iθ} of the degree-1 transform.
double fourier_phi1_real(SectionFamily family, double theta);

/// φ̂_p(θ) = ∫ φ_p(t) e^{-iθt} dt.
std::complex<double> fourier_phi(SectionFamily family, int p, double theta);

}  // namespace gbspec
