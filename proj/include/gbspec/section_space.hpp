#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gbspec {

// Piece coefficients are kept in extended precision: large hyperbolic phases
// make the tail basis cancel near the right end of an interval.
using Real = long double;
using Coeffs = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

enum class Family { Polynomial, Hyperbolic, Trigonometric };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Section space ⟨1, x, ..., x^{p-2}, U, V⟩ selector. `phase` is the global
/// frequency per unit length of the variable the space lives on; it is
/// ignored for the polynomial family.
struct SectionFamily {
  Family tag = Family::Polynomial;
  double phase = 0.0;

  static SectionFamily polynomial() { return {Family::Polynomial, 0.0}; }
  static SectionFamily hyperbolic(double alpha) { return {Family::Hyperbolic, alpha}; }
  static SectionFamily trigonometric(double alpha) { return {Family::Trigonometric, alpha}; }

  // Same family with the phase multiplied by `s` (used for the x -> n x rescale).
  SectionFamily scaled(double s) const { return {tag, phase * s}; }

  // +1 hyperbolic, -1 trigonometric, 0 polynomial: c'' = sign * eps^2 * c.
  int sign() const;

  // Throws ValidationError for non-positive hyperbolic/trigonometric phases.
  void validate() const;

  bool operator==(const SectionFamily&) const = default;
};

/// Local section space on one knot interval in the coordinate τ ∈ [0,1].
///
/// Two bases of the same (p+1)-dimensional space are exposed:
///
///  * the canonical basis {τ^0, ..., τ^{p-2}, u, v} with u = cosh/cos(ετ),
///    v = sinh/sin(ετ) (polynomial: u = τ^{p-1}, v = τ^p), see `eval`;
///  * the tail basis {τ^0, ..., τ^{p-2}, I^{p-1}c, I^p c}, where c is the
///    canonical u of degree 1 and I^m the m-fold integral from 0, see
///    `tail_eval`. It is what PiecewiseFn stores; as ε → 0 it tends to
///    {.., τ^{p-1}/(p-1)!, τ^p/p!} without cancellation.
///
/// Degree 0 is allowed for the polynomial family only (the constants).
class LocalBasis {
 public:
  LocalBasis(SectionFamily family, int degree, double effective_phase);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  double effective_phase() const { return eps_; }
  const SectionFamily& family() const { return family_; }

  // Signed squared effective phase, c'' = lambda c.
  double lambda() const { return lambda_; }

  double eval(int j, double tau) const;
  double tail_eval(int j, double tau) const;

  // All tail-basis functions at tau.
  Eigen::VectorXd tail_values(double tau) const;
  Coeffs tail_values_ext(Real tau) const;

 private:
  SectionFamily family_;
  int degree_;
  double eps_;
  Real lambda_;
};

/// I^m c(τ) = Σ_k λ^k τ^{2k+m} / (2k+m)!, the m-fold integral from 0 of the
/// degree-1 "u" function; λ = ±ε² selects cosh/cos, λ = 0 gives τ^m/m!.
double iterated_integral(int m, double lambda, double tau);
Real iterated_integral_ext(int m, Real lambda, Real tau);

/// Exact piecewise function with pieces in the local section space of
/// `degree` on each interval between consecutive breakpoints. Zero-width
/// intervals carry an empty piece.
class PiecewiseFn {
 public:
  PiecewiseFn() = default;
  PiecewiseFn(SectionFamily family, int degree, std::vector<double> breakpoints, std::vector<Coeffs> pieces);
  PiecewiseFn(SectionFamily family, int degree, std::vector<double> breakpoints,
              const std::vector<Eigen::VectorXd>& pieces);

  // Zero function of the given degree on the given breakpoints.
  static PiecewiseFn zero(SectionFamily family, int degree, std::vector<double> breakpoints);

  const SectionFamily& family() const { return family_; }
  int degree() const { return degree_; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<Coeffs>& pieces() const { return pieces_; }
  std::vector<Coeffs>& pieces() { return pieces_; }
  std::size_t num_pieces() const { return pieces_.size(); }

  double width(std::size_t k) const { return breaks_[k + 1] - breaks_[k]; }
  LocalBasis local_basis(std::size_t k) const;

  // Right-continuous at interior breakpoints, left limit at the last one,
  // zero outside [first, last].
  double operator()(double x) const;

  // Value of piece k at local coordinate tau (no support logic).
  double eval_piece(std::size_t k, double tau) const;
  Real eval_piece_ext(std::size_t k, Real tau) const;

  // ∫ over [first, last].
  double integral() const;
  Real integral_ext() const;

  // Pointwise a*f + b*g for functions on identical breakpoints and degree.
  friend PiecewiseFn combine(Real a, const PiecewiseFn& f, Real b, const PiecewiseFn& g);

 private:
  SectionFamily family_;
  int degree_ = 0;
  std::vector<double> breaks_;
  std::vector<Coeffs> pieces_;
};

PiecewiseFn combine(Real a, const PiecewiseFn& f, Real b, const PiecewiseFn& g);

double basis_eval(const LocalBasis& basis, int j, double tau);
double piecewise_eval(const PiecewiseFn& f, double x);

/// Exact derivative; a polynomial degree-0 input yields the zero function.
PiecewiseFn piecewise_derivative(const PiecewiseFn& f);

/// F(x) = ∫_{first}^x f, continuous across breakpoints, degree + 1.
/// Throws ConstraintViolation if a trigonometric piece has phase ≥ π.
PiecewiseFn piecewise_antiderivative(const PiecewiseFn& f);

/// Coefficients of the local tail basis of `degree` that represent the
/// canonical basis function j (for tests and conversions).
Eigen::VectorXd canonical_in_tail(const LocalBasis& basis, int j);

}  // namespace gbspec
