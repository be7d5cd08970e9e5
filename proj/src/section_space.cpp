#include "gbspec/section_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gbspec/errors.hpp"

namespace gbspec {

std::string to_string(Family f) {
  switch (f) {
    case Family::Polynomial: return "polynomial";
    case Family::Hyperbolic: return "hyperbolic";
    case Family::Trigonometric: return "trigonometric";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  if (name == "polynomial" || name == "P") return Family::Polynomial;
  if (name == "hyperbolic" || name == "H") return Family::Hyperbolic;
  if (name == "trigonometric" || name == "T") return Family::Trigonometric;
  throw ValidationError("unknown family '" + name + "'");
}

int SectionFamily::sign() const {
  switch (tag) {
    case Family::Hyperbolic: return 1;
    case Family::Trigonometric: return -1;
    default: return 0;
  }
}

void SectionFamily::validate() const {
  if (tag != Family::Polynomial && !(phase > 0.0))
    throw ValidationError(to_string(tag) + " phase must be positive");
}

namespace {

template <class T>
T iterated_integral_impl(int m, T lambda, T tau) {
  T term = 1;
  for (int j = 1; j <= m; ++j) term *= tau / j;
  T sum = term;
  if (lambda == 0 || tau == 0) return sum;
  const T step = lambda * tau * tau;
  const T tiny = std::numeric_limits<T>::epsilon() / 100;
  for (int k = 0; k < 2000; ++k) {
    term *= step / ((2 * k + m + 1) * T(2 * k + m + 2));
    sum += term;
    if (std::abs(term) <= tiny * std::abs(sum) && (2 * k + m + 2) > std::abs(step)) break;
  }
  return sum;
}

}  // namespace

double iterated_integral(int m, double lambda, double tau) { return iterated_integral_impl(m, lambda, tau); }

Real iterated_integral_ext(int m, Real lambda, Real tau) { return iterated_integral_impl(m, lambda, tau); }

LocalBasis::LocalBasis(SectionFamily family, int degree, double effective_phase)
    : family_(family), degree_(degree), eps_(effective_phase) {
  if (degree < 0 || (degree == 0 && family.tag != Family::Polynomial))
    throw UsageError("local basis degree out of range");
  lambda_ = family.sign() * Real(eps_) * Real(eps_);
}

double LocalBasis::tail_eval(int j, double tau) const {
  if (j < 0 || j > degree_) throw UsageError("basis index out of range");
  if (degree_ == 0) return 1.0;
  if (j <= degree_ - 2) return std::pow(tau, j);
  return iterated_integral(j, lambda(), tau);
}

Eigen::VectorXd LocalBasis::tail_values(double tau) const {
  Eigen::VectorXd out(size());
  if (degree_ == 0) {
    out[0] = 1.0;
    return out;
  }
  double pw = 1.0;
  for (int j = 0; j <= degree_ - 2; ++j, pw *= tau) out[j] = pw;
  out[degree_ - 1] = iterated_integral(degree_ - 1, lambda(), tau);
  out[degree_] = iterated_integral(degree_, lambda(), tau);
  return out;
}

Coeffs LocalBasis::tail_values_ext(Real tau) const {
  Coeffs out(size());
  if (degree_ == 0) {
    out[0] = 1;
    return out;
  }
  Real pw = 1;
  for (int j = 0; j <= degree_ - 2; ++j, pw *= tau) out[j] = pw;
  out[degree_ - 1] = iterated_integral_ext(degree_ - 1, lambda_, tau);
  out[degree_] = iterated_integral_ext(degree_, lambda_, tau);
  return out;
}

double LocalBasis::eval(int j, double tau) const {
  if (j < 0 || j > degree_) throw UsageError("basis index out of range");
  if (j <= degree_ - 2 || family_.tag == Family::Polynomial) return std::pow(tau, j);
  const bool u_slot = (j == degree_ - 1);
  const double z = eps_ * tau;
  if (family_.tag == Family::Hyperbolic) return u_slot ? std::cosh(z) : std::sinh(z);
  return u_slot ? std::cos(z) : std::sin(z);
}

Eigen::VectorXd canonical_in_tail(const LocalBasis& basis, int j) {
  const int p = basis.degree();
  if (j < 0 || j > p) throw UsageError("basis index out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(p + 1);
  if (p == 0) {
    c[0] = 1.0;
    return c;
  }
  if (j <= p - 2) {
    c[j] = 1.0;
    return c;
  }
  if (basis.family().tag == Family::Polynomial) {
    c[j] = std::tgamma(j + 1.0);
    return c;
  }
  // u = Σ_k λ^k τ^{2k}/(2k)!, v = ε Σ_k λ^k τ^{2k+1}/(2k+1)!: keep the
  // monomials of degree ≤ p-2, the tail is λ^{k0} I^{m0} c with m0 ∈ {p-1, p}.
  const double lam = basis.lambda();
  const int offset = (j == p - 1) ? 0 : 1;
  const double scale = (j == p - 1) ? 1.0 : basis.effective_phase();
  double lam_pow = 1.0;
  for (int k = 0;; ++k) {
    const int deg = 2 * k + offset;
    if (deg >= p - 1) {
      c[deg] += scale * lam_pow;
      break;
    }
    c[deg] += scale * lam_pow / std::tgamma(deg + 1.0);
    lam_pow *= lam;
  }
  return c;
}

double basis_eval(const LocalBasis& basis, int j, double tau) {
  if (tau < 0.0 || tau > 1.0) throw UsageError("local coordinate outside [0,1]");
  return basis.eval(j, tau);
}

PiecewiseFn::PiecewiseFn(SectionFamily family, int degree, std::vector<double> breakpoints,
                         const std::vector<Eigen::VectorXd>& pieces)
    : PiecewiseFn(family, degree, std::move(breakpoints), [&] {
        std::vector<Coeffs> ext;
        for (const auto& c : pieces) ext.push_back(c.cast<Real>());
        return ext;
      }()) {}

PiecewiseFn::PiecewiseFn(SectionFamily family, int degree, std::vector<double> breakpoints,
                         std::vector<Coeffs> pieces)
    : family_(family), degree_(degree), breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breaks_.size() < 2) throw UsageError("piecewise function needs at least two breakpoints");
  if (pieces_.size() != breaks_.size() - 1) throw UsageError("piece count must equal breakpoints - 1");
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const double w = width(k);
    if (w < 0.0) throw UsageError("breakpoints must be non-decreasing");
    if (w == 0.0) {
      pieces_[k].resize(0);
    } else if (pieces_[k].size() != degree_ + 1) {
      throw UsageError("piece size must be degree + 1");
    }
  }
}

PiecewiseFn PiecewiseFn::zero(SectionFamily family, int degree, std::vector<double> breakpoints) {
  std::vector<Coeffs> pieces(breakpoints.size() - 1, Coeffs::Zero(degree + 1));
  return PiecewiseFn(family, degree, std::move(breakpoints), std::move(pieces));
}

LocalBasis PiecewiseFn::local_basis(std::size_t k) const {
  return LocalBasis(family_, degree_, family_.phase * width(k));
}

Real PiecewiseFn::eval_piece_ext(std::size_t k, Real tau) const {
  const auto& c = pieces_[k];
  if (c.size() == 0) return 0;
  return c.dot(local_basis(k).tail_values_ext(tau));
}

double PiecewiseFn::eval_piece(std::size_t k, double tau) const { return static_cast<double>(eval_piece_ext(k, tau)); }

double PiecewiseFn::operator()(double x) const {
  if (breaks_.empty() || x < breaks_.front() || x > breaks_.back()) return 0.0;
  if (x == breaks_.back()) {
    for (std::size_t k = pieces_.size(); k-- > 0;)
      if (width(k) > 0.0) return eval_piece(k, 1.0);
    return 0.0;
  }
  // first breakpoint strictly greater than x; the interval before it has positive width
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return static_cast<double>(eval_piece_ext(k, (Real(x) - breaks_[k]) / width(k)));
}

double PiecewiseFn::integral() const { return static_cast<double>(integral_ext()); }

Real PiecewiseFn::integral_ext() const {
  Real total = 0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const auto& c = pieces_[k];
    if (c.size() == 0) continue;
    const LocalBasis b = LocalBasis(family_, degree_ + 1, family_.phase * width(k));
    // ∫_0^1 of the tail basis of degree p equals the tail basis of degree p+1 at 1, shifted
    const Coeffs up = b.tail_values_ext(1);
    Real s = 0;
    for (int j = 0; j < c.size(); ++j) {
      if (degree_ == 0) {
        s += c[j];
      } else if (j <= degree_ - 2) {
        s += c[j] / (j + 1);
      } else {
        s += c[j] * up[j + 1];
      }
    }
    total += s * width(k);
  }
  return total;
}

PiecewiseFn combine(Real a, const PiecewiseFn& f, Real b, const PiecewiseFn& g) {
  if (f.breaks_ != g.breaks_ || f.degree_ != g.degree_ || !(f.family_ == g.family_))
    throw UsageError("combine: incompatible piecewise functions");
  PiecewiseFn out = f;
  for (std::size_t k = 0; k < out.pieces_.size(); ++k)
    if (out.pieces_[k].size() > 0) out.pieces_[k] = a * f.pieces_[k] + b * g.pieces_[k];
  return out;
}

double piecewise_eval(const PiecewiseFn& f, double x) { return f(x); }

PiecewiseFn piecewise_derivative(const PiecewiseFn& f) {
  const int p = f.degree();
  const bool poly = f.family().tag == Family::Polynomial;
  if (p == 0) return PiecewiseFn::zero(f.family(), 0, f.breakpoints());
  const int q = (p == 1 && !poly) ? 1 : p - 1;
  std::vector<Coeffs> out(f.num_pieces());
  for (std::size_t k = 0; k < f.num_pieces(); ++k) {
    const auto& c = f.pieces()[k];
    if (c.size() == 0) continue;
    const Real w = f.width(k);
    Coeffs d = Coeffs::Zero(q + 1);
    if (p == 1) {
      // a c + b I c  ->  b c + a λ I c
      if (poly) {
        d[0] = c[1];
      } else {
        d[0] = c[1];
        d[1] = c[0] * f.family().sign() * Real(f.family().phase * w) * Real(f.family().phase * w);
      }
    } else {
      for (int j = 1; j <= p - 2; ++j) d[j - 1] = j * c[j];
      // I^{p-1}c -> I^{p-2}c, I^p c -> I^{p-1}c
      d[q - 1] += c[p - 1];
      d[q] += c[p];
    }
    out[k] = d / w;
  }
  return PiecewiseFn(f.family(), q, f.breakpoints(), std::move(out));
}

PiecewiseFn piecewise_antiderivative(const PiecewiseFn& f) {
  const int p = f.degree();
  const int q = p + 1;
  std::vector<Coeffs> out(f.num_pieces());
  Real running = 0;
  for (std::size_t k = 0; k < f.num_pieces(); ++k) {
    const auto& c = f.pieces()[k];
    if (c.size() == 0) continue;
    const double w = f.width(k);
    if (f.family().tag == Family::Trigonometric && f.family().phase * w >= std::numbers::pi)
      throw ConstraintViolation("trigonometric effective phase must be below pi");
    Coeffs a = Coeffs::Zero(q + 1);
    if (p == 0) {
      a[1] = c[0];
    } else {
      for (int j = 0; j <= p - 2; ++j) a[j + 1] = c[j] / (j + 1);
      // every tail function shifts one slot up: I^m c -> I^{m+1} c
      a[q - 1] += c[p - 1];
      a[q] += c[p];
    }
    a *= Real(w);
    a[0] += running;
    out[k] = std::move(a);
    // value at the right end of this piece
    const LocalBasis b(f.family(), q, f.family().phase * w);
    running = out[k].dot(b.tail_values_ext(1));
  }
  return PiecewiseFn(f.family(), q, f.breakpoints(), std::move(out));
}

}  // namespace gbspec
