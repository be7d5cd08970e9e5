#include "gbspec/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gbspec/errors.hpp"

namespace gbspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1e-12;

int min_degree(SymbolKind kind) { return kind == SymbolKind::H ? 1 : 2; }

}  // namespace

std::string to_string(SymbolKind k) {
  switch (k) {
    case SymbolKind::H: return "h";
    case SymbolKind::G: return "g";
    case SymbolKind::F: return "f";
  }
  return "?";
}

SymbolKind symbol_kind_from_string(const std::string& name) {
  if (name == "h" || name == "H") return SymbolKind::H;
  if (name == "g" || name == "G") return SymbolKind::G;
  if (name == "f" || name == "F") return SymbolKind::F;
  throw ValidationError("unknown symbol kind '" + name + "'");
}

std::string to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Proved: return "PROVED";
    case BoundStatus::Conjectured: return "CONJECTURED";
    case BoundStatus::NotApplicable: return "N/A";
  }
  return "?";
}

double SymbolFn::operator()(double theta) const {
  double s = 0.0;
  if (kind == SymbolKind::G) {
    for (std::size_t k = 1; k < coeffs.size(); ++k) s -= 2.0 * coeffs[k] * std::sin(k * theta);
    return s;
  }
  for (std::size_t k = coeffs.size(); k-- > 1;) s += 2.0 * coeffs[k] * std::cos(k * theta);
  return s + coeffs[0];
}

double SymbolFn::toeplitz_coeff(int m) const {
  const int b = bandwidth();
  if (m < -b || m > b) return 0.0;
  if (kind == SymbolKind::G) return m > 0 ? -coeffs[m] : coeffs[-m];
  return coeffs[std::abs(m)];
}

SymbolFn symbol_fn(SymbolKind kind, const CardinalSpline& cs) {
  if (cs.p < min_degree(kind)) throw UsageError("degree too small for symbol " + to_string(kind));
  SymbolFn s;
  s.kind = kind;
  s.p = cs.p;
  s.family = cs.family;
  const int order = kind == SymbolKind::H ? 0 : (kind == SymbolKind::G ? 1 : 2);
  const PiecewiseFn d = cardinal_derivative_direct(cs, order);
  const double sign = kind == SymbolKind::F ? -1.0 : 1.0;
  for (int k = 0; k <= cs.p / 2; ++k) s.coeffs.push_back(sign * d(cs.center() - k));
  if (kind == SymbolKind::G) s.coeffs[0] = 0.0;
  return s;
}

SymbolFn symbol_fn(SymbolKind kind, int p, SectionFamily family) {
  if (p < min_degree(kind)) throw UsageError("degree too small for symbol " + to_string(kind));
  return symbol_fn(kind, cardinal_spline(family, p));
}

double symbol_series(SymbolKind kind, int p, SectionFamily family, double theta, int K) {
  const int need = kind == SymbolKind::H ? 3 : (kind == SymbolKind::G ? 4 : 5);
  if (p < need) throw UsageError("series form needs a larger degree; use the finite sum");
  if (K < 1) throw UsageError("truncation must be at least 1");
  // accumulate from the outside in to keep the small tail terms
  double sum = 0.0;
  for (int a = K; a >= 0; --a) {
    for (int k : {a, -a}) {
      const double x = 0.5 * theta + k * kPi;
      const double r1 = fourier_phi1_real(family, 2.0 * x);
      const double s = sinc(x);
      switch (kind) {
        case SymbolKind::H: sum += r1 * std::pow(s, p - 1); break;
        case SymbolKind::G: sum -= 2.0 * r1 * std::pow(s, p - 2) * std::sin(x); break;
        case SymbolKind::F: {
          const double sx = std::sin(x);
          sum += 4.0 * r1 * std::pow(s, p - 3) * sx * sx;
          break;
        }
      }
      if (a == 0) break;
    }
  }
  return sum;
}

bool has_closed_form(SymbolKind kind, int p) {
  switch (kind) {
    case SymbolKind::H: return p == 1 || p == 2;
    case SymbolKind::G: return p == 2 || p == 3;
    case SymbolKind::F: return p >= 2 && p <= 4;
  }
  return false;
}

double symbol_closed_form(SymbolKind kind, int p, SectionFamily family, double theta) {
  if (!has_closed_form(kind, p)) throw UsageError("no closed form for this symbol and degree");
  const double a = family.phase;
  const double c = std::cos(theta), s = std::sin(theta);
  const Family fam = family.tag;

  auto h1 = [&] {
    if (fam == Family::Trigonometric) return (a / 2) / std::tan(a / 2);
    if (fam == Family::Hyperbolic) return (a / 2) / std::tanh(a / 2);
    return 1.0;
  };
  auto h2 = [&] {
    if (fam == Family::Trigonometric)
      return (std::cos(a / 2) - 1) / (std::cos(a) - 1) * c - (std::cos(a / 2) - std::cos(a)) / (std::cos(a) - 1);
    if (fam == Family::Hyperbolic)
      return (std::cosh(a / 2) - 1) / (std::cosh(a) - 1) * c -
             (std::cosh(a / 2) - std::cosh(a)) / (std::cosh(a) - 1);
    return 0.25 * c + 0.75;
  };

  switch (kind) {
    case SymbolKind::H: return p == 1 ? h1() : h2();
    case SymbolKind::G:
      if (p == 3) return -s;
      if (fam == Family::Trigonometric) return a * std::sin(a / 2) / (std::cos(a) - 1) * s;
      if (fam == Family::Hyperbolic) return -a * std::sinh(a / 2) / (std::cosh(a) - 1) * s;
      return -s;
    case SymbolKind::F:
      if (p == 2) {
        if (fam == Family::Trigonometric) return a * a * std::cos(a / 2) / (1 - std::cos(a)) * (1 - c);
        if (fam == Family::Hyperbolic) return a * a * std::cosh(a / 2) / (std::cosh(a) - 1) * (1 - c);
        return 2 - 2 * c;
      }
      if (p == 3) {
        if (fam == Family::Trigonometric) return a / std::tan(a / 2) * (1 - c);
        if (fam == Family::Hyperbolic) return a / std::tanh(a / 2) * (1 - c);
        return 2 - 2 * c;
      }
      return (2 - 2 * c) * h2();
  }
  return 0.0;
}

std::vector<double> theta_grid(int count) {
  if (count < 2) throw UsageError("theta grid needs at least two points");
  std::vector<double> g(count);
  for (int j = 0; j < count; ++j) g[j] = -kPi + 2.0 * kPi * j / (count - 1);
  g.back() = kPi;
  return g;
}

double maximize_periodic(const std::function<double(double)>& fn, int grid) {
  const std::vector<double> pts = theta_grid(grid + 1);
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double v = fn(pts[j]);
    if (v > best_val) {
      best_val = v;
      best = j;
    }
  }
  const double h = pts[1] - pts[0];
  double lo = pts[best] - h, hi = pts[best] + h;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = fn(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = fn(x1);
    }
  }
  return std::max({best_val, f1, f2});
}

double symbol_max(const SymbolFn& s) {
  return maximize_periodic([&](double t) { return s(t); });
}

double decay_ratio(int p, SectionFamily family) {
  const SymbolFn f = symbol_fn(SymbolKind::F, p, family);
  return f(kPi) / symbol_max(f);
}

namespace {

// Constant C_Q with h_p ≥ C_Q (2/π)^{p-1}; the polynomial case uses (2/π)^2.
double lower_constant(SectionFamily family) {
  const double a = family.phase;
  switch (family.tag) {
    case Family::Hyperbolic: {
      const double ct = 1.0 / std::tanh(a / 2);
      return a * a * ct * ct / (a * a + kPi * kPi);
    }
    case Family::Trigonometric: {
      const double ct = 1.0 / std::tan(a / 2);
      return a * a * ct * ct / (kPi * kPi - a * a);
    }
    case Family::Polynomial: return 4.0 / (kPi * kPi);
  }
  return 0.0;
}

}  // namespace

BoundReport bounds_report(int p, SectionFamily family, int grid_size) {
  if (grid_size < 64) throw UsageError("bounds grid needs at least 64 points");
  if (p < 1) throw UsageError("degree must be at least 1");
  family.validate();
  BoundReport r;
  r.p = p;
  r.family = family;
  r.grid_size = grid_size;

  const CardinalSpline cs = cardinal_spline(family, p);
  const SymbolFn h = symbol_fn(SymbolKind::H, cs);
  const bool has_f = p >= 2;
  SymbolFn f;
  if (has_f) f = symbol_fn(SymbolKind::F, cs);

  if (family.tag == Family::Polynomial || (family.tag == Family::Hyperbolic && p % 2 == 1))
    r.lower_status = BoundStatus::Proved;
  else
    r.lower_status = BoundStatus::Conjectured;

  const double C = lower_constant(family);
  const double two_over_pi = 2.0 / kPi;
  r.lower_constant = C * std::pow(two_over_pi, p - 1);
  const bool f_lower = has_f && (family.tag == Family::Polynomial ? p >= 2 : p >= 3);
  const double f_constant = C * std::pow(two_over_pi, p - 3);

  r.max_h = -std::numeric_limits<double>::infinity();
  r.min_h = std::numeric_limits<double>::infinity();
  r.max_f = has_f ? -std::numeric_limits<double>::infinity() : std::nan("");
  r.min_f = has_f ? std::numeric_limits<double>::infinity() : std::nan("");

  for (double t : theta_grid(grid_size)) {
    const double hv = h(t);
    const double w = 2.0 - 2.0 * std::cos(t);
    r.max_h = std::max(r.max_h, hv);
    r.min_h = std::min(r.min_h, hv);
    if (p >= 2) {
      ++r.upper_checked;
      if (hv > 1.0 + kSlack) ++r.upper_violations;
    }
    ++r.lower_checked;
    if (hv < r.lower_constant - kSlack) ++r.lower_violations;
    if (has_f) {
      const double fv = f(t);
      r.max_f = std::max(r.max_f, fv);
      r.min_f = std::min(r.min_f, fv);
      if (p >= 4) {
        ++r.upper_checked;
        if (fv > w + kSlack) ++r.upper_violations;
      }
      if (f_lower) {
        ++r.lower_checked;
        if (fv < w * f_constant - kSlack) ++r.lower_violations;
      }
    }
    if (p >= 3) {
      const double lead = fourier_phi1_real(family, t) * std::pow(sinc(0.5 * t), p - 1);
      r.max_residual = std::max(r.max_residual, std::abs(hv - lead));
    }
  }

  if (has_f) {
    const double d = 1e-3;
    const double f0 = f(0.0), fp = f(d), fm = f(-d);
    r.f_at_zero = f0;
    r.f_first_diff = (fp - fm) / (2 * d);
    r.f_second_diff = (fp - 2 * f0 + fm) / (d * d);
    r.decay = f(kPi) / symbol_max(f);
  } else {
    r.f_at_zero = r.f_first_diff = r.f_second_diff = r.decay = std::nan("");
  }
  return r;
}

}  // namespace gbspec
