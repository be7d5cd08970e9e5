#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gbspec/cardinal.hpp"

namespace gbspec {

enum class SymbolKind { H, G, F };

std::string to_string(SymbolKind k);
SymbolKind symbol_kind_from_string(const std::string& name);

/// Trigonometric polynomial built from samples of φ_p (H), φ_p' (G) or
/// -φ_p'' (F) at the points (p+1)/2 - k, k = 0..⌊p/2⌋.
///
///   H, F: s(θ) = c_0 + 2 Σ_k c_k cos(kθ)
///   G:    s(θ) = -2 Σ_k c_k sin(kθ)
struct SymbolFn {
  SymbolKind kind = SymbolKind::H;
  int p = 0;
  SectionFamily family;
  std::vector<double> coeffs;

  double operator()(double theta) const;
  int bandwidth() const { return static_cast<int>(coeffs.size()) - 1; }

  // Entry generator of the real Toeplitz matrix sampled from the same
  // spline values: the (i, j) entry is toeplitz_coeff(i - j). For G this is
  // φ_p'((p+1)/2 + m), which is odd in m.
  double toeplitz_coeff(int m) const;
};

SymbolFn symbol_fn(SymbolKind kind, int p, SectionFamily family);
SymbolFn symbol_fn(SymbolKind kind, const CardinalSpline& cs);

/// Partial sum over |k| ≤ K of the Poisson-summation form. Needs p ≥ 3 (H),
/// p ≥ 4 (G), p ≥ 5 (F).
double symbol_series(SymbolKind kind, int p, SectionFamily family, double theta, int K);

/// Tabulated low-degree closed forms: h1, h2, g2, f2, g3, f3, f4.
double symbol_closed_form(SymbolKind kind, int p, SectionFamily family, double theta);
bool has_closed_form(SymbolKind kind, int p);

/// Maximum of a 2π-periodic function over [-π, π]: uniform grid followed by
/// golden-section refinement around the best grid point.
double maximize_periodic(const std::function<double(double)>& fn, int grid = 4096);
double symbol_max(const SymbolFn& s);

/// f_p(π) / max f_p.
double decay_ratio(int p, SectionFamily family);

/// Inclusive uniform grid of `count` points on [-π, π].
std::vector<double> theta_grid(int count);

enum class BoundStatus { Proved, Conjectured, NotApplicable };
std::string to_string(BoundStatus s);

struct BoundReport {
  int p = 0;
  SectionFamily family;
  int grid_size = 0;
  double max_h = 0.0, min_h = 0.0;
  double max_f = 0.0, min_f = 0.0;  // NaN when p < 2
  int upper_checked = 0;
  int upper_violations = 0;
  int lower_checked = 0;
  int lower_violations = 0;
  BoundStatus lower_status = BoundStatus::NotApplicable;
  double lower_constant = 0.0;  // the h-bound value
  double f_at_zero = 0.0, f_first_diff = 0.0, f_second_diff = 0.0;
  double decay = 0.0;
  // Largest r_p-type residual h_p - (leading term of the series), p ≥ 3.
  double max_residual = 0.0;
};

/// Checks h_p ≤ 1 (p ≥ 2) and f_p ≤ 2 - 2cos θ (p ≥ 4) plus the family lower
/// bounds on the grid, with an absolute slack of 1e-12.
BoundReport bounds_report(int p, SectionFamily family, int grid_size = 4096);

}  // namespace gbspec
