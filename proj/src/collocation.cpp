#include "gbspec/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gbspec/parallel.hpp"
#include "gbspec/spectral.hpp"
#include "gbspec/symbols.hpp"

namespace gbspec {

namespace {

constexpr int kValidationGrid = 1000;

double grid_point(int j) { return static_cast<double>(j) / (kValidationGrid - 1); }

}  // namespace

std::string to_string(PhaseMode m) { return m == PhaseMode::Nested ? "nested" : "nonnested"; }

PhaseMode phase_mode_from_string(const std::string& s) {
  if (s == "nested") return PhaseMode::Nested;
  if (s == "nonnested" || s == "non-nested") return PhaseMode::NonNested;
  throw ValidationError("unknown phase mode '" + s + "'");
}

KnotVector open_uniform_knots(int n, int p) {
  if (n < 2 || p < 2) throw UsageError("knot vector needs n >= 2 and p >= 2");
  KnotVector k{n, p, std::vector<double>(n + 2 * p + 1)};
  for (int i = 1; i <= n + 2 * p + 1; ++i) {
    const int j = std::clamp(i - p - 1, 0, n);
    k.t[i - 1] = j == n ? 1.0 : static_cast<double>(j) / n;
  }
  return k;
}

double space_phase(double alpha, int n, PhaseMode mode) { return mode == PhaseMode::Nested ? alpha : n * alpha; }

double effective_phase(double alpha, int n, PhaseMode mode) { return space_phase(alpha, n, mode) / n; }

int min_feasible_n(double alpha, PhaseMode mode) {
  if (mode == PhaseMode::NonNested) return alpha < std::numbers::pi ? 2 : -1;
  return std::max(2, static_cast<int>(std::floor(alpha / std::numbers::pi)) + 1);
}

SectionFamily GBBasis::cardinal_family() const {
  if (family.tag == Family::Polynomial) return family;
  return {family.tag, effective_phase(family.phase, n(), mode)};
}

double GBBasis::eval(int i, double x, int order) const {
  if (i < 1 || i > size()) throw UsageError("basis index out of range");
  switch (order) {
    case 0: return splines[i - 1](x);
    case 1: return d1[i - 1](x);
    case 2: return d2[i - 1](x);
    default: throw UsageError("derivative order must be 0, 1 or 2");
  }
}

GBBasis gb_basis(int n, int p, SectionFamily family, PhaseMode mode) {
  family.validate();
  GBBasis b;
  b.knots = open_uniform_knots(n, p);
  b.family = family;
  b.mode = mode;
  b.space = family.tag == Family::Polynomial ? family
                                             : SectionFamily{family.tag, space_phase(family.phase, n, mode)};
  if (family.tag == Family::Trigonometric && effective_phase(family.phase, n, mode) >= std::numbers::pi) {
    const int nmin = min_feasible_n(family.phase, mode);
    throw ConstraintViolation(
        nmin < 0 ? "trigonometric phase must be below pi in non-nested mode"
                 : "trigonometric phase per interval must be below pi; smallest feasible n is " + std::to_string(nmin),
        nmin);
  }

  const std::vector<double>& t = b.knots.t;
  const int intervals = static_cast<int>(t.size()) - 1;
  const SectionFamily space = b.space;

  // degree 1: V~_i on [t_i, t_{i+1}), U~_{i+1} on [t_{i+1}, t_{i+2})
  std::vector<PiecewiseFn> level;
  for (int i = 1; i <= n + 2 * p - 1; ++i) {
    std::vector<Coeffs> pieces(intervals, Coeffs::Zero(2));
    for (int k : {i - 1, i}) {
      const double w = t[k + 1] - t[k];
      if (w <= 0.0) continue;
      const Real e = Real(space.phase) * w;
      const Real lam = space.sign() * e * e;
      const Real c1 = iterated_integral_ext(0, lam, 1), ic1 = iterated_integral_ext(1, lam, 1);
      if (k == i - 1)
        pieces[k] << 0, 1 / ic1;
      else
        pieces[k] << 1, -c1 / ic1;
    }
    level.emplace_back(space, 1, t, std::move(pieces));
  }

  std::vector<Real> delta;
  for (int q = 2; q <= p; ++q) {
    std::vector<PiecewiseFn> integrals;
    delta.assign(level.size(), 0);
    std::vector<Real> weight(level.size(), 0);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const Real total = level[i].integral_ext();
      delta[i] = weight[i] = total == 0 ? 0 : 1 / total;
      if (total == 0 && t[i] == 0.0) {
        // support collapsed onto x = 0: the normalized integral is the unit step there
        PiecewiseFn one = PiecewiseFn::zero(space, q, t);
        for (auto& c : one.pieces())
          if (c.size() > 0) c[0] = 1;
        integrals.push_back(std::move(one));
        weight[i] = 1;
      } else {
        integrals.push_back(piecewise_antiderivative(level[i]));
      }
    }
    std::vector<PiecewiseFn> next;
    for (std::size_t i = 0; i + 1 < level.size(); ++i) {
      PiecewiseFn s = combine(weight[i], integrals[i], -weight[i + 1], integrals[i + 1]);
      // exact zero outside [t_i, t_{i+q+1}]
      const double lo = t[i], hi = t[i + q + 1];
      for (int k = 0; k < intervals; ++k)
        if (s.pieces()[k].size() > 0 && (t[k] < lo || t[k + 1] > hi)) s.pieces()[k].setZero();
      next.push_back(std::move(s));
    }
    level = std::move(next);
  }
  delta.resize(n + p + 1);
  for (Real d : delta) b.delta.push_back(static_cast<double>(d));
  b.splines = std::move(level);
  for (const auto& s : b.splines) {
    b.d1.push_back(piecewise_derivative(s));
    b.d2.push_back(piecewise_derivative(b.d1.back()));
  }
  return b;
}

Eigen::VectorXd greville_abscissae(const KnotVector& knots) {
  const int n = knots.n, p = knots.p;
  Eigen::VectorXd xi(n + p - 2);
  for (int i = 1; i <= n + p - 2; ++i) {
    double s = 0.0;
    for (int j = i + 2; j <= i + p + 1; ++j) s += knots[j];
    xi[i - 1] = s / p;
  }
  return xi;
}

void ProblemCoefficients::validate() const {
  for (int j = 0; j < kValidationGrid; ++j) {
    const double x = grid_point(j);
    if (!(kappa(x) > 0.0)) throw ValidationError("kappa must be positive on [0,1] (fails at x=" + std::to_string(x) + ")");
    (void)beta(x);
    if (gamma(x) < 0.0) throw ValidationError("gamma must be non-negative on [0,1] (fails at x=" + std::to_string(x) + ")");
  }
}

GeometryMap1D GeometryMap1D::from_map(const ScalarField& G) {
  GeometryMap1D g;
  g.G = G;
  g.G1 = G.derivative();
  g.G2 = g.G1.derivative();
  return g;
}

bool GeometryMap1D::is_identity() const {
  return G.str() == "x" && G1.str() == "1" && G2.str() == "0";
}

void GeometryMap1D::validate() const {
  if (std::abs(G(0.0)) > 1e-10 || std::abs(G(1.0) - 1.0) > 1e-10)
    throw ValidationError("geometry map must send 0 to 0 and 1 to 1");
  for (int j = 0; j < kValidationGrid; ++j) {
    const double x = grid_point(j);
    if (!(G1(x) > 0.0)) throw ValidationError("geometry map is not invertible (G' <= 0 at x=" + std::to_string(x) + ")");
    (void)G2(x);
  }
}

namespace {

struct Transformed {
  double kappa, beta, gamma;
};

Transformed transform(const ProblemCoefficients& pr, const GeometryMap1D& g, double xhat) {
  const double x = g.G(xhat), d1 = g.G1(xhat), d2 = g.G2(xhat);
  if (!(d1 > 0.0)) throw ValidationError("geometry map is not invertible at x=" + std::to_string(xhat));
  const double k = pr.kappa(x);
  return {k / (d1 * d1), k * d2 / (d1 * d1 * d1) + pr.beta(x) / d1, pr.gamma(x)};
}

// Columns whose support [t_{j+1}, t_{j+p+2}] contains x (0-based column j ↔ N_{j+2}).
std::pair<int, int> column_range(const GBBasis& b, double x) {
  const int d = b.n() + b.p() - 2;
  const int cell = std::min(static_cast<int>(std::floor(x * b.n())), b.n() - 1);
  // N_i is nonzero on cell c (0-based) for i = c+1 .. c+p+1
  const int lo = std::max(0, cell + 1 - 2), hi = std::min(d - 1, cell + b.p() + 1 - 2);
  return {lo, hi};
}

}  // namespace

// Coefficients are not validated here: degenerate choices such as κ = 0 are
// useful for isolating M or H. Config loading calls ProblemCoefficients::validate.
CollocationSystem assemble(const ProblemCoefficients& problem, const GeometryMap1D& geometry, const GBBasis& basis) {
  geometry.validate();
  CollocationSystem sys;
  sys.n = basis.n();
  sys.p = basis.p();
  sys.family = basis.family;
  sys.mode = basis.mode;
  sys.identity_geometry = geometry.is_identity();
  sys.xi = greville_abscissae(basis.knots);
  const int d = static_cast<int>(sys.xi.size());
  const double n = sys.n;
  sys.K = Eigen::MatrixXd::Zero(d, d);
  sys.H = Eigen::MatrixXd::Zero(d, d);
  sys.M = Eigen::MatrixXd::Zero(d, d);
  sys.kappa_hat.resize(d);
  sys.beta_hat.resize(d);
  sys.gamma_hat.resize(d);

  parallel_for(d, [&](std::size_t r) {
    const double x = sys.xi[r];
    const Transformed c = transform(problem, geometry, x);
    sys.kappa_hat[r] = c.kappa;
    sys.beta_hat[r] = c.beta;
    sys.gamma_hat[r] = c.gamma;
    const auto [lo, hi] = column_range(basis, x);
    for (int j = lo; j <= hi; ++j) {
      sys.K(r, j) = -basis.eval(j + 2, x, 2) / (n * n);
      sys.H(r, j) = basis.eval(j + 2, x, 1) / n;
      sys.M(r, j) = basis.eval(j + 2, x, 0);
    }
  });

  sys.A = (n * n) * sys.kappa_hat.asDiagonal() * sys.K + n * sys.beta_hat.asDiagonal() * sys.H +
          sys.gamma_hat.asDiagonal() * sys.M;
  return sys;
}

Eigen::MatrixXd assemble_direct(const ProblemCoefficients& problem, const GeometryMap1D& geometry,
                                const GBBasis& basis) {
  const Eigen::VectorXd xi = greville_abscissae(basis.knots);
  const int d = static_cast<int>(xi.size());
  Eigen::MatrixXd A(d, d);
  for (int r = 0; r < d; ++r) {
    const double xh = xi[r];
    const double x = geometry.G(xh), g1 = geometry.G1(xh), g2 = geometry.G2(xh);
    const double k = problem.kappa(x), be = problem.beta(x), ga = problem.gamma(x);
    for (int j = 0; j < d; ++j) {
      const double N = basis.eval(j + 2, xh, 0), N1 = basis.eval(j + 2, xh, 1), N2 = basis.eval(j + 2, xh, 2);
      // u' = N1/G', u'' = (N2 - u' G'')/G'^2 in the physical variable
      const double u1 = N1 / g1;
      const double u2 = (N2 - u1 * g2) / (g1 * g1);
      A(r, j) = -k * u2 + be * u1 + ga * N;
    }
  }
  return A;
}

int numerical_rank(const Eigen::MatrixXd& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  return static_cast<int>((s.array() > rel_tol * s[0]).count());
}

StructureReport structure_report(const CollocationSystem& sys, double tol) {
  StructureReport rep;
  const int p = sys.p, n = sys.n, d = sys.order();
  rep.rank_bound = 2 * (3 * p / 2) - 2;
  rep.central_first = 3 * p / 2;
  rep.central_last = n + p - 1 - 3 * p / 2;
  rep.has_central_rows = rep.central_first <= rep.central_last;
  if (!rep.has_central_rows) return rep;

  SectionFamily eff = sys.family;
  if (eff.tag != Family::Polynomial) eff.phase = effective_phase(sys.family.phase, n, sys.mode);
  const CardinalSpline cs = cardinal_spline(eff, p);
  const Eigen::MatrixXd Tf = toeplitz(toeplitz_spec(symbol_fn(SymbolKind::F, cs)), d);
  const Eigen::MatrixXd Tg = toeplitz(toeplitz_spec(symbol_fn(SymbolKind::G, cs)), d);
  const Eigen::MatrixXd Th = toeplitz(toeplitz_spec(symbol_fn(SymbolKind::H, cs)), d);
  const Eigen::MatrixXd R = sys.K - Tf, Q = sys.H - Tg, S = sys.M - Th;

  for (int i = rep.central_first; i <= rep.central_last; ++i) {
    const int r = i - 1;
    rep.central_row_error = std::max({rep.central_row_error, R.row(r).cwiseAbs().maxCoeff(),
                                      Q.row(r).cwiseAbs().maxCoeff(), S.row(r).cwiseAbs().maxCoeff()});
  }

  // submatrix of rows/cols p..n-1 (1-based)
  const int lo = p - 1, len = n - p;
  if (len >= 1) {
    auto check = [&](const Eigen::MatrixXd& X, double sign) {
      const Eigen::MatrixXd B = X.block(lo, lo, len, len);
      for (int i = 0; i + 1 < len; ++i)
        for (int j = 0; j + 1 < len; ++j)
          rep.toeplitz_error = std::max(rep.toeplitz_error, std::abs(B(i, j) - B(i + 1, j + 1)));
      rep.symmetry_error = std::max(rep.symmetry_error, (B - sign * B.transpose()).cwiseAbs().maxCoeff());
    };
    check(sys.K, 1.0);
    check(sys.M, 1.0);
    check(sys.H, -1.0);
  }
  rep.is_central_toeplitz = rep.toeplitz_error <= tol && rep.symmetry_error <= tol && rep.central_row_error <= tol;
  rep.rank_R = numerical_rank(R);
  rep.rank_Q = numerical_rank(Q);
  rep.rank_S = numerical_rank(S);
  rep.rank_ok = rep.rank_R <= rep.rank_bound;
  return rep;
}

}  // namespace gbspec
