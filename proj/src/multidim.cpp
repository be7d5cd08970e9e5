#include "gbspec/multidim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gbspec/parallel.hpp"

namespace gbspec {

namespace {

std::string var_name(int a) { return "x" + std::to_string(a + 1); }

Env point_env(const Eigen::VectorXd& x) {
  Env env;
  for (int a = 0; a < x.size(); ++a) env[var_name(a)] = x[a];
  return env;
}

// Uniform grid of `per_axis`^d points in [0,1]^d, endpoints included.
std::vector<Eigen::VectorXd> validation_grid(int d) {
  const int per_axis = d == 2 ? 21 : (d == 3 ? 11 : 101);
  std::vector<Eigen::VectorXd> pts;
  long total = 1;
  for (int a = 0; a < d; ++a) total *= per_axis;
  for (long r = 0; r < total; ++r) {
    Eigen::VectorXd x(d);
    long rem = r;
    for (int a = d - 1; a >= 0; --a) {
      x[a] = static_cast<double>(rem % per_axis) / (per_axis - 1);
      rem /= per_axis;
    }
    pts.push_back(x);
  }
  return pts;
}

}  // namespace

long linearize(const MultiIndex& idx, const MultiIndex& lo, const MultiIndex& hi) {
  if (idx.size() != lo.size() || idx.size() != hi.size()) throw UsageError("multi-index dimension mismatch");
  long r = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < lo[a] || idx[a] > hi[a]) throw UsageError("multi-index out of range");
    r = r * (hi[a] - lo[a] + 1) + (idx[a] - lo[a]);
  }
  return r;
}

MultiIndex delinearize(long rank, const MultiIndex& lo, const MultiIndex& hi) {
  if (lo.size() != hi.size()) throw UsageError("multi-index dimension mismatch");
  long total = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) total *= hi[a] - lo[a] + 1;
  if (rank < 0 || rank >= total) throw UsageError("rank out of range");
  MultiIndex idx(lo.size());
  for (std::size_t a = lo.size(); a-- > 0;) {
    const long m = hi[a] - lo[a] + 1;
    idx[a] = lo[a] + static_cast<int>(rank % m);
    rank /= m;
  }
  return idx;
}

ProblemMD ProblemMD::laplacian(int d, int p) {
  ProblemMD pr;
  pr.d = d;
  pr.K.assign(d, std::vector<Expr>(d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) pr.K[a][b] = make_const(a == b ? 1.0 : 0.0);
  pr.beta.assign(d, make_const(0.0));
  pr.gamma = make_const(0.0);
  pr.p.assign(d, p);
  pr.family.assign(d, SectionFamily::polynomial());
  pr.nu.assign(d, 1);
  return pr;
}

void ProblemMD::validate() const {
  if (d < 2 || d > 3) throw ValidationError("dimension must be 2 or 3");
  auto sized = [&](std::size_t s) { return s == static_cast<std::size_t>(d); };
  if (!sized(K.size()) || !sized(beta.size()) || !sized(p.size()) || !sized(family.size()) || !sized(nu.size()))
    throw ValidationError("per-direction data must have one entry per dimension");
  if (!gamma) throw ValidationError("gamma is missing");
  for (int a = 0; a < d; ++a) {
    if (!sized(K[a].size())) throw ValidationError("K must be d x d");
    if (p[a] < 2) throw ValidationError("degrees must be at least 2");
    if (nu[a] < 1) throw ValidationError("grid ratios must be positive");
    family[a].validate();
    for (int b = 0; b < d; ++b)
      if (!K[a][b] || to_string(K[a][b]) != to_string(K[b][a])) throw ValidationError("K must be symmetric");
  }
  for (const auto& x : validation_grid(d)) {
    const Env env = point_env(x);
    Eigen::MatrixXd k(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) k(a, b) = evaluate(K[a][b], env);
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) throw ValidationError("K is not positive definite on [0,1]^d");
    for (int a = 0; a < d; ++a) (void)evaluate(beta[a], env);
    if (evaluate(gamma, env) < 0.0) throw ValidationError("gamma must be non-negative");
  }
}

GeometryMapMD GeometryMapMD::identity(int d) {
  std::vector<Expr> G;
  for (int a = 0; a < d; ++a) G.push_back(make_var(var_name(a)));
  return from_maps(std::move(G));
}

GeometryMapMD GeometryMapMD::from_maps(std::vector<Expr> G) {
  GeometryMapMD g;
  g.d = static_cast<int>(G.size());
  g.G = std::move(G);
  g.jac.assign(g.d, std::vector<Expr>(g.d));
  g.hess.assign(g.d, std::vector<std::vector<Expr>>(g.d, std::vector<Expr>(g.d)));
  for (int c = 0; c < g.d; ++c)
    for (int a = 0; a < g.d; ++a) {
      g.jac[c][a] = differentiate(g.G[c], var_name(a));
      for (int b = 0; b < g.d; ++b) g.hess[c][a][b] = differentiate(g.jac[c][a], var_name(b));
    }
  return g;
}

bool GeometryMapMD::is_identity() const {
  for (int c = 0; c < d; ++c) {
    if (to_string(G[c]) != var_name(c)) return false;
    for (int a = 0; a < d; ++a) {
      if (to_string(jac[c][a]) != (a == c ? "1" : "0")) return false;
      for (int b = 0; b < d; ++b)
        if (to_string(hess[c][a][b]) != "0") return false;
    }
  }
  return true;
}

Eigen::VectorXd GeometryMapMD::map(const Eigen::VectorXd& t) const {
  const Env env = point_env(t);
  Eigen::VectorXd x(d);
  for (int c = 0; c < d; ++c) x[c] = evaluate(G[c], env);
  return x;
}

Eigen::MatrixXd GeometryMapMD::jacobian(const Eigen::VectorXd& t) const {
  const Env env = point_env(t);
  Eigen::MatrixXd J(d, d);
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a) J(c, a) = evaluate(jac[c][a], env);
  return J;
}

void GeometryMapMD::validate() const {
  if (d == 3 && !is_identity()) throw ValidationError("three-dimensional problems support the identity map only");
  double sign = 0.0;
  for (const auto& t : validation_grid(d)) {
    const double det = jacobian(t).determinant();
    if (!(std::abs(det) > 1e-12)) throw ValidationError("geometry Jacobian is singular on [0,1]^d");
    if (sign == 0.0) sign = det > 0 ? 1.0 : -1.0;
    if (det * sign < 0.0) throw ValidationError("geometry Jacobian changes orientation");
  }
}

// Coefficients are checked when configs are loaded, not here (see assemble).
CollocationSystemMD assemble_md(const ProblemMD& problem, const GeometryMapMD& geometry, int n, int cap) {
  geometry.validate();
  const int d = problem.d;
  if (d < 2 || d > 3) throw UsageError("dimension must be 2 or 3");
  if (problem.K.size() != static_cast<std::size_t>(d) || problem.beta.size() != static_cast<std::size_t>(d) ||
      problem.p.size() != static_cast<std::size_t>(d) || problem.family.size() != static_cast<std::size_t>(d) ||
      problem.nu.size() != static_cast<std::size_t>(d) || !problem.gamma)
    throw UsageError("per-direction data must have one entry per dimension");
  if (geometry.d != d) throw ValidationError("geometry dimension does not match the problem");

  CollocationSystemMD sys;
  sys.d = d;
  std::vector<GBBasis> bases;
  std::vector<Eigen::MatrixXd> V0, V1, V2;  // raw N, N', N'' at Greville points
  long total = 1;
  for (int a = 0; a < d; ++a) {
    const int na = problem.nu[a] * n;
    bases.push_back(gb_basis(na, problem.p[a], problem.family[a], problem.mode));
    sys.n.push_back(na);
    sys.orders.push_back(na + problem.p[a] - 2);
    sys.xi.push_back(greville_abscissae(bases.back().knots));
    total *= sys.orders.back();
    const int m = sys.orders.back();
    Eigen::MatrixXd v0(m, m), v1(m, m), v2(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        v0(i, j) = bases.back().eval(j + 2, sys.xi.back()[i], 0);
        v1(i, j) = bases.back().eval(j + 2, sys.xi.back()[i], 1);
        v2(i, j) = bases.back().eval(j + 2, sys.xi.back()[i], 2);
      }
    V0.push_back(v0);
    V1.push_back(v1);
    V2.push_back(v2);
  }
  if (total > cap) throw UsageError("multivariate system order exceeds the cap");

  const MultiIndex lo(d, 0);
  MultiIndex hi(d);
  for (int a = 0; a < d; ++a) hi[a] = sys.orders[a] - 1;
  const bool identity = geometry.is_identity();

  sys.A = Eigen::MatrixXd::Zero(total, total);
  parallel_for(static_cast<std::size_t>(total), [&](std::size_t row) {
    const MultiIndex ri = delinearize(static_cast<long>(row), lo, hi);
    Eigen::VectorXd t(d);
    for (int a = 0; a < d; ++a) t[a] = sys.xi[a][ri[a]];
    const Env tenv = point_env(t);
    const Eigen::VectorXd x = identity ? t : geometry.map(t);
    const Env xenv = identity ? tenv : point_env(x);

    Eigen::MatrixXd Kx(d, d);
    Eigen::VectorXd bx(d);
    for (int a = 0; a < d; ++a) {
      bx[a] = evaluate(problem.beta[a], xenv);
      for (int b = 0; b < d; ++b) Kx(a, b) = evaluate(problem.K[a][b], xenv);
    }
    const double gx = evaluate(problem.gamma, xenv);

    Eigen::MatrixXd Jinv = Eigen::MatrixXd::Identity(d, d);
    std::vector<Eigen::MatrixXd> hessG;
    if (!identity) {
      Jinv = geometry.jacobian(t).inverse();
      for (int c = 0; c < d; ++c) {
        Eigen::MatrixXd h(d, d);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) h(a, b) = evaluate(geometry.hess[c][a][b], tenv);
        hessG.push_back(h);
      }
    }

    // columns with nonzero 1D factors in every direction
    std::vector<std::vector<int>> cols(d);
    for (int a = 0; a < d; ++a)
      for (int j = 0; j < sys.orders[a]; ++j)
        if (V0[a](ri[a], j) != 0.0 || V1[a](ri[a], j) != 0.0 || V2[a](ri[a], j) != 0.0) cols[a].push_back(j);
    for (int a = 0; a < d; ++a)
      if (cols[a].empty()) return;

    std::vector<std::size_t> pos(d, 0);
    MultiIndex ci(d);
    Eigen::VectorXd grad(d);
    Eigen::MatrixXd hes(d, d);
    while (true) {
      for (int a = 0; a < d; ++a) ci[a] = cols[a][pos[a]];
      double value = 1.0;
      for (int a = 0; a < d; ++a) value *= V0[a](ri[a], ci[a]);
      for (int a = 0; a < d; ++a) {
        double g = V1[a](ri[a], ci[a]);
        for (int b = 0; b < d; ++b)
          if (b != a) g *= V0[b](ri[b], ci[b]);
        grad[a] = g;
        for (int b = 0; b < d; ++b) {
          double h = 1.0;
          for (int c = 0; c < d; ++c) {
            int order = (c == a) + (c == b);
            h *= order == 0 ? V0[c](ri[c], ci[c]) : order == 1 ? V1[c](ri[c], ci[c]) : V2[c](ri[c], ci[c]);
          }
          hes(a, b) = h;
        }
      }
      Eigen::VectorXd pgrad = grad;
      Eigen::MatrixXd phess = hes;
      if (!identity) {
        pgrad = Jinv.transpose() * grad;
        Eigen::MatrixXd inner = hes;
        for (int c = 0; c < d; ++c) inner -= pgrad[c] * hessG[c];
        phess = Jinv.transpose() * inner * Jinv;
      }
      const double entry = -(Kx.cwiseProduct(phess)).sum() + bx.dot(pgrad) + gx * value;
      sys.A(static_cast<Eigen::Index>(row), linearize(ci, lo, hi)) = entry;

      int a = d - 1;
      while (a >= 0 && ++pos[a] == cols[a].size()) pos[a--] = 0;
      if (a < 0) break;
    }
  });
  return sys;
}

DirectionSymbols direction_symbols(int p, SectionFamily family) {
  const CardinalSpline cs = cardinal_spline(family, p);
  return {symbol_fn(SymbolKind::H, cs), symbol_fn(SymbolKind::G, cs), symbol_fn(SymbolKind::F, cs)};
}

Eigen::MatrixXd symbol_matrix_H(const std::vector<DirectionSymbols>& symbols, const std::vector<double>& theta) {
  const int d = static_cast<int>(symbols.size());
  if (static_cast<int>(theta.size()) != d) throw UsageError("theta dimension mismatch");
  std::vector<double> h(d), g(d), f(d);
  for (int a = 0; a < d; ++a) {
    h[a] = symbols[a].h(theta[a]);
    g[a] = symbols[a].g(theta[a]);
    f[a] = symbols[a].f(theta[a]);
  }
  Eigen::MatrixXd H(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double v = 1.0;
      for (int k = 0; k < d; ++k) {
        if (i == j)
          v *= k == i ? f[k] : h[k];
        else
          v *= (k == i || k == j) ? g[k] : h[k];
      }
      H(i, j) = v;
    }
  return H;
}

Eigen::MatrixXd symbol_matrix_H(const std::vector<int>& p, const std::vector<SectionFamily>& families,
                                const std::vector<double>& theta) {
  if (p.size() != families.size()) throw UsageError("per-direction data mismatch");
  std::vector<DirectionSymbols> s;
  for (std::size_t a = 0; a < p.size(); ++a) s.push_back(direction_symbols(p[a], families[a]));
  return symbol_matrix_H(s, theta);
}

std::vector<DirectionSymbols> md_symbols(const ProblemMD& problem) {
  std::vector<DirectionSymbols> s;
  for (int a = 0; a < problem.d; ++a)
    s.push_back(direction_symbols(
        problem.p[a], problem.mode == PhaseMode::Nested ? SectionFamily::polynomial() : problem.family[a]));
  return s;
}

namespace {

// ν_a ν_b (J⁻¹ K(G) J⁻ᵀ)_{ab} at a parametric point.
Eigen::MatrixXd weight_matrix(const ProblemMD& problem, const GeometryMapMD& geometry, const Eigen::VectorXd& t) {
  const int d = problem.d;
  const Eigen::VectorXd x = geometry.map(t);
  const Env env = point_env(x);
  Eigen::MatrixXd K(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) K(a, b) = evaluate(problem.K[a][b], env);
  const Eigen::MatrixXd J = geometry.jacobian(t);
  const double det = J.determinant();
  if (!(std::abs(det) > 1e-14)) {
    std::string where;
    for (int a = 0; a < d; ++a) where += (a ? "," : "") + std::to_string(t[a]);
    throw ValidationError("singular geometry Jacobian at (" + where + ")");
  }
  const Eigen::MatrixXd Jinv = J.inverse();
  Eigen::MatrixXd W = Jinv * K * Jinv.transpose();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) W(a, b) *= problem.nu[a] * problem.nu[b];
  return W;
}

}  // namespace

double md_symbol_value(const ProblemMD& problem, const GeometryMapMD& geometry,
                       const std::vector<DirectionSymbols>& symbols, const std::vector<double>& x,
                       const std::vector<double>& theta) {
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  return weight_matrix(problem, geometry, t).cwiseProduct(symbol_matrix_H(symbols, theta)).sum();
}

std::vector<double> md_symbol_samples(const ProblemMD& problem, const GeometryMapMD& geometry, int n_samples) {
  if (n_samples < 1) throw UsageError("sample count must be positive");
  const int d = problem.d;
  const auto symbols = md_symbols(problem);
  // same near-square lattice as lattice_samples (full θ range), evaluated
  // separably: x-dependent weights and θ-dependent matrices once each
  const int oversample = 16;
  int per_axis = static_cast<int>(std::ceil(std::pow(static_cast<double>(n_samples) * oversample, 1.0 / (2 * d)) - 1e-9));
  per_axis = std::max(per_axis, 1);
  long points = 1;
  for (int a = 0; a < d; ++a) points *= per_axis;

  const double pi = std::numbers::pi;
  std::vector<Eigen::MatrixXd> W(points), H(points);
  parallel_for(static_cast<std::size_t>(points), [&](std::size_t r) {
    Eigen::VectorXd t(d);
    std::vector<double> th(d);
    long rem = static_cast<long>(r);
    for (int a = d - 1; a >= 0; --a) {
      const int digit = static_cast<int>(rem % per_axis);
      rem /= per_axis;
      t[a] = (digit + 0.5) / per_axis;
      th[a] = -pi + 2.0 * pi * (digit + 1) / per_axis;
    }
    W[r] = weight_matrix(problem, geometry, t);
    H[r] = symbol_matrix_H(symbols, th);
  });
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(points) * points);
  for (const auto& w : W)
    for (const auto& h : H) values.push_back(w.cwiseProduct(h).sum());
  std::sort(values.begin(), values.end());
  std::vector<double> out(n_samples);
  const double L = static_cast<double>(values.size());
  for (int k = 0; k < n_samples; ++k)
    out[k] = values[std::min(static_cast<std::size_t>((k + 0.5) * L / n_samples), values.size() - 1)];
  return out;
}

}  // namespace gbspec
