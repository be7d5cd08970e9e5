// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gbspec/cardinal.hpp"
#include "gbspec/collocation.hpp"
#include "gbspec/spectral.hpp"
#include "gbspec/symbols.hpp"
#include "oracles.hpp"

using namespace gbspec;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<SectionFamily> all_families() {
  return {SectionFamily::polynomial(), SectionFamily::hyperbolic(1.0), SectionFamily::hyperbolic(10.0),
          SectionFamily::trigonometric(kPi / 4), SectionFamily::trigonometric(kPi / 2)};
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome closed_forms() {
  const std::pair<SymbolKind, int> cases[] = {{SymbolKind::H, 1}, {SymbolKind::H, 2}, {SymbolKind::G, 2}, {SymbolKind::F, 2},
                                              {SymbolKind::G, 3}, {SymbolKind::F, 3}, {SymbolKind::F, 4}};
  double err = 0.0;
  for (const auto& fam : all_families())
    for (auto [kind, p] : cases) {
      const SymbolFn s = symbol_fn(kind, p, fam);
      for (double t : theta_grid(512)) err = std::max(err, std::abs(s(t) - symbol_closed_form(kind, p, fam, t)));
    }
  return {err <= 1e-11, fmt("max error %.2e (tol 1e-11)", err)};
}

Outcome relation_identity() {
  double err = 0.0;
  for (const auto& fam : {SectionFamily::hyperbolic(1.0), SectionFamily::hyperbolic(10.0),
                          SectionFamily::trigonometric(kPi / 4), SectionFamily::trigonometric(kPi / 2)})
    for (int p = 3; p <= 8; ++p) {
      const SymbolFn f = symbol_fn(SymbolKind::F, p, fam), h = symbol_fn(SymbolKind::H, p - 2, fam);
      for (double t : theta_grid(512)) err = std::max(err, std::abs(f(t) - (2 - 2 * std::cos(t)) * h(t)));
    }
  return {err <= 1e-11, fmt("max error %.2e (tol 1e-11)", err)};
}

Outcome cardinal_properties() {
  double part = 0, integral = 0, sym = 0, conv = 0, deriv = 0, inner = 0;
  for (const auto& fam : all_families()) {
    for (int p = 1; p <= 6; ++p) {
      const auto cs = cardinal_spline(fam, p);
      integral = std::max(integral, std::abs(cs.pw.integral() - 1.0));
      for (int s = 0; s < 100; ++s) {
        const double t = 0.5 * (p + 1) * s / 100.0;
        sym = std::max(sym, std::abs(cs(cs.center() + t) - cs(cs.center() - t)));
      }
      if (p < 2) continue;
      double sum = 0.0;
      for (int k = 1; k <= p; ++k) sum += cs(k);
      part = std::max(part, std::abs(sum - 1.0));
      const auto& prev = cs.degree(p - 1);
      for (int s = 0; s < 50; ++s) {
        const double t = (p + 1) * (s + 0.5) / 50.0;
        std::vector<double> br{0.0};
        const double frac = t - std::floor(t);
        if (frac > 0.0 && frac < 1.0) br.push_back(frac);
        br.push_back(1.0);
        conv = std::max(conv, std::abs(oracle::integrate([&](double u) { return prev(t - u); }, br) - cs(t)));
      }
      for (int r = 1; r <= p - 1; ++r) {
        const auto a = cardinal_derivative(cs, r), b = cardinal_derivative_direct(cs, r);
        for (int s = 0; s <= 60; ++s) {
          const double t = (p + 1) * (s + 0.37) / 61.0;
          deriv = std::max(deriv, std::abs(a(t) - b(t)) / std::max(1.0, std::abs(b(t))));
        }
      }
    }
    for (auto [p1, p2] : {std::pair{2, 2}, std::pair{3, 2}}) {
      const auto a = cardinal_spline(fam, p1);
      const auto b = cardinal_spline(SectionFamily::polynomial(), p2);
      const auto big = cardinal_spline(fam, p1 + p2 + 1);
      for (int k = -2; k <= 2; ++k) {
        const double ip = oracle::integrate([&](double t) { return a(t) * b(t + k); }, oracle::integer_breaks(p1 + 1));
        inner = std::max(inner, std::abs(ip - big(p2 + 1 - k)));
      }
    }
  }
  const bool ok = part <= 1e-12 && integral <= 1e-12 && sym <= 1e-12 && conv <= 1e-10 && deriv <= 1e-10 && inner <= 1e-8;
  char buf[256];
  std::snprintf(buf, sizeof buf, "unity %.1e, integral %.1e, symmetry %.1e, convolution %.1e, derivative %.1e, inner %.1e",
                part, integral, sym, conv, deriv, inner);
  return {ok, buf};
}

double l1_distance(const SymbolFn& a, const SymbolFn& b) {
  std::vector<double> br;
  for (int k = 0; k <= 32; ++k) br.push_back(-kPi + 2 * kPi * k / 32);
  return oracle::integrate([&](double t) { return std::abs(a(t) - b(t)); }, br, 32);
}

Outcome l1_rate() {
  const std::vector<double> ns{8, 16, 32, 64};
  std::vector<double> lx;
  for (double n : ns) lx.push_back(std::log(n));
  double lo = 1e9, hi = -1e9;
  bool ok = true;
  for (const auto& fam : {SectionFamily::hyperbolic(1.0), SectionFamily::trigonometric(kPi / 2)})
    for (int p = 3; p <= 5; ++p) {
      const SymbolFn poly = symbol_fn(SymbolKind::F, p, SectionFamily::polynomial());
      std::vector<double> ly;
      for (double n : ns) ly.push_back(std::log(l1_distance(symbol_fn(SymbolKind::F, p, {fam.tag, fam.phase / n}), poly)));
      const double s = slope(lx, ly);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      ok = ok && std::abs(s + 2.0) <= 0.3;
    }
  return {ok, fmt("slopes in [%.3f, %.3f] (want -2 +- 0.3)", lo, hi)};
}

Outcome decay() {
  bool ok = true;
  double worst = -1e9;
  for (int p = 2; p <= 14; ++p) {
    const double r = decay_ratio(p, SectionFamily::polynomial());
    const double bound = std::pow(2.0, (5.0 - p) / 2.0);
    worst = std::max(worst, r / bound);
    ok = ok && r <= bound;
  }
  std::vector<double> ps, lr;
  bool decreasing = true;
  for (int p = 5; p <= 13; p += 2) {
    const double r = decay_ratio(p, SectionFamily::hyperbolic(10.0));
    if (!lr.empty()) decreasing = decreasing && std::log2(r) < lr.back();
    ps.push_back(p);
    lr.push_back(std::log2(r));
  }
  const double s = slope(ps, lr);
  return {ok && decreasing && s <= -0.3,
          fmt("polynomial max ratio/bound %.3f; hyperbolic decreasing=%.0f, log2 slope %.3f", worst, decreasing, s)};
}

Outcome toeplitz_oracle() {
  const auto f2 = toeplitz_spec(symbol_fn(SymbolKind::F, 2, SectionFamily::polynomial()));
  double err = 0.0;
  for (int m : {3, 10, 100}) {
    const Eigen::VectorXcd e = eigenvalues_dense(toeplitz(f2, m));
    std::vector<double> got, want;
    for (int k = 0; k < m; ++k) got.push_back(e[k].real());
    for (int k = 1; k <= m; ++k) want.push_back(2 - 2 * std::cos(k * kPi / (m + 1)));
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (int k = 0; k < m; ++k) err = std::max(err, std::abs(got[k] - want[k]));
  }
  const auto h3 = toeplitz_spec(symbol_fn(SymbolKind::H, 3, SectionFamily::hyperbolic(2.0)));
  const Eigen::MatrixXd T = toeplitz_tensor(f2, h3, 7, 5);
  const Eigen::MatrixXd K = Eigen::kroneckerProduct(toeplitz(f2, 7), toeplitz(h3, 5)).eval();
  const double kron = (T - K).cwiseAbs().maxCoeff();
  return {err <= 1e-9 && kron == 0.0, fmt("eigen error %.2e (tol 1e-9), tensor - kron %.1e", err, kron)};
}

Outcome structure() {
  bool ok = true;
  double toe = 0, sym = 0;
  int worst_slack = 1 << 30;
  for (int p = 2; p <= 4; ++p)
    for (PhaseMode mode : {PhaseMode::Nested, PhaseMode::NonNested})
      for (const auto& fam : {SectionFamily::hyperbolic(10.0), SectionFamily::trigonometric(kPi / 2)}) {
        const CollocationSystem sys = assemble({}, GeometryMap1D::identity(), gb_basis(64, p, fam, mode));
        const StructureReport r = structure_report(sys, 1e-10);
        toe = std::max(toe, r.toeplitz_error);
        sym = std::max(sym, r.symmetry_error);
        const int bound = 2 * (3 * p / 2) - 2;
        worst_slack = std::min(worst_slack, bound - r.rank_R);
        ok = ok && r.is_central_toeplitz && r.toeplitz_error <= 1e-10 && r.symmetry_error <= 1e-10 && r.rank_R <= bound;
      }
  return {ok, fmt("toeplitz %.1e, symmetry %.1e, min rank slack %.0f", toe, sym, worst_slack)};
}

cli::Problem1D problem_1d(const char* kappa, PhaseMode mode, const char* G = "x") {
  cli::Problem1D pr;
  pr.coeffs.kappa = ScalarField::parse(kappa);
  pr.geometry = GeometryMap1D::from_map(ScalarField::parse(G));
  pr.p = 3;
  pr.family = SectionFamily::hyperbolic(10.0);
  pr.mode = mode;
  return pr;
}

struct Pair {
  DistributionReport coarse, fine;
};

Pair run_pair(const cli::Problem1D& pr) {
  return {cli::distribution_1d(pr, 64, {0.1}), cli::distribution_1d(pr, 128, {0.1})};
}

std::vector<Pair> criterion8_runs;

Outcome weyl_nonnested() {
  bool ok = true;
  std::string detail;
  for (const char* kappa : {"1", "1+x"}) {
    const Pair r = run_pair(problem_1d(kappa, PhaseMode::NonNested));
    criterion8_runs.push_back(r);
    const bool dec = r.fine.mean_abs_discrepancy < r.coarse.mean_abs_discrepancy;
    const double s1 = r.fine.moment_errors[0] / r.coarse.moment_errors[0];
    const double s2 = r.fine.moment_errors[1] / r.coarse.moment_errors[1];
    ok = ok && dec && s1 <= 0.75 && s2 <= 0.75;
    detail += std::string(detail.empty() ? "" : "; ") + "kappa=" + kappa +
              fmt(": disc %.4f -> %.4f, moment ratio r1 %.3f", r.coarse.mean_abs_discrepancy, r.fine.mean_abs_discrepancy, s1) +
              fmt(" r2 %.3f", s2);
  }
  return {ok, detail};
}

Outcome weyl_nested() {
  bool ok = true;
  std::string detail;
  for (const char* kappa : {"1", "1+x"}) {
    const Pair r = run_pair(problem_1d(kappa, PhaseMode::Nested));
    ok = ok && r.fine.mean_abs_discrepancy < r.coarse.mean_abs_discrepancy;
    detail += std::string(detail.empty() ? "" : "; ") + "kappa=" + kappa +
              fmt(": disc %.4f -> %.4f", r.coarse.mean_abs_discrepancy, r.fine.mean_abs_discrepancy);
  }
  return {ok, detail};
}

Outcome weyl_geometry() {
  const Pair r = run_pair(problem_1d("1", PhaseMode::Nested, "(x+x^2)/2"));
  return {r.fine.mean_abs_discrepancy < r.coarse.mean_abs_discrepancy,
          fmt("disc %.4f -> %.4f", r.coarse.mean_abs_discrepancy, r.fine.mean_abs_discrepancy)};
}

Outcome clustering() {
  if (criterion8_runs.empty()) return {false, "criterion 8 did not run"};
  bool ok = true;
  std::string detail;
  for (const auto& r : criterion8_runs) {
    ok = ok && r.fine.outliers[0] <= r.coarse.outliers[0];
    detail += std::string(detail.empty() ? "" : "; ") + fmt("outliers %.0f -> %.0f", r.coarse.outliers[0], r.fine.outliers[0]);
  }
  return {ok, detail};
}

Outcome weyl_2d() {
  cli::ProblemConfigMD pr{ProblemMD::laplacian(2, 2), GeometryMapMD::identity(2)};
  pr.problem.mode = PhaseMode::Nested;
  const double a = cli::distribution_md(pr, 12, {0.1}).mean_abs_discrepancy;
  const double b = cli::distribution_md(pr, 20, {0.1}).mean_abs_discrepancy;
  return {b < a, fmt("disc %.4f -> %.4f", a, b)};
}

Outcome bounds_scan() {
  int upper = 0, proved_viol = 0, conj_viol = 0, proved = 0, conjectured = 0;
  for (const auto& fam : all_families())
    for (int p = 1; p <= 8; ++p) {
      const BoundReport r = bounds_report(p, fam, 4096);
      upper += r.upper_violations;
      if (r.lower_status == BoundStatus::Proved) {
        ++proved;
        proved_viol += r.lower_violations;
      } else if (r.lower_status == BoundStatus::Conjectured) {
        ++conjectured;
        conj_viol += r.lower_violations;
      }
    }
  char buf[200];
  std::snprintf(buf, sizeof buf, "upper violations %d; lower: %d proved (%d violations), %d conjectured (%d violations)",
                upper, proved, proved_viol, conjectured, conj_viol);
  return {upper == 0 && proved_viol == 0, buf};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form symbols", 1, closed_forms},
      {2, "relation identity", 5, relation_identity},
      {3, "cardinal properties", 30, cardinal_properties},
      {4, "L1 convergence rate", 20, l1_rate},
      {5, "decay", 10, decay},
      {6, "Toeplitz oracle", 5, toeplitz_oracle},
      {7, "structure", 30, structure},
      {8, "1D Weyl non-nested", 120, weyl_nonnested},
      {9, "1D Weyl nested", 120, weyl_nested},
      {10, "geometry map", 120, weyl_geometry},
      {11, "clustering", 120, clustering},
      {12, "2D distribution", 180, weyl_2d},
      {13, "bounds scan", 10, bounds_scan},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [over budget %.0f s]", c.budget_s);
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d (%s) %.2fs: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
