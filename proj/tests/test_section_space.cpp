#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gbspec/cardinal.hpp"
#include "gbspec/errors.hpp"
#include "gbspec/section_space.hpp"
#include "oracles.hpp"

using namespace gbspec;
using doctest::Approx;

namespace {

PiecewiseFn random_fn(SectionFamily fam, int p, std::mt19937& rng, std::vector<double> breaks) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Eigen::VectorXd> pieces;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    Eigen::VectorXd c(p + 1);
    for (int j = 0; j <= p; ++j) c[j] = U(rng);
    pieces.push_back(c);
  }
  return PiecewiseFn(fam, p, std::move(breaks), std::move(pieces));
}

const SectionFamily kFamilies[] = {SectionFamily::polynomial(), SectionFamily::hyperbolic(2.0),
                                   SectionFamily::trigonometric(1.2)};

}  // namespace

TEST_SUITE("section_space") {
  TEST_CASE("basis_eval examples") {
    CHECK(basis_eval(LocalBasis(SectionFamily::polynomial(), 2, 0.0), 0, 0.7) == 1.0);
    CHECK(basis_eval(LocalBasis(SectionFamily::hyperbolic(2.0), 3, 2.0), 3, 0.5) == Approx(std::sinh(1.0)).epsilon(1e-14));
    CHECK(std::sinh(1.0) == Approx(1.1752012).epsilon(1e-7));
    CHECK(std::abs(basis_eval(LocalBasis(SectionFamily::trigonometric(std::numbers::pi / 2), 2, std::numbers::pi / 2), 1, 1.0)) < 1e-15);
    CHECK_THROWS_AS(basis_eval(LocalBasis(SectionFamily::polynomial(), 2, 0.0), 3, 0.5), UsageError);
    CHECK_THROWS_AS(basis_eval(LocalBasis(SectionFamily::polynomial(), 2, 0.0), 1, 1.5), UsageError);
  }

  TEST_CASE("tail basis spans the canonical basis") {
    for (const auto& fam : kFamilies)
      for (int p = 1; p <= 6; ++p) {
        const LocalBasis b(fam, p, fam.phase * 0.7);
        for (int j = 0; j <= p; ++j) {
          const Eigen::VectorXd c = canonical_in_tail(b, j);
          for (double t : {0.0, 0.3, 0.77, 1.0}) CHECK(c.dot(b.tail_values(t)) == Approx(b.eval(j, t)).epsilon(1e-13));
        }
      }
  }

  TEST_CASE("iterated integral matches closed forms") {
    const double e = 1.7, t = 0.8;
    CHECK(iterated_integral(0, e * e, t) == Approx(std::cosh(e * t)).epsilon(1e-15));
    CHECK(iterated_integral(1, e * e, t) == Approx(std::sinh(e * t) / e).epsilon(1e-15));
    CHECK(iterated_integral(2, -e * e, t) == Approx((1 - std::cos(e * t)) / (e * e)).epsilon(1e-14));
    CHECK(iterated_integral(3, 0.0, t) == Approx(t * t * t / 6).epsilon(1e-15));
    // large hyperbolic phase
    CHECK(iterated_integral(1, 400.0, 1.0) == Approx(std::sinh(20.0) / 20.0).epsilon(1e-13));
  }

  TEST_CASE("piecewise_eval examples") {
    const auto hat = cardinal_spline(SectionFamily::polynomial(), 1);
    CHECK(piecewise_eval(hat.pw, 0.5) == Approx(0.5).epsilon(1e-15));
    CHECK(piecewise_eval(hat.pw, 3.0) == 0.0);
    CHECK(piecewise_eval(hat.pw, -0.1) == 0.0);
    // sinh(ετ)/sinh(ε) as a single piece, ε = 2
    const SectionFamily h = SectionFamily::hyperbolic(2.0);
    const LocalBasis b(h, 1, 2.0);
    Eigen::VectorXd c = canonical_in_tail(b, 1) / std::sinh(2.0);
    PiecewiseFn v(h, 1, {0.0, 1.0}, std::vector<Eigen::VectorXd>{c});
    CHECK(v(0.5) == Approx(0.3240271).epsilon(1e-7));
    CHECK(v(0.5) == Approx(std::sinh(1.0) / std::sinh(2.0)).epsilon(1e-14));
    // left limit at the last breakpoint
    CHECK(v(1.0) == Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("piecewise_derivative examples") {
    const auto hat = cardinal_spline(SectionFamily::polynomial(), 1);
    CHECK(piecewise_derivative(hat.pw)(0.25) == Approx(1.0).epsilon(1e-14));
    const SectionFamily h = SectionFamily::hyperbolic(2.0);
    const LocalBasis b(h, 1, 2.0);
    PiecewiseFn s(h, 1, {0.0, 1.0}, std::vector<Eigen::VectorXd>{canonical_in_tail(b, 1)});
    CHECK(piecewise_derivative(s)(0.0) == Approx(2.0).epsilon(1e-14));
    const auto phi2 = cardinal_spline(SectionFamily::polynomial(), 2);
    CHECK(std::abs(piecewise_derivative(phi2.pw)(1.5)) < 1e-14);
    // degree-0 input differentiates to zero
    PiecewiseFn c(SectionFamily::polynomial(), 0, {0.0, 1.0}, std::vector<Eigen::VectorXd>{Eigen::VectorXd::Constant(1, 3.0)});
    CHECK(piecewise_derivative(c)(0.5) == 0.0);
  }

  TEST_CASE("piecewise_antiderivative examples") {
    PiecewiseFn one(SectionFamily::polynomial(), 0, {0.0, 1.0}, std::vector<Eigen::VectorXd>{Eigen::VectorXd::Constant(1, 1.0)});
    CHECK(piecewise_antiderivative(one)(1.0) == Approx(1.0).epsilon(1e-15));
    const auto hat = cardinal_spline(SectionFamily::polynomial(), 1);
    CHECK(piecewise_antiderivative(hat.pw)(2.0) == Approx(1.0).epsilon(1e-15));
    const double e = std::numbers::pi / 2;
    const SectionFamily t = SectionFamily::trigonometric(e);
    PiecewiseFn cosf(t, 1, {0.0, 1.0}, std::vector<Eigen::VectorXd>{canonical_in_tail(LocalBasis(t, 1, e), 0)});
    CHECK(piecewise_antiderivative(cosf)(1.0) == Approx(2.0 / std::numbers::pi).epsilon(1e-14));
    // infeasible trigonometric phase
    const SectionFamily bad = SectionFamily::trigonometric(3.5);
    PiecewiseFn f = PiecewiseFn::zero(bad, 1, {0.0, 1.0});
    CHECK_THROWS_AS(piecewise_antiderivative(f), ConstraintViolation);
  }

  TEST_CASE("zero-width intervals carry empty pieces") {
    const SectionFamily h = SectionFamily::hyperbolic(1.0);
    PiecewiseFn f = PiecewiseFn::zero(h, 2, {0.0, 0.0, 0.5, 1.0, 1.0});
    CHECK(f.pieces()[0].size() == 0);
    CHECK(f.pieces()[3].size() == 0);
    CHECK(f.pieces()[1].size() == 3);
  }

  TEST_CASE("derivative of antiderivative reproduces f") {
    std::mt19937 rng(7);
    for (const auto& fam : kFamilies)
      for (int p = 1; p <= 6; ++p) {
        const PiecewiseFn f = random_fn(fam, p, rng, {0.0, 0.4, 1.0, 1.3, 2.0});
        const PiecewiseFn g = piecewise_derivative(piecewise_antiderivative(f));
        for (int s = 0; s < 100; ++s) {
          const double x = 2.0 * (s + 0.5) / 100;
          CHECK(std::abs(g(x) - f(x)) <= 1e-12);
        }
      }
  }

  TEST_CASE("antiderivative agrees with Gauss-Legendre quadrature") {
    std::mt19937 rng(11);
    for (const auto& fam : kFamilies)
      for (int p = 1; p <= 5; ++p) {
        const std::vector<double> br{0.0, 0.5, 1.25, 2.0, 3.0};
        const PiecewiseFn f = random_fn(fam, p, rng, br);
        const double exact = piecewise_antiderivative(f)(3.0);
        CHECK(std::abs(exact - oracle::integrate([&](double x) { return f(x); }, br)) <= 1e-10);
        CHECK(std::abs(exact - f.integral()) <= 1e-12);
      }
  }

  TEST_CASE("antiderivative is continuous across breakpoints") {
    std::mt19937 rng(3);
    const PiecewiseFn f = random_fn(SectionFamily::hyperbolic(3.0), 3, rng, {0.0, 1.0, 2.0, 3.0});
    const PiecewiseFn F = piecewise_antiderivative(f);
    for (double b : {1.0, 2.0}) CHECK(std::abs(F(b - 1e-12) - F(b)) < 1e-10);
  }

  TEST_CASE("u', v' combinations change sign at most once") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const auto& fam : {SectionFamily::hyperbolic(3.0), SectionFamily::trigonometric(3.0)}) {
      const double e = fam.phase;
      for (int trial = 0; trial < 100; ++trial) {
        const double a = U(rng), b = U(rng);
        int changes = 0;
        double prev = 0.0;
        for (int k = 0; k < 1000; ++k) {
          const double t = k / 999.0;
          // u' and v' of the canonical basis: σ ε sinh/-ε sin and ε cosh/ε cos
          const double du = fam.tag == Family::Hyperbolic ? e * std::sinh(e * t) : -e * std::sin(e * t);
          const double dv = fam.tag == Family::Hyperbolic ? e * std::cosh(e * t) : e * std::cos(e * t);
          const double v = a * du + b * dv;
          if (v != 0.0 && prev != 0.0 && (v > 0) != (prev > 0)) ++changes;
          if (v != 0.0) prev = v;
        }
        CHECK(changes <= 1);
      }
    }
  }

  TEST_CASE("combine needs matching breakpoints") {
    const auto f = PiecewiseFn::zero(SectionFamily::polynomial(), 1, {0.0, 1.0});
    const auto g = PiecewiseFn::zero(SectionFamily::polynomial(), 1, {0.0, 2.0});
    CHECK_THROWS_AS(combine(1.0, f, 1.0, g), UsageError);
  }
}
