#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gbspec/cardinal.hpp"
#include "gbspec/expr.hpp"
#include "gbspec/section_space.hpp"

namespace gbspec {

enum class PhaseMode { Nested, NonNested };
std::string to_string(PhaseMode m);
PhaseMode phase_mode_from_string(const std::string& s);

/// Open uniform knots t_1..t_{n+2p+1} on [0,1], stored 0-based.
struct KnotVector {
  int n = 0;
  int p = 0;
  std::vector<double> t;

  double operator[](int i) const { return t[i - 1]; }  // 1-based t_i
};

KnotVector open_uniform_knots(int n, int p);

/// Global phase μ of the spline space for a user phase α: μ = α (nested) or
/// μ = nα (non-nested).
double space_phase(double alpha, int n, PhaseMode mode);

/// Effective phase per knot interval, μ/n.
double effective_phase(double alpha, int n, PhaseMode mode);

/// Smallest n with a feasible trigonometric space, or -1 if none exists.
int min_feasible_n(double alpha, PhaseMode mode);

/// GB-splines N_{1,p}..N_{n+p,p}; splines[i-1] holds N_{i,p} on the full
/// knot vector, with its first and second derivatives.
struct GBBasis {
  KnotVector knots;
  SectionFamily family;  // user phase α
  PhaseMode mode = PhaseMode::NonNested;
  SectionFamily space;   // phase μ in the x variable
  std::vector<PiecewiseFn> splines, d1, d2;
  std::vector<double> delta;  // δ_{i,p-1} used in the last recursion step

  int n() const { return knots.n; }
  int p() const { return knots.p; }
  int size() const { return static_cast<int>(splines.size()); }
  double eval(int i, double x, int order = 0) const;  // 1-based i
  // Cardinal spline matching the interior splines.
  SectionFamily cardinal_family() const;
};

GBBasis gb_basis(int n, int p, SectionFamily family, PhaseMode mode);

/// Interior Greville points ξ_{2,p}..ξ_{n+p-1,p}.
Eigen::VectorXd greville_abscissae(const KnotVector& knots);

struct ProblemCoefficients {
  ScalarField kappa = ScalarField::constant(1.0);
  ScalarField beta = ScalarField::constant(0.0);
  ScalarField gamma = ScalarField::constant(0.0);
  ScalarField f = ScalarField::constant(0.0);

  // κ > 0 and γ ≥ 0 on a 1000-point grid; throws ValidationError.
  void validate() const;
};

struct GeometryMap1D {
  ScalarField G = ScalarField::parse("x");
  ScalarField G1 = ScalarField::constant(1.0);
  ScalarField G2 = ScalarField::constant(0.0);

  static GeometryMap1D identity() { return {}; }
  // Derivatives taken symbolically.
  static GeometryMap1D from_map(const ScalarField& G);

  bool is_identity() const;
  // Endpoint, monotonicity and boundedness checks; throws ValidationError.
  void validate() const;
};

struct CollocationSystem {
  int n = 0, p = 0;
  SectionFamily family;
  PhaseMode mode = PhaseMode::NonNested;
  bool identity_geometry = true;
  Eigen::VectorXd xi;
  Eigen::MatrixXd K, H, M;  // n²K = [-N''], nH = [N'], M = [N]
  Eigen::VectorXd kappa_hat, beta_hat, gamma_hat;
  Eigen::MatrixXd A;

  int order() const { return static_cast<int>(A.rows()); }
  Eigen::MatrixXd normalized() const { return A / (static_cast<double>(n) * n); }
};

CollocationSystem assemble(const ProblemCoefficients& problem, const GeometryMap1D& geometry,
                           const GBBasis& basis);

/// Matrix of -N''_{j+1}(ξ_{i+1}) etc. evaluated directly (no splitting);
/// the reference for the split assembly.
Eigen::MatrixXd assemble_direct(const ProblemCoefficients& problem, const GeometryMap1D& geometry,
                                const GBBasis& basis);

/// Numerical rank: singular values above rel_tol·σ_max.
int numerical_rank(const Eigen::MatrixXd& A, double rel_tol = 1e-8);

struct StructureReport {
  bool has_central_rows = false;
  int central_first = 0, central_last = 0;  // 1-based row range
  double central_row_error = 0.0;  // max |row - Toeplitz row| over central rows of K, H, M
  double toeplitz_error = 0.0;     // central submatrix deviation from Toeplitz
  double symmetry_error = 0.0;     // K, M symmetric and H skew on the central submatrix
  bool is_central_toeplitz = false;
  int rank_R = 0, rank_Q = 0, rank_S = 0;
  int rank_bound = 0;              // 2⌊3p/2⌋ - 2
  bool rank_ok = false;
};

/// Compares K, H, M against the Toeplitz matrices of the cardinal symbols
/// with the system's effective phase.
StructureReport structure_report(const CollocationSystem& sys, double tol = 1e-10);

}  // namespace gbspec
