#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gbspec/collocation.hpp"
#include "gbspec/expr.hpp"
#include "gbspec/symbols.hpp"

namespace gbspec {

using MultiIndex = std::vector<int>;

/// Rank of idx in lexicographic order over lo..hi, last component fastest.
long linearize(const MultiIndex& idx, const MultiIndex& lo, const MultiIndex& hi);
MultiIndex delinearize(long rank, const MultiIndex& lo, const MultiIndex& hi);

/// -∇·K∇u + β·∇u + γu on [0,1]^d in the variables x1..xd.
struct ProblemMD {
  int d = 2;
  std::vector<std::vector<Expr>> K;
  std::vector<Expr> beta;
  Expr gamma;
  std::vector<int> p;
  std::vector<SectionFamily> family;
  std::vector<int> nu;
  PhaseMode mode = PhaseMode::Nested;

  // K = I, β = 0, γ = 0, polynomial degree p in every direction, ν = 1.
  static ProblemMD laplacian(int d, int p);

  // Symmetry of K as expressions, Cholesky of K and γ ≥ 0 on a grid.
  void validate() const;
};

/// Map G: [0,1]^d -> R^d with first and second partials, all symbolic.
struct GeometryMapMD {
  int d = 2;
  std::vector<Expr> G;
  std::vector<std::vector<Expr>> jac;                // jac[c][a] = ∂G_c/∂x_a
  std::vector<std::vector<std::vector<Expr>>> hess;  // hess[c][a][b]

  static GeometryMapMD identity(int d);
  static GeometryMapMD from_maps(std::vector<Expr> G);
  bool is_identity() const;

  Eigen::VectorXd map(const Eigen::VectorXd& t) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& t) const;

  // Nonsingular Jacobian with constant orientation on a grid; d = 3 must be
  // the identity.
  void validate() const;
};

struct CollocationSystemMD {
  int d = 0;
  std::vector<int> n;       // per direction, ν_a·n
  std::vector<int> orders;  // n_a + p_a - 2
  std::vector<Eigen::VectorXd> xi;
  Eigen::MatrixXd A;
};

/// Tensor GB-spline collocation at tensor Greville points, geometry through
/// the chain rule.
CollocationSystemMD assemble_md(const ProblemMD& problem, const GeometryMapMD& geometry, int n,
                                int cap = 4096);

/// d×d matrix with f in the diagonal direction, g⊗g off the diagonal and h
/// elsewhere; symbols[a] = {h, g, f} for direction a.
struct DirectionSymbols {
  SymbolFn h, g, f;
};
DirectionSymbols direction_symbols(int p, SectionFamily family);
Eigen::MatrixXd symbol_matrix_H(const std::vector<DirectionSymbols>& symbols, const std::vector<double>& theta);
Eigen::MatrixXd symbol_matrix_H(const std::vector<int>& p, const std::vector<SectionFamily>& families,
                                const std::vector<double>& theta);

/// Per-direction symbols used in distribution comparisons: polynomial for nested mode,
/// the family with phase α for non-nested mode.
std::vector<DirectionSymbols> md_symbols(const ProblemMD& problem);

/// ν (J⁻¹ K(G) J⁻ᵀ ∘ H) νᵀ at a parametric point and frequency.
double md_symbol_value(const ProblemMD& problem, const GeometryMapMD& geometry,
                       const std::vector<DirectionSymbols>& symbols, const std::vector<double>& x,
                       const std::vector<double>& theta);

/// Sorted symbol samples on a lattice of [0,1]^d × [-π,π]^d.
std::vector<double> md_symbol_samples(const ProblemMD& problem, const GeometryMapMD& geometry, int n_samples);

}  // namespace gbspec
