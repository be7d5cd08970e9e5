#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gbspec/collocation.hpp"
#include "gbspec/multidim.hpp"
#include "gbspec/spectral.hpp"

namespace gbspec::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kNumerical = 2;

/// 1D problem from the JSON schema; missing keys take the defaults
/// κ=1, β=γ=0, p=3, hyperbolic α=10, non-nested, identity geometry.
struct Problem1D {
  ProblemCoefficients coeffs;
  GeometryMap1D geometry;
  int p = 3;
  SectionFamily family = SectionFamily::hyperbolic(10.0);
  PhaseMode mode = PhaseMode::NonNested;
};

struct ProblemConfigMD {
  ProblemMD problem;
  GeometryMapMD geometry;
};

// Both throw ValidationError on schema or validation-grid failures.
Problem1D parse_problem_1d(const std::string& json_text);
ProblemConfigMD parse_problem_md(const std::string& json_text);

/// Eigenvalues of A/n² against κ̂(x)·f(θ); f is the polynomial symbol in
/// nested mode and the family symbol with phase α otherwise. eps_rel scales
/// the largest |sample|.
DistributionReport distribution_1d(const Problem1D& pr, int n, const std::vector<double>& eps_rel);
DistributionReport distribution_md(const ProblemConfigMD& pr, int n, const std::vector<double>& eps_rel);

/// Runs one command line (args exclude the program name).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gbspec::cli
