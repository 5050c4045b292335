#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dispersive/admissibility.hpp"
#include "dispersive/discretize.hpp"
#include "dispersive/model.hpp"

namespace dispersive {

/// Nonzero polynomial of degree <= d satisfying the 2l+1 homogeneous boundary
/// conditions, drawn from the constraint nullspace with a seeded generator and
/// normalised so that its lowest nonzero coefficient is 1.
/// Throws EmptyNullspace when the constraints have full rank over degree d.
Polynomial polynomial_satisfying_bcs(int l, const BoundaryCoefficients& bc, double length, int degree,
                                     std::uint64_t seed);

/// f = lambda u + sum_{j=1}^{l} (-1)^{j+1} D^{2j+1} u.
Polynomial forcing_for(const Polynomial& u, double lambda, int l);

/// Largest violation of the boundary conditions by u, each relation divided by
/// the magnitude of its terms.
double boundary_residual(int l, const BoundaryCoefficients& bc, double length, const Polynomial& u);

struct ConvergenceReport {
    std::vector<int> grid_sizes;
    std::vector<double> max_errors;
    std::vector<double> l2_errors;
    double fitted_order = 0.0;  // least-squares slope of log(max error) against log(h)
    bool exact_regime = false;  // exact-solution study with every max error <= exact_tolerance
    int reference_n = 0;        // 0 when compared against an exact solution
};

inline constexpr double exact_tolerance = 1e-6;

/// Errors against an exact solution on each grid.
ConvergenceReport convergence_study(const ProblemSpec& spec, const Polynomial& exact, const std::vector<int>& grids, int p);

/// Self-convergence against a solve on reference_n nodes, which must nest every grid.
ConvergenceReport self_convergence_study(const ProblemSpec& spec, const std::vector<int>& grids, int reference_n, int p);

/// Grids (n0-1) 2^k + 1, k = 0..count-1.
std::vector<int> nested_grids(int n0, int count);

/// True in the exact regime, otherwise when the fitted order reaches p - 0.5.
bool convergence_passes(const ConvergenceReport& report, int p);

struct EstimateTolerances {
    double l2 = 1e-3;
    double trace = 1e-2;
};

struct EstimateReport {
    double l2_ratio = 0.0;   // lambda ||u|| / ||f||
    double trace_lhs = 0.0;  // sum_{i<l} (D^i u(L))^2 + (D^i u(0))^2, plus (D^l u(0))^2
    double trace_rhs = 0.0;  // ||f||^2 / (lambda M1)
    double hl_ratio = 0.0;   // ||u||_{H^l} / ||f||
    double h2l1_ratio = 0.0; // ||u||_{H^{2l+1}} / ||f||
    double M1 = 0.0;
    double f_norm = 0.0;
    double u_norm = 0.0;
    double condition_estimate = 0.0;
    bool l2_ok = false;
    bool trace_ok = false;

    bool passed() const { return l2_ok && trace_ok; }
};

/// Smallest margin; the l = 1 form I = (Du(0))^2 / 2 gives 1/2.
double min_margin_constant(const AdmissibilityReport& report);

/// Throws InadmissibleCoefficients, InvalidArgument for zero forcing, and
/// propagates solver errors.
EstimateReport estimate_check(const ProblemSpec& spec, const Grid& grid, int p, EstimateTolerances tol = {});

/// SplitMix64 step, used to derive independent per-case seeds.
std::uint64_t splitmix64(std::uint64_t x);

struct CaseRanges {
    double margin_lo = 0.1, margin_hi = 2.0;
    double lambda_lo = 0.5, lambda_hi = 4.0;
    double length_lo = 0.5, length_hi = 2.0;
    int max_terms = 3;
    double frequency_lo = 0.5, frequency_hi = 6.0;
};

/// Diagonal coefficients with every margin in [margin_lo, margin_hi] and a
/// random trigonometric forcing.
ProblemSpec random_admissible_case(int l, std::uint64_t seed, const CaseRanges& ranges = {});

struct SweepCase {
    int index = 0;
    std::uint64_t seed = 0;
    ProblemSpec spec;
    EstimateReport estimate;
    double homogeneous_max = 0.0;  // ||u_h||_inf for f = 0
    bool uniqueness_ok = false;

    bool passed() const { return estimate.passed() && uniqueness_ok; }
};

struct SweepOptions {
    int l = 2;
    int cases = 100;
    int n = 201;
    int p = 4;
    std::uint64_t seed = 1;
    EstimateTolerances tol;
    double uniqueness_tolerance = 1e-9;
    CaseRanges ranges;
};

std::vector<SweepCase> sweep(const SweepOptions& options);

}  // namespace dispersive
