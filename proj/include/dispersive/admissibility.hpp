#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dispersive/model.hpp"

namespace dispersive {

enum class FormulaFamily { L1, L2_general, L2_reduced, L3_general, L3_reduced, GeneralL_full, GeneralL_reduced };

std::string_view to_string(FormulaFamily family);

/// Sufficient-condition margins: A_1..A_l weigh (D^i u(0))^2 and B_1..B_{l-1}
/// weigh (D^i u(L))^2 in a lower bound of the boundary form. Margins are
/// reported even when negative.
struct AdmissibilityReport {
    int l = 1;
    std::vector<double> margins_A;
    std::vector<double> margins_B;
    bool admissible = true;
    FormulaFamily family = FormulaFamily::L1;

    /// Minimum over all margins; +infinity when there are none (l = 1).
    double min_margin() const;
};

/// Dispatches on (l, representation):
///   l = 1                 no margins, admissible;
///   l = 2, 3 diagonal      the specialised reduced formulas;
///   l >= 4 diagonal        the general-l reduced formulas;
///   l = 2, 3 full          the specialised Cauchy bounds;
///   l >= 4 full            the general-l bounds with nested absolute sums.
/// Throws UnreducedRawForms for raw linear forms.
AdmissibilityReport margins(int l, const BoundaryCoefficients& bc);

/// Diagonal coefficients whose margins are exactly the targets
/// (targets_A = A_1..A_{l-1}, targets_B = B_1..B_{l-1}; A_l is fixed at 1/4).
CanonicalDiagonal canonical_with_margins(int l, std::span<const double> targets_A, std::span<const double> targets_B);

/// Derivative values D^1..D^{2l} at each endpoint; u(0) = u(L) = 0 implied.
struct BoundaryJet {
    std::vector<double> at0;
    std::vector<double> atL;
};

/// Overwrites the constrained entries (D^{l+1..2l-1}u(0), D^{l..2l-1}u(L))
/// with the values the boundary relations assign to them.
BoundaryJet impose_boundary_relations(int l, const BoundaryCoefficients& bc, BoundaryJet jet);

/// The endpoint expression equal to sum_j (-1)^{j+1} (D^{2j+1}u, u), evaluated
/// on the bc-consistent jet:
///   I = [ sum_{i=1}^{l-1} D^i u sum_{k=1}^{l-i} (-1)^{k+1} D^{2k+i} u - 1/2 sum_{j=1}^{l} (D^j u)^2 ]_0^L
double boundary_form(int l, const BoundaryCoefficients& bc, const BoundaryJet& jet);

/// sum_i B_i (D^i u(L))^2 + sum_i A_i (D^i u(0))^2 for the jet's free entries.
double margin_quadratic(const AdmissibilityReport& report, const BoundaryJet& jet);

struct CrossTermBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// For l >= 4 and y_i = D^i u(L):
///   lhs = sum_{i=1}^{l-3} sum_{k>=1, 2k+i<=l-1} (-1)^{k+1} y_i y_{2k+i}
///   rhs = (3-l)/2 sum_{i=1}^{l-1} y_i^2
/// The contract is lhs >= rhs. Entries beyond the given jet read as zero.
CrossTermBound cross_term_bound(int l, std::span<const double> jetL);

}  // namespace dispersive
