#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "dispersive/polynomial.hpp"

namespace dispersive {

/// Integration-by-parts identities for odd derivatives on (0, L).
///
///  - SingleOdd(j):      (D^{2j+1}u, u) as boundary terms.
///  - SingleOddWeighted(j): (D^{2j+1}u, x u) as boundary terms plus a norm term.
///  - AlternatingSum(l): sum_{j<=l} (-1)^{j+1} (D^{2j+1}u, u).
///  - AlternatingSumWeighted(l): the same sum against x u.
enum class IdentityKind { SingleOdd, SingleOddWeighted, AlternatingSum, AlternatingSumWeighted };

struct Identity {
    IdentityKind kind;
    int order;  // j for the single identities, l for the alternating sums

    std::string name() const;
};

struct IdentityResidual {
    double lhs = 0.0;         // integral side, exact integration
    double rhs = 0.0;         // boundary side (plus norm block where present)
    double norm_block = 0.0;  // the ||D^j u||^2 contribution contained in rhs
    double residual = 0.0;    // |lhs - rhs|

    bool within(double rel_tol) const { return residual <= rel_tol * (1.0 + (lhs < 0 ? -lhs : lhs)); }
};

IdentityResidual identity_residual(const Polynomial& u, Identity identity, double length);

struct LemmaSuiteOptions {
    int max_order = 5;
    int cases = 200;       // random polynomials per (identity, order, length)
    int max_degree = 20;
    std::vector<double> lengths{0.5, 1.0, std::numbers::pi, 10.0};
    std::uint64_t seed = 1;
    double tolerance = 1e-10;  // relative to 1 + |lhs|
};

struct LemmaSuiteEntry {
    Identity identity;
    double length = 1.0;
    int cases = 0;
    int failures = 0;
    double worst_scaled_residual = 0.0;  // max residual / (1 + |lhs|)
};

struct LemmaSuiteReport {
    std::vector<LemmaSuiteEntry> entries;
    bool passed = true;
};

/// Every identity at every order <= max_order and every length, on seeded
/// polynomials with coefficients in [-1, 1] and degree uniform in [1, max_degree].
LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& options);

}  // namespace dispersive
