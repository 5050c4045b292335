#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dispersive/dense.hpp"
#include "dispersive/polynomial.hpp"

namespace dispersive {

// Boundary conditions for  lambda u + sum_{j=1}^{l} (-1)^{j+1} D^{2j+1} u = f  on (0, L).
// Every representation implies u(0) = u(L) = 0.

/// Reduced diagonal set:
///   D^l u(L) = 0,
///   D^{l+j} u(0) = a[j-1] D^{l-j} u(0),   D^{l+j} u(L) = b[j-1] D^{l-j} u(L),   j = 1..l-1.
/// For l = 1 both vectors are empty and the set is u(0) = u(L) = Du(L) = 0.
struct CanonicalDiagonal {
    std::vector<double> a;
    std::vector<double> b;
};

/// Full coefficient form:
///   D^i u(0) = sum_{j=1}^{l}   A(i-l-1, j-1) D^j u(0),  i = l+1..2l-1  (A is (l-1) x l)
///   D^i u(L) = sum_{j=1}^{l-1} B(i-l,   j-1) D^j u(L),  i = l..2l-1    (B is l x (l-1))
struct GeneralFull {
    Matrix A;
    Matrix B;
};

/// Raw homogeneous linear forms in the boundary jet; column c multiplies D^{c+1}u.
///   sum_i alpha(k, i-1) D^i u(0) = 0,  k = 1..l-1   (alpha is (l-1) x (2l-1))
///   sum_i beta(k, i-1)  D^i u(L) = 0,  k = 1..l     (beta is l x (2l-1))
struct RawLinearForms {
    Matrix alpha;
    Matrix beta;
};

using BoundaryCoefficients = std::variant<CanonicalDiagonal, GeneralFull, RawLinearForms>;

struct TrigTerm {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
};

struct ExactPolynomial {
    Polynomial p;
};

/// f(x) = sum_k amplitude_k sin(frequency_k x + phase_k).
struct TrigSum {
    std::vector<TrigTerm> terms;
};

/// f sampled at the solver nodes x_i = i L / (n - 1).
struct GridSamples {
    std::vector<double> values;
};

using ForcingSpec = std::variant<ExactPolynomial, TrigSum, GridSamples>;

struct ProblemSpec {
    int l = 1;
    double lambda = 1.0;
    double length = 1.0;
    BoundaryCoefficients bc = CanonicalDiagonal{};
    ForcingSpec forcing = ExactPolynomial{};
};

struct Violation {
    std::string field;
    std::string message;
};

/// Empty iff every ProblemSpec invariant holds.
std::vector<Violation> validate_spec(const ProblemSpec& spec);

/// Throws ErrorKind::InvalidSpec listing every violation.
void require_valid(const ProblemSpec& spec);

/// Solves the raw forms for the high derivatives, D^{l+1..2l-1}u(0) and
/// D^{l..2l-1}u(L). Throws SingularReduction when the high-derivative block
/// has a pivot below 1e-10 times its largest entry.
GeneralFull reduce_raw_forms(int l, const RawLinearForms& raw);

/// The raw forms [ -A | I ] and [ -B | I ].
RawLinearForms to_raw_forms(const GeneralFull& full);

GeneralFull to_general(int l, const CanonicalDiagonal& diag);

/// Canonical and general inputs as GeneralFull; raw forms are reduced.
GeneralFull coefficient_form(int l, const BoundaryCoefficients& bc);

bool is_raw(const BoundaryCoefficients& bc);

/// Forcing values at the nodes; GridSamples must have one value per node.
std::vector<double> sample_forcing(const ForcingSpec& forcing, std::span<const double> nodes);

bool forcing_is_zero(const ForcingSpec& forcing);

}  // namespace dispersive
