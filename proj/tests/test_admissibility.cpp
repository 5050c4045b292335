#include <cmath>
#include <random>

#include "doctest.h"
#include "dispersive/admissibility.hpp"
#include "dispersive/error.hpp"
#include "dispersive/lemmas.hpp"
#include "test_support.hpp"

using namespace dispersive;
using dispersive::testing::random_vector;

namespace {

BoundaryJet random_jet(std::mt19937_64& rng, int l, double scale = 1.0) {
    const auto n = static_cast<std::size_t>(2 * l);
    return {random_vector(rng, n, -scale, scale), random_vector(rng, n, -scale, scale)};
}

double jet_norm2(const BoundaryJet& j) {
    double s = 0.0;
    for (double v : j.at0) s += v * v;
    for (double v : j.atL) s += v * v;
    return s;
}

// u = x(1-x)q(x) corrected by a multiple of x(1-x)^l so that D^l u(1) = 0.
Polynomial bc_compatible_polynomial(std::mt19937_64& rng, int l) {
    const Polynomial x = Polynomial::monomial(1);
    const Polynomial one_minus_x({1.0, -1.0});
    const Polynomial base = x * one_minus_x * dispersive::testing::random_polynomial(rng, 2 * l + 3);
    Polynomial w = x;
    for (int k = 0; k < l; ++k) w = w * one_minus_x;
    return base - (base.derivative(l)(1.0) / w.derivative(l)(1.0)) * w;
}

BoundaryJet jet_of(const Polynomial& u, int l) {
    BoundaryJet j{std::vector<double>(static_cast<std::size_t>(2 * l)), std::vector<double>(static_cast<std::size_t>(2 * l))};
    for (int k = 1; k <= 2 * l; ++k) {
        j.at0[static_cast<std::size_t>(k - 1)] = u.derivative(k)(0.0);
        j.atL[static_cast<std::size_t>(k - 1)] = u.derivative(k)(1.0);
    }
    return j;
}

// Integral side sum_j (-1)^{j+1} (D^{2j+1}u, u) by exact integration. The
// interpolants have large cancelling coefficients, so this goes through the
// wide-precision identity evaluator rather than the double inner product.
double integral_side(int l, const Polynomial& u) {
    return identity_residual(u, {IdentityKind::AlternatingSum, l}, 1.0).lhs;
}

std::vector<double> uniform_targets(std::mt19937_64& rng, int n) {
    return random_vector(rng, static_cast<std::size_t>(n), 0.1, 2.0);
}

}  // namespace

TEST_CASE("l=2 reduced worked example") {
    const auto r = margins(2, CanonicalDiagonal{{0.0}, {1.0}});
    CHECK(r.family == FormulaFamily::L2_reduced);
    CHECK(r.margins_A == std::vector<double>{0.5, 0.25});
    CHECK(r.margins_B == std::vector<double>{0.5});
    CHECK(r.admissible);
}

TEST_CASE("l=3 reduced worked example") {
    // a = {a_42, a_51}, b = {b_42, b_51}
    const auto r = margins(3, CanonicalDiagonal{{0.0, 1.0}, {1.0, -1.0}});
    CHECK(r.family == FormulaFamily::L3_reduced);
    CHECK(r.margins_A == std::vector<double>{0.5, 0.5, 0.25});
    CHECK(r.margins_B == std::vector<double>{0.5, 0.5});
    CHECK(r.admissible);
}

TEST_CASE("inadmissible zero sets") {
    const auto r4 = margins(4, CanonicalDiagonal{{0, 0, 0}, {0, 0, 0}});
    CHECK(r4.family == FormulaFamily::GeneralL_reduced);
    CHECK(r4.margins_B[2] == -2.0);
    CHECK_FALSE(r4.admissible);
    const auto r2 = margins(2, CanonicalDiagonal{{0.0}, {0.0}});
    CHECK(r2.margins_B[0] == -0.5);
    CHECK_FALSE(r2.admissible);
}


TEST_CASE("l=4 reduced example with nonzero diagonal") {
    // j=1: a_53, b_53; j=2: a_62, b_62; j=3: a_71 = b_71 = 0.
    const auto r = margins(4, CanonicalDiagonal{{-3.5, 3.5, 0.0}, {3.5, -2.5, 0.0}});
    CHECK(r.margins_B[2] == 1.5);
    CHECK(r.margins_B[1] == 0.5);
    CHECK(r.margins_A[2] == 0.5);
    CHECK(r.margins_A[1] == 0.5);
    CHECK(r.margins_A[3] == 0.25);
    // B_1 = b_71 - (|b_53|)^2/2 + 2 - 4,  A_1 = -a_71 - (|a_53|)^2/2 - 8 + 5.
    CHECK(r.margins_B[0] == -8.125);
    CHECK(r.margins_A[0] == -9.125);
    CHECK_FALSE(r.admissible);
}

TEST_CASE("l=1 is vacuously admissible") {
    const auto r = margins(1, CanonicalDiagonal{});
    CHECK(r.family == FormulaFamily::L1);
    CHECK(r.margins_A.empty());
    CHECK(r.margins_B.empty());
    CHECK(r.admissible);
}

TEST_CASE("raw forms must be reduced first") {
    const BoundaryCoefficients raw = RawLinearForms{Matrix(1, 3), Matrix(2, 3)};
    try {
        margins(2, raw);
        FAIL("expected UnreducedRawForms");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnreducedRawForms);
    }
    CHECK_THROWS_AS(boundary_form(2, raw, BoundaryJet{std::vector<double>(4), std::vector<double>(4)}), Error);
}

TEST_CASE("margins are bit-identical across calls") {
    const CanonicalDiagonal d{{0.3, -1.7, 2.2, 0.1}, {1.1, 0.4, -0.9, 3.3}};
    const auto r1 = margins(5, d);
    const auto r2 = margins(5, d);
    CHECK(r1.margins_A == r2.margins_A);
    CHECK(r1.margins_B == r2.margins_B);
}

TEST_CASE("target margins are reproduced exactly") {
    std::mt19937_64 rng(8);
    for (int l = 2; l <= 8; ++l) {
        const auto tA = uniform_targets(rng, l - 1);
        const auto tB = uniform_targets(rng, l - 1);
        const auto r = margins(l, canonical_with_margins(l, tA, tB));
        for (int i = 0; i < l - 1; ++i) {
            // Coefficients grow like the squared partial sums, so the recovered margins
            // carry cancellation error proportional to the largest coefficient.
            const CanonicalDiagonal d = canonical_with_margins(l, tA, tB);
            double big = 1.0;
            for (double v : d.a) big = std::max(big, std::abs(v));
            for (double v : d.b) big = std::max(big, std::abs(v));
            CHECK(std::abs(r.margins_A[static_cast<std::size_t>(i)] - tA[static_cast<std::size_t>(i)]) <= 1e-14 * big);
            CHECK(std::abs(r.margins_B[static_cast<std::size_t>(i)] - tB[static_cast<std::size_t>(i)]) <= 1e-14 * big);
        }
        CHECK(r.margins_A.back() == 0.25);
        CHECK(r.admissible);
    }
}

TEST_CASE("boundary form, hand example") {
    const BoundaryCoefficients bc = CanonicalDiagonal{{0.0}, {1.0}};
    CHECK(boundary_form(2, bc, BoundaryJet{std::vector<double>(4), std::vector<double>(4)}) == 0.0);
    const BoundaryJet jet{{1.0, 1.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}};
    CHECK(boundary_form(2, bc, jet) == doctest::Approx(1.5));
}

TEST_CASE("boundary form equals the integral side on bc-compatible polynomials") {
    // The diagonal coefficients are read off the polynomial's own jet, so imposing
    // the relations leaves the jet unchanged and the integral side is exact.
    std::mt19937_64 rng(41);
    for (int l = 1; l <= 5; ++l) {
        for (int t = 0; t < 20; ++t) {
            const Polynomial u = bc_compatible_polynomial(rng, l);
            const BoundaryJet jet = jet_of(u, l);
            CanonicalDiagonal d;
            for (int j = 1; j <= l - 1; ++j) {
                const auto hi = static_cast<std::size_t>(l + j - 1), lo = static_cast<std::size_t>(l - j - 1);
                d.a.push_back(jet.at0[hi] / jet.at0[lo]);
                d.b.push_back(jet.atL[hi] / jet.atL[lo]);
            }
            const double I = boundary_form(l, d, jet);
            const double direct = integral_side(l, u);
            CHECK(I == doctest::Approx(direct).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("l=3 worked set: I dominates the margin quadratic") {
    const BoundaryCoefficients bc = CanonicalDiagonal{{0.0, 1.0}, {1.0, -1.0}};
    const auto r = margins(3, bc);
    std::mt19937_64 rng(12);
    for (int t = 0; t < 1000; ++t) {
        const BoundaryJet jet = random_jet(rng, 3);
        const double I = boundary_form(3, bc, jet);
        const double q = margin_quadratic(r, jet);
        CHECK(I >= q - 1e-12 * jet_norm2(jet));
        CHECK(q >= 0.0);
    }
}

TEST_CASE("positivity transfer for admissible diagonal sets") {
    std::mt19937_64 rng(77);
    for (int l = 2; l <= 6; ++l) {
        double worst = INFINITY;
        for (int s = 0; s < 100; ++s) {
            const BoundaryCoefficients bc = canonical_with_margins(l, uniform_targets(rng, l - 1), uniform_targets(rng, l - 1));
            const auto r = margins(l, bc);
            REQUIRE(r.admissible);
            for (int t = 0; t < 50; ++t) {
                const BoundaryJet jet = random_jet(rng, l, 3.0);
                const double gap = boundary_form(l, bc, jet) - margin_quadratic(r, jet);
                worst = std::min(worst, gap / jet_norm2(jet));
                CHECK(gap >= -1e-12 * jet_norm2(jet));
            }
        }
        MESSAGE("l=" << l << " worst normalized gap " << worst);
    }
}

TEST_CASE("positivity transfer for perturbed full coefficient sets") {
    std::mt19937_64 rng(78);
    std::uniform_real_distribution<double> small(-0.05, 0.05);
    for (int l = 2; l <= 6; ++l) {
        int admissible = 0;
        for (int s = 0; s < 100; ++s) {
            GeneralFull g = to_general(l, canonical_with_margins(l, uniform_targets(rng, l - 1), uniform_targets(rng, l - 1)));
            for (std::size_t i = 0; i < g.A.rows(); ++i)
                for (std::size_t j = 0; j < g.A.cols(); ++j) g.A(i, j) += small(rng);
            for (std::size_t i = 0; i < g.B.rows(); ++i)
                for (std::size_t j = 0; j < g.B.cols(); ++j) g.B(i, j) += small(rng);
            const BoundaryCoefficients bc = g;
            const auto r = margins(l, bc);
            if (!r.admissible) continue;
            ++admissible;
            for (int t = 0; t < 50; ++t) {
                const BoundaryJet jet = random_jet(rng, l, 3.0);
                CHECK(boundary_form(l, bc, jet) >= margin_quadratic(r, jet) - 1e-12 * jet_norm2(jet));
            }
        }
        MESSAGE("l=" << l << " admissible perturbed sets " << admissible);
        CHECK(admissible > 0);
    }
}

TEST_CASE("full form reduces to the diagonal formulas when off-diagonals vanish") {
    const CanonicalDiagonal d2{{0.2}, {1.3}};
    const auto g2 = margins(2, to_general(2, d2));
    const auto r2 = margins(2, d2);
    CHECK(g2.family == FormulaFamily::L2_general);
    CHECK(g2.margins_A == r2.margins_A);
    CHECK(g2.margins_B == r2.margins_B);

    // Canonical l=3: D^4u(L) = b_42 D^2u(L) and D^5u(L) = b_51 Du(L); the full
    // l=3 form also carries b_31 (D^3u(L) = b_31 Du(L)), zero here.
    const CanonicalDiagonal d3{{-0.4, 1.2}, {0.9, -1.5}};
    const auto g3 = margins(3, to_general(3, d3));
    const auto r3 = margins(3, d3);
    CHECK(g3.family == FormulaFamily::L3_general);
    for (std::size_t i = 0; i < 3; ++i) CHECK(g3.margins_A[i] == doctest::Approx(r3.margins_A[i]).epsilon(1e-15));
    for (std::size_t i = 0; i < 2; ++i) CHECK(g3.margins_B[i] == doctest::Approx(r3.margins_B[i]).epsilon(1e-15));
}

TEST_CASE("boundary form scales quadratically") {
    std::mt19937_64 rng(5);
    for (int l = 1; l <= 6; ++l) {
        const CanonicalDiagonal d{random_vector(rng, static_cast<std::size_t>(l - 1)), random_vector(rng, static_cast<std::size_t>(l - 1))};
        BoundaryJet jet = random_jet(rng, l);
        const double I = boundary_form(l, d, jet);
        for (double c : {-2.0, 0.5, 3.0}) {
            BoundaryJet scaled = jet;
            for (double& v : scaled.at0) v *= c;
            for (double& v : scaled.atL) v *= c;
            CHECK(boundary_form(l, d, scaled) == doctest::Approx(c * c * I).epsilon(1e-13));
        }
    }
}

TEST_CASE("cross-term bound") {
    const std::vector<double> base{1.0, 0.0, 1.0};
    const auto b = cross_term_bound(4, base);
    CHECK(b.lhs == 1.0);
    CHECK(b.rhs == -1.0);
    const auto z = cross_term_bound(7, std::vector<double>(7, 0.0));
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK_THROWS_AS(cross_term_bound(3, base), Error);

    std::mt19937_64 rng(90);
    for (int l = 4; l <= 8; ++l) {
        for (int t = 0; t < 10000; ++t) {
            auto y = random_vector(rng, static_cast<std::size_t>(l));
            double n2 = 0.0;
            for (int i = 0; i < l - 1; ++i) n2 += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
            const double inv = 1.0 / std::sqrt(n2);
            for (double& v : y) v *= inv;
            const auto r = cross_term_bound(l, y);
            REQUIRE(r.lhs >= r.rhs - 1e-12);
            if (l == 6 && t < 100) CHECK(r.rhs == doctest::Approx((3.0 - l) / 2.0).epsilon(1e-14));
        }
    }
}
