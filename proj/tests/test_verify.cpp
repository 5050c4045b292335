#include <cmath>
#include <random>

#include "doctest.h"
#include "dispersive/error.hpp"
#include "dispersive/verify.hpp"
#include "test_support.hpp"

using namespace dispersive;
using dispersive::testing::random_vector;

namespace {

ErrorKind kind_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

ProblemSpec manufactured(int l, BoundaryCoefficients bc, double lambda, double length, const Polynomial& u) {
    ProblemSpec s;
    s.l = l;
    s.lambda = lambda;
    s.length = length;
    s.bc = std::move(bc);
    s.forcing = ExactPolynomial{forcing_for(u, lambda, l)};
    return s;
}

}  // namespace

TEST_CASE("l=1 cubic family") {
    for (double L : {1.0, 2.5}) {
        const Polynomial u = polynomial_satisfying_bcs(1, CanonicalDiagonal{}, L, 3, 4);
        // x (L - x)^2 / L^2 = x - 2x^2/L + x^3/L^2
        REQUIRE(u.degree() == 3);
        CHECK(u.coefficient(0) == 0.0);
        CHECK(u.coefficient(1) == doctest::Approx(1.0));
        CHECK(u.coefficient(2) == doctest::Approx(-2.0 / L));
        CHECK(u.coefficient(3) == doctest::Approx(1.0 / (L * L)));
    }
}

TEST_CASE("l=2 polynomial satisfies its relations") {
    const BoundaryCoefficients bc = CanonicalDiagonal{{0.0}, {1.0}};
    const Polynomial u = polynomial_satisfying_bcs(2, bc, 1.0, 7, 11);
    CHECK(u.degree() <= 7);
    const double d3_0 = u.derivative(3)(0.0), d3_L = u.derivative(3)(1.0), d1_L = u.derivative(1)(1.0);
    CHECK(std::abs(d3_0) <= 1e-10 * (1.0 + std::abs(u.derivative(1)(0.0))));
    CHECK(std::abs(d3_L - d1_L) <= 1e-10 * (std::abs(d3_L) + std::abs(d1_L)));
    CHECK(std::abs(u.derivative(2)(1.0)) <= 1e-10);
    CHECK(std::abs(u(0.0)) <= 1e-12);
    CHECK(std::abs(u(1.0)) <= 1e-10);
}

TEST_CASE("too few coefficients leave an empty nullspace") {
    CHECK(kind_of([] { polynomial_satisfying_bcs(2, CanonicalDiagonal{{0.0}, {1.0}}, 1.0, 4, 1); }) ==
          ErrorKind::EmptyNullspace);
}

TEST_CASE("random boundary sets are satisfied") {
    std::mt19937_64 rng(6);
    for (int l = 1; l <= 5; ++l) {
        for (int t = 0; t < 10; ++t) {
            const auto ul = static_cast<std::size_t>(l);
            GeneralFull g{Matrix(ul - 1, ul), Matrix(ul, ul - 1)};
            for (std::size_t i = 0; i < g.A.rows(); ++i)
                for (std::size_t j = 0; j < g.A.cols(); ++j) g.A(i, j) = random_vector(rng, 1, -2.0, 2.0)[0];
            for (std::size_t i = 0; i < g.B.rows(); ++i)
                for (std::size_t j = 0; j < g.B.cols(); ++j) g.B(i, j) = random_vector(rng, 1, -2.0, 2.0)[0];
            const double L = 0.5 + t * 0.2;
            const Polynomial u = polynomial_satisfying_bcs(l, g, L, 2 * l + 2 + t % 4, static_cast<std::uint64_t>(t));
            CHECK_FALSE(u.is_zero());
            CHECK(boundary_residual(l, g, L, u) <= 1e-10);
        }
    }
}

TEST_CASE("same seed, same polynomial") {
    const BoundaryCoefficients bc = CanonicalDiagonal{{0.3, -0.2}, {1.0, 0.5}};
    CHECK(polynomial_satisfying_bcs(3, bc, 1.2, 11, 9) == polynomial_satisfying_bcs(3, bc, 1.2, 11, 9));
    CHECK_FALSE(polynomial_satisfying_bcs(3, bc, 1.2, 11, 9) == polynomial_satisfying_bcs(3, bc, 1.2, 11, 10));
}

TEST_CASE("forcing of manufactured solutions") {
    const Polynomial u({0.0, 1.0, -2.0, 1.0});
    CHECK(forcing_for(u, 1.0, 1) == Polynomial({6.0, 1.0, -2.0, 1.0}));
    // Degree <= 2l: the top-order term D^{2l+1} drops out, lower odd orders remain.
    const Polynomial low({0.5, 1.0, -3.0, 2.0, 1.0});
    CHECK(forcing_for(low, 3.0, 2) == 3.0 * low + low.derivative(3));
    // Degree <= 2: every odd derivative of order >= 3 vanishes.
    const Polynomial quad({0.5, 1.0, 2.0});
    for (int l = 1; l <= 4; ++l) CHECK(forcing_for(quad, 2.0, l) == 2.0 * quad);
    CHECK(forcing_for(Polynomial(), 2.0, 3).is_zero());
    // Sign pattern +D^3 - D^5 + D^7.
    const Polynomial x7 = Polynomial::monomial(7);
    CHECK(forcing_for(x7, 1.0, 3) == x7 + x7.derivative(3) - x7.derivative(5) + x7.derivative(7));
}

TEST_CASE("exact regime: l=1 cubic") {
    const Polynomial u({0.0, 1.0, -2.0, 1.0});
    const auto r = convergence_study(manufactured(1, CanonicalDiagonal{}, 1.0, 1.0, u), u, {21, 41, 81}, 4);
    for (double e : r.max_errors) CHECK(e <= 1e-8);
    CHECK(r.exact_regime);
    CHECK(convergence_passes(r, 4));
}

TEST_CASE("exact regime: l=2 degree 9") {
    const BoundaryCoefficients bc = CanonicalDiagonal{{0.0}, {1.0}};
    const Polynomial u = polynomial_satisfying_bcs(2, bc, 1.0, 9, 5);
    REQUIRE(u.degree() == 9);
    const auto r = convergence_study(manufactured(2, bc, 1.0, 1.0, u), u, {41, 81, 161}, 4);
    for (double e : r.max_errors) CHECK(e <= 1e-6);
    CHECK(r.exact_regime);
}

TEST_CASE("self-convergence on a trigonometric forcing") {
    ProblemSpec s;
    s.l = 2;
    s.lambda = 1.0;
    s.length = 1.0;
    s.bc = CanonicalDiagonal{{0.0}, {1.0}};
    s.forcing = TrigSum{{{1.0, 4.0, 0.3}}};
    const auto r = self_convergence_study(s, nested_grids(41, 3), 1281, 4);
    CHECK(r.reference_n == 1281);
    CHECK(r.grid_sizes == std::vector<int>{41, 81, 161});
    CHECK_FALSE(r.exact_regime);
    CHECK(r.fitted_order >= 3.5);
    CHECK(kind_of([&] { self_convergence_study(s, {41, 81, 121}, 1281, 4); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("l2 estimate on a manufactured problem") {
    const BoundaryCoefficients bc = CanonicalDiagonal{{0.0}, {1.0}};
    const Polynomial u = polynomial_satisfying_bcs(2, bc, 1.0, 9, 2);
    const EstimateReport r = estimate_check(manufactured(2, bc, 2.0, 1.0, u), Grid(201, 1.0), 4);
    CHECK(r.l2_ratio <= 1.001);
    CHECK(r.trace_ok);
    CHECK(r.M1 == 0.25);
    CHECK(r.hl_ratio > 0.0);
    CHECK(std::isfinite(r.h2l1_ratio));
}

TEST_CASE("estimate preconditions") {
    ProblemSpec s;
    s.l = 2;
    s.bc = CanonicalDiagonal{{0.0}, {0.0}};
    s.forcing = TrigSum{{{1.0, 1.0, 0.0}}};
    CHECK(kind_of([&] { estimate_check(s, Grid(101, 1.0), 4); }) == ErrorKind::InadmissibleCoefficients);
    s.bc = CanonicalDiagonal{{0.0}, {1.0}};
    s.forcing = TrigSum{};
    CHECK(kind_of([&] { estimate_check(s, Grid(101, 1.0), 4); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("l=1 uses M1 = 1/2") {
    ProblemSpec s;
    s.l = 1;
    s.bc = CanonicalDiagonal{};
    s.forcing = TrigSum{{{1.0, 2.0, 0.5}}};
    const EstimateReport r = estimate_check(s, Grid(201, 1.0), 4);
    CHECK(r.M1 == 0.5);
    CHECK(r.passed());
}

TEST_CASE("random admissible cases respect the margin floor") {
    for (int l = 2; l <= 6; ++l)
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const ProblemSpec s = random_admissible_case(l, seed);
            const auto r = margins(l, s.bc);
            CHECK(r.admissible);
            CHECK(r.min_margin() >= 0.1 - 1e-12);
            CHECK(validate_spec(s).empty());
        }
}

TEST_CASE("splitmix64 reference value") {
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("small sweep passes and is reproducible") {
    SweepOptions o;
    o.l = 3;
    o.cases = 5;
    o.seed = 42;
    const auto a = sweep(o);
    const auto b = sweep(o);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].passed());
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].estimate.l2_ratio == b[i].estimate.l2_ratio);
        CHECK(a[i].estimate.trace_lhs == b[i].estimate.trace_lhs);
    }
}

TEST_CASE("higher-order ratio is stable under refinement") {
    for (int l = 1; l <= 3; ++l) {
        ProblemSpec s = random_admissible_case(std::max(l, 2), 3);
        s.l = l;
        if (l == 1) s.bc = CanonicalDiagonal{};
        const double coarse = estimate_check(s, Grid(201, s.length), 4).h2l1_ratio;
        const double fine = estimate_check(s, Grid(401, s.length), 4).h2l1_ratio;
        CHECK(std::abs(fine - coarse) <= 0.2 * coarse);
    }
}
