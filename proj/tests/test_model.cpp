#include <cmath>
#include <random>

#include "doctest.h"
#include "dispersive/error.hpp"
#include "dispersive/model.hpp"
#include "test_support.hpp"

using namespace dispersive;
using dispersive::testing::random_vector;

namespace {

ProblemSpec canonical_spec(int l, std::vector<double> a, std::vector<double> b) {
    ProblemSpec s;
    s.l = l;
    s.lambda = 1.0;
    s.length = 1.0;
    s.bc = CanonicalDiagonal{std::move(a), std::move(b)};
    s.forcing = ExactPolynomial{Polynomial::constant(1.0)};
    return s;
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    Matrix m(r, c);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

// Raw forms with a well-conditioned high-derivative block: diagonal dominance keeps
// the block invertible.
RawLinearForms random_raw(std::mt19937_64& rng, int l) {
    const auto ul = static_cast<std::size_t>(l);
    RawLinearForms raw{random_matrix(rng, ul - 1, 2 * ul - 1), random_matrix(rng, ul, 2 * ul - 1)};
    for (std::size_t r = 0; r + 1 < ul; ++r) raw.alpha(r, ul + r) += 3.0;
    for (std::size_t r = 0; r < ul; ++r) raw.beta(r, ul - 1 + r) += 3.0;
    return raw;
}

double row_norm(const Matrix& m, std::size_t r) {
    double s = 0.0;
    for (double v : m.row(r)) s += std::abs(v);
    return s;
}

// Largest |form . jet| over rows after the reduced coefficients fill in the high entries.
double substitute_back(const RawLinearForms& raw, const GeneralFull& g, std::mt19937_64& rng, int l) {
    const auto ul = static_cast<std::size_t>(l);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        std::vector<double> j0 = random_vector(rng, 2 * ul - 1);
        std::vector<double> jL = random_vector(rng, 2 * ul - 1);
        for (std::size_t r = 0; r + 1 < ul; ++r) {
            double v = 0.0;
            for (std::size_t c = 0; c < ul; ++c) v += g.A(r, c) * j0[c];
            j0[ul + r] = v;
        }
        for (std::size_t r = 0; r < ul; ++r) {
            double v = 0.0;
            for (std::size_t c = 0; c + 1 < ul; ++c) v += g.B(r, c) * jL[c];
            jL[ul - 1 + r] = v;
        }
        for (std::size_t r = 0; r < raw.alpha.rows(); ++r) {
            double v = 0.0;
            for (std::size_t c = 0; c < j0.size(); ++c) v += raw.alpha(r, c) * j0[c];
            worst = std::max(worst, std::abs(v) / row_norm(raw.alpha, r));
        }
        for (std::size_t r = 0; r < raw.beta.rows(); ++r) {
            double v = 0.0;
            for (std::size_t c = 0; c < jL.size(); ++c) v += raw.beta(r, c) * jL[c];
            worst = std::max(worst, std::abs(v) / row_norm(raw.beta, r));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("valid canonical spec has no violations") {
    CHECK(validate_spec(canonical_spec(2, {0.0}, {1.0})).empty());
    CHECK(validate_spec(canonical_spec(1, {}, {})).empty());
}

TEST_CASE("violations name the offending field") {
    auto s = canonical_spec(2, {0.0}, {1.0});
    s.lambda = 0.0;
    auto v = validate_spec(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "lambda");
    CHECK(v[0].message == "lambda must be > 0");

    v = validate_spec(canonical_spec(3, {1.0}, {1.0}));
    REQUIRE(v.size() == 2);
    CHECK(v[0].message == "coefficient map size must be l-1=2");
    CHECK(v[1].field == "bc.b");

    s = canonical_spec(2, {0.0}, {1.0});
    s.length = -1.0;
    s.lambda = -2.0;
    CHECK(validate_spec(s).size() == 2);
    CHECK_THROWS_AS(require_valid(s), Error);

    s = canonical_spec(2, {0.0}, {1.0});
    s.bc = GeneralFull{Matrix(1, 2), Matrix(1, 1)};
    v = validate_spec(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "bc.B");
}

TEST_CASE("identity high block reduces to the encoded coefficients") {
    // D^3u(0) - 0.3 Du(0) - 0.1 D^2u(0) = 0
    RawLinearForms raw{Matrix(1, 3), Matrix(2, 3)};
    raw.alpha(0, 0) = -0.3;
    raw.alpha(0, 1) = -0.1;
    raw.alpha(0, 2) = 1.0;
    raw.beta(0, 1) = 1.0;
    raw.beta(1, 2) = 1.0;
    const GeneralFull g = reduce_raw_forms(2, raw);
    CHECK(g.A(0, 0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(g.A(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(g.B(0, 0) == 0.0);
    CHECK(g.B(1, 0) == 0.0);
}

TEST_CASE("zero alpha row is singular") {
    RawLinearForms raw{Matrix(1, 3), Matrix(2, 3)};
    raw.beta(0, 1) = 1.0;
    raw.beta(1, 2) = 1.0;
    try {
        reduce_raw_forms(2, raw);
        FAIL("expected SingularReduction");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularReduction);
    }
}

TEST_CASE("l=3 reduction agrees with Cramer quotients") {
    std::mt19937_64 rng(5);
    const RawLinearForms raw = random_raw(rng, 3);
    const GeneralFull g = reduce_raw_forms(3, raw);
    // alpha's high block is 2x2 over columns 3,4 (D^4, D^5).
    const auto& a = raw.alpha;
    const double det = a(0, 3) * a(1, 4) - a(0, 4) * a(1, 3);
    for (std::size_t j = 0; j < 3; ++j) {
        const double r0 = -a(0, j), r1 = -a(1, j);
        const double x0 = (r0 * a(1, 4) - a(0, 4) * r1) / det;
        const double x1 = (a(0, 3) * r1 - r0 * a(1, 3)) / det;
        CHECK(g.A(0, j) == doctest::Approx(x0).epsilon(1e-13));
        CHECK(g.A(1, j) == doctest::Approx(x1).epsilon(1e-13));
    }
    CHECK(substitute_back(raw, g, rng, 3) <= 1e-10);
}

TEST_CASE("substitute-back residual on random invertible systems") {
    std::mt19937_64 rng(17);
    for (int l = 2; l <= 5; ++l)
        for (int t = 0; t < 20; ++t) {
            const RawLinearForms raw = random_raw(rng, l);
            CHECK(substitute_back(raw, reduce_raw_forms(l, raw), rng, l) <= 1e-10);
        }
}

TEST_CASE("round trip through raw forms") {
    std::mt19937_64 rng(23);
    for (int l = 1; l <= 6; ++l) {
        const auto ul = static_cast<std::size_t>(l);
        const GeneralFull g{random_matrix(rng, ul - 1, ul), random_matrix(rng, ul, ul - 1)};
        const GeneralFull back = reduce_raw_forms(l, to_raw_forms(g));
        for (std::size_t r = 0; r < g.A.rows(); ++r)
            for (std::size_t c = 0; c < g.A.cols(); ++c) CHECK(std::abs(back.A(r, c) - g.A(r, c)) <= 1e-12);
        for (std::size_t r = 0; r < g.B.rows(); ++r)
            for (std::size_t c = 0; c < g.B.cols(); ++c) CHECK(std::abs(back.B(r, c) - g.B(r, c)) <= 1e-12);
    }
}

TEST_CASE("reduction ignores row scaling") {
    std::mt19937_64 rng(31);
    for (int l = 2; l <= 4; ++l) {
        RawLinearForms raw = random_raw(rng, l);
        const GeneralFull g = reduce_raw_forms(l, raw);
        for (std::size_t c = 0; c < raw.alpha.cols(); ++c) raw.alpha(0, c) *= -7.5;
        for (std::size_t c = 0; c < raw.beta.cols(); ++c) raw.beta(raw.beta.rows() - 1, c) *= 1e-3;
        const GeneralFull s = reduce_raw_forms(l, raw);
        for (std::size_t r = 0; r < g.A.rows(); ++r)
            for (std::size_t c = 0; c < g.A.cols(); ++c) CHECK(s.A(r, c) == doctest::Approx(g.A(r, c)).epsilon(1e-12));
        for (std::size_t r = 0; r < g.B.rows(); ++r)
            for (std::size_t c = 0; c < g.B.cols(); ++c) CHECK(s.B(r, c) == doctest::Approx(g.B(r, c)).epsilon(1e-12));
    }
}

TEST_CASE("canonical coefficients land on the diagonal") {
    const GeneralFull g = to_general(3, CanonicalDiagonal{{0.25, 0.5}, {-1.0, 2.0}});
    // A rows D^4, D^5 at 0: D^4 = a_42 D^2, D^5 = a_51 D^1.
    CHECK(g.A(0, 1) == 0.25);
    CHECK(g.A(1, 0) == 0.5);
    // B rows D^3, D^4, D^5 at L: D^3 = 0, D^4 = b_42 D^2, D^5 = b_51 D^1.
    CHECK(g.B(0, 0) == 0.0);
    CHECK(g.B(0, 1) == 0.0);
    CHECK(g.B(1, 1) == -1.0);
    CHECK(g.B(2, 0) == 2.0);
}

TEST_CASE("forcing samples") {
    const std::vector<double> nodes{0.0, 0.5, 1.0};
    const auto trig = sample_forcing(TrigSum{{{2.0, 3.0, 0.5}}}, nodes);
    CHECK(trig[1] == doctest::Approx(2.0 * std::sin(2.0)));
    CHECK_THROWS_AS(sample_forcing(GridSamples{{1.0, 2.0}}, nodes), Error);
    CHECK(forcing_is_zero(TrigSum{{{1.0, 0.0, 0.0}}}));
    CHECK_FALSE(forcing_is_zero(TrigSum{{{1.0, 1.0, 0.0}}}));
    CHECK(forcing_is_zero(ExactPolynomial{}));
}
