#include "dispersive/lemmas.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "dispersive/error.hpp"
#include "dispersive/precision.hpp"

namespace dispersive {
namespace {

double sign_pow(int e) { return (e % 2 == 0) ? 1.0 : -1.0; }

// Coefficients of one derivative in working precision. Exact derivative
// coefficients matter: when deg u < 2j+1 the integral side is exactly zero
// while individual boundary products can reach 1e16 or more.
using Coeffs = std::vector<wide_real>;

wide_real evaluate(const Coeffs& c, wide_real x) {
    wide_real acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Coeffs derive(const Coeffs& c) {
    if (c.size() <= 1) return {};
    Coeffs out(c.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c[i + 1] * wide_real(static_cast<double>(i + 1));
    return out;
}

// Integral over (0, L) of x^shift * p(x) q(x).
wide_real integrate_product(const Coeffs& p, const Coeffs& q, int shift, wide_real L) {
    if (p.empty() || q.empty()) return 0;
    Coeffs prod(p.size() + q.size() - 1, wide_real(0));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t k = 0; k < q.size(); ++k) prod[i + k] += p[i] * q[k];
    wide_real acc = 0;
    for (std::size_t m = prod.size(); m-- > 0;) {
        const auto e = static_cast<double>(m + 1 + static_cast<std::size_t>(shift));
        acc = acc * L + prod[m] / wide_real(e);
    }
    // acc now holds sum prod[m] L^m / (m+1+shift); scale by L^{1+shift}.
    for (int s = 0; s <= shift; ++s) acc *= L;
    return acc;
}

struct Jets {
    std::vector<Coeffs> d;  // d[m] = D^m u
    wide_real length;

    Jets(const Polynomial& u, int max_order, double L) : length(L) {
        d.reserve(static_cast<std::size_t>(max_order) + 1);
        d.emplace_back(u.coeffs().begin(), u.coeffs().end());
        for (int m = 1; m <= max_order; ++m) d.push_back(derive(d.back()));
    }

    const Coeffs& operator[](int m) const { return d[static_cast<std::size_t>(m)]; }

    // g(L) - g(0) for a pointwise expression g(x) built from the jets.
    wide_real jump(const std::function<wide_real(wide_real)>& g) const { return g(length) - g(wide_real(0)); }

    wide_real at(int m, wide_real x) const { return evaluate((*this)[m], x); }

    wide_real inner(int m, int k, bool weighted) const {
        return integrate_product((*this)[m], (*this)[k], weighted ? 1 : 0, length);
    }
};

IdentityResidual finish(wide_real lhs, wide_real rhs, wide_real norm_block) {
    IdentityResidual r;
    r.lhs = to_double(lhs);
    r.rhs = to_double(rhs);
    r.norm_block = to_double(norm_block);
    r.residual = to_double(abs_value(lhs - rhs));
    return r;
}

IdentityResidual single_odd(const Polynomial& u, int j, double L, bool weighted) {
    const Jets D(u, 2 * j + 1, L);
    const wide_real lhs = D.inner(2 * j + 1, 0, weighted);
    const auto w = [weighted](wide_real x) { return weighted ? x : wide_real(1); };

    wide_real rhs = 0;
    for (int k = 1; k <= j; ++k) {
        rhs += sign_pow(k + 1) * D.jump([&](wide_real x) { return w(x) * D.at(k - 1, x) * D.at(2 * j + 1 - k, x); });
    }
    rhs += sign_pow(j) * 0.5 * D.jump([&](wide_real x) {
        const wide_real v = D.at(j, x);
        return w(x) * v * v;
    });
    wide_real norm_block = 0;
    if (weighted) {
        for (int k = 1; k <= j; ++k)
            rhs += sign_pow(k) * k * D.jump([&](wide_real x) { return D.at(k - 1, x) * D.at(2 * j - k, x); });
        norm_block = sign_pow(j + 1) * (2.0 * j + 1.0) / 2.0 * D.inner(j, j, false);
        rhs += norm_block;
    }
    return finish(lhs, rhs, norm_block);
}

IdentityResidual alternating_sum(const Polynomial& u, int l, double L, bool weighted) {
    const Jets D(u, 2 * l + 1, L);
    const auto w = [weighted](wide_real x) { return weighted ? x : wide_real(1); };
    wide_real lhs = 0;
    for (int j = 1; j <= l; ++j) lhs += sign_pow(j + 1) * D.inner(2 * j + 1, 0, weighted);

    wide_real rhs = 0;
    for (int i = 0; i <= l - 1; ++i) {
        rhs += D.jump([&](wide_real x) {
            wide_real inner = 0;
            for (int k = 1; k <= l - i; ++k) inner += sign_pow(k + 1) * D.at(2 * k + i, x);
            return w(x) * D.at(i, x) * inner;
        });
    }
    rhs -= 0.5 * D.jump([&](wide_real x) {
        wide_real s = 0;
        for (int j = 1; j <= l; ++j) {
            const wide_real v = D.at(j, x);
            s += v * v;
        }
        return w(x) * s;
    });
    wide_real norm_block = 0;
    if (weighted) {
        for (int i = 0; i <= l - 1; ++i) {
            rhs += (1.0 + i) * D.jump([&](wide_real x) {
                wide_real inner = 0;
                for (int k = 1; k <= l - i; ++k) inner += sign_pow(k) * D.at(2 * k + i - 1, x);
                return D.at(i, x) * inner;
            });
        }
        for (int j = 1; j <= l; ++j) norm_block += (2.0 * j + 1.0) / 2.0 * D.inner(j, j, false);
        rhs += norm_block;
    }
    return finish(lhs, rhs, norm_block);
}

}  // namespace

std::string Identity::name() const {
    switch (kind) {
        case IdentityKind::SingleOdd: return "single_odd(j=" + std::to_string(order) + ")";
        case IdentityKind::SingleOddWeighted: return "single_odd_weighted(j=" + std::to_string(order) + ")";
        case IdentityKind::AlternatingSum: return "alternating_sum(l=" + std::to_string(order) + ")";
        case IdentityKind::AlternatingSumWeighted: return "alternating_sum_weighted(l=" + std::to_string(order) + ")";
    }
    return "unknown";
}

IdentityResidual identity_residual(const Polynomial& u, Identity identity, double length) {
    if (identity.order < 1) throw Error(ErrorKind::InvalidArgument, "identity order must be >= 1");
    if (!(length > 0.0)) throw Error(ErrorKind::InvalidArgument, "interval length must be > 0");
    switch (identity.kind) {
        case IdentityKind::SingleOdd: return single_odd(u, identity.order, length, false);
        case IdentityKind::SingleOddWeighted: return single_odd(u, identity.order, length, true);
        case IdentityKind::AlternatingSum: return alternating_sum(u, identity.order, length, false);
        case IdentityKind::AlternatingSumWeighted: return alternating_sum(u, identity.order, length, true);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown identity");
}

LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& options) {
    if (options.max_order < 1 || options.cases < 1 || options.max_degree < 1)
        throw Error(ErrorKind::InvalidArgument, "lemma suite needs max_order, cases and max_degree >= 1");
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> degree(1, options.max_degree);
    LemmaSuiteReport report;
    for (IdentityKind kind : {IdentityKind::SingleOdd, IdentityKind::SingleOddWeighted, IdentityKind::AlternatingSum,
                              IdentityKind::AlternatingSumWeighted})
        for (int order = 1; order <= options.max_order; ++order)
            for (double length : options.lengths) {
                LemmaSuiteEntry e{Identity{kind, order}, length, options.cases, 0, 0.0};
                for (int t = 0; t < options.cases; ++t) {
                    std::vector<double> c(static_cast<std::size_t>(degree(rng)) + 1);
                    for (double& v : c) v = coef(rng);
                    const IdentityResidual r = identity_residual(Polynomial(std::move(c)), e.identity, length);
                    const double scaled = r.residual / (1.0 + std::abs(r.lhs));
                    e.worst_scaled_residual = std::max(e.worst_scaled_residual, scaled);
                    if (!r.within(options.tolerance)) ++e.failures;
                }
                report.passed = report.passed && e.failures == 0;
                report.entries.push_back(e);
            }
    return report;
}

}  // namespace dispersive
