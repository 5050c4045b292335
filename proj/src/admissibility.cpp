#include "dispersive/admissibility.hpp"

#include <cmath>
#include <limits>

#include "dispersive/error.hpp"

namespace dispersive {
namespace {

double sq(double x) { return x * x; }
double sign_pow(int e) { return (e % 2 == 0) ? 1.0 : -1.0; }

// 1-based accessors matching the D^i indexing of the formulas.
struct Coefficients {
    const GeneralFull& g;
    int l;
    double a(int i, int j) const { return g.A(static_cast<std::size_t>(i - l - 1), static_cast<std::size_t>(j - 1)); }
    double b(int i, int j) const { return g.B(static_cast<std::size_t>(i - l), static_cast<std::size_t>(j - 1)); }
};

void finish(AdmissibilityReport& r) {
    r.admissible = true;
    for (double m : r.margins_A) r.admissible = r.admissible && m > 0.0;
    for (double m : r.margins_B) r.admissible = r.admissible && m > 0.0;
}

// |coefficient sums| of the reduced general-l formulas:
// odd j sums |c_1|, |c_3|, ..., |c_{j-2}|; even j sums |c_2|, |c_4|, ..., |c_{j-2}|.
double reduced_cross_sum(const std::vector<double>& c, int j) {
    double s = 0.0;
    if (j % 2 == 1) {
        for (int m = 1; m <= (j - 1) / 2; ++m) s += std::abs(c[static_cast<std::size_t>(2 * m - 2)]);
    } else {
        for (int m = 1; m <= j / 2 - 1; ++m) s += std::abs(c[static_cast<std::size_t>(2 * m - 1)]);
    }
    return s;
}

AdmissibilityReport reduced(int l, const CanonicalDiagonal& d) {
    AdmissibilityReport r;
    r.l = l;
    if (l == 2) {
        r.family = FormulaFamily::L2_reduced;
        // a = {a_31}, b = {b_31}
        r.margins_A = {-d.a[0] + 0.5, 0.25};
        r.margins_B = {d.b[0] - 0.5};
    } else if (l == 3) {
        r.family = FormulaFamily::L3_reduced;
        // a = {a_42, a_51}, b = {b_42, b_51}
        r.margins_A = {d.a[1] - 0.5, -d.a[0] + 0.5, 0.25};
        r.margins_B = {-d.b[1] - 0.5, d.b[0] - 0.5};
    } else {
        r.family = FormulaFamily::GeneralL_reduced;
        r.margins_A.assign(static_cast<std::size_t>(l), 0.0);
        r.margins_B.assign(static_cast<std::size_t>(l - 1), 0.0);
        const double lf = l;
        for (int j = 1; j <= l - 1; ++j) {
            const double sign = (j % 2 == 1) ? 1.0 : -1.0;
            const auto idx = static_cast<std::size_t>(l - j - 1);
            const double bj = d.b[static_cast<std::size_t>(j - 1)];
            const double aj = d.a[static_cast<std::size_t>(j - 1)];
            r.margins_B[idx] = sign * bj - 0.5 * sq(reduced_cross_sum(d.b, j)) + 2.0 - lf;
            r.margins_A[idx] = -sign * aj - 0.5 * sq(reduced_cross_sum(d.a, j)) - 2.0 * lf + 5.0;
        }
        r.margins_A.back() = 0.25;
    }
    finish(r);
    return r;
}

AdmissibilityReport full(int l, const GeneralFull& g) {
    const Coefficients c{g, l};
    AdmissibilityReport r;
    r.l = l;
    if (l == 2) {
        r.family = FormulaFamily::L2_general;
        r.margins_B = {c.b(3, 1) - 0.5 - sq(c.b(2, 1)) / 2.0};
        r.margins_A = {-c.a(3, 1) + 0.5 - sq(c.a(3, 2)), 0.25};
    } else if (l == 3) {
        r.family = FormulaFamily::L3_general;
        const double cross_L = 0.5 * (std::abs(c.b(3, 2)) + std::abs(c.b(5, 2)) + std::abs(c.b(4, 1)));
        r.margins_B = {c.b(3, 1) - c.b(5, 1) - 0.5 - sq(c.b(3, 1)) - cross_L,
                       c.b(4, 2) - 0.5 - sq(c.b(3, 2)) - cross_L};
        r.margins_A = {c.a(5, 1) - 0.5 - 0.5 * (std::abs(c.a(5, 2)) + std::abs(c.a(4, 1)) + std::abs(c.a(5, 3))),
                       -c.a(4, 2) + 0.5 - 0.5 * (std::abs(c.a(5, 2)) + std::abs(c.a(4, 1)) + std::abs(c.a(4, 3))),
                       0.25 - 0.5 * (std::abs(c.a(5, 3)) + std::abs(c.a(4, 3)))};
    } else {
        r.family = FormulaFamily::GeneralL_full;
        const double lf = l;
        // x = L: k runs over 2k+i >= l, k <= l-i.
        for (int i = 1; i <= l - 1; ++i) {
            double diag = 0.0;
            for (int k = 1; k <= l - i; ++k)
                if (2 * k + i >= l) diag += sign_pow(k + 1) * c.b(2 * k + i, i);
            double off = 0.0;
            for (int j = 1; j <= l - 1; ++j) {
                if (j == i) continue;
                double s = 0.0;
                for (int k = 1; k <= l - i; ++k)
                    if (2 * k + i >= l) s += std::abs(c.b(2 * k + i, j));
                off += sq(s);
            }
            r.margins_B.push_back(diag + (2.0 - lf) + (1.0 - lf) / 2.0 * sq(c.b(l, i)) - 0.5 * off);
        }
        // x = 0: k runs over 2k+i >= l+1, k <= l-i.
        double top_total = 0.0;
        for (int i = 1; i <= l - 1; ++i) {
            double diag = 0.0, top = 0.0;
            for (int k = 1; k <= l - i; ++k) {
                if (2 * k + i < l + 1) continue;
                diag += sign_pow(k) * c.a(2 * k + i, i);
                top += std::abs(c.a(2 * k + i, l));
            }
            double off = 0.0;
            for (int j = 1; j <= l - 1; ++j) {
                if (j == i) continue;
                double s = 0.0;
                for (int k = 1; k <= l - i; ++k)
                    if (2 * k + i >= l + 1) s += std::abs(c.a(2 * k + i, j));
                off += sq(s);
            }
            r.margins_A.push_back(diag + (5.0 - 2.0 * lf) - 0.5 * off - 0.5 * top);
            top_total += top;
        }
        r.margins_A.push_back(0.25 - 0.5 * top_total);
    }
    finish(r);
    return r;
}

}  // namespace

std::string_view to_string(FormulaFamily family) {
    switch (family) {
        case FormulaFamily::L1: return "L1";
        case FormulaFamily::L2_general: return "L2_general";
        case FormulaFamily::L2_reduced: return "L2_reduced";
        case FormulaFamily::L3_general: return "L3_general";
        case FormulaFamily::L3_reduced: return "L3_reduced";
        case FormulaFamily::GeneralL_full: return "GeneralL_full";
        case FormulaFamily::GeneralL_reduced: return "GeneralL_reduced";
    }
    return "unknown";
}

double AdmissibilityReport::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : margins_A) m = std::min(m, v);
    for (double v : margins_B) m = std::min(m, v);
    return m;
}

AdmissibilityReport margins(int l, const BoundaryCoefficients& bc) {
    if (is_raw(bc)) throw Error(ErrorKind::UnreducedRawForms, "raw linear forms must be reduced before computing margins");
    if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be >= 1");
    if (l == 1) {
        AdmissibilityReport r;
        r.l = 1;
        r.family = FormulaFamily::L1;
        return r;
    }
    if (const auto* d = std::get_if<CanonicalDiagonal>(&bc)) {
        if (d->a.size() != static_cast<std::size_t>(l - 1) || d->b.size() != static_cast<std::size_t>(l - 1))
            throw Error(ErrorKind::InvalidArgument, "coefficient map size must be l-1=" + std::to_string(l - 1));
        return reduced(l, *d);
    }
    const auto& g = std::get<GeneralFull>(bc);
    const auto ul = static_cast<std::size_t>(l);
    if (g.A.rows() != ul - 1 || g.A.cols() != ul || g.B.rows() != ul || g.B.cols() != ul - 1)
        throw Error(ErrorKind::InvalidArgument, "coefficient matrix shapes do not match l=" + std::to_string(l));
    return full(l, g);
}

CanonicalDiagonal canonical_with_margins(int l, std::span<const double> targets_A, std::span<const double> targets_B) {
    if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be >= 1");
    const auto n = static_cast<std::size_t>(l - 1);
    if (targets_A.size() != n || targets_B.size() != n)
        throw Error(ErrorKind::InvalidArgument, "need l-1 target margins per endpoint");
    CanonicalDiagonal d{std::vector<double>(n), std::vector<double>(n)};
    if (l == 2) {
        d.a[0] = 0.5 - targets_A[0];
        d.b[0] = targets_B[0] + 0.5;
    } else if (l == 3) {
        d.a[1] = targets_A[0] + 0.5;   // a_51
        d.a[0] = 0.5 - targets_A[1];   // a_42
        d.b[1] = -targets_B[0] - 0.5;  // b_51
        d.b[0] = targets_B[1] + 0.5;   // b_42
    } else {
        const double lf = l;
        // Margin l-j depends on coefficients j' < j only, so fill in increasing j.
        for (int j = 1; j <= l - 1; ++j) {
            const double sign = (j % 2 == 1) ? 1.0 : -1.0;
            const auto idx = static_cast<std::size_t>(l - j - 1);
            const double sb = 0.5 * sq(reduced_cross_sum(d.b, j));
            const double sa = 0.5 * sq(reduced_cross_sum(d.a, j));
            d.b[static_cast<std::size_t>(j - 1)] = sign * (targets_B[idx] + sb - 2.0 + lf);
            d.a[static_cast<std::size_t>(j - 1)] = -sign * (targets_A[idx] + sa + 2.0 * lf - 5.0);
        }
    }
    return d;
}

BoundaryJet impose_boundary_relations(int l, const BoundaryCoefficients& bc, BoundaryJet jet) {
    if (is_raw(bc)) throw Error(ErrorKind::UnreducedRawForms, "raw linear forms must be reduced first");
    const auto ul = static_cast<std::size_t>(l);
    if (jet.at0.size() != 2 * ul || jet.atL.size() != 2 * ul)
        throw Error(ErrorKind::InvalidArgument, "boundary jet entries must number 2l=" + std::to_string(2 * l));
    const GeneralFull g = coefficient_form(l, bc);
    for (std::size_t r = 0; r + 1 < ul; ++r) {
        double v = 0.0;
        for (std::size_t j = 0; j < ul; ++j) v += g.A(r, j) * jet.at0[j];
        jet.at0[ul + r] = v;  // D^{l+1+r}u(0)
    }
    for (std::size_t r = 0; r < ul; ++r) {
        double v = 0.0;
        for (std::size_t j = 0; j + 1 < ul; ++j) v += g.B(r, j) * jet.atL[j];
        jet.atL[ul - 1 + r] = v;  // D^{l+r}u(L)
    }
    return jet;
}

double boundary_form(int l, const BoundaryCoefficients& bc, const BoundaryJet& raw_jet) {
    const BoundaryJet jet = impose_boundary_relations(l, bc, raw_jet);
    const auto endpoint = [l](const std::vector<double>& y) {
        const auto D = [&y](int m) { return y[static_cast<std::size_t>(m - 1)]; };
        double s = 0.0;
        for (int i = 1; i <= l - 1; ++i) {
            double inner = 0.0;
            for (int k = 1; k <= l - i; ++k) inner += sign_pow(k + 1) * D(2 * k + i);
            s += D(i) * inner;
        }
        for (int j = 1; j <= l; ++j) s -= 0.5 * sq(D(j));
        return s;
    };
    return endpoint(jet.atL) - endpoint(jet.at0);
}

double margin_quadratic(const AdmissibilityReport& report, const BoundaryJet& jet) {
    double s = 0.0;
    for (std::size_t i = 0; i < report.margins_B.size(); ++i) s += report.margins_B[i] * sq(jet.atL[i]);
    for (std::size_t i = 0; i < report.margins_A.size(); ++i) s += report.margins_A[i] * sq(jet.at0[i]);
    return s;
}

CrossTermBound cross_term_bound(int l, std::span<const double> jetL) {
    if (l < 4) throw Error(ErrorKind::InvalidArgument, "the cross-term bound needs l >= 4");
    const auto y = [&jetL](int m) {
        return m >= 1 && static_cast<std::size_t>(m) <= jetL.size() ? jetL[static_cast<std::size_t>(m - 1)] : 0.0;
    };
    CrossTermBound out;
    for (int i = 1; i <= l - 3; ++i)
        for (int k = 1; 2 * k + i <= l - 1; ++k) out.lhs += sign_pow(k + 1) * y(i) * y(2 * k + i);
    double s = 0.0;
    for (int i = 1; i <= l - 1; ++i) s += sq(y(i));
    out.rhs = (3.0 - l) / 2.0 * s;
    return out;
}

}  // namespace dispersive
