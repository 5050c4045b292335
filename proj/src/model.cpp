#include "dispersive/model.hpp"

#include <cmath>
#include <sstream>

#include "dispersive/error.hpp"

namespace dispersive {
namespace {

bool all_finite(const Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (double v : m.row(r))
            if (!std::isfinite(v)) return false;
    return true;
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

std::string shape(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

void check_shape(std::vector<Violation>& out, const std::string& field, const Matrix& m, int rows, int cols) {
    if (m.rows() != static_cast<std::size_t>(rows) || m.cols() != static_cast<std::size_t>(cols)) {
        out.push_back({field, "matrix shape must be " + shape(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)) +
                                  ", got " + shape(m.rows(), m.cols())});
    } else if (!all_finite(m)) {
        out.push_back({field, "entries must be finite"});
    }
}

// Solves block * X = -rhs_block column by column.
Matrix solve_high_block(const Matrix& forms, std::size_t high_begin, std::size_t low_count, const char* what) {
    const std::size_t m = forms.rows();
    Matrix block(m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) block(r, c) = forms(r, high_begin + c);
    Matrix out(m, low_count);
    if (m == 0) return out;
    const LuFactorization<double> lu(block);
    if (!(lu.pivot_ratio() >= 1e-10)) {
        std::ostringstream msg;
        msg << what << " high-derivative block is singular (pivot ratio " << lu.pivot_ratio() << " < 1e-10)";
        throw Error(ErrorKind::SingularReduction, msg.str());
    }
    std::vector<double> rhs(m);
    for (std::size_t j = 0; j < low_count; ++j) {
        for (std::size_t r = 0; r < m; ++r) rhs[r] = -forms(r, j);
        const auto x = lu.solve(rhs);
        for (std::size_t r = 0; r < m; ++r) out(r, j) = x[r];
    }
    return out;
}

}  // namespace

std::vector<Violation> validate_spec(const ProblemSpec& spec) {
    std::vector<Violation> out;
    const int l = spec.l;
    if (l < 1) out.push_back({"l", "l must be >= 1"});
    if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda)) out.push_back({"lambda", "lambda must be > 0"});
    if (!(spec.length > 0.0) || !std::isfinite(spec.length)) out.push_back({"length", "length must be > 0"});

    if (l >= 1) {
        const std::string expected = "l-1=" + std::to_string(l - 1);
        if (const auto* d = std::get_if<CanonicalDiagonal>(&spec.bc)) {
            if (d->a.size() != static_cast<std::size_t>(l - 1))
                out.push_back({"bc.a", "coefficient map size must be " + expected});
            else if (!all_finite(d->a))
                out.push_back({"bc.a", "entries must be finite"});
            if (d->b.size() != static_cast<std::size_t>(l - 1))
                out.push_back({"bc.b", "coefficient map size must be " + expected});
            else if (!all_finite(d->b))
                out.push_back({"bc.b", "entries must be finite"});
        } else if (const auto* g = std::get_if<GeneralFull>(&spec.bc)) {
            check_shape(out, "bc.A", g->A, l - 1, l);
            check_shape(out, "bc.B", g->B, l, l - 1);
        } else if (const auto* r = std::get_if<RawLinearForms>(&spec.bc)) {
            check_shape(out, "bc.alpha", r->alpha, l - 1, 2 * l - 1);
            check_shape(out, "bc.beta", r->beta, l, 2 * l - 1);
        }
    }

    if (const auto* p = std::get_if<ExactPolynomial>(&spec.forcing)) {
        if (!all_finite(p->p.coeffs())) out.push_back({"forcing.coeffs", "entries must be finite"});
    } else if (const auto* t = std::get_if<TrigSum>(&spec.forcing)) {
        for (const TrigTerm& term : t->terms)
            if (!std::isfinite(term.amplitude) || !std::isfinite(term.frequency) || !std::isfinite(term.phase)) {
                out.push_back({"forcing.terms", "entries must be finite"});
                break;
            }
    } else if (const auto* s = std::get_if<GridSamples>(&spec.forcing)) {
        if (s->values.empty()) out.push_back({"forcing.values", "samples must not be empty"});
        else if (!all_finite(s->values)) out.push_back({"forcing.values", "entries must be finite"});
    }
    return out;
}

void require_valid(const ProblemSpec& spec) {
    const auto violations = validate_spec(spec);
    if (violations.empty()) return;
    std::string msg = "invalid problem spec:";
    for (const auto& v : violations) msg += " [" + v.field + ": " + v.message + "]";
    throw Error(ErrorKind::InvalidSpec, msg);
}

GeneralFull reduce_raw_forms(int l, const RawLinearForms& raw) {
    if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be >= 1");
    const auto ul = static_cast<std::size_t>(l);
    if (raw.alpha.rows() != ul - 1 || raw.alpha.cols() != 2 * ul - 1 || raw.beta.rows() != ul ||
        raw.beta.cols() != 2 * ul - 1)
        throw Error(ErrorKind::InvalidArgument, "raw form shapes do not match l=" + std::to_string(l));
    GeneralFull out;
    out.A = solve_high_block(raw.alpha, ul, ul, "alpha");
    out.B = solve_high_block(raw.beta, ul - 1, ul - 1, "beta");
    return out;
}

RawLinearForms to_raw_forms(const GeneralFull& full) {
    const std::size_t l = full.B.rows();
    RawLinearForms raw{Matrix(l - 1, 2 * l - 1), Matrix(l, 2 * l - 1)};
    for (std::size_t r = 0; r + 1 < l; ++r) {
        for (std::size_t j = 0; j < l; ++j) raw.alpha(r, j) = -full.A(r, j);
        raw.alpha(r, l + r) = 1.0;
    }
    for (std::size_t r = 0; r < l; ++r) {
        for (std::size_t j = 0; j + 1 < l; ++j) raw.beta(r, j) = -full.B(r, j);
        raw.beta(r, l - 1 + r) = 1.0;
    }
    return raw;
}

GeneralFull to_general(int l, const CanonicalDiagonal& diag) {
    const auto ul = static_cast<std::size_t>(l);
    if (diag.a.size() != ul - 1 || diag.b.size() != ul - 1)
        throw Error(ErrorKind::InvalidArgument, "coefficient map size must be l-1=" + std::to_string(l - 1));
    GeneralFull g{Matrix(ul - 1, ul), Matrix(ul, ul - 1)};
    for (std::size_t j = 1; j < ul; ++j) {
        // D^{l+j}u(0) = a_j D^{l-j}u(0): row i-l-1 = j-1, column (l-j)-1.
        g.A(j - 1, ul - j - 1) = diag.a[j - 1];
        // D^{l+j}u(L) = b_j D^{l-j}u(L): row i-l = j.
        g.B(j, ul - j - 1) = diag.b[j - 1];
    }
    return g;
}

GeneralFull coefficient_form(int l, const BoundaryCoefficients& bc) {
    if (const auto* d = std::get_if<CanonicalDiagonal>(&bc)) return to_general(l, *d);
    if (const auto* g = std::get_if<GeneralFull>(&bc)) return *g;
    return reduce_raw_forms(l, std::get<RawLinearForms>(bc));
}

bool is_raw(const BoundaryCoefficients& bc) { return std::holds_alternative<RawLinearForms>(bc); }

std::vector<double> sample_forcing(const ForcingSpec& forcing, std::span<const double> nodes) {
    std::vector<double> out(nodes.size());
    if (const auto* p = std::get_if<ExactPolynomial>(&forcing)) {
        for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = p->p(nodes[i]);
    } else if (const auto* t = std::get_if<TrigSum>(&forcing)) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double s = 0.0;
            for (const TrigTerm& term : t->terms) s += term.amplitude * std::sin(term.frequency * nodes[i] + term.phase);
            out[i] = s;
        }
    } else {
        const auto& s = std::get<GridSamples>(forcing);
        if (s.values.size() != nodes.size())
            throw Error(ErrorKind::InvalidSpec, "forcing samples have " + std::to_string(s.values.size()) +
                                                    " values but the grid has " + std::to_string(nodes.size()) + " nodes");
        out = s.values;
    }
    return out;
}

bool forcing_is_zero(const ForcingSpec& forcing) {
    if (const auto* p = std::get_if<ExactPolynomial>(&forcing)) return p->p.is_zero();
    if (const auto* t = std::get_if<TrigSum>(&forcing)) {
        for (const TrigTerm& term : t->terms) {
            const bool vanishes = term.amplitude == 0.0 || (term.frequency == 0.0 && std::sin(term.phase) == 0.0);
            if (!vanishes) return false;
        }
        return true;
    }
    for (double v : std::get<GridSamples>(forcing).values)
        if (v != 0.0) return false;
    return true;
}

}  // namespace dispersive
