#include "dispersive/verify.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <random>

#include "dispersive/error.hpp"

namespace dispersive {
namespace {

// One homogeneous boundary condition: D^order u - sum_j coeffs[j] D^{j+1} u = 0 at x = at.
struct Relation {
    double at = 0.0;
    int order = 0;
    std::vector<double> coeffs;
};

std::vector<Relation> relations(int l, const BoundaryCoefficients& bc, double length) {
    const GeneralFull g = coefficient_form(l, bc);
    std::vector<Relation> out;
    out.push_back({0.0, 0, {}});
    for (int i = l + 1; i <= 2 * l - 1; ++i) {
        Relation r{0.0, i, {}};
        for (std::size_t j = 0; j < g.A.cols(); ++j) r.coeffs.push_back(g.A(static_cast<std::size_t>(i - l - 1), j));
        out.push_back(r);
    }
    out.push_back({length, 0, {}});
    for (int i = l; i <= 2 * l - 1; ++i) {
        Relation r{length, i, {}};
        for (std::size_t j = 0; j < g.B.cols(); ++j) r.coeffs.push_back(g.B(static_cast<std::size_t>(i - l), j));
        out.push_back(r);
    }
    return out;
}

// D^m x^k at x.
double monomial_derivative(int k, int m, double x) {
    if (m > k) return 0.0;
    double c = 1.0;
    for (int i = 0; i < m; ++i) c *= k - i;
    return k == m ? c : c * std::pow(x, k - m);
}

// Relation as a linear functional on the monomial coefficients of degree <= d.
std::vector<double> functional(const Relation& r, int degree) {
    std::vector<double> row(static_cast<std::size_t>(degree) + 1);
    for (int k = 0; k <= degree; ++k) {
        double v = monomial_derivative(k, r.order, r.at);
        for (std::size_t j = 0; j < r.coeffs.size(); ++j)
            v -= r.coeffs[j] * monomial_derivative(k, static_cast<int>(j) + 1, r.at);
        row[static_cast<std::size_t>(k)] = v;
    }
    return row;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void finish_report(ConvergenceReport& r, double length, bool against_exact) {
    std::vector<double> lh, le;
    bool exact = true;
    for (std::size_t i = 0; i < r.grid_sizes.size(); ++i) {
        lh.push_back(std::log(length / (r.grid_sizes[i] - 1)));
        le.push_back(std::log(std::max(r.max_errors[i], 1e-300)));
        exact = exact && r.max_errors[i] <= exact_tolerance;
    }
    r.fitted_order = r.grid_sizes.size() >= 2 ? fit_slope(lh, le) : 0.0;
    r.exact_regime = against_exact && exact;
}

}  // namespace

Polynomial polynomial_satisfying_bcs(int l, const BoundaryCoefficients& bc, double length, int degree,
                                     std::uint64_t seed) {
    if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be >= 1");
    if (!(length > 0.0)) throw Error(ErrorKind::InvalidArgument, "length must be > 0");
    if (degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be >= 0");
    const auto rels = relations(l, bc, length);
    const auto cols = static_cast<Eigen::Index>(degree + 1);
    // Work in t = x / L so the constraint columns have comparable scales.
    Eigen::MatrixXd C(static_cast<Eigen::Index>(rels.size()), cols);
    for (std::size_t r = 0; r < rels.size(); ++r) {
        const auto row = functional(rels[r], degree);
        double scale = 0.0;
        for (Eigen::Index k = 0; k < cols; ++k) {
            C(static_cast<Eigen::Index>(r), k) = row[static_cast<std::size_t>(k)] / std::pow(length, static_cast<double>(k));
            scale = std::max(scale, std::abs(C(static_cast<Eigen::Index>(r), k)));
        }
        if (scale > 0.0) C.row(static_cast<Eigen::Index>(r)) /= scale;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-12 * sv(0)) ++rank;
    if (rank >= cols)
        throw Error(ErrorKind::EmptyNullspace, "boundary conditions leave no nonzero polynomial of degree " +
                                                   std::to_string(degree) + "; raise the degree");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd t = Eigen::VectorXd::Zero(cols);
    for (Eigen::Index k = rank; k < cols; ++k) t += normal(rng) * svd.matrixV().col(k);
    const double tmax = t.cwiseAbs().maxCoeff();
    std::vector<double> c(static_cast<std::size_t>(cols));
    for (Eigen::Index k = 0; k < cols; ++k) {
        const double v = std::abs(t(k)) <= 1e-13 * tmax ? 0.0 : t(k);
        c[static_cast<std::size_t>(k)] = v / std::pow(length, static_cast<double>(k));
    }
    for (double v : c)
        if (v != 0.0) {
            const double lead = v;
            for (double& x : c) x /= lead;
            break;
        }
    return Polynomial(std::move(c));
}

Polynomial forcing_for(const Polynomial& u, double lambda, int l) {
    Polynomial f = lambda * u;
    for (int j = 1; j <= l; ++j) {
        const Polynomial d = u.derivative(2 * j + 1);
        f = (j % 2 == 1) ? f + d : f - d;
    }
    return f;
}

double boundary_residual(int l, const BoundaryCoefficients& bc, double length, const Polynomial& u) {
    double worst = 0.0;
    const auto& c = u.coeffs();
    for (const Relation& r : relations(l, bc, length)) {
        const auto row = functional(r, std::max(u.degree(), 0));
        double value = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            value += row[k] * c[k];
            scale += std::abs(row[k] * c[k]);
        }
        if (scale > 0.0) worst = std::max(worst, std::abs(value) / scale);
    }
    return worst;
}

std::vector<int> nested_grids(int n0, int count) {
    std::vector<int> out;
    int n = n0;
    for (int k = 0; k < count; ++k, n = 2 * (n - 1) + 1) out.push_back(n);
    return out;
}

ConvergenceReport convergence_study(const ProblemSpec& spec, const Polynomial& exact, const std::vector<int>& grids, int p) {
    if (grids.size() < 3) throw Error(ErrorKind::InvalidArgument, "a convergence study needs at least 3 grids");
    ConvergenceReport r;
    for (int n : grids) {
        const Grid grid(n, spec.length);
        const GridSolution sol = solve_linear(assemble(spec, grid, p));
        std::vector<double> diff(static_cast<std::size_t>(n));
        double emax = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            diff[ui] = sol.values[ui] - exact(grid.node(i));
            emax = std::max(emax, std::abs(diff[ui]));
        }
        r.grid_sizes.push_back(n);
        r.max_errors.push_back(emax);
        r.l2_errors.push_back(trapezoid_norm(grid, diff));
    }
    finish_report(r, spec.length, true);
    return r;
}

ConvergenceReport self_convergence_study(const ProblemSpec& spec, const std::vector<int>& grids, int reference_n, int p) {
    if (grids.size() < 3) throw Error(ErrorKind::InvalidArgument, "a convergence study needs at least 3 grids");
    for (int n : grids)
        if (n < 2 || (reference_n - 1) % (n - 1) != 0 || reference_n <= n)
            throw Error(ErrorKind::InvalidArgument, "reference grid of " + std::to_string(reference_n) +
                                                        " nodes does not nest a grid of " + std::to_string(n));
    const GridSolution ref = solve_linear(assemble(spec, Grid(reference_n, spec.length), p));
    ConvergenceReport r;
    r.reference_n = reference_n;
    for (int n : grids) {
        const Grid grid(n, spec.length);
        const GridSolution sol = solve_linear(assemble(spec, grid, p));
        const int stride = (reference_n - 1) / (n - 1);
        std::vector<double> diff(static_cast<std::size_t>(n));
        double emax = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            diff[ui] = to_double(sol.wide_values[ui] - ref.wide_values[static_cast<std::size_t>(i * stride)]);
            emax = std::max(emax, std::abs(diff[ui]));
        }
        r.grid_sizes.push_back(n);
        r.max_errors.push_back(emax);
        r.l2_errors.push_back(trapezoid_norm(grid, diff));
    }
    finish_report(r, spec.length, false);
    return r;
}

bool convergence_passes(const ConvergenceReport& report, int p) {
    return report.exact_regime || report.fitted_order >= p - 0.5;
}

double min_margin_constant(const AdmissibilityReport& report) {
    return report.l == 1 ? 0.5 : report.min_margin();
}

EstimateReport estimate_check(const ProblemSpec& spec, const Grid& grid, int p, EstimateTolerances tol) {
    require_valid(spec);
    const int l = spec.l;
    ProblemSpec reduced = spec;
    reduced.bc = coefficient_form(l, spec.bc);
    const AdmissibilityReport adm = margins(l, reduced.bc);
    if (!adm.admissible)
        throw Error(ErrorKind::InadmissibleCoefficients, "boundary coefficients violate the admissibility margins (min " +
                                                             std::to_string(adm.min_margin()) + ")");
    const std::vector<double> f = sample_forcing(spec.forcing, grid.nodes());
    EstimateReport r;
    r.f_norm = trapezoid_norm(grid, f);
    if (forcing_is_zero(spec.forcing) || r.f_norm == 0.0)
        throw Error(ErrorKind::InvalidArgument, "estimate check needs a nonzero forcing");

    const GridSolution sol = solve_linear(assemble(reduced, grid, p));
    r.condition_estimate = sol.condition_estimate;
    r.M1 = min_margin_constant(adm);
    r.u_norm = discrete_norms(sol, 0)[0];
    r.l2_ratio = spec.lambda * r.u_norm / r.f_norm;
    double t = 0.0;
    for (int i = 1; i <= l - 1; ++i) {
        const auto ui = static_cast<std::size_t>(i - 1);
        t += sol.traces.atL[ui] * sol.traces.atL[ui] + sol.traces.at0[ui] * sol.traces.at0[ui];
    }
    const double dl0 = sol.traces.at0[static_cast<std::size_t>(l - 1)];
    r.trace_lhs = t + dl0 * dl0;
    r.trace_rhs = r.f_norm * r.f_norm / (spec.lambda * r.M1);
    r.hl_ratio = sobolev_norm(sol, l) / r.f_norm;
    r.h2l1_ratio = sobolev_norm(sol, 2 * l + 1) / r.f_norm;
    r.l2_ok = r.l2_ratio <= 1.0 + tol.l2;
    r.trace_ok = r.trace_lhs <= r.trace_rhs * (1.0 + tol.trace);
    return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

ProblemSpec random_admissible_case(int l, std::uint64_t seed, const CaseRanges& ranges) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> margin(ranges.margin_lo, ranges.margin_hi);
    const auto draw = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    std::vector<double> tA(static_cast<std::size_t>(l - 1)), tB(static_cast<std::size_t>(l - 1));
    for (double& v : tA) v = margin(rng);
    for (double& v : tB) v = margin(rng);

    ProblemSpec spec;
    spec.l = l;
    spec.bc = canonical_with_margins(l, tA, tB);
    spec.lambda = draw(ranges.lambda_lo, ranges.lambda_hi);
    spec.length = draw(ranges.length_lo, ranges.length_hi);
    TrigSum trig;
    const int terms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(ranges.max_terms));
    for (int k = 0; k < terms; ++k) {
        TrigTerm t;
        t.amplitude = draw(-1.0, 1.0);
        t.frequency = draw(ranges.frequency_lo, ranges.frequency_hi);
        t.phase = draw(0.0, 2.0 * std::numbers::pi);
        trig.terms.push_back(t);
    }
    spec.forcing = trig;
    return spec;
}

std::vector<SweepCase> sweep(const SweepOptions& o) {
    std::vector<SweepCase> out;
    const std::uint64_t base = splitmix64(o.seed ^ (static_cast<std::uint64_t>(o.l) << 40));
    for (int i = 0; i < o.cases; ++i) {
        SweepCase c;
        c.index = i;
        c.seed = splitmix64(base + static_cast<std::uint64_t>(i));
        c.spec = random_admissible_case(o.l, c.seed, o.ranges);
        const Grid grid(o.n, c.spec.length);
        c.estimate = estimate_check(c.spec, grid, o.p, o.tol);

        ProblemSpec homogeneous = c.spec;
        homogeneous.forcing = TrigSum{};
        const GridSolution h = solve_linear(assemble(homogeneous, grid, o.p));
        for (double v : h.values) c.homogeneous_max = std::max(c.homogeneous_max, std::abs(v));
        c.uniqueness_ok = c.homogeneous_max <= o.uniqueness_tolerance;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace dispersive
