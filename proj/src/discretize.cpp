#include "dispersive/discretize.hpp"

#include <cmath>
#include <sstream>

#include "dispersive/error.hpp"

namespace dispersive {
namespace {

// Fornberg's recursion for all derivative orders 0..kmax at once.
// Returns c[order][point] for the evaluation point 0 and nodes x.
template <class T>
std::vector<std::vector<T>> fornberg(std::span<const T> x, int kmax) {
    const std::size_t npts = x.size();
    const auto K = static_cast<std::size_t>(kmax);
    std::vector<std::vector<T>> c(npts, std::vector<T>(K + 1, T(0)));
    T c1(1);
    T c4 = x[0];
    c[0][0] = T(1);
    for (std::size_t i = 1; i < npts; ++i) {
        const std::size_t mn = std::min(i, K);
        T c2(1);
        const T c5 = c4;
        c4 = x[i];
        for (std::size_t j = 0; j < i; ++j) {
            const T c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t s = mn; s >= 1; --s)
                    c[i][s] = c1 * (T(static_cast<double>(s)) * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t s = mn; s >= 1; --s)
                c[j][s] = (c4 * c[j][s] - T(static_cast<double>(s)) * c[j][s - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<std::vector<T>> out(K + 1, std::vector<T>(npts));
    for (std::size_t j = 0; j < npts; ++j)
        for (std::size_t s = 0; s <= K; ++s) out[s][j] = c[j][s];
    return out;
}

// Weights for orders 0..kmax on integer offsets, scaled by h^{-order}.
template <class T>
std::vector<std::vector<T>> scaled_weights(std::span<const int> offsets, int kmax, T h) {
    std::vector<T> x(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) x[i] = T(static_cast<double>(offsets[i]));
    auto w = fornberg<T>(x, kmax);
    T hp(1);
    for (std::size_t s = 1; s < w.size(); ++s) {
        hp *= h;
        for (T& v : w[s]) v /= hp;
    }
    return w;
}

int interior_stencil_width(int l, int p) {
    const int w = boundary_stencil_width(l, p);
    return w % 2 == 0 ? w + 1 : w;
}

std::vector<int> one_sided_offsets(int width, bool at_right) {
    std::vector<int> off(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) off[static_cast<std::size_t>(i)] = at_right ? i - (width - 1) : i;
    return off;
}

// Adds coeff * (D^order stencil) to row r of the system matrix.
void add_stencil(DenseMatrix<wide_real>& m, std::size_t r, int node, std::span<const int> offsets,
                 std::span<const wide_real> weights, wide_real coeff) {
    for (std::size_t q = 0; q < offsets.size(); ++q)
        m(r, static_cast<std::size_t>(node + offsets[q])) += coeff * weights[q];
}

}  // namespace

Grid::Grid(int n, double length) : n_(n), length_(length) {
    if (n < 2) throw Error(ErrorKind::GridTooSmall, "a grid needs at least 2 nodes");
    if (!(length > 0.0) || !std::isfinite(length)) throw Error(ErrorKind::InvalidArgument, "grid length must be > 0");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) x[static_cast<std::size_t>(i)] = node(i);
    return x;
}

template <class T>
std::vector<T> fd_weights(std::span<const int> offsets, int k, T h) {
    if (k < 0) throw Error(ErrorKind::InvalidArgument, "derivative order must be >= 0");
    if (offsets.size() <= static_cast<std::size_t>(k))
        throw Error(ErrorKind::InsufficientStencil, "stencil of " + std::to_string(offsets.size()) +
                                                        " points cannot represent derivative order " + std::to_string(k));
    for (std::size_t i = 0; i < offsets.size(); ++i)
        for (std::size_t j = i + 1; j < offsets.size(); ++j)
            if (offsets[i] == offsets[j]) throw Error(ErrorKind::InvalidArgument, "stencil offsets must be distinct");
    if (!(h > T(0))) throw Error(ErrorKind::InvalidArgument, "spacing must be > 0");
    return scaled_weights<T>(offsets, k, h)[static_cast<std::size_t>(k)];
}

template std::vector<wide_real> fd_weights<wide_real>(std::span<const int>, int, wide_real);

std::vector<double> fd_weights(std::span<const int> offsets, int k, double h) {
    const auto w = fd_weights<wide_real>(offsets, k, wide_real(h));
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = to_double(w[i]);
    return out;
}

std::vector<int> stencil_offsets(int i, int n, int width) {
    if (width > n) throw Error(ErrorKind::GridTooSmall, "stencil of width " + std::to_string(width) +
                                                            " does not fit a grid of " + std::to_string(n) + " nodes");
    int start = i - (width - 1) / 2;
    start = std::clamp(start, 0, n - width);
    std::vector<int> off(static_cast<std::size_t>(width));
    for (int q = 0; q < width; ++q) off[static_cast<std::size_t>(q)] = start + q - i;
    return off;
}

DenseMatrix<wide_real> wide_derivative_matrix(const Grid& grid, int k, int p) {
    if (p < 1) throw Error(ErrorKind::InvalidArgument, "accuracy order must be >= 1");
    const int width = k + p;
    const int n = grid.n();
    if (width > n)
        throw Error(ErrorKind::GridTooSmall, "derivative order " + std::to_string(k) + " with accuracy " +
                                                 std::to_string(p) + " needs at least " + std::to_string(width) + " nodes");
    DenseMatrix<wide_real> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    const wide_real h(grid.h());
    for (int i = 0; i < n; ++i) {
        const auto off = stencil_offsets(i, n, width);
        const auto w = fd_weights<wide_real>(off, k, h);
        for (std::size_t q = 0; q < off.size(); ++q) m(static_cast<std::size_t>(i), static_cast<std::size_t>(i + off[q])) = w[q];
    }
    return m;
}

Matrix derivative_matrix(const Grid& grid, int k, int p) { return wide_derivative_matrix(grid, k, p).cast<double>(); }

int boundary_stencil_width(int l, int p) { return 2 * l + p + 2; }

int minimum_grid_size(int l, int p) { return std::max(2 * l + 3, interior_stencil_width(l, p)); }

std::string RowLabel::to_string() const {
    switch (kind) {
        case RowKind::InteriorCollocation: return "interior(" + std::to_string(node) + ")";
        case RowKind::DirichletAt0: return "bc-dirichlet-0";
        case RowKind::DirichletAtL: return "bc-dirichlet-L";
        case RowKind::HighestAtL: return "bc-Dl-L";
        case RowKind::Relation:
            return std::string("bc-relation(") + (node == 0 ? "0" : "L") + ", " + std::to_string(order) + ")";
    }
    return "unknown";
}

LinearSystem assemble(const ProblemSpec& spec, const Grid& grid, int p) {
    if (is_raw(spec.bc)) throw Error(ErrorKind::UnreducedRawForms, "raw linear forms must be reduced before assembly");
    require_valid(spec);
    const int l = spec.l;
    const int n = grid.n();
    if (p < 1) throw Error(ErrorKind::InvalidArgument, "accuracy order must be >= 1");
    if (n < minimum_grid_size(l, p))
        throw Error(ErrorKind::GridTooSmall, "l=" + std::to_string(l) + ", p=" + std::to_string(p) + " needs n >= " +
                                                 std::to_string(minimum_grid_size(l, p)) + ", got " + std::to_string(n));

    const GeneralFull g = coefficient_form(l, spec.bc);
    const std::vector<double> f = sample_forcing(spec.forcing, grid.nodes());
    const wide_real h(grid.h());
    const int bw = boundary_stencil_width(l, p);
    const int iw = interior_stencil_width(l, p);
    const auto un = static_cast<std::size_t>(n);

    LinearSystem sys{grid, l, p, DenseMatrix<wide_real>(un, un), std::vector<wide_real>(un, wide_real(0)), {},
                     std::vector<wide_real>(un, wide_real(1))};
    sys.row_labels.reserve(un);
    std::size_t row = 0;

    // Boundary row: D^order u - sum_j coeff(j) D^j u = 0 at one end.
    const auto relation_row = [&](int node, std::span<const int> off, const std::vector<std::vector<wide_real>>& w,
                                  int order, const Matrix& coeffs, std::size_t coeff_row, std::size_t ncols) {
        add_stencil(sys.matrix, row, node, off, w[static_cast<std::size_t>(order)], wide_real(1));
        for (std::size_t j = 0; j < ncols; ++j) {
            const double c = coeffs(coeff_row, j);
            if (c != 0.0) add_stencil(sys.matrix, row, node, off, w[j + 1], wide_real(-c));
        }
    };

    {
        const auto off = one_sided_offsets(bw, false);
        const auto w = scaled_weights<wide_real>(off, 2 * l - 1, h);
        sys.matrix(row, 0) = wide_real(1);
        sys.row_labels.push_back({RowKind::DirichletAt0, 0, 0});
        ++row;
        for (int i = l + 1; i <= 2 * l - 1; ++i) {
            relation_row(0, off, w, i, g.A, static_cast<std::size_t>(i - l - 1), static_cast<std::size_t>(l));
            sys.row_labels.push_back({RowKind::Relation, 0, i});
            ++row;
        }
    }

    for (int node = l; node <= n - l - 2; ++node) {
        const auto off = stencil_offsets(node, n, iw);
        const auto w = scaled_weights<wide_real>(off, 2 * l + 1, h);
        sys.matrix(row, static_cast<std::size_t>(node)) += wide_real(spec.lambda);
        for (int j = 1; j <= l; ++j)
            add_stencil(sys.matrix, row, node, off, w[static_cast<std::size_t>(2 * j + 1)], wide_real(j % 2 == 1 ? 1.0 : -1.0));
        sys.rhs[row] = wide_real(f[static_cast<std::size_t>(node)]);
        sys.row_labels.push_back({RowKind::InteriorCollocation, node, 0});
        ++row;
    }

    {
        const int last = n - 1;
        const auto off = one_sided_offsets(bw, true);
        const auto w = scaled_weights<wide_real>(off, 2 * l - 1, h);
        sys.matrix(row, static_cast<std::size_t>(last)) = wide_real(1);
        sys.row_labels.push_back({RowKind::DirichletAtL, last, 0});
        ++row;
        for (int i = l; i <= 2 * l - 1; ++i) {
            relation_row(last, off, w, i, g.B, static_cast<std::size_t>(i - l), static_cast<std::size_t>(l - 1));
            sys.row_labels.push_back({i == l ? RowKind::HighestAtL : RowKind::Relation, last, i});
            ++row;
        }
    }

    for (std::size_t r = 0; r < un; ++r) {
        wide_real m(0);
        for (const wide_real& v : sys.matrix.row(r)) m = std::max(m, abs_value(v));
        if (m == wide_real(0)) continue;
        sys.row_scale[r] = m;
        for (wide_real& v : sys.matrix.row(r)) v /= m;
        sys.rhs[r] /= m;
    }
    return sys;
}

namespace {

BoundaryJet endpoint_traces(const Grid& grid, int l, int p, std::span<const wide_real> u) {
    const int bw = boundary_stencil_width(l, p);
    const wide_real h(grid.h());
    const auto un = static_cast<std::size_t>(2 * l);
    BoundaryJet jet{std::vector<double>(un), std::vector<double>(un)};
    if (bw > grid.n()) throw Error(ErrorKind::GridTooSmall, "grid too small for endpoint traces");
    for (int side = 0; side < 2; ++side) {
        const bool right = side == 1;
        const int node = right ? grid.n() - 1 : 0;
        const auto off = one_sided_offsets(bw, right);
        const auto w = scaled_weights<wide_real>(off, 2 * l, h);
        auto& out = right ? jet.atL : jet.at0;
        for (int k = 1; k <= 2 * l; ++k) {
            wide_real acc(0);
            for (std::size_t q = 0; q < off.size(); ++q)
                acc += w[static_cast<std::size_t>(k)][q] * u[static_cast<std::size_t>(node + off[q])];
            out[static_cast<std::size_t>(k - 1)] = to_double(acc);
        }
    }
    return jet;
}

}  // namespace

GridSolution solve_linear(const LinearSystem& sys) {
    const std::size_t n = sys.matrix.rows();
    const LuFactorization<wide_real> lu(sys.matrix);
    const double ratio = to_double(lu.pivot_ratio());
    if (!(ratio >= singular_pivot_ratio(n))) {
        std::ostringstream msg;
        msg << "collocation matrix is numerically singular (pivot ratio " << ratio << " < " << singular_pivot_ratio(n) << ")";
        throw Error(ErrorKind::NumericallySingular, msg.str());
    }
    std::vector<wide_real> x = lu.solve(sys.rhs);
    const auto residual = [&](const std::vector<wide_real>& v) {
        std::vector<wide_real> r = sys.matrix.multiply(v);
        for (std::size_t i = 0; i < n; ++i) r[i] = sys.rhs[i] - r[i];
        return r;
    };
    const std::vector<wide_real> dx = lu.solve(residual(x));
    for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];

    GridSolution sol{sys.grid, sys.l, sys.p, x, std::vector<double>(n), {}, 0.0, 0.0, ratio};
    for (std::size_t i = 0; i < n; ++i) sol.values[i] = to_double(x[i]);
    wide_real rmax(0), bmax(0);
    for (const wide_real& v : residual(x)) rmax = std::max(rmax, abs_value(v));
    for (const wide_real& v : sys.rhs) bmax = std::max(bmax, abs_value(v));
    sol.relative_residual = bmax == wide_real(0) ? to_double(rmax) : to_double(rmax / bmax);
    sol.condition_estimate = to_double(norm1(sys.matrix) * lu.inverse_norm1_estimate());
    sol.traces = endpoint_traces(sys.grid, sys.l, sys.p, sol.wide_values);
    return sol;
}

GridSolution solution_from_samples(const Grid& grid, int l, std::span<const double> values, int p) {
    if (values.size() != static_cast<std::size_t>(grid.n()))
        throw Error(ErrorKind::InvalidArgument, "sample count does not match the grid");
    GridSolution sol{grid, l, p, std::vector<wide_real>(values.size()), std::vector<double>(values.begin(), values.end()),
                     {}, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < values.size(); ++i) sol.wide_values[i] = wide_real(values[i]);
    if (boundary_stencil_width(l, p) <= grid.n()) sol.traces = endpoint_traces(grid, l, p, sol.wide_values);
    return sol;
}

std::vector<wide_real> nodal_derivative(const GridSolution& sol, int k) {
    const int n = sol.grid.n();
    if (k == 0) return sol.wide_values;
    if (k < 0 || k > 2 * sol.l + 1) throw Error(ErrorKind::InvalidArgument, "derivative order out of range");
    const int width = std::min(interior_stencil_width(sol.l, sol.p), n);
    if (width <= k) throw Error(ErrorKind::GridTooSmall, "grid too small for derivative order " + std::to_string(k));
    const wide_real h(sol.grid.h());
    // Stencils differ only in their first offset; away from the ends it is constant.
    std::vector<wide_real> weights;
    int cached_first = 1;
    std::vector<wide_real> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto off = stencil_offsets(i, n, width);
        if (off[0] != cached_first) {
            weights = fd_weights<wide_real>(off, k, h);
            cached_first = off[0];
        }
        wide_real acc(0);
        for (std::size_t q = 0; q < off.size(); ++q) acc += weights[q] * sol.wide_values[static_cast<std::size_t>(i + off[q])];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

namespace {

wide_real trapezoid_sq(const Grid& grid, std::span<const wide_real> v) {
    wide_real s(0);
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const wide_real w = (i == 0 || i + 1 == n) ? wide_real(0.5) : wide_real(1);
        s += w * v[i] * v[i];
    }
    return s * wide_real(grid.h());
}

}  // namespace

std::vector<double> discrete_norms(const GridSolution& sol, int m) {
    std::vector<double> out;
    for (int k = 0; k <= m; ++k) out.push_back(std::sqrt(to_double(trapezoid_sq(sol.grid, nodal_derivative(sol, k)))));
    return out;
}

double sobolev_norm(const GridSolution& sol, int m) {
    double s = 0.0;
    for (double v : discrete_norms(sol, m)) s += v * v;
    return std::sqrt(s);
}

double trapezoid_norm(const Grid& grid, std::span<const double> values) {
    std::vector<wide_real> w(values.begin(), values.end());
    return std::sqrt(to_double(trapezoid_sq(grid, w)));
}

}  // namespace dispersive
