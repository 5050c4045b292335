#pragma once

#include <span>
#include <string>
#include <vector>

#include "dispersive/admissibility.hpp"
#include "dispersive/dense.hpp"
#include "dispersive/model.hpp"
#include "dispersive/precision.hpp"

namespace dispersive {

/// Uniform nodes x_i = i h, h = L / (n - 1).
class Grid {
public:
    Grid(int n, double length);

    int n() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double h() const noexcept { return length_ / (n_ - 1); }
    double node(int i) const { return i == n_ - 1 ? length_ : i * h(); }
    std::vector<double> nodes() const;

private:
    int n_;
    double length_;
};

/// Fornberg weights: sum_i w_i p(x + offsets_i h) = p^{(k)}(x) for deg p < |offsets|.
/// Throws InsufficientStencil when |offsets| <= k.
template <class T>
std::vector<T> fd_weights(std::span<const int> offsets, int k, T h);

std::vector<double> fd_weights(std::span<const int> offsets, int k, double h);

/// Offsets of a width-point stencil around node i, centred when it fits and
/// shifted inwards (one-sided at the ends) otherwise.
std::vector<int> stencil_offsets(int i, int n, int width);

/// D^k with width k + p stencils; exact on polynomials of degree < k + p.
/// Throws GridTooSmall when the stencil does not fit.
DenseMatrix<wide_real> wide_derivative_matrix(const Grid& grid, int k, int p);

/// wide_derivative_matrix rounded to double.
Matrix derivative_matrix(const Grid& grid, int k, int p);

/// One-sided width used for boundary relations, traces and the smallest
/// interior stencil: exact through degree 2l + p + 1.
int boundary_stencil_width(int l, int p);

/// Smallest n accepted by assemble for (l, p).
int minimum_grid_size(int l, int p);

enum class RowKind { InteriorCollocation, DirichletAt0, DirichletAtL, HighestAtL, Relation };

struct RowLabel {
    RowKind kind = RowKind::InteriorCollocation;
    int node = 0;   // collocation node, or 0 / n-1 for boundary rows
    int order = 0;  // derivative order fixed by a relation row

    std::string to_string() const;
};

/// Square collocation system. Rows are ordered: l rows at x = 0, interior
/// collocation at nodes l..n-l-2, then l+1 rows at x = L. Every row is scaled
/// to unit max-abs; rhs is scaled with it.
struct LinearSystem {
    Grid grid;
    int l = 1;
    int p = 4;
    DenseMatrix<wide_real> matrix;
    std::vector<wide_real> rhs;
    std::vector<RowLabel> row_labels;
    std::vector<wide_real> row_scale;  // factor each row was divided by
};

/// Throws GridTooSmall, UnreducedRawForms, InvalidSpec.
LinearSystem assemble(const ProblemSpec& spec, const Grid& grid, int p);

struct GridSolution {
    Grid grid;
    int l = 1;
    int p = 4;
    std::vector<wide_real> wide_values;
    std::vector<double> values;
    BoundaryJet traces;  // D^1..D^{2l} at both ends from one-sided stencils
    double condition_estimate = 0.0;  // 1-norm, of the scaled matrix
    double relative_residual = 0.0;   // ||A x - b||_inf / ||b||_inf after refinement
    double pivot_ratio = 0.0;         // smallest |U_kk| over largest |A_ij|

    std::vector<double> nodes() const { return grid.nodes(); }
};

/// Pivot ratio below which an n x n system is singular in working precision.
/// Scaled collocation rows carry h^{2l+1}, so legitimate ratios fall far below
/// double epsilon (about 1e-19 for l = 4, n = 201).
inline double singular_pivot_ratio(std::size_t n) { return 16.0 * static_cast<double>(n) * wide_epsilon; }

/// LU with partial pivoting in wide precision plus one refinement step.
/// Throws NumericallySingular when the pivot ratio falls below singular_pivot_ratio(n).
GridSolution solve_linear(const LinearSystem& sys);

/// Wraps nodal samples so that traces and norms can be evaluated on them.
GridSolution solution_from_samples(const Grid& grid, int l, std::span<const double> values, int p = 4);

/// Nodal values of D^k u (k <= 2l + 1) with the solver's interior stencils.
std::vector<wide_real> nodal_derivative(const GridSolution& sol, int k);

/// Composite-trapezoid L2 norms of D^0 u..D^m u, m <= 2l + 1.
std::vector<double> discrete_norms(const GridSolution& sol, int m);

/// sqrt of the sum of squares of discrete_norms(sol, m).
double sobolev_norm(const GridSolution& sol, int m);

/// Composite-trapezoid L2 norm of nodal samples.
double trapezoid_norm(const Grid& grid, std::span<const double> values);

}  // namespace dispersive
