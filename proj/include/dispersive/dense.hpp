#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dispersive/error.hpp"
#include "dispersive/precision.hpp"

namespace dispersive {

/// Row-major dense matrix.
template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    T max_abs() const {
        T m(0);
        for (const T& v : data_) m = std::max(m, abs_value(v));
        return m;
    }

    std::vector<T> multiply(std::span<const T> x) const {
        std::vector<T> y(rows_, T(0));
        for (std::size_t r = 0; r < rows_; ++r) {
            T acc(0);
            const T* a = data_.data() + r * cols_;
            for (std::size_t c = 0; c < cols_; ++c) acc += a[c] * x[c];
            y[r] = acc;
        }
        return y;
    }

    template <class U>
    DenseMatrix<U> cast() const {
        DenseMatrix<U> out(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(r, c) = static_cast<U>((*this)(r, c));
        return out;
    }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;

/// LU factorization with partial pivoting, PA = LU stored in place.
///
/// Rows whose multiplier is exactly zero are skipped during elimination, so
/// banded collocation matrices factor in O(bandwidth * n^2) while the storage
/// and the algorithm remain those of a general dense LU.
template <class T>
class LuFactorization {
public:
    explicit LuFactorization(DenseMatrix<T> a) : lu_(std::move(a)), perm_(lu_.rows()) {
        const std::size_t n = lu_.rows();
        if (lu_.cols() != n) throw Error(ErrorKind::InvalidArgument, "LU requires a square matrix");
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        scale_ = lu_.max_abs();
        min_pivot_ = n == 0 ? T(0) : abs_value(lu_(0, 0));
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            T best = abs_value(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                const T v = abs_value(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (p != k) {
                auto rk = lu_.row(k);
                auto rp = lu_.row(p);
                std::swap_ranges(rk.begin(), rk.end(), rp.begin());
                std::swap(perm_[k], perm_[p]);
            }
            min_pivot_ = k == 0 ? best : std::min(min_pivot_, best);
            const T pivot = lu_(k, k);
            if (pivot == T(0)) continue;
            T* rk = lu_.row(k).data();
            for (std::size_t i = k + 1; i < n; ++i) {
                T* ri = lu_.row(i).data();
                if (ri[k] == T(0)) continue;
                const T m = ri[k] / pivot;
                ri[k] = m;
                for (std::size_t j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
            }
        }
    }

    std::size_t size() const noexcept { return lu_.rows(); }

    /// Smallest |U_kk| divided by the largest |A_ij|.
    T pivot_ratio() const { return scale_ == T(0) ? T(0) : min_pivot_ / scale_; }

    std::vector<T> solve(std::span<const T> b) const {
        const std::size_t n = size();
        std::vector<T> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i) {
            const T* ri = lu_.row(i).data();
            T acc = x[i];
            for (std::size_t j = 0; j < i; ++j) acc -= ri[j] * x[j];
            x[i] = acc;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            const T* ri = lu_.row(ii).data();
            T acc = x[ii];
            for (std::size_t j = ii + 1; j < n; ++j) acc -= ri[j] * x[j];
            x[ii] = acc / ri[ii];
        }
        return x;
    }

    /// Solves A^T x = b.
    std::vector<T> solve_transposed(std::span<const T> b) const {
        const std::size_t n = size();
        std::vector<T> w(b.begin(), b.end());
        for (std::size_t i = 0; i < n; ++i) {
            T acc = w[i];
            for (std::size_t j = 0; j < i; ++j) acc -= lu_(j, i) * w[j];
            w[i] = acc / lu_(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            T acc = w[ii];
            for (std::size_t j = ii + 1; j < n; ++j) acc -= lu_(j, ii) * w[j];
            w[ii] = acc;
        }
        std::vector<T> x(n);
        for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = w[i];
        return x;
    }

    /// Hager's estimate of ||A^{-1}||_1.
    T inverse_norm1_estimate() const {
        const std::size_t n = size();
        if (n == 0) return T(0);
        std::vector<T> x(n, T(1) / T(static_cast<double>(n)));
        T estimate(0);
        for (int iter = 0; iter < 5; ++iter) {
            const std::vector<T> y = solve(x);
            estimate = T(0);
            std::vector<T> s(n);
            for (std::size_t i = 0; i < n; ++i) {
                estimate += abs_value(y[i]);
                s[i] = y[i] < T(0) ? T(-1) : T(1);
            }
            const std::vector<T> z = solve_transposed(s);
            std::size_t jmax = 0;
            T zmax(0), ztx(0);
            for (std::size_t i = 0; i < n; ++i) {
                ztx += z[i] * x[i];
                if (abs_value(z[i]) > zmax) {
                    zmax = abs_value(z[i]);
                    jmax = i;
                }
            }
            if (zmax <= ztx) break;
            std::fill(x.begin(), x.end(), T(0));
            x[jmax] = T(1);
        }
        return estimate;
    }

private:
    DenseMatrix<T> lu_;
    std::vector<std::size_t> perm_;
    T scale_ = T(0);
    T min_pivot_ = T(0);
};

template <class T>
T norm1(const DenseMatrix<T>& a) {
    T best(0);
    for (std::size_t c = 0; c < a.cols(); ++c) {
        T s(0);
        for (std::size_t r = 0; r < a.rows(); ++r) s += abs_value(a(r, c));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace dispersive
