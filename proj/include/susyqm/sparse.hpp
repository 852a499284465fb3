#pragma once

// Compressed-row sparse matrix over a generic scalar (double, complex, Surd).
// Structural zeros are never stored: every constructor and arithmetic result
// drops entries that compare equal to T{}, so is_zero() is an exact test.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "susyqm/error.hpp"
#include "susyqm/surd.hpp"

namespace susyqm {

template <class T>
struct Triplet {
    std::size_t row;
    std::size_t col;
    T value;
};

template <class T>
class SparseMatrix {
public:
    SparseMatrix() = default;

    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet<T>> triplets)
        : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {
        std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        for (std::size_t k = 0; k < triplets.size();) {
            const auto [r, c, v0] = triplets[k];
            if (r >= rows_ || c >= cols_) throw DimensionError("SparseMatrix: triplet out of range");
            T v = v0;
            std::size_t m = k + 1;
            for (; m < triplets.size() && triplets[m].row == r && triplets[m].col == c; ++m) {
                v = v + triplets[m].value;
            }
            if (!(v == T{})) {
                col_idx_.push_back(c);
                values_.push_back(std::move(v));
                ++row_ptr_[r + 1];
            }
            k = m;
        }
        for (std::size_t r = 0; r < rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
    }

    static SparseMatrix zero(std::size_t n) { return {n, n, {}}; }

    static SparseMatrix identity(std::size_t n) {
        std::vector<Triplet<T>> t;
        t.reserve(n);
        for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, T{1}});
        return {n, n, std::move(t)};
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nonzeros() const noexcept { return values_.size(); }
    bool is_zero() const noexcept { return values_.empty(); }

    T coeff(std::size_t r, std::size_t c) const {
        const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
        const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
        const auto it = std::lower_bound(first, last, c);
        if (it == last || *it != c) return T{};
        return values_[static_cast<std::size_t>(it - col_idx_.begin())];
    }

    /// Calls fn(row, col, value) for every stored entry in row-major order.
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) fn(r, col_idx_[k], values_[k]);
        }
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, ScalarTraits<T>::magnitude(v));
        return m;
    }

    /// Largest |entry| with both row and column accepted by `keep`.
    double max_abs_on(const std::function<bool(std::size_t)>& keep) const {
        double m = 0.0;
        for_each([&](std::size_t r, std::size_t c, const T& v) {
            if (keep(r) && keep(c)) m = std::max(m, ScalarTraits<T>::magnitude(v));
        });
        return m;
    }

    SparseMatrix adjoint() const {
        std::vector<Triplet<T>> t;
        t.reserve(values_.size());
        for_each([&](std::size_t r, std::size_t c, const T& v) { t.push_back({c, r, ScalarTraits<T>::conj(v)}); });
        return {cols_, rows_, std::move(t)};
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        if (x.size() != cols_) throw DimensionError("SparseMatrix::apply: vector length mismatch");
        std::vector<T> y(rows_, T{});
        for_each([&](std::size_t r, std::size_t c, const T& v) { y[r] = y[r] + v * x[c]; });
        return y;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("SparseMatrix product: inner dimensions differ");
        std::vector<T> acc(b.cols_, T{});
        std::vector<char> touched(b.cols_, 0);
        std::vector<std::size_t> cols;
        std::vector<Triplet<T>> out;
        for (std::size_t r = 0; r < a.rows_; ++r) {
            cols.clear();
            for (std::size_t k = a.row_ptr_[r]; k < a.row_ptr_[r + 1]; ++k) {
                const std::size_t mid = a.col_idx_[k];
                for (std::size_t l = b.row_ptr_[mid]; l < b.row_ptr_[mid + 1]; ++l) {
                    const std::size_t c = b.col_idx_[l];
                    if (!touched[c]) {
                        touched[c] = 1;
                        cols.push_back(c);
                    }
                    acc[c] = acc[c] + a.values_[k] * b.values_[l];
                }
            }
            for (const std::size_t c : cols) {
                out.push_back({r, c, std::move(acc[c])});
                acc[c] = T{};
                touched[c] = 0;
            }
        }
        return {a.rows_, b.cols_, std::move(out)};
    }

    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
        return combine(a, b, T{1});
    }

    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
        return combine(a, b, T{-1});
    }

    friend SparseMatrix operator*(const T& s, const SparseMatrix& a) {
        std::vector<Triplet<T>> t;
        a.for_each([&](std::size_t r, std::size_t c, const T& v) { t.push_back({r, c, s * v}); });
        return {a.rows_, a.cols_, std::move(t)};
    }

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ &&
               a.col_idx_ == b.col_idx_ && a.values_ == b.values_;
    }

private:
    static SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, const T& sb) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("SparseMatrix sum: shapes differ");
        std::vector<Triplet<T>> t;
        t.reserve(a.nonzeros() + b.nonzeros());
        a.for_each([&](std::size_t r, std::size_t c, const T& v) { t.push_back({r, c, v}); });
        b.for_each([&](std::size_t r, std::size_t c, const T& v) { t.push_back({r, c, sb * v}); });
        return {a.rows_, a.cols_, std::move(t)};
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<T> values_;
};

template <class T>
SparseMatrix<T> commutator(const SparseMatrix<T>& a, const SparseMatrix<T>& b) {
    return a * b - b * a;
}

template <class T>
SparseMatrix<T> anticommutator(const SparseMatrix<T>& a, const SparseMatrix<T>& b) {
    return a * b + b * a;
}

}  // namespace susyqm
