#ifndef CSSEL_MATRIX_HPP
#define CSSEL_MATRIX_HPP

#include <algorithm>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "scalar.hpp"

namespace cssel {

//
// Dense column-major matrix. A default-constructed matrix is an empty
// placeholder (0 x 0); every sized matrix has at least one row and column.
//
template <typename T>
class Matrix {
public:
    using value_type = T;
    using real_type = real_t<T>;

    Matrix() = default;

    Matrix(index_t rows, index_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {
        require(rows >= 1 && cols >= 1, errc::invalid_argument,
                "matrix dimensions must be positive");
    }

    Matrix(index_t rows, index_t cols, std::vector<T> column_major)
        : rows_(rows), cols_(cols), data_(std::move(column_major)) {
        require(rows >= 1 && cols >= 1, errc::invalid_argument,
                "matrix dimensions must be positive");
        require(data_.size() == rows * cols, errc::dimension_mismatch,
                "data length " + std::to_string(data_.size()) + " != rows*cols");
        require(all_finite(), errc::non_finite, "matrix entries must be finite");
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
        const index_t m = rows.size();
        require(m >= 1, errc::invalid_argument, "from_rows: no rows");
        const index_t n = rows.begin()->size();
        std::vector<T> data(m * n);
        index_t i = 0;
        for (const auto& row : rows) {
            require(row.size() == n, errc::dimension_mismatch, "from_rows: ragged rows");
            index_t j = 0;
            for (const auto& v : row)
                data[i + j++ * m] = v;
            ++i;
        }
        return Matrix(m, n, std::move(data));
    }

    static Matrix identity(index_t n) {
        Matrix I(n, n);
        for (index_t i = 0; i < n; ++i)
            I(i, i) = T(1);
        return I;
    }

    index_t rows() const noexcept { return rows_; }
    index_t cols() const noexcept { return cols_; }
    index_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(index_t i, index_t j) { return data_[i + j * rows_]; }
    const T& operator()(index_t i, index_t j) const { return data_[i + j * rows_]; }

    std::span<T> col(index_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const T> col(index_t j) const { return {data_.data() + j * rows_, rows_}; }

    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }
    const std::vector<T>& storage() const noexcept { return data_; }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](const T& x) { return is_finite(x); });
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (index_t j = 0; j < cols_; ++j)
            for (index_t i = 0; i < rows_; ++i)
                t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix adjoint() const {
        Matrix t(cols_, rows_);
        for (index_t j = 0; j < cols_; ++j)
            for (index_t i = 0; i < rows_; ++i)
                t(j, i) = conjugate((*this)(i, j));
        return t;
    }

    Matrix select_cols(std::span<const index_t> idx) const {
        require(!idx.empty(), errc::invalid_argument, "select_cols: empty index set");
        Matrix s(rows_, idx.size());
        for (index_t k = 0; k < idx.size(); ++k) {
            require(idx[k] < cols_, errc::invalid_argument, "select_cols: index out of range");
            std::copy_n(col(idx[k]).begin(), rows_, s.col(k).begin());
        }
        return s;
    }

    Matrix select_rows(std::span<const index_t> idx) const {
        require(!idx.empty(), errc::invalid_argument, "select_rows: empty index set");
        Matrix s(idx.size(), cols_);
        for (index_t k = 0; k < idx.size(); ++k)
            require(idx[k] < rows_, errc::invalid_argument, "select_rows: index out of range");
        for (index_t j = 0; j < cols_; ++j)
            for (index_t k = 0; k < idx.size(); ++k)
                s(k, j) = (*this)(idx[k], j);
        return s;
    }

    Matrix block(index_t i0, index_t j0, index_t nr, index_t nc) const {
        require(i0 + nr <= rows_ && j0 + nc <= cols_, errc::dimension_mismatch,
                "block out of range");
        Matrix b(nr, nc);
        for (index_t j = 0; j < nc; ++j)
            for (index_t i = 0; i < nr; ++i)
                b(i, j) = (*this)(i0 + i, j0 + j);
        return b;
    }

    void swap_cols(index_t a, index_t b) {
        if (a != b)
            std::swap_ranges(col(a).begin(), col(a).end(), col(b).begin());
    }

    template <typename U>
    Matrix<U> cast() const {
        Matrix<U> out(rows_, cols_);
        for (index_t k = 0; k < data_.size(); ++k)
            out.data()[k] = static_cast<U>(data_[k]);
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (index_t k = 0; k < data_.size(); ++k)
            data_[k] += o.data_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (index_t k = 0; k < data_.size(); ++k)
            data_[k] -= o.data_[k];
        return *this;
    }

    Matrix& operator*=(const T& s) {
        for (auto& x : data_)
            x *= s;
        return *this;
    }

private:
    void check_same(const Matrix& o) const {
        require(rows_ == o.rows_ && cols_ == o.cols_, errc::dimension_mismatch,
                "shape mismatch in elementwise operation");
    }

    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<T> data_;
};

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
    a += b;
    return a;
}

template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
    a -= b;
    return a;
}

template <typename T>
Matrix<T> operator*(Matrix<T> a, const T& s) {
    a *= s;
    return a;
}

// A * B
template <typename T>
Matrix<T> multiply(const Matrix<T>& A, const Matrix<T>& B) {
    require(A.cols() == B.rows(), errc::dimension_mismatch, "multiply: inner dimensions differ");
    Matrix<T> C(A.rows(), B.cols());
    for (index_t j = 0; j < B.cols(); ++j) {
        auto c = C.col(j);
        for (index_t k = 0; k < A.cols(); ++k) {
            const T b = B(k, j);
            if (b == T(0))
                continue;
            auto a = A.col(k);
            for (index_t i = 0; i < A.rows(); ++i)
                c[i] += a[i] * b;
        }
    }
    return C;
}

// A^* B
template <typename T>
Matrix<T> adjoint_multiply(const Matrix<T>& A, const Matrix<T>& B) {
    require(A.rows() == B.rows(), errc::dimension_mismatch, "adjoint_multiply: row counts differ");
    Matrix<T> C(A.cols(), B.cols());
    for (index_t j = 0; j < B.cols(); ++j) {
        auto b = B.col(j);
        for (index_t i = 0; i < A.cols(); ++i) {
            auto a = A.col(i);
            T s(0);
            for (index_t k = 0; k < A.rows(); ++k)
                s += conjugate(a[k]) * b[k];
            C(i, j) = s;
        }
    }
    return C;
}

// A B^*
template <typename T>
Matrix<T> multiply_adjoint(const Matrix<T>& A, const Matrix<T>& B) {
    require(A.cols() == B.cols(), errc::dimension_mismatch, "multiply_adjoint: column counts differ");
    Matrix<T> C(A.rows(), B.rows());
    for (index_t k = 0; k < A.cols(); ++k) {
        auto a = A.col(k);
        for (index_t j = 0; j < B.rows(); ++j) {
            const T b = conjugate(B(j, k));
            if (b == T(0))
                continue;
            auto c = C.col(j);
            for (index_t i = 0; i < A.rows(); ++i)
                c[i] += a[i] * b;
        }
    }
    return C;
}

template <typename T>
real_t<T> column_norm(std::span<const T> x) {
    real_t<T> s(0);
    for (const auto& v : x)
        s += abs2(v);
    return sqrt_of(s);
}

template <typename T>
real_t<T> max_abs(const Matrix<T>& A) {
    real_t<T> m(0);
    for (index_t k = 0; k < A.size(); ++k)
        m = std::max(m, magnitude(A.data()[k]));
    return m;
}

}  // namespace cssel

#endif
