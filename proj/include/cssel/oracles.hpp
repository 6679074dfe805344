#ifndef CSSEL_ORACLES_HPP
#define CSSEL_ORACLES_HPP

// Reference computations on top of Eigen, kept apart from the selection
// kernels.  Used by the tests and the acceptance runner.

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace cssel::oracle {

template <typename T>
using EMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
EMat<T> to_eigen(const Matrix<T>& A) {
    EMat<T> E(A.rows(), A.cols());
    for (index_t j = 0; j < A.cols(); ++j)
        for (index_t i = 0; i < A.rows(); ++i)
            E(i, j) = A(i, j);
    return E;
}

template <typename T>
Matrix<T> from_eigen(const EMat<T>& E) {
    Matrix<T> A(static_cast<index_t>(E.rows()), static_cast<index_t>(E.cols()));
    for (index_t j = 0; j < A.cols(); ++j)
        for (index_t i = 0; i < A.rows(); ++i)
            A(i, j) = E(i, j);
    return A;
}

template <typename T>
std::vector<real_t<T>> singular_values(const Matrix<T>& A) {
    Eigen::JacobiSVD<EMat<T>> svd(to_eigen(A));
    const auto& s = svd.singularValues();
    return std::vector<real_t<T>>(s.data(), s.data() + s.size());
}

template <typename T>
real_t<T> spectral_norm(const Matrix<T>& A) {
    return oracle::singular_values(A).front();
}

template <typename T>
real_t<T> fro_norm(const Matrix<T>& A) {
    return to_eigen(A).norm();
}

/// ||A - A_r||_F and ||A - A_r||_2 from the singular values.
template <typename T>
real_t<T> best_rank_fro(const Matrix<T>& A, index_t r) {
    const auto s = oracle::singular_values(A);
    real_t<T> acc(0);
    for (index_t i = r; i < s.size(); ++i)
        acc += s[i] * s[i];
    using std::sqrt;
    return sqrt(acc);
}

template <typename T>
real_t<T> best_rank_spec(const Matrix<T>& A, index_t r) {
    const auto s = oracle::singular_values(A);
    return r < s.size() ? s[r] : real_t<T>(0);
}

/// Moore-Penrose pseudoinverse, singular values below rtol * sigma_1 dropped.
template <typename T>
Matrix<T> pinv(const Matrix<T>& A, double rtol = 1e-12) {
    using R = real_t<T>;
    Eigen::JacobiSVD<EMat<T>> svd(to_eigen(A), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Eigen::Matrix<R, Eigen::Dynamic, 1> inv(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        inv(i) = s(i) > R(rtol) * s(0) ? R(1) / s(i) : R(0);
    EMat<T> P = svd.matrixV() * inv.template cast<T>().asDiagonal() * svd.matrixU().adjoint();
    return from_eigen<T>(P);
}

/// A - C C^+ A.
template <typename T>
Matrix<T> projector_residual(const Matrix<T>& A, const Matrix<T>& C) {
    const EMat<T> a = to_eigen(A);
    const EMat<T> c = to_eigen(C);
    return from_eigen<T>(a - c * (to_eigen(pinv(C)) * a));
}

/// A - C C^+ A R^+ R.
template <typename T>
Matrix<T> skeleton_projective_residual(const Matrix<T>& A, const Matrix<T>& C, const Matrix<T>& Rr) {
    const EMat<T> a = to_eigen(A);
    const EMat<T> c = to_eigen(C);
    const EMat<T> r = to_eigen(Rr);
    return from_eigen<T>(a - c * to_eigen(pinv(C)) * a * to_eigen(pinv(Rr)) * r);
}

/// A - C Ahat^{-1} R.
template <typename T>
Matrix<T> skeleton_cross_residual(const Matrix<T>& A, const std::vector<index_t>& rows,
                                  const std::vector<index_t>& cols) {
    const Matrix<T> C = A.select_cols(cols);
    const Matrix<T> Rr = A.select_rows(rows);
    const Matrix<T> Ahat = C.select_rows(rows);
    const EMat<T> core = to_eigen(Ahat).fullPivLu().solve(to_eigen(Rr));
    return from_eigen<T>(to_eigen(A) - to_eigen(C) * core);
}

struct OracleResult {
    std::vector<index_t> best_indices;
    double best_value = 0.0;
    index_t enumerated = 0;
};

inline double binomial(index_t n, index_t k) {
    if (k > n)
        return 0.0;
    double c = 1.0;
    for (index_t i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

/// Visit every r-subset of {0..n-1} in lexicographic order.
inline index_t for_each_subset(index_t n, index_t r, const std::function<void(const std::vector<index_t>&)>& f,
                               double limit = 1e6) {
    require(r >= 1 && r <= n, errc::invalid_argument, "subset size out of range");
    if (binomial(n, r) > limit)
        fail(errc::too_large, "C(" + std::to_string(n) + ", " + std::to_string(r) + ") exceeds the oracle limit");
    std::vector<index_t> s(r);
    for (index_t i = 0; i < r; ++i)
        s[i] = i;
    index_t count = 0;
    while (true) {
        f(s);
        ++count;
        index_t i = r;
        while (i > 0 && s[i - 1] == n - r + i - 1)
            --i;
        if (i == 0)
            break;
        ++s[i - 1];
        for (index_t j = i; j < r; ++j)
            s[j] = s[j - 1] + 1;
    }
    return count;
}

/// The r columns minimising ||A - C C^+ A||_F.
template <typename T>
OracleResult best_columns_bruteforce(const Matrix<T>& A, index_t r) {
    OracleResult out;
    out.best_value = std::numeric_limits<double>::infinity();
    out.enumerated = for_each_subset(A.cols(), r, [&](const std::vector<index_t>& s) {
        const double v = static_cast<double>(oracle::fro_norm(projector_residual(A, A.select_cols(s))));
        if (v < out.best_value) {
            out.best_value = v;
            out.best_indices = s;
        }
    });
    return out;
}

/// The r columns of largest Gram volume sqrt(det(C^* C)); for an r x N matrix
/// this is |det| of the square submatrix.
template <typename T>
OracleResult max_volume_bruteforce(const Matrix<T>& A, index_t r) {
    OracleResult out;
    out.best_value = -1.0;
    out.enumerated = for_each_subset(A.cols(), r, [&](const std::vector<index_t>& s) {
        const auto sv = oracle::singular_values(A.select_cols(s));
        double v = 1.0;
        for (index_t i = 0; i < r && i < sv.size(); ++i)
            v *= static_cast<double>(sv[i]);
        if (sv.size() < r)
            v = 0.0;
        if (v > out.best_value) {
            out.best_value = v;
            out.best_indices = s;
        }
    });
    return out;
}

/// Gram volume of a column subset.
template <typename T>
double volume(const Matrix<T>& A, const std::vector<index_t>& cols) {
    const auto sv = oracle::singular_values(A.select_cols(cols));
    double v = 1.0;
    for (const auto& x : sv)
        v *= static_cast<double>(x);
    return sv.size() < cols.size() ? 0.0 : v;
}

}  // namespace cssel::oracle

#endif
