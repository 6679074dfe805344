#ifndef CSSEL_KERNELS_HPP
#define CSSEL_KERNELS_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include "matrix.hpp"
#include "svd.hpp"

namespace cssel {

//
// norms
//

template <typename T>
real_t<T> fro_norm(const Matrix<T>& A) {
    real_t<T> s(0);
    for (index_t k = 0; k < A.size(); ++k)
        s += abs2(A.data()[k]);
    return sqrt_of(s);
}

/// Absolute slack for bound checks: a generous multiple of the rounding level of A.
template <typename T>
real_t<T> roundoff_scale(const Matrix<T>& A) {
    using R = real_t<T>;
    return R(100) * epsilon_of<R>() * R(std::max(A.rows(), A.cols())) * fro_norm(A);
}

/// Spectral norm by power iteration on A^* A, started from the unit vector of
/// the largest-norm column.  Falls back to the Jacobi SVD if the iteration
/// stalls (clustered leading singular values).
template <typename T>
real_t<T> spectral_norm(const Matrix<T>& A, real_t<T> rel_tol = real_t<T>(1e-12),
                        int max_iter = 5000) {
    using R = real_t<T>;
    if (A.empty())
        return R(0);
    const index_t m = A.rows();
    const index_t n = A.cols();

    index_t start = 0;
    R best(-1);
    for (index_t j = 0; j < n; ++j) {
        const R c = column_norm<T>(A.col(j));
        if (c > best) {
            best = c;
            start = j;
        }
    }
    if (best == R(0))
        return R(0);

    std::vector<T> x(n, T(0)), y(m), z(n);
    x[start] = T(1);
    R prev(0);
    for (int it = 0; it < max_iter; ++it) {
        std::fill(y.begin(), y.end(), T(0));
        for (index_t j = 0; j < n; ++j) {
            if (x[j] == T(0))
                continue;
            auto a = A.col(j);
            for (index_t i = 0; i < m; ++i)
                y[i] += a[i] * x[j];
        }
        // z = A^* y, mu = ||A x||^2 = x^* z
        R mu(0);
        for (index_t j = 0; j < n; ++j) {
            auto a = A.col(j);
            T s(0);
            for (index_t i = 0; i < m; ++i)
                s += conjugate(a[i]) * y[i];
            z[j] = s;
            mu += real_part(conjugate(x[j]) * s);
        }
        const R est = sqrt_of(std::max(mu, R(0)));
        R res(0);
        for (index_t j = 0; j < n; ++j)
            res += abs2(z[j] - T(mu) * x[j]);
        res = sqrt_of(res);

        if (est > R(0) && est - prev <= rel_tol * est && res <= R(1e-6) * mu)
            return est;
        prev = est;

        const R nz = column_norm<T>(z);
        if (nz == R(0))
            return est;
        for (index_t j = 0; j < n; ++j)
            x[j] = z[j] / T(nz);
    }
    return full_svd(A).sigma.front();
}

//
// Householder reflections
//

/// H = I - 2 v v^* acting on rows [offset, offset + v.size()).  An empty v is
/// the identity.
template <typename T>
struct Reflector {
    std::vector<T> v;
    index_t offset = 0;

    bool is_identity() const noexcept { return v.empty(); }
};

/// Reflector mapping V(k:end, k) onto a multiple of e_k.  Sign convention:
/// the resulting V(k,k) equals -e^{i arg v_1} * ||V(k:end,k)||.
template <typename T>
Reflector<T> householder_from_column(const Matrix<T>& V, index_t k) {
    using R = real_t<T>;
    require(k < V.rows() && k < V.cols(), errc::dimension_mismatch,
            "householder_from_column: k out of range");
    auto col = V.col(k);
    const R full = column_norm<T>(col);
    const R tail = column_norm<T>(col.subspan(k));
    if (tail == R(0) || tail < epsilon_of<R>() * full)
        fail(errc::zero_column, "column " + std::to_string(k) + " has vanishing tail");

    Reflector<T> H;
    H.offset = k;
    H.v.assign(col.begin() + static_cast<std::ptrdiff_t>(k), col.end());
    H.v[0] += unit_phase(H.v[0]) * T(tail);
    const R nv = column_norm<T>(std::span<const T>(H.v));
    for (auto& x : H.v)
        x /= T(nv);
    return H;
}

/// Rows offset..offset+len-1 of B <- (I - 2 v v^*) * those rows.
template <typename T>
void apply_reflector_rows(const Reflector<T>& H, Matrix<T>& B) {
    if (H.is_identity())
        return;
    const index_t len = H.v.size();
    require(H.offset + len <= B.rows(), errc::dimension_mismatch,
            "apply_reflector_rows: reflector exceeds matrix rows");
    for (index_t j = 0; j < B.cols(); ++j) {
        auto b = B.col(j).subspan(H.offset, len);
        T w(0);
        for (index_t i = 0; i < len; ++i)
            w += conjugate(H.v[i]) * b[i];
        if (w == T(0))
            continue;
        w *= T(2);
        for (index_t i = 0; i < len; ++i)
            b[i] -= H.v[i] * w;
    }
}

//
// Index of the minimum of `score` over admissible entries.  Entries within a
// relative `tie_rtol` of the minimum are ties; the smallest index wins.
// Returns `score.size()` if nothing is admissible.
//
template <typename R>
index_t argmin_with_ties(const std::vector<R>& score, const std::vector<char>& admissible,
                         index_t first, R tie_rtol) {
    index_t best = score.size();
    for (index_t j = first; j < score.size(); ++j)
        if (admissible[j] && (best == score.size() || score[j] < score[best]))
            best = j;
    if (best == score.size())
        return best;
    const R limit = score[best] + tie_rtol * score[best];
    for (index_t j = first; j < best; ++j)
        if (admissible[j] && score[j] <= limit)
            return j;
    return best;
}

template <typename R>
index_t argmax_with_ties(const std::vector<R>& score, index_t first, R tie_rtol) {
    index_t best = first;
    for (index_t j = first; j < score.size(); ++j)
        if (score[j] > score[best])
            best = j;
    const R limit = score[best] - tie_rtol * score[best];
    for (index_t j = first; j < best; ++j)
        if (score[j] >= limit)
            return j;
    return best;
}

//
// Householder QR with optional column pivoting (largest residual norm).
//
template <typename T>
struct QRFactorization {
    Matrix<T> factored;                     // R in the upper trapezoid, permuted column order
    std::vector<Reflector<T>> reflectors;   // Q = H_0 H_1 ... H_{steps-1}
    std::vector<index_t> perm;              // factored column k is original column perm[k]
    index_t rank = 0;                       // steps with a nonzero pivot

    index_t steps() const noexcept { return reflectors.size(); }

    /// Q^* B
    Matrix<T> apply_qh(Matrix<T> B) const {
        for (const auto& H : reflectors)
            apply_reflector_rows(H, B);
        return B;
    }

    /// Q B
    Matrix<T> apply_q(Matrix<T> B) const {
        for (auto it = reflectors.rbegin(); it != reflectors.rend(); ++it)
            apply_reflector_rows(*it, B);
        return B;
    }

    /// First k columns of Q.
    Matrix<T> thin_q(index_t k) const {
        Matrix<T> E(factored.rows(), k);
        for (index_t i = 0; i < k; ++i)
            E(i, i) = T(1);
        return apply_q(std::move(E));
    }

    /// Leading k rows of R with columns restored to the original order.
    Matrix<T> r_rows(index_t k) const {
        Matrix<T> Rm(k, factored.cols());
        for (index_t c = 0; c < factored.cols(); ++c)
            for (index_t i = 0; i < k && i <= c; ++i)
                Rm(i, perm[c]) = factored(i, c);
        return Rm;
    }
};

struct QROptions {
    bool pivoting = true;
    index_t max_steps = static_cast<index_t>(-1);
    /// stop once the largest residual column norm drops to rank_rtol * (first pivot norm)
    double rank_rtol = -1.0;
    /// pivot ties (relative to the largest residual norm) go to the smallest index
    double tie_rtol = 1e-12;
};

template <typename T>
QRFactorization<T> qr_factorize(const Matrix<T>& A, const QROptions& opt = {}) {
    using R = real_t<T>;
    QRFactorization<T> qr;
    qr.factored = A;
    const index_t m = A.rows();
    const index_t n = A.cols();
    qr.perm.resize(n);
    std::iota(qr.perm.begin(), qr.perm.end(), index_t(0));
    const index_t steps = std::min({m, n, opt.max_steps});
    const R tie = scaled_tol<R>(opt.tie_rtol);
    const R rank_tol = opt.rank_rtol < 0 ? R(-1) : scaled_tol<R>(opt.rank_rtol);

    Matrix<T>& F = qr.factored;
    R first_pivot(0);
    std::vector<R> norms(n);
    for (index_t k = 0; k < steps; ++k) {
        if (opt.pivoting) {
            for (index_t j = k; j < n; ++j)
                norms[j] = column_norm<T>(std::span<const T>(F.col(j)).subspan(k));
            const index_t j = argmax_with_ties(norms, k, tie);
            F.swap_cols(k, j);
            std::swap(qr.perm[k], qr.perm[j]);
        }
        const R pivot = column_norm<T>(std::span<const T>(F.col(k)).subspan(k));
        if (k == 0)
            first_pivot = pivot;
        if (rank_tol >= R(0) && pivot <= rank_tol * first_pivot)
            break;
        if (pivot == R(0)) {
            qr.reflectors.push_back(Reflector<T>{{}, k});
            continue;
        }
        Reflector<T> H = householder_from_column(F, k);
        apply_reflector_rows(H, F);
        for (index_t i = k + 1; i < m; ++i)
            F(i, k) = T(0);
        qr.reflectors.push_back(std::move(H));
        ++qr.rank;
    }
    return qr;
}

/// A - C C^+ A, with C^+ the pseudoinverse (projection onto the numerical
/// column span of C, rank cutoff 1e-12 relative to the leading pivot).
template <typename T>
Matrix<T> orthogonal_projector_residual(const Matrix<T>& A, const Matrix<T>& C) {
    require(A.rows() == C.rows(), errc::dimension_mismatch,
            "orthogonal_projector_residual: row counts differ");
    QROptions opt;
    opt.rank_rtol = 1e-12;
    const QRFactorization<T> qr = qr_factorize(C, opt);
    Matrix<T> X = qr.apply_qh(A);
    for (index_t j = 0; j < X.cols(); ++j)
        for (index_t i = 0; i < qr.steps(); ++i)
            X(i, j) = T(0);
    return qr.apply_q(std::move(X));
}

//
// small dense solves
//

/// X = A^{-1} B by LU with partial pivoting; throws rank_deficient on an exact zero pivot.
template <typename T>
Matrix<T> lu_solve(Matrix<T> A, Matrix<T> B) {
    using R = real_t<T>;
    const index_t n = A.rows();
    require(A.cols() == n, errc::dimension_mismatch, "lu_solve: matrix not square");
    require(B.rows() == n, errc::dimension_mismatch, "lu_solve: right-hand side rows");
    for (index_t k = 0; k < n; ++k) {
        index_t p = k;
        R best = magnitude(A(k, k));
        for (index_t i = k + 1; i < n; ++i)
            if (magnitude(A(i, k)) > best) {
                best = magnitude(A(i, k));
                p = i;
            }
        if (best == R(0))
            fail(errc::rank_deficient, "lu_solve: singular matrix");
        if (p != k) {
            for (index_t j = 0; j < n; ++j)
                std::swap(A(k, j), A(p, j));
            for (index_t j = 0; j < B.cols(); ++j)
                std::swap(B(k, j), B(p, j));
        }
        for (index_t i = k + 1; i < n; ++i) {
            const T l = A(i, k) / A(k, k);
            A(i, k) = l;
            for (index_t j = k + 1; j < n; ++j)
                A(i, j) -= l * A(k, j);
            for (index_t j = 0; j < B.cols(); ++j)
                B(i, j) -= l * B(k, j);
        }
    }
    for (index_t j = 0; j < B.cols(); ++j)
        for (index_t i = n; i-- > 0;) {
            T s = B(i, j);
            for (index_t c = i + 1; c < n; ++c)
                s -= A(i, c) * B(c, j);
            B(i, j) = s / A(i, i);
        }
    return B;
}

/// X = U^{-1} B for the leading k x k upper triangle of U.
template <typename T>
Matrix<T> upper_triangular_solve(const Matrix<T>& U, index_t k, Matrix<T> B) {
    require(U.rows() >= k && U.cols() >= k && B.rows() == k, errc::dimension_mismatch,
            "upper_triangular_solve: shapes");
    for (index_t j = 0; j < B.cols(); ++j)
        for (index_t i = k; i-- > 0;) {
            T s = B(i, j);
            for (index_t c = i + 1; c < k; ++c)
                s -= U(i, c) * B(c, j);
            B(i, j) = s / U(i, i);
        }
    return B;
}

/// ||A A^* - I||_max for a matrix expected to have orthonormal rows.
template <typename T>
real_t<T> row_orthonormality_defect(const Matrix<T>& V) {
    const Matrix<T> G = multiply_adjoint(V, V);
    real_t<T> d(0);
    for (index_t j = 0; j < G.cols(); ++j)
        for (index_t i = 0; i < G.rows(); ++i)
            d = std::max(d, magnitude(G(i, j) - (i == j ? T(1) : T(0))));
    return d;
}

/// sigma_min / sigma_max of a square matrix (0 for an exactly singular one).
template <typename T>
real_t<T> inverse_condition(const Matrix<T>& A) {
    const auto s = singular_values(A);
    if (s.front() == real_t<T>(0))
        return real_t<T>(0);
    return s.back() / s.front();
}

}  // namespace cssel

#endif
