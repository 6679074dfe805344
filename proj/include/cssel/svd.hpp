#ifndef CSSEL_SVD_HPP
#define CSSEL_SVD_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include "matrix.hpp"

namespace cssel {

/// Leading singular triplets Z = U * diag(sigma) * V, with U (M x r) holding
/// left singular vectors as columns and V (r x N) right singular vectors as rows.
template <typename T>
struct TruncatedSVD {
    Matrix<T> U;
    std::vector<real_t<T>> sigma;
    Matrix<T> V;

    index_t rank() const noexcept { return sigma.size(); }

    Matrix<T> reconstruct() const {
        Matrix<T> US = U;
        for (index_t k = 0; k < sigma.size(); ++k)
            for (auto& x : US.col(k))
                x *= T(sigma[k]);
        return multiply(US, V);
    }
};

namespace detail {

// Unit vector orthogonal to the first `filled` columns of Q (which are orthonormal).
template <typename T>
void complete_column(Matrix<T>& Q, index_t filled) {
    using R = real_t<T>;
    const index_t m = Q.rows();
    std::vector<T> best;
    R best_norm(-1);
    for (index_t e = 0; e < m; ++e) {
        std::vector<T> x(m, T(0));
        x[e] = T(1);
        for (int pass = 0; pass < 2; ++pass) {
            for (index_t c = 0; c < filled; ++c) {
                auto q = Q.col(c);
                T s(0);
                for (index_t i = 0; i < m; ++i)
                    s += conjugate(q[i]) * x[i];
                for (index_t i = 0; i < m; ++i)
                    x[i] -= s * q[i];
            }
        }
        const R nx = column_norm<T>(x);
        if (nx > best_norm) {
            best_norm = nx;
            best = std::move(x);
        }
        if (best_norm > R(0.5))
            break;
    }
    auto q = Q.col(filled);
    for (index_t i = 0; i < m; ++i)
        q[i] = best[i] / T(best_norm);
}

//
// One-sided (Hestenes) Jacobi on a matrix G with rows >= cols.  On exit the
// columns of G are mutually orthogonal and G_in * J = G_out with J unitary,
// accumulated into Jacc.  Cyclic-by-rows ordering keeps the result deterministic.
//
template <typename T>
void hestenes_jacobi(Matrix<T>& G, Matrix<T>& Jacc, int max_sweeps = 80) {
    using R = real_t<T>;
    const index_t m = G.rows();
    const index_t n = G.cols();
    const R tol = sqrt_of(R(m)) * epsilon_of<R>();
    R total(0);
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < m; ++i)
            total += abs2(G(i, j));
    // roundoff-level pairs are skipped
    const R floor_ = epsilon_of<R>() * epsilon_of<R>() * total;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (index_t p = 0; p + 1 < n; ++p) {
            for (index_t q = p + 1; q < n; ++q) {
                auto gp = G.col(p);
                auto gq = G.col(q);
                R alpha(0), beta(0);
                T gamma(0);
                for (index_t i = 0; i < m; ++i) {
                    alpha += abs2(gp[i]);
                    beta += abs2(gq[i]);
                    gamma += conjugate(gp[i]) * gq[i];
                }
                const R g = magnitude(gamma);
                if (g == R(0) || g <= tol * sqrt_of(alpha) * sqrt_of(beta) || g <= floor_)
                    continue;
                rotated = true;

                // make the pair's inner product real, then rotate
                const T ph = gamma / T(g);
                const T phc = conjugate(ph);
                const R zeta = (beta - alpha) / (R(2) * g);
                const R sgn = zeta >= R(0) ? R(1) : R(-1);
                const R t = sgn / (sgn * zeta + sqrt_of(R(1) + zeta * zeta));
                const R c = R(1) / sqrt_of(R(1) + t * t);
                const R s = c * t;

                for (index_t i = 0; i < m; ++i) {
                    const T a = gp[i];
                    const T b = gq[i] * phc;
                    gp[i] = T(c) * a - T(s) * b;
                    gq[i] = T(s) * a + T(c) * b;
                }
                auto vp = Jacc.col(p);
                auto vq = Jacc.col(q);
                for (index_t i = 0; i < Jacc.rows(); ++i) {
                    const T a = vp[i];
                    const T b = vq[i] * phc;
                    vp[i] = T(c) * a - T(s) * b;
                    vq[i] = T(s) * a + T(c) * b;
                }
            }
        }
        if (!rotated)
            return;
    }
    fail(errc::non_convergence, "one-sided Jacobi did not converge");
}

}  // namespace detail

/// Thin SVD with all min(M, N) singular triplets, singular values nonincreasing.
template <typename T>
TruncatedSVD<T> full_svd(const Matrix<T>& A) {
    using R = real_t<T>;
    require(!A.empty(), errc::invalid_argument, "svd of empty matrix");
    require(A.all_finite(), errc::non_finite, "svd input must be finite");

    const bool tall = A.rows() >= A.cols();
    Matrix<T> G = tall ? A : A.adjoint();
    const index_t m = G.rows();
    const index_t p = G.cols();
    Matrix<T> J = Matrix<T>::identity(p);
    detail::hestenes_jacobi(G, J);

    std::vector<R> norms(p);
    for (index_t j = 0; j < p; ++j)
        norms[j] = column_norm<T>(G.col(j));
    std::vector<index_t> order(p);
    std::iota(order.begin(), order.end(), index_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](index_t a, index_t b) { return norms[a] > norms[b]; });

    // left factor of G (m x p) and right factor J (p x p): G_in = Gl * diag * J^*
    Matrix<T> Gl(m, p);
    Matrix<T> Jr(p, p);
    std::vector<R> sigma(p);
    const R tiny = std::numeric_limits<R>::min() / epsilon_of<R>();
    for (index_t k = 0; k < p; ++k) {
        const index_t j = order[k];
        sigma[k] = norms[j];
        std::copy_n(J.col(j).begin(), p, Jr.col(k).begin());
        if (norms[j] > tiny) {
            auto dst = Gl.col(k);
            auto src = G.col(j);
            for (index_t i = 0; i < m; ++i)
                dst[i] = src[i] / T(norms[j]);
        } else {
            sigma[k] = R(0);
            detail::complete_column(Gl, k);
        }
    }

    TruncatedSVD<T> out;
    out.sigma = std::move(sigma);
    if (tall) {
        out.U = std::move(Gl);
        out.V = Jr.adjoint();
    } else {
        out.U = std::move(Jr);
        out.V = Gl.adjoint();
    }
    return out;
}

/// Leading r singular triplets of A.  When require_full_rank is set, fails
/// with rank_deficient if sigma_r < tol * sigma_1.
template <typename T>
TruncatedSVD<T> truncated_svd(const Matrix<T>& A, index_t r, real_t<T> tol,
                              bool require_full_rank = false) {
    require(r >= 1 && r <= std::min(A.rows(), A.cols()), errc::invalid_argument,
            "truncated_svd: rank must satisfy 1 <= r <= min(rows, cols)");
    TruncatedSVD<T> full = full_svd(A);
    if (require_full_rank && full.sigma[r - 1] < tol * full.sigma[0])
        fail(errc::rank_deficient, "sigma_r below tolerance relative to sigma_1");
    TruncatedSVD<T> out;
    out.U = full.U.block(0, 0, full.U.rows(), r);
    out.V = full.V.block(0, 0, r, full.V.cols());
    out.sigma.assign(full.sigma.begin(), full.sigma.begin() + static_cast<std::ptrdiff_t>(r));
    return out;
}

template <typename T>
TruncatedSVD<T> truncated_svd(const Matrix<T>& A, index_t r) {
    return truncated_svd(A, r, scaled_tol<real_t<T>>(1e-12));
}

template <typename T>
std::vector<real_t<T>> singular_values(const Matrix<T>& A) {
    return full_svd(A).sigma;
}

}  // namespace cssel

#endif
