#ifndef CSSEL_RRQR_HPP
#define CSSEL_RRQR_HPP

#include <vector>

#include "kernels.hpp"

namespace cssel {

struct RrqrParams {
    double rho = 2.0;  // a swap must grow the selected volume by more than rho

    explicit RrqrParams(double rho_ = 2.0) : rho(rho_) {
        require(rho_ >= 1.0, errc::invalid_argument, "rrqr: rho must be >= 1");
    }
};

template <typename T>
struct RrqrResult {
    std::vector<index_t> col_indices;  // selected columns, in factorization order
    Matrix<T> Q;                       // M x r, orthonormal columns spanning A(:, col_indices)
    Matrix<T> R;                       // r x N in original column order, A ~ Q R
    index_t swaps = 0;
};

namespace detail {

template <typename T>
QRFactorization<T> qr_in_order(const Matrix<T>& A, const std::vector<index_t>& order, index_t r) {
    QROptions opt;
    opt.pivoting = false;
    opt.max_steps = r;
    return qr_factorize(A.select_cols(order), opt);
}

}  // namespace detail

//
// Strong rank-revealing column selection: column-pivoted QR to start, then
// repeatedly exchange the selected/unselected pair with the largest volume
// growth while that growth exceeds rho.  Growth of |det R11| for exchanging
// selected i with unselected j is
//     sqrt( |(R11^{-1} R12)_{ij}|^2 + (||R22(:,j)|| * ||R11^{-1}(i,:)||)^2 ).
// On exit ||A - Q R||_2 <= sqrt(1 + rho^2 r (N - r)) * sigma_{r+1}(A).
//
template <typename T>
RrqrResult<T> rrqr_select(const Matrix<T>& A, index_t r, const RrqrParams& params = RrqrParams{}) {
    using R = real_t<T>;
    const index_t m = A.rows();
    const index_t n = A.cols();
    require(r >= 1 && r <= std::min(m, n), errc::invalid_argument, "rrqr_select: need 1 <= r <= min(M, N)");

    QROptions init;
    init.max_steps = r;
    std::vector<index_t> order = qr_factorize(A, init).perm;

    RrqrResult<T> out;
    const R rho = R(params.rho);
    const index_t max_swaps = 64 * (n + 1) * (r + 1);
    while (r < n && out.swaps < max_swaps) {
        const QRFactorization<T> qr = detail::qr_in_order(A, order, r);
        const Matrix<T>& F = qr.factored;
        bool singular = false;
        for (index_t i = 0; i < r; ++i)
            singular = singular || F(i, i) == T(0);
        if (singular)
            break;

        const Matrix<T> R11inv = upper_triangular_solve(F, r, Matrix<T>::identity(r));
        const Matrix<T> X = upper_triangular_solve(F, r, F.block(0, r, r, n - r));
        std::vector<R> row_norm(r), gamma(n - r);
        for (index_t i = 0; i < r; ++i) {
            R s(0);
            for (index_t c = 0; c < r; ++c)
                s += abs2(R11inv(i, c));
            row_norm[i] = sqrt_of(s);
        }
        for (index_t j = 0; j < n - r; ++j)
            gamma[j] = r < m ? column_norm<T>(std::span<const T>(F.col(r + j)).subspan(r)) : R(0);

        R best(0);
        index_t bi = 0, bj = 0;
        for (index_t j = 0; j < n - r; ++j)
            for (index_t i = 0; i < r; ++i) {
                const R g = gamma[j] * row_norm[i];
                const R growth = sqrt_of(abs2(X(i, j)) + g * g);
                if (growth > best) {
                    best = growth;
                    bi = i;
                    bj = j;
                }
            }
        if (!(best > rho))
            break;
        std::swap(order[bi], order[r + bj]);
        ++out.swaps;
    }

    const QRFactorization<T> qr = detail::qr_in_order(A, order, r);
    out.col_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(r));
    out.Q = qr.thin_q(r);
    out.R = Matrix<T>(r, n);
    for (index_t c = 0; c < n; ++c)
        for (index_t i = 0; i < r && i <= c; ++i)
            out.R(i, order[c]) = qr.factored(i, c);
    return out;
}

}  // namespace cssel

#endif
