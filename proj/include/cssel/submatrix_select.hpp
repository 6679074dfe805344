#ifndef CSSEL_SUBMATRIX_SELECT_HPP
#define CSSEL_SUBMATRIX_SELECT_HPP

#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "bounds.hpp"
#include "kernels.hpp"

namespace cssel {

template <typename T>
struct SubmatrixSelection {
    using R = real_t<T>;

    std::vector<index_t> col_indices;  // selection order
    R inv_fro = R(0);                  // ||Vhat^{-1}||_F
    R inv_spec = R(0);                 // ||Vhat^{-1}||_2
    std::vector<double> trace;         // ||Vhat^+||_F^2 after each step
    double orthonormality_defect = 0.0;
    bool near_orthonormal = false;     // defect in (1e-10, 1e-8]: accepted, bounds need slack
};

/// Accumulators after step k: l_j = ||Vhat_1^{-1} V_{1,j}||^2 and the
/// projected row d_j = V_{k:r,k}^* V_{k:r,j} / ||V_{k:r,k}||.
template <typename T>
struct ScoreState {
    std::vector<real_t<T>> l;
    std::vector<T> d;
};

template <typename T>
struct SubmatrixStepView {
    index_t k;
    const Matrix<T>& V;                 // rotated rows, working column order
    const ScoreState<T>& state;         // working column order
    const Matrix<T>& coef;              // rows 0..k hold Vhat_1^{-1} V_1
    const std::vector<index_t>& perm;   // working column c is original column perm[c]
};

template <typename T>
struct SubmatrixOptions {
    std::function<void(const SubmatrixStepView<T>&)> on_step;
    index_t refresh_every = 64;  // rebuild Vhat_1^{-1} V_1 from the triangle this often
};

/// Largest admissible induction value ||Vhat^+||_F^2 after k of r columns out of N.
inline double induction_bound(index_t k, index_t N, index_t r) {
    const double kk = static_cast<double>(k);
    return kk * (static_cast<double>(N) - kk + 1.0) / (static_cast<double>(r) - kk + 1.0);
}

namespace detail {

template <typename T>
real_t<T> check_orthonormal_rows(const Matrix<T>& V, bool& near) {
    using R = real_t<T>;
    const R defect = row_orthonormality_defect(V);
    if (defect > scaled_tol<R>(1e-8))
        fail(errc::non_orthonormal, "V V^* differs from I by " + std::to_string(static_cast<double>(defect)));
    near = defect > scaled_tol<R>(1e-10);
    return defect;
}

template <typename T>
std::vector<real_t<T>> submatrix_singular_values(const Matrix<T>& V, const std::vector<index_t>& idx) {
    require(idx.size() == V.rows(), errc::dimension_mismatch, "need exactly r column indices");
    const auto s = singular_values(V.select_cols(idx));
    if (s.front() == real_t<T>(0) || s.back() <= scaled_tol<real_t<T>>(1e-13) * s.front())
        fail(errc::singular_submatrix, "selected r x r submatrix is numerically singular");
    return s;
}

}  // namespace detail

//
// Greedy r x r submatrix of orthonormal rows V (r x N) with
//   ||Vhat^{-1}||_F^2 <= r (N - r + 1),  ||Vhat^{-1}||_2^2 <= 1 + r (N - r).
// Step k adds the column minimising the growth of ||Vhat^+||_F^2,
//   (1 + ||Vhat_1^{-1} V_{1,j}||^2) / ||V_{k:r,j}||^2,
// keeps Vhat_1^{-1} V_1 current with a rank-1 update, and triangularises V
// with a Householder reflection.  O(N r^2).
//
template <typename T>
SubmatrixSelection<T> select_submatrix(const Matrix<T>& V, const SubmatrixOptions<T>& opt = {}) {
    using R = real_t<T>;
    require(!V.empty(), errc::invalid_argument, "select_submatrix: empty V");
    const index_t r = V.rows();
    const index_t n = V.cols();
    require(n >= r, errc::invalid_argument, "select_submatrix: need N >= r");

    SubmatrixSelection<T> out;
    bool near = false;
    out.orthonormality_defect = static_cast<double>(detail::check_orthonormal_rows(V, near));
    out.near_orthonormal = near;

    Matrix<T> Vw = V;
    Matrix<T> coef(r, n);
    ScoreState<T> st{std::vector<R>(n, R(0)), std::vector<T>(n, T(0))};
    std::vector<index_t> perm(n);
    std::iota(perm.begin(), perm.end(), index_t(0));

    const R guard = scaled_tol<R>(1e-14);
    const R tie = scaled_tol<R>(1e-12);
    std::vector<R> score(n);
    std::vector<char> ok(n);
    std::vector<T> wc(r);
    R frob2(0);

    for (index_t k = 0; k < r; ++k) {
        std::fill(ok.begin(), ok.end(), 0);
        for (index_t j = k; j < n; ++j) {
            const R den = column_norm<T>(std::span<const T>(Vw.col(j)).subspan(k));
            if (den < guard)
                continue;
            ok[j] = 1;
            score[j] = (R(1) + st.l[j]) / (den * den);
        }
        const index_t jstar = argmin_with_ties(score, ok, k, tie);
        if (jstar == n)
            fail(errc::no_admissible_column, "all remaining ||V_{k:r,j}|| vanish at step " + std::to_string(k));
        frob2 += score[jstar];
        out.trace.push_back(static_cast<double>(frob2));

        Vw.swap_cols(k, jstar);
        coef.swap_cols(k, jstar);
        std::swap(st.l[k], st.l[jstar]);
        std::swap(perm[k], perm[jstar]);

        // g_j = t^* V_{k:r,j} / ||t||^2 with t the pivot tail; d_j = g_j ||t||
        auto t = std::span<const T>(Vw.col(k)).subspan(k);
        const R tn = column_norm<T>(t);
        for (index_t i = 0; i < k; ++i)
            wc[i] = coef(i, k);
        for (index_t j = 0; j < n; ++j) {
            auto y = std::span<const T>(Vw.col(j)).subspan(k);
            T s(0);
            for (index_t i = 0; i < t.size(); ++i)
                s += conjugate(t[i]) * y[i];
            st.d[j] = s / T(tn);
            const T g = s / T(tn * tn);
            R l(0);
            for (index_t i = 0; i < k; ++i) {
                coef(i, j) -= wc[i] * g;
                l += abs2(coef(i, j));
            }
            coef(k, j) = g;
            st.l[j] = l + abs2(g);
        }

        const Reflector<T> H = householder_from_column(Vw, k);
        apply_reflector_rows(H, Vw);
        for (index_t i = k + 1; i < r; ++i)
            Vw(i, k) = T(0);

        if (opt.refresh_every > 0 && (k + 1) % opt.refresh_every == 0 && k + 1 < r) {
            const Matrix<T> fresh = upper_triangular_solve(Vw, k + 1, Vw.block(0, 0, k + 1, n));
            for (index_t j = 0; j < n; ++j) {
                R l(0);
                for (index_t i = 0; i <= k; ++i) {
                    coef(i, j) = fresh(i, j);
                    l += abs2(fresh(i, j));
                }
                st.l[j] = l;
            }
        }
        if (opt.on_step)
            opt.on_step(SubmatrixStepView<T>{k, Vw, st, coef, perm});
    }

    out.col_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(r));
    const auto s = detail::submatrix_singular_values(V, out.col_indices);
    R inv2(0);
    for (const R& x : s)
        inv2 += R(1) / (x * x);
    out.inv_fro = sqrt_of(inv2);
    out.inv_spec = R(1) / s.back();
    return out;
}

/// ||[Vhat V_j]^+||_F^2 for Vhat = [Vhat_1; 0] (r x k, Vhat_1 square) via
///   ||Vhat_1^{-1}||_F^2 + (||Vhat_1^{-1} V_{1,j}||^2 + 1) / ||V_{2,j}||^2.
/// An empty Vhat is the k = 0 case.
template <typename T>
real_t<T> pseudoinverse_extension_check(const Matrix<T>& Vhat, std::span<const T> Vj) {
    using R = real_t<T>;
    const index_t k = Vhat.empty() ? 0 : Vhat.cols();
    const index_t r = Vj.size();
    require(k < r, errc::invalid_argument, "extension: Vhat must have fewer columns than rows");
    require(Vhat.empty() || Vhat.rows() == r, errc::dimension_mismatch, "extension: Vhat rows != len(Vj)");

    const R tail = column_norm<T>(Vj.subspan(k));
    if (tail < scaled_tol<R>(1e-14))
        fail(errc::zero_tail, "||V_{2,j}|| vanishes");
    if (k == 0)
        return R(1) / (tail * tail);

    const R scale = max_abs(Vhat);
    for (index_t j = 0; j < k; ++j)
        for (index_t i = k; i < r; ++i)
            require(magnitude(Vhat(i, j)) <= scaled_tol<R>(1e-12) * scale, errc::invalid_argument,
                    "extension: Vhat is not of the form [Vhat_1; 0]");

    const Matrix<T> V1 = Vhat.block(0, 0, k, k);
    const Matrix<T> inv = lu_solve(V1, Matrix<T>::identity(k));
    Matrix<T> head(k, 1);
    for (index_t i = 0; i < k; ++i)
        head(i, 0) = Vj[i];
    const Matrix<T> w = multiply(inv, head);
    const R fi = fro_norm(inv);
    const R wn = fro_norm(w);
    return fi * fi + (wn * wn + R(1)) / (tail * tail);
}

/// Achieved ||Vhat^{-1}||_2 and ||Vhat^{-1}||_F for a column subset, against the
/// maximum-volume guarantees (squared forms).
template <typename T>
BoundReport verify_maxvol_bounds(const Matrix<T>& V, const std::vector<index_t>& col_indices,
                                 double rel_slack = 1e-9) {
    const auto s = detail::submatrix_singular_values(V, col_indices);
    double inv2 = 0.0;
    for (const auto& x : s)
        inv2 += 1.0 / (static_cast<double>(x) * static_cast<double>(x));
    const double spec = 1.0 / static_cast<double>(s.back());
    const double r = static_cast<double>(V.rows());
    const double n = static_cast<double>(V.cols());
    BoundReport rep;
    rep.add("inv_fro2_le_r_n_r_1", inv2, r * (n - r + 1.0), rel_slack);
    rep.add("inv_spec2_le_1_r_n_r", spec * spec, 1.0 + r * (n - r), rel_slack);
    return rep;
}

}  // namespace cssel

#endif
