#ifndef CSSEL_COLUMN_SELECT_HPP
#define CSSEL_COLUMN_SELECT_HPP

#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "bounds.hpp"
#include "kernels.hpp"
#include "surrogate.hpp"

namespace cssel {

/// r columns of A (selection order) with interpolation weights W = Vhat^{-1} V.
template <typename T>
struct ColumnSelection {
    using R = real_t<T>;

    std::vector<index_t> indices;
    Matrix<T> W;  // r x N, original column order; empty for the pivoted-QR baseline
    R err_cw_fro = R(0);
    R err_proj_fro = R(0);
    R err_cw_spec = R(0);
    R err_proj_spec = R(0);

    R orth_residual_fro = R(0);          // ||A - A V^* V||_F (or of (A - Z)(I - V^* V))
    std::optional<R> surrogate_err_fro;  // ||A - Z||_F, when Z is known
    std::optional<R> surrogate_err_spec;
};

struct SelectionStep {
    index_t column = 0;        // original column id chosen at this step
    double score = 0.0;        // ||Ã_j|| / ||V_{k:r,j}||
    double residual_fro = 0.0; // ||Ã^{(k)}||_F after the update
};

struct SelectionTrace {
    double initial_residual_fro = 0.0;  // ||Ã||_F
    std::vector<SelectionStep> steps;
};

template <typename T>
struct ColumnSelectionResult {
    ColumnSelection<T> selection;
    SelectionTrace trace;
};

/// Working state visible to a step observer after step k completes.
template <typename T>
struct ColumnStepView {
    index_t k;
    const Matrix<T>& residual;          // Ã^{(k)}, columns in working order
    const Matrix<T>& V;                 // rotated V, columns in working order
    const std::vector<index_t>& perm;   // working column c is original column perm[c]
};

template <typename T>
struct ColumnSelectOptions {
    bool compute_errors = true;
    std::function<void(const ColumnStepView<T>&)> on_step;
};

/// Ã = A - A V^* V.  V must have orthonormal rows.
template <typename T>
Matrix<T> residual_orthogonalize(const Matrix<T>& A, const Matrix<T>& V) {
    require(!V.empty(), errc::invalid_argument, "residual_orthogonalize: V has no rows");
    require(A.cols() == V.cols(), errc::dimension_mismatch,
            "residual_orthogonalize: A and V column counts differ");
    require(row_orthonormality_defect(V) <= scaled_tol<real_t<T>>(1e-10), errc::non_orthonormal,
            "V rows are not orthonormal");
    return A - multiply(multiply_adjoint(A, V), V);
}

namespace detail {

template <typename T>
index_t pick_pivot_cached(const std::vector<real_t<T>>& colnorm2, const Matrix<T>& V, index_t k,
                          real_t<T>* score_out = nullptr) {
    using R = real_t<T>;
    const index_t n = V.cols();
    const R guard = scaled_tol<R>(1e-14);
    std::vector<R> score(n, R(0));
    std::vector<char> ok(n, 0);
    for (index_t j = k; j < n; ++j) {
        const R den = column_norm<T>(std::span<const T>(V.col(j)).subspan(k));
        if (den < guard)
            continue;
        ok[j] = 1;
        score[j] = sqrt_of(colnorm2[j]) / den;
    }
    const index_t j = argmin_with_ties(score, ok, k, scaled_tol<R>(1e-12));
    if (j == n)
        fail(errc::no_admissible_column,
             "all remaining ||V_{k:r,j}|| vanish at step " + std::to_string(k));
    if (score_out)
        *score_out = score[j];
    return j;
}

// Rank-1 update Ã <- Ã - Ã_{:,k} V_{k,:} / V_kk; refreshes colnorm2.
template <typename T>
void eliminate(Matrix<T>& Ares, const Matrix<T>& V, index_t k, std::vector<real_t<T>>& colnorm2) {
    using R = real_t<T>;
    const T piv = V(k, k);
    if (magnitude(piv) < scaled_tol<R>(1e-14))
        fail(errc::pivot_underflow, "|V_kk| below 1e-14 at step " + std::to_string(k));
    const index_t m = Ares.rows();
    auto ck = Ares.col(k);
    for (index_t j = k + 1; j < Ares.cols(); ++j) {
        const T coef = V(k, j) / piv;
        auto cj = Ares.col(j);
        if (coef != T(0))
            for (index_t i = 0; i < m; ++i)
                cj[i] -= coef * ck[i];
        R s(0);
        for (index_t i = 0; i < m; ++i)
            s += abs2(cj[i]);
        colnorm2[j] = s;
    }
    std::fill(ck.begin(), ck.end(), T(0));
    colnorm2[k] = R(0);
}

}  // namespace detail

/// argmin_{j >= k} ||Ã_{:,j}|| / ||V_{k:r,j}||, ties to the smallest j; columns
/// with ||V_{k:r,j}|| < 1e-14 are not admissible.
template <typename T>
index_t pick_pivot(const Matrix<T>& Ares, const Matrix<T>& V, index_t k) {
    require(Ares.cols() == V.cols(), errc::dimension_mismatch, "pick_pivot: column counts differ");
    require(k < V.rows(), errc::invalid_argument, "pick_pivot: k out of range");
    std::vector<real_t<T>> colnorm2(Ares.cols(), real_t<T>(0));
    for (index_t j = k; j < Ares.cols(); ++j)
        colnorm2[j] = abs2(column_norm<T>(Ares.col(j)));
    return detail::pick_pivot_cached(colnorm2, V, k);
}

/// In-place Ã <- Ã - (1/V_kk) Ã_{:,k} V_{k,:}; returns the new ||Ã||_F.
/// Expects V already triangularised through column k.
template <typename T>
real_t<T> eliminate_step(Matrix<T>& Ares, const Matrix<T>& V, index_t k) {
    require(Ares.cols() == V.cols(), errc::dimension_mismatch, "eliminate_step: column counts differ");
    require(k < V.rows(), errc::invalid_argument, "eliminate_step: k out of range");
    std::vector<real_t<T>> colnorm2(Ares.cols(), real_t<T>(0));
    detail::eliminate(Ares, V, k, colnorm2);
    return fro_norm(Ares);
}

//
// Greedy column selection driven by the right singular rows of a rank-r
// surrogate.  Each step takes the column that adds the least Frobenius
// error, triangularises V with a Householder reflection and removes the
// chosen column from the residual.  Cost O(MNr) beyond the surrogate's SVD.
//
template <typename T>
ColumnSelectionResult<T> select_columns(const Matrix<T>& A, const Surrogate<T>& surrogate, index_t r,
                                        const ColumnSelectOptions<T>& opt = {}) {
    using R = real_t<T>;
    const index_t m = A.rows();
    const index_t n = A.cols();
    require(r >= 1 && r <= std::min(m, n), errc::invalid_argument,
            "select_columns: need 1 <= r <= min(M, N)");

    const ResolvedSurrogate<T> sur = surrogate.resolve(r);
    require(sur.V.cols() == n, errc::dimension_mismatch, "surrogate column count differs from A");
    if (sur.Z)
        require(sur.Z->rows() == m && sur.Z->cols() == n, errc::dimension_mismatch,
                "surrogate shape differs from A");

    // Z V^* V = Z, so (A - Z)(I - V^* V) = A - A V^* V
    Matrix<T> Ares = residual_orthogonalize(sur.Z ? A - *sur.Z : A, sur.V);
    Matrix<T> Vw = sur.V;
    std::vector<index_t> perm(n);
    std::iota(perm.begin(), perm.end(), index_t(0));

    std::vector<R> colnorm2(n);
    R total(0);
    for (index_t j = 0; j < n; ++j) {
        colnorm2[j] = abs2(column_norm<T>(Ares.col(j)));
        total += colnorm2[j];
    }

    ColumnSelectionResult<T> out;
    out.trace.initial_residual_fro = static_cast<double>(sqrt_of(total));

    for (index_t k = 0; k < r; ++k) {
        R score(0);
        const index_t j = detail::pick_pivot_cached(colnorm2, Vw, k, &score);
        Ares.swap_cols(k, j);
        Vw.swap_cols(k, j);
        std::swap(perm[k], perm[j]);
        std::swap(colnorm2[k], colnorm2[j]);

        const Reflector<T> H = householder_from_column(Vw, k);
        apply_reflector_rows(H, Vw);
        for (index_t i = k + 1; i < r; ++i)
            Vw(i, k) = T(0);

        detail::eliminate(Ares, Vw, k, colnorm2);
        R fro2(0);
        for (const R& c : colnorm2)
            fro2 += c;
        out.trace.steps.push_back(
            {perm[k], static_cast<double>(score), static_cast<double>(sqrt_of(fro2))});
        if (opt.on_step)
            opt.on_step(ColumnStepView<T>{k, Ares, Vw, perm});
    }

    ColumnSelection<T>& sel = out.selection;
    sel.indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(r));

    const Matrix<T> Wp = upper_triangular_solve(Vw, r, Vw.block(0, 0, r, n));
    sel.W = Matrix<T>(r, n);
    for (index_t c = 0; c < n; ++c)
        std::copy_n(Wp.col(c).begin(), r, sel.W.col(perm[c]).begin());

    sel.orth_residual_fro = R(out.trace.initial_residual_fro);
    if (sur.Z) {
        const Matrix<T> D = A - *sur.Z;
        sel.surrogate_err_fro = fro_norm(D);
        if (opt.compute_errors)
            sel.surrogate_err_spec = spectral_norm(D);
    }
    if (opt.compute_errors) {
        const Matrix<T> C = A.select_cols(sel.indices);
        const Matrix<T> Ecw = A - multiply(C, sel.W);
        const Matrix<T> Ep = orthogonal_projector_residual(A, C);
        sel.err_cw_fro = fro_norm(Ecw);
        sel.err_cw_spec = spectral_norm(Ecw);
        sel.err_proj_fro = fro_norm(Ep);
        sel.err_proj_spec = spectral_norm(Ep);
    }
    return out;
}

/// Classic column-pivoted QR: at each step the column with the largest residual
/// norm (ties to the smallest index).  W is left empty; the cw errors equal the
/// projector errors since W = C^+ A is the natural weight.
template <typename T>
ColumnSelection<T> greedy_pivoted_qr_baseline(const Matrix<T>& A, index_t r) {
    require(r >= 1 && r <= std::min(A.rows(), A.cols()), errc::invalid_argument,
            "greedy_pivoted_qr_baseline: need 1 <= r <= min(M, N)");
    QROptions opt;
    opt.max_steps = r;
    const QRFactorization<T> qr = qr_factorize(A, opt);
    ColumnSelection<T> sel;
    sel.indices.assign(qr.perm.begin(), qr.perm.begin() + static_cast<std::ptrdiff_t>(r));
    const Matrix<T> Ep = orthogonal_projector_residual(A, A.select_cols(sel.indices));
    sel.err_proj_fro = sel.err_cw_fro = fro_norm(Ep);
    sel.err_proj_spec = sel.err_cw_spec = spectral_norm(Ep);
    return sel;
}

/// Inequalities of the column-selection guarantee for a finished selection.
/// Needs the surrogate errors; uses ||Ã||_F in their place for bare-V surrogates.
template <typename T>
BoundReport column_bounds(const ColumnSelection<T>& sel, index_t M, index_t N, double rel_slack = 1e-9,
                          double abs_slack = 0.0) {
    const double r = static_cast<double>(sel.indices.size());
    const double mn = static_cast<double>(std::min(M, N));
    const double cw_f = static_cast<double>(sel.err_cw_fro);
    const double cw_2 = static_cast<double>(sel.err_cw_spec);
    BoundReport rep;
    rep.add("proj_le_cw_fro", static_cast<double>(sel.err_proj_fro), cw_f, rel_slack, abs_slack);
    rep.add("proj_le_cw_spec", static_cast<double>(sel.err_proj_spec), cw_2, rel_slack, abs_slack);
    if (sel.surrogate_err_fro) {
        const double zf = static_cast<double>(*sel.surrogate_err_fro);
        const double z2 = sel.surrogate_err_spec ? static_cast<double>(*sel.surrogate_err_spec) : zf;
        rep.add("cw_fro_le_sqrt_r1_z_fro", cw_f, std::sqrt(r + 1.0) * zf, rel_slack, abs_slack);
        rep.add("cw_spec2_le_z_spec2_plus_r_z_fro2", cw_2 * cw_2, z2 * z2 + r * zf * zf, rel_slack,
                abs_slack * abs_slack);
        rep.add("cw_spec2_le_1_plus_r_mn_r_z_spec2", cw_2 * cw_2, (1.0 + r * (mn - r)) * z2 * z2,
                rel_slack, abs_slack * abs_slack);
    } else {
        const double tf = static_cast<double>(sel.orth_residual_fro);
        rep.add("cw_fro_le_sqrt_r1_orth_residual_fro", cw_f, std::sqrt(r + 1.0) * tf, rel_slack, abs_slack);
    }
    return rep;
}

}  // namespace cssel

#endif
