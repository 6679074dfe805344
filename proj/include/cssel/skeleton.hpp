#ifndef CSSEL_SKELETON_HPP
#define CSSEL_SKELETON_HPP

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "bounds.hpp"
#include "column_select.hpp"
#include "rrqr.hpp"

namespace cssel {

enum class SkeletonMode {
    projective,  // C C^+ A R^+ R
    cross,       // C Ahat^{-1} R
};

constexpr std::string_view to_string(SkeletonMode m) {
    return m == SkeletonMode::projective ? "projective" : "cross";
}

template <typename T>
struct SkeletonSelection {
    using R = real_t<T>;

    std::vector<index_t> row_indices;
    std::vector<index_t> col_indices;
    SkeletonMode mode = SkeletonMode::cross;
    R err_fro = R(0);
    R err_spec = R(0);

    // Projective mode: errors of C C^+ A and A R^+ R on their own.
    std::optional<R> col_err_fro, col_err_spec, row_err_fro, row_err_spec;
    // Cross mode via a row surrogate: ||C Ahat^{-1} R - C Vhat_Phi^{-1} V_Phi||_F.
    std::optional<R> identity_gap;
    // ||A - Z|| for surrogate-driven selections.
    std::optional<R> surrogate_err_fro, surrogate_err_spec;
    // rho used by the rank-revealing route.
    std::optional<double> rho;
};

namespace detail {

template <typename T>
void require_indices(const std::vector<index_t>& idx, index_t bound, const char* what) {
    require(!idx.empty(), errc::invalid_argument, std::string(what) + ": empty index set");
    std::vector<char> seen(bound, 0);
    for (index_t i : idx) {
        require(i < bound, errc::invalid_argument, std::string(what) + ": index out of range");
        require(!seen[i], errc::invalid_argument, std::string(what) + ": repeated index");
        seen[i] = 1;
    }
}

// B - B R^+ R: residual of projecting the rows of B onto the row span of Rrows.
template <typename T>
Matrix<T> row_projector_residual(const Matrix<T>& B, const Matrix<T>& Rrows) {
    return orthogonal_projector_residual(B.transpose(), Rrows.transpose()).transpose();
}

}  // namespace detail

/// Ahat^{-1} R for the intersection Ahat = A(rows, cols); fails with
/// singular_ahat when sigma_min(Ahat) <= 1e-13 sigma_max(Ahat).
template <typename T>
Matrix<T> cross_core_times_rows(const Matrix<T>& A, const std::vector<index_t>& rows,
                                const std::vector<index_t>& cols) {
    const Matrix<T> Rrows = A.select_rows(rows);
    const Matrix<T> Ahat = Rrows.select_cols(cols);
    if (inverse_condition(Ahat) <= scaled_tol<real_t<T>>(1e-13))
        fail(errc::singular_ahat, "intersection submatrix is numerically singular");
    return lu_solve(Ahat, Rrows);
}

/// A minus the skeleton reconstruction for the given indices and mode.
template <typename T>
Matrix<T> skeleton_residual(const Matrix<T>& A, const std::vector<index_t>& rows,
                            const std::vector<index_t>& cols, SkeletonMode mode) {
    require(rows.size() == cols.size(), errc::dimension_mismatch,
            "skeleton: row and column index counts differ");
    detail::require_indices<T>(rows, A.rows(), "skeleton rows");
    detail::require_indices<T>(cols, A.cols(), "skeleton cols");
    const Matrix<T> C = A.select_cols(cols);
    if (mode == SkeletonMode::cross)
        return A - multiply(C, cross_core_times_rows(A, rows, cols));
    const Matrix<T> Y = orthogonal_projector_residual(A, C);  // A - C C^+ A
    return Y + detail::row_projector_residual(A - Y, A.select_rows(rows));
}

/// Rows and columns from two independent column selections (on A^T and A);
/// ||A - C C^+ A R^+ R||_F <= sqrt(2r + 2) ||A - Z||_F.
template <typename T>
SkeletonSelection<T> select_skeleton_projective(const Matrix<T>& A, const Surrogate<T>& surrogate,
                                                index_t r) {
    ColumnSelectOptions<T> opt;
    opt.compute_errors = false;
    const auto cols = select_columns(A, surrogate, r, opt);
    const auto rows = select_columns(A.transpose(), surrogate.transposed(), r, opt);

    SkeletonSelection<T> sel;
    sel.mode = SkeletonMode::projective;
    sel.col_indices = cols.selection.indices;
    sel.row_indices = rows.selection.indices;
    sel.surrogate_err_fro = cols.selection.surrogate_err_fro;
    if (sel.surrogate_err_fro)
        sel.surrogate_err_spec = spectral_norm(A - *surrogate.resolve(r).Z);

    const Matrix<T> E = skeleton_residual(A, sel.row_indices, sel.col_indices, SkeletonMode::projective);
    sel.err_fro = fro_norm(E);
    sel.err_spec = spectral_norm(E);
    const Matrix<T> Ec = orthogonal_projector_residual(A, A.select_cols(sel.col_indices));
    const Matrix<T> Er = detail::row_projector_residual(A, A.select_rows(sel.row_indices));
    sel.col_err_fro = fro_norm(Ec);
    sel.col_err_spec = spectral_norm(Ec);
    sel.row_err_fro = fro_norm(Er);
    sel.row_err_spec = spectral_norm(Er);
    return sel;
}

/// Row interpolant Phi = U Uhat^{-1} R with R = A(rows, :) and Uhat = U(rows, :).
template <typename T>
Matrix<T> build_row_surrogate_phi(const Matrix<T>& A, const Matrix<T>& U, const std::vector<index_t>& rows) {
    require(U.rows() == A.rows(), errc::dimension_mismatch, "phi: U and A row counts differ");
    require(rows.size() == U.cols(), errc::dimension_mismatch, "phi: need one row per column of U");
    detail::require_indices<T>(rows, A.rows(), "phi rows");
    const Matrix<T> Uhat = U.select_rows(rows);
    if (inverse_condition(Uhat) <= scaled_tol<real_t<T>>(1e-13))
        fail(errc::singular_uhat, "U restricted to the selected rows is numerically singular");
    // (U Uhat^{-1})^T = Uhat^{-T} U^T
    const Matrix<T> interp = lu_solve(Uhat.transpose(), U.transpose()).transpose();
    return multiply(interp, A.select_rows(rows));
}

/// Rows from a column selection on A^T, then columns from the right singular
/// rows of the row interpolant Phi; ||A - C Ahat^{-1} R||_F <= (r + 1) ||A - Z||_F.
template <typename T>
SkeletonSelection<T> select_skeleton_cross(const Matrix<T>& A, const Surrogate<T>& surrogate, index_t r) {
    const ResolvedSurrogate<T> sur = surrogate.resolve(r);
    require(sur.has_left(), errc::invalid_argument, "cross skeleton needs left singular vectors of Z");
    ColumnSelectOptions<T> opt;
    opt.compute_errors = false;

    SkeletonSelection<T> sel;
    sel.mode = SkeletonMode::cross;
    sel.row_indices = select_columns(A.transpose(), surrogate.transposed(), r, opt).selection.indices;

    const Matrix<T> Phi = build_row_surrogate_phi(A, sur.U, sel.row_indices);
    const auto cols = select_columns(A, Surrogate<T>::dense(Phi), r, opt);
    sel.col_indices = cols.selection.indices;

    const Matrix<T> C = A.select_cols(sel.col_indices);
    const Matrix<T> E = A - multiply(C, cross_core_times_rows(A, sel.row_indices, sel.col_indices));
    sel.err_fro = fro_norm(E);
    sel.err_spec = spectral_norm(E);
    sel.identity_gap = fro_norm(A - multiply(C, cols.selection.W) - E);
    if (sur.Z) {
        const Matrix<T> D = A - *sur.Z;
        sel.surrogate_err_fro = fro_norm(D);
        sel.surrogate_err_spec = spectral_norm(D);
    }
    return sel;
}

/// Spectral-norm skeleton without a surrogate: strong RRQR picks the rows on
/// the short side, the column selection uses the resulting orthonormal rows.
template <typename T>
SkeletonSelection<T> select_skeleton_spectral(const Matrix<T>& A, index_t r,
                                              const RrqrParams& params = RrqrParams{}) {
    require(r >= 1 && r <= std::min(A.rows(), A.cols()), errc::invalid_argument,
            "select_skeleton_spectral: need 1 <= r <= min(M, N)");
    SkeletonSelection<T> sel;
    sel.mode = SkeletonMode::cross;
    sel.rho = params.rho;
    ColumnSelectOptions<T> opt;
    opt.compute_errors = false;

    if (A.rows() <= A.cols()) {
        // rows of A are columns of A^T; Phi^T = Q R, so Q^T spans Phi's row space
        const RrqrResult<T> rr = rrqr_select(A.transpose(), r, params);
        sel.row_indices = rr.col_indices;
        sel.col_indices =
            select_columns(A, Surrogate<T>::right_rows(rr.Q.transpose()), r, opt).selection.indices;
    } else {
        const RrqrResult<T> rr = rrqr_select(A, r, params);
        sel.col_indices = rr.col_indices;
        sel.row_indices = select_columns(A.transpose(), Surrogate<T>::right_rows(rr.Q.transpose()), r, opt)
                              .selection.indices;
    }
    const Matrix<T> E = skeleton_residual(A, sel.row_indices, sel.col_indices, SkeletonMode::cross);
    sel.err_fro = fro_norm(E);
    sel.err_spec = spectral_norm(E);
    return sel;
}

/// Recomputes the residual norms of `sel` and checks every applicable guarantee:
/// surrogate bounds when ||A - Z|| is recorded, the rank-revealing spectral bound
/// when rho is recorded, and the projective error split.
template <typename T>
BoundReport evaluate_skeleton(const Matrix<T>& A, const SkeletonSelection<T>& sel, double rel_slack = 1e-9,
                              double abs_slack = -1.0) {
    const Matrix<T> E = skeleton_residual(A, sel.row_indices, sel.col_indices, sel.mode);
    const double ef = static_cast<double>(fro_norm(E));
    const double e2 = static_cast<double>(spectral_norm(E));
    const double r = static_cast<double>(sel.row_indices.size());
    const double mn = static_cast<double>(std::min(A.rows(), A.cols()));
    if (abs_slack < 0.0)
        abs_slack = static_cast<double>(roundoff_scale(A));

    BoundReport rep;
    if (sel.mode == SkeletonMode::projective) {
        const Matrix<T> Ec = orthogonal_projector_residual(A, A.select_cols(sel.col_indices));
        const Matrix<T> Er = detail::row_projector_residual(A, A.select_rows(sel.row_indices));
        const double cf = static_cast<double>(fro_norm(Ec));
        const double rf = static_cast<double>(fro_norm(Er));
        rep.add("proj_fro2_le_col_fro2_plus_row_fro2", ef * ef, cf * cf + rf * rf, rel_slack,
                abs_slack * abs_slack);
    }
    if (sel.surrogate_err_fro) {
        const double zf = static_cast<double>(*sel.surrogate_err_fro);
        const double z2 = sel.surrogate_err_spec ? static_cast<double>(*sel.surrogate_err_spec) : zf;
        if (sel.mode == SkeletonMode::projective) {
            rep.add("proj_fro_le_sqrt_2r2_z_fro", ef, std::sqrt(2.0 * r + 2.0) * zf, rel_slack, abs_slack);
            rep.add("proj_spec_le_sqrt_2_2r_mn_r_z_spec", e2, std::sqrt(2.0 + 2.0 * r * (mn - r)) * z2,
                    rel_slack, abs_slack);
        } else {
            rep.add("cross_fro_le_r1_z_fro", ef, (r + 1.0) * zf, rel_slack, abs_slack);
            rep.add("cross_spec_le_sqrt_1_r_r2_mn_r_z_spec", e2,
                    std::sqrt(1.0 + r * (r + 2.0) * (mn - r)) * z2, rel_slack, abs_slack);
        }
    }
    if (sel.rho && sel.mode == SkeletonMode::cross) {
        const auto sv = singular_values(A);
        const index_t ri = sel.row_indices.size();
        const double next = ri < sv.size() ? static_cast<double>(sv[ri]) : 0.0;
        const double rho2 = *sel.rho * *sel.rho;
        rep.add("cross_spec_le_sqrt_1_r_rho2r_rho2_1_mn_r_sigma_r1", e2,
                std::sqrt(1.0 + r * (rho2 * r + rho2 + 1.0) * (mn - r)) * next, rel_slack, abs_slack);
    }
    return rep;
}

}  // namespace cssel

#endif
