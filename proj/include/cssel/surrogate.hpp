#ifndef CSSEL_SURROGATE_HPP
#define CSSEL_SURROGATE_HPP

#include <optional>
#include <string>
#include <utility>

#include "kernels.hpp"
#include "svd.hpp"

namespace cssel {

/// Rank-r factors consumed by the selection drivers.
template <typename T>
struct ResolvedSurrogate {
    Matrix<T> V;                    // r x N, orthonormal rows
    Matrix<T> U;                    // M x r, orthonormal columns (empty for bare right rows)
    std::optional<Matrix<T>> Z;     // the rank-r matrix itself, when known

    bool has_left() const noexcept { return !U.empty(); }
};

//
// A rank-r approximation Z of A, supplied as an explicit matrix, as SVD
// factors, or as bare orthonormal right rows V (the only part column
// selection needs).
//
template <typename T>
class Surrogate {
public:
    enum class kind { dense, factored, right_rows };

    static Surrogate dense(Matrix<T> Z) {
        Surrogate s(kind::dense);
        s.z_ = std::move(Z);
        return s;
    }

    static Surrogate factored(TruncatedSVD<T> f) {
        Surrogate s(kind::factored);
        s.f_ = std::move(f);
        return s;
    }

    static Surrogate right_rows(Matrix<T> V) {
        Surrogate s(kind::right_rows);
        s.f_.V = std::move(V);
        return s;
    }

    /// Z = A_r, the truncated SVD of A.
    static Surrogate truncated(const Matrix<T>& A, index_t r) {
        return factored(truncated_svd(A, r));
    }

    kind type() const noexcept { return kind_; }

    /// Surrogate for A^T: Z^T, with the roles of U and V exchanged.
    Surrogate transposed() const {
        switch (kind_) {
            case kind::dense:
                return dense(z_.transpose());
            case kind::factored:
                return factored(TruncatedSVD<T>{f_.V.transpose(), f_.sigma, f_.U.transpose()});
            case kind::right_rows:
                break;
        }
        fail(errc::invalid_argument, "a bare right-row surrogate has no left factor to transpose");
    }

    ResolvedSurrogate<T> resolve(index_t r) const {
        using R = real_t<T>;
        const R rank_tol = scaled_tol<R>(1e-12);
        const R ortho_tol = scaled_tol<R>(1e-10);
        ResolvedSurrogate<T> out;
        switch (kind_) {
            case kind::dense: {
                require(r >= 1 && r <= std::min(z_.rows(), z_.cols()), errc::invalid_argument,
                        "surrogate rank out of range");
                TruncatedSVD<T> full = full_svd(z_);
                if (full.sigma[0] == R(0) || full.sigma[r - 1] < rank_tol * full.sigma[0])
                    fail(errc::surrogate_rank_too_low,
                         "sigma_r(Z) < 1e-12 sigma_1(Z) for r = " + std::to_string(r));
                out.U = full.U.block(0, 0, full.U.rows(), r);
                out.V = full.V.block(0, 0, r, full.V.cols());
                const bool exact_rank = full.sigma.size() == r || full.sigma[r] <= rank_tol * full.sigma[0];
                if (exact_rank) {
                    out.Z = z_;
                } else {
                    TruncatedSVD<T> t{out.U, {full.sigma.begin(), full.sigma.begin() + static_cast<std::ptrdiff_t>(r)}, out.V};
                    out.Z = t.reconstruct();
                }
                break;
            }
            case kind::factored: {
                require(f_.rank() == r, errc::invalid_argument,
                        "factored surrogate has rank " + std::to_string(f_.rank()) + ", expected " +
                            std::to_string(r));
                require(f_.U.cols() == r && f_.V.rows() == r, errc::dimension_mismatch,
                        "factored surrogate: factor shapes");
                if (f_.sigma[0] <= R(0) || f_.sigma[r - 1] < rank_tol * f_.sigma[0])
                    fail(errc::surrogate_rank_too_low, "sigma_r(Z) < 1e-12 sigma_1(Z)");
                require(row_orthonormality_defect(f_.V) <= ortho_tol, errc::non_orthonormal,
                        "factored surrogate: V rows not orthonormal");
                require(row_orthonormality_defect(f_.U.adjoint()) <= ortho_tol, errc::non_orthonormal,
                        "factored surrogate: U columns not orthonormal");
                out.U = f_.U;
                out.V = f_.V;
                out.Z = f_.reconstruct();
                break;
            }
            case kind::right_rows: {
                require(f_.V.rows() == r, errc::invalid_argument,
                        "right-row surrogate has " + std::to_string(f_.V.rows()) + " rows, expected " +
                            std::to_string(r));
                require(row_orthonormality_defect(f_.V) <= ortho_tol, errc::non_orthonormal,
                        "surrogate V rows not orthonormal");
                out.V = f_.V;
                break;
            }
        }
        return out;
    }

private:
    explicit Surrogate(kind k) : kind_(k) {}

    kind kind_;
    Matrix<T> z_;
    TruncatedSVD<T> f_;
};

}  // namespace cssel

#endif
