#ifndef CSSEL_ERROR_HPP
#define CSSEL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cssel {

enum class errc {
    invalid_argument,
    dimension_mismatch,
    non_finite,
    non_convergence,
    rank_deficient,
    zero_column,
    non_orthonormal,
    no_admissible_column,
    pivot_underflow,
    surrogate_rank_too_low,
    singular_uhat,
    singular_ahat,
    singular_submatrix,
    zero_tail,
    too_large,
    parse_error,
};

constexpr std::string_view to_string(errc code) {
    switch (code) {
        case errc::invalid_argument: return "InvalidArgument";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::non_finite: return "NonFinite";
        case errc::non_convergence: return "NonConvergence";
        case errc::rank_deficient: return "RankDeficient";
        case errc::zero_column: return "ZeroColumn";
        case errc::non_orthonormal: return "NonOrthonormalV";
        case errc::no_admissible_column: return "NoAdmissibleColumn";
        case errc::pivot_underflow: return "PivotUnderflow";
        case errc::surrogate_rank_too_low: return "SurrogateRankTooLow";
        case errc::singular_uhat: return "SingularUhat";
        case errc::singular_ahat: return "SingularAhat";
        case errc::singular_submatrix: return "SingularSubmatrix";
        case errc::zero_tail: return "ZeroTail";
        case errc::too_large: return "TooLarge";
        case errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond)
        fail(code, what);
}

}  // namespace cssel

#endif
