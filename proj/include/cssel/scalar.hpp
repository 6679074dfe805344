#ifndef CSSEL_SCALAR_HPP
#define CSSEL_SCALAR_HPP

#include <cfloat>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <type_traits>

namespace cssel {

using index_t = std::size_t;

template <typename T>
struct scalar_traits {
    using real = T;
    static constexpr bool is_complex = false;
};

template <typename R>
struct scalar_traits<std::complex<R>> {
    using real = R;
    static constexpr bool is_complex = true;
};

template <typename T>
using real_t = typename scalar_traits<T>::real;

template <typename T>
inline constexpr bool is_complex_v = scalar_traits<T>::is_complex;

//
// math helpers resolved through ADL so that multiprecision reals work
//
template <typename R>
R sqrt_of(const R& x) {
    using std::sqrt;
    return sqrt(x);
}

template <typename T>
real_t<T> abs2(const T& x) {
    if constexpr (is_complex_v<T>)
        return x.real() * x.real() + x.imag() * x.imag();
    else
        return x * x;
}

template <typename T>
real_t<T> magnitude(const T& x) {
    if constexpr (is_complex_v<T>) {
        return std::abs(x);
    } else {
        using std::abs;
        return abs(x);
    }
}

template <typename T>
T conjugate(const T& x) {
    if constexpr (is_complex_v<T>)
        return std::conj(x);
    else
        return x;
}

template <typename T>
real_t<T> real_part(const T& x) {
    if constexpr (is_complex_v<T>)
        return x.real();
    else
        return x;
}

template <typename T>
bool is_finite(const T& x) {
    using std::isfinite;
    if constexpr (is_complex_v<T>)
        return isfinite(x.real()) && isfinite(x.imag());
    else
        return isfinite(x);
}

// e^{i arg x}; +1 for x == 0 (sign(x) for reals)
template <typename T>
T unit_phase(const T& x) {
    using R = real_t<T>;
    const R m = magnitude(x);
    if (m == R(0))
        return T(1);
    return x / m;
}

template <typename R>
R epsilon_of() {
    return std::numeric_limits<R>::epsilon();
}

// A threshold given for double precision, rescaled to the unit roundoff of R.
template <typename R>
R scaled_tol(double double_value) {
    return R(double_value) * (epsilon_of<R>() / R(DBL_EPSILON));
}

template <typename R>
R quiet_nan() {
    return std::numeric_limits<R>::quiet_NaN();
}

}  // namespace cssel

#endif
