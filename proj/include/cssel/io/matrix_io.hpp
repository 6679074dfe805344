#ifndef CSSEL_IO_MATRIX_IO_HPP
#define CSSEL_IO_MATRIX_IO_HPP

#include <algorithm>
#include <cctype>
#include <complex>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "../matrix.hpp"

namespace cssel::io {

inline constexpr index_t max_dense_dim = 4000;

/// A matrix read from disk: real unless the MatrixMarket field is complex.
struct LoadedMatrix {
    std::optional<Matrix<double>> real;
    std::optional<Matrix<std::complex<double>>> complex;

    bool is_complex() const noexcept { return complex.has_value(); }
    index_t rows() const { return is_complex() ? complex->rows() : real->rows(); }
    index_t cols() const { return is_complex() ? complex->cols() : real->cols(); }
};

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline void check_dims(long long m, long long n) {
    if (m <= 0 || n <= 0)
        fail(errc::parse_error, "matrix dimensions must be positive");
    if (m > static_cast<long long>(max_dense_dim) || n > static_cast<long long>(max_dense_dim))
        fail(errc::too_large, std::to_string(m) + " x " + std::to_string(n) + " exceeds the 4000 x 4000 dense limit");
}

inline double parse_double(const std::string& tok, index_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        fail(errc::parse_error, "line " + std::to_string(line) + ": not a number: '" + tok + "'");
    }
    if (used != tok.size())
        fail(errc::parse_error, "line " + std::to_string(line) + ": trailing characters in '" + tok + "'");
    if (!std::isfinite(v))
        fail(errc::parse_error, "line " + std::to_string(line) + ": non-finite value");
    return v;
}

struct DataLines {
    std::istream& in;
    index_t line = 0;

    bool next(std::vector<std::string>& toks) {
        std::string s;
        while (std::getline(in, s)) {
            ++line;
            s = trim(s);
            if (s.empty() || s[0] == '%')
                continue;
            toks.clear();
            std::istringstream ss(s);
            std::string t;
            while (ss >> t)
                toks.push_back(t);
            return true;
        }
        return false;
    }
};

template <typename T>
Matrix<T> read_mm_body(DataLines& dl, bool coordinate, bool is_cplx, const std::string& symmetry) {
    std::vector<std::string> toks;
    if (!dl.next(toks))
        fail(errc::parse_error, "missing size line");
    const index_t want = coordinate ? 3 : 2;
    if (toks.size() != want)
        fail(errc::parse_error, "size line must have " + std::to_string(want) + " fields");
    long long m = 0, n = 0, nnz = 0;
    try {
        m = std::stoll(toks[0]);
        n = std::stoll(toks[1]);
        if (coordinate)
            nnz = std::stoll(toks[2]);
    } catch (const std::exception&) {
        fail(errc::parse_error, "bad size line");
    }
    check_dims(m, n);
    const bool sym = symmetry != "general";
    if (sym && m != n)
        fail(errc::parse_error, symmetry + " matrix must be square");

    Matrix<T> A(static_cast<index_t>(m), static_cast<index_t>(n));
    const index_t nval = is_cplx ? 2 : 1;
    auto value = [&](const std::vector<std::string>& t, index_t at) -> T {
        if constexpr (is_complex_v<T>) {
            const double re = parse_double(t[at], dl.line);
            const double im = is_cplx ? parse_double(t[at + 1], dl.line) : 0.0;
            return T(re, im);
        } else {
            return T(parse_double(t[at], dl.line));
        }
    };
    auto mirror = [&](index_t i, index_t j, const T& v) {
        if (i == j)
            return;
        if (symmetry == "symmetric")
            A(j, i) = v;
        else if (symmetry == "skew-symmetric")
            A(j, i) = -v;
        else if (symmetry == "hermitian")
            A(j, i) = conjugate(v);
    };

    if (coordinate) {
        if (nnz < 0)
            fail(errc::parse_error, "negative entry count");
        for (long long e = 0; e < nnz; ++e) {
            if (!dl.next(toks))
                fail(errc::parse_error, "expected " + std::to_string(nnz) + " entries, got " + std::to_string(e));
            if (toks.size() != 2 + nval)
                fail(errc::parse_error, "line " + std::to_string(dl.line) + ": wrong field count");
            long long i = 0, j = 0;
            try {
                i = std::stoll(toks[0]);
                j = std::stoll(toks[1]);
            } catch (const std::exception&) {
                fail(errc::parse_error, "line " + std::to_string(dl.line) + ": bad index");
            }
            if (i < 1 || j < 1 || i > m || j > n)
                fail(errc::parse_error, "line " + std::to_string(dl.line) + ": index out of range");
            const auto ii = static_cast<index_t>(i - 1), jj = static_cast<index_t>(j - 1);
            A(ii, jj) += value(toks, 2);
            mirror(ii, jj, A(ii, jj));
        }
    } else {
        // column-major; symmetric kinds list the lower triangle only
        for (index_t j = 0; j < A.cols(); ++j) {
            const index_t start = !sym ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
            for (index_t i = start; i < A.rows(); ++i) {
                if (!dl.next(toks))
                    fail(errc::parse_error, "too few array entries");
                if (toks.size() != nval)
                    fail(errc::parse_error, "line " + std::to_string(dl.line) + ": wrong field count");
                A(i, j) = value(toks, 0);
                mirror(i, j, A(i, j));
            }
        }
    }
    if (dl.next(toks))
        fail(errc::parse_error, "line " + std::to_string(dl.line) + ": unexpected trailing data");
    return A;
}

}  // namespace detail

inline LoadedMatrix parse_matrix_market(std::istream& in) {
    std::string header;
    if (!std::getline(in, header))
        fail(errc::parse_error, "empty input");
    std::istringstream hs(detail::lower(detail::trim(header)));
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%matrixmarket")
        fail(errc::parse_error, "missing %%MatrixMarket banner");
    if (object != "matrix")
        fail(errc::parse_error, "unsupported object '" + object + "'");
    if (format != "array" && format != "coordinate")
        fail(errc::parse_error, "unsupported format '" + format + "'");
    if (field != "real" && field != "integer" && field != "double" && field != "complex")
        fail(errc::parse_error, "unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
        symmetry != "hermitian")
        fail(errc::parse_error, "unsupported symmetry '" + symmetry + "'");
    if (symmetry == "hermitian" && field != "complex")
        fail(errc::parse_error, "hermitian requires a complex field");

    detail::DataLines dl{in, 1};
    const bool coordinate = format == "coordinate";
    LoadedMatrix out;
    if (field == "complex")
        out.complex = detail::read_mm_body<std::complex<double>>(dl, coordinate, true, symmetry);
    else
        out.real = detail::read_mm_body<double>(dl, coordinate, false, symmetry);
    return out;
}

/// Headerless comma-separated rows; blank lines and '#' comments are skipped.
inline Matrix<double> parse_csv(std::istream& in) {
    std::vector<double> rowmajor;
    index_t ncols = 0, nrows = 0, line = 0;
    std::string s;
    while (std::getline(in, s)) {
        ++line;
        s = detail::trim(s);
        if (s.empty() || s[0] == '#')
            continue;
        index_t count = 0;
        std::istringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            rowmajor.push_back(detail::parse_double(detail::trim(tok), line));
            ++count;
        }
        if (!s.empty() && s.back() == ',')
            fail(errc::parse_error, "line " + std::to_string(line) + ": trailing comma");
        if (ncols == 0)
            ncols = count;
        else if (count != ncols)
            fail(errc::parse_error, "line " + std::to_string(line) + ": expected " + std::to_string(ncols) +
                                        " fields, got " + std::to_string(count));
        ++nrows;
        detail::check_dims(static_cast<long long>(nrows), static_cast<long long>(ncols));
    }
    if (nrows == 0)
        fail(errc::parse_error, "no data rows");
    Matrix<double> A(nrows, ncols);
    for (index_t i = 0; i < nrows; ++i)
        for (index_t j = 0; j < ncols; ++j)
            A(i, j) = rowmajor[i * ncols + j];
    return A;
}

enum class Format { mtx, csv };

inline LoadedMatrix read_matrix(const std::string& path, std::optional<Format> fmt = std::nullopt) {
    std::ifstream in(path);
    if (!in)
        fail(errc::parse_error, "cannot open '" + path + "'");
    if (!fmt) {
        const int c = in.peek();
        fmt = c == '%' ? Format::mtx : Format::csv;
    }
    if (*fmt == Format::mtx)
        return parse_matrix_market(in);
    LoadedMatrix out;
    out.real = parse_csv(in);
    return out;
}

template <typename T>
void write_matrix_market(std::ostream& os, const Matrix<T>& A) {
    os << "%%MatrixMarket matrix array " << (is_complex_v<T> ? "complex" : "real") << " general\n";
    os << A.rows() << ' ' << A.cols() << '\n';
    os << std::setprecision(17);
    for (index_t j = 0; j < A.cols(); ++j)
        for (index_t i = 0; i < A.rows(); ++i) {
            if constexpr (is_complex_v<T>)
                os << static_cast<double>(A(i, j).real()) << ' ' << static_cast<double>(A(i, j).imag()) << '\n';
            else
                os << static_cast<double>(A(i, j)) << '\n';
        }
}

template <typename T>
void write_csv(std::ostream& os, const Matrix<T>& A) {
    static_assert(!is_complex_v<T>, "CSV holds real matrices only");
    os << std::setprecision(17);
    for (index_t i = 0; i < A.rows(); ++i) {
        for (index_t j = 0; j < A.cols(); ++j)
            os << (j ? "," : "") << static_cast<double>(A(i, j));
        os << '\n';
    }
}

template <typename T>
void save_matrix(const std::string& path, const Matrix<T>& A, Format fmt = Format::mtx) {
    std::ofstream os(path);
    if (!os)
        fail(errc::invalid_argument, "cannot write '" + path + "'");
    if (fmt == Format::mtx)
        write_matrix_market(os, A);
    else if constexpr (!is_complex_v<T>)
        write_csv(os, A);
    else
        fail(errc::invalid_argument, "CSV holds real matrices only");
}

}  // namespace cssel::io

#endif
