// cssel: column, skeleton and submatrix selection from the command line.
//
// exit status: 0 all bounds hold, 1 a bound is violated, 2 bad input,
// 3 numerical degeneracy

#include <chrono>
#include <complex>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cssel/cssel.hpp>
#include <cssel/io/matrix_io.hpp>
#include <cssel/io/report.hpp>

namespace {

using namespace cssel;
using quad = boost::multiprecision::float128;

enum exit_code : int { ok = 0, bound_violation = 1, input_error = 2, degenerate = 3 };

int exit_for(errc c) {
    switch (c) {
        case errc::rank_deficient:
        case errc::singular_ahat:
        case errc::singular_uhat:
        case errc::singular_submatrix:
        case errc::pivot_underflow:
        case errc::surrogate_rank_too_low:
        case errc::non_convergence:
        case errc::no_admissible_column:
        case errc::zero_column:
        case errc::zero_tail:
            return degenerate;
        default:
            return input_error;
    }
}

struct Common {
    std::string input;
    std::string format;  // empty: detect from the first byte
    std::string out = "-";
};

std::optional<io::Format> format_of(const std::string& f) {
    if (f.empty())
        return std::nullopt;
    return f == "csv" ? io::Format::csv : io::Format::mtx;
}

template <typename T>
Matrix<T> as(const io::LoadedMatrix& m, const std::string& what) {
    if constexpr (is_complex_v<T>) {
        if (m.complex)
            return *m.complex;
        const Matrix<double>& A = *m.real;
        Matrix<T> B(A.rows(), A.cols());
        for (index_t j = 0; j < A.cols(); ++j)
            for (index_t i = 0; i < A.rows(); ++i)
                B(i, j) = T(A(i, j));
        return B;
    } else {
        require(!m.complex, errc::invalid_argument, what + " is complex but the input is real");
        return *m.real;
    }
}

void emit(const io::RunReport& rep, const std::string& out) {
    const std::string text = io::to_text(rep);
    if (out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(out);
    require(static_cast<bool>(os), errc::invalid_argument, "cannot write '" + out + "'");
    os << text;
}

int finish(io::RunReport& rep, const BoundReport& bounds, const Common& c,
           std::chrono::steady_clock::time_point t0) {
    rep.bounds = bounds.checks;
    rep.all_pass = bounds.all_pass();
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(rep, c.out);
    return rep.all_pass ? ok : bound_violation;
}

template <typename T>
Surrogate<T> surrogate_for(const Matrix<T>& A, index_t r, const std::string& path, bool need_left) {
    if (path.empty())
        return Surrogate<T>::truncated(A, r);
    const Matrix<T> S = as<T>(io::read_matrix(path), "surrogate");
    if (S.rows() == A.rows() && S.cols() == A.cols())
        return Surrogate<T>::dense(S);
    require(!need_left, errc::dimension_mismatch, "surrogate must have the shape of the input");
    require(S.cols() == A.cols(), errc::dimension_mismatch,
            "surrogate is neither M x N nor r x N with orthonormal rows");
    return Surrogate<T>::right_rows(S);
}

template <typename T>
int run_select_columns(const Matrix<T>& A, index_t r, const std::string& sur_path, const Common& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = select_columns(A, surrogate_for(A, r, sur_path, false), r);
    const ColumnSelection<T>& s = res.selection;

    io::RunReport rep;
    rep.command = "select-columns";
    rep.params = {{"rank", std::to_string(r)}, {"surrogate", sur_path.empty() ? "svd" : sur_path}};
    rep.input = io::digest(A);
    rep.col_indices = io::one_based(s.indices);
    rep.errors = {{"cw_fro", double(s.err_cw_fro)},
                  {"cw_spec", double(s.err_cw_spec)},
                  {"proj_fro", double(s.err_proj_fro)},
                  {"proj_spec", double(s.err_proj_spec)},
                  {"orth_residual_fro", double(s.orth_residual_fro)}};
    if (s.surrogate_err_fro)
        rep.errors["surrogate_fro"] = double(*s.surrogate_err_fro);
    if (s.surrogate_err_spec)
        rep.errors["surrogate_spec"] = double(*s.surrogate_err_spec);
    return finish(rep, column_bounds(s, A.rows(), A.cols(), 1e-9, double(roundoff_scale(A))), c, t0);
}

template <typename T>
int run_skeleton(const Matrix<T>& A, index_t r, const std::string& mode, double rho, const std::string& sur_path,
                 const Common& c) {
    const auto t0 = std::chrono::steady_clock::now();
    SkeletonSelection<T> s;
    if (mode == "projective")
        s = select_skeleton_projective(A, surrogate_for(A, r, sur_path, true), r);
    else if (mode == "cross")
        s = select_skeleton_cross(A, surrogate_for(A, r, sur_path, true), r);
    else
        s = select_skeleton_spectral(A, r, RrqrParams(rho));

    io::RunReport rep;
    rep.command = "skeleton";
    rep.params = {{"rank", std::to_string(r)}, {"mode", mode}};
    if (mode == "spectral") {
        std::ostringstream rs;
        rs << rho;
        rep.params["rho"] = rs.str();
    } else {
        rep.params["surrogate"] = sur_path.empty() ? "svd" : sur_path;
    }
    rep.input = io::digest(A);
    rep.row_indices = io::one_based(s.row_indices);
    rep.col_indices = io::one_based(s.col_indices);
    rep.errors = {{"skeleton_fro", double(s.err_fro)}, {"skeleton_spec", double(s.err_spec)}};
    auto put = [&](const char* k, const auto& v) {
        if (v)
            rep.errors[k] = double(*v);
    };
    put("col_fro", s.col_err_fro);
    put("col_spec", s.col_err_spec);
    put("row_fro", s.row_err_fro);
    put("row_spec", s.row_err_spec);
    put("identity_gap_fro", s.identity_gap);
    put("surrogate_fro", s.surrogate_err_fro);
    put("surrogate_spec", s.surrogate_err_spec);
    return finish(rep, evaluate_skeleton(A, s), c, t0);
}

template <typename T>
int run_submatrix(const Matrix<T>& V, const Common& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const SubmatrixSelection<T> s = select_submatrix(V);

    io::RunReport rep;
    rep.command = "submatrix";
    rep.input = io::digest(V);
    rep.col_indices = io::one_based(s.col_indices);
    rep.errors = {{"inv_fro", double(s.inv_fro)},
                  {"inv_spec", double(s.inv_spec)},
                  {"orthonormality_defect", s.orthonormality_defect}};
    // slightly non-orthonormal rows are accepted; the bounds then get matching slack
    const double slack = s.near_orthonormal ? 1e-9 + 10.0 * s.orthonormality_defect : 1e-9;
    if (s.near_orthonormal)
        rep.warnings.push_back("V V^* differs from I by " + std::to_string(s.orthonormality_defect));
    BoundReport b = verify_maxvol_bounds(V, s.col_indices, slack);
    for (index_t k = 0; k < s.trace.size(); ++k)
        b.add("step" + std::to_string(k + 1) + "_pinv_fro2_le_induction", s.trace[k],
              induction_bound(k + 1, V.cols(), V.rows()), slack);
    return finish(rep, b, c, t0);
}

int run_bench_kahan(double c, index_t rmax, const std::string& out) {
    require(rmax >= 1, errc::invalid_argument, "--rmax must be >= 1");
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (out != "-") {
        file.open(out);
        require(static_cast<bool>(file), errc::invalid_argument, "cannot write '" + out + "'");
        os = &file;
    }
    *os << "r,ratio_alg1,ratio_pivqr,bound_sqrt_r_plus_1\n" << std::setprecision(17);

    ColumnSelectOptions<quad> opt;
    opt.compute_errors = false;
    QROptions qopt;
    for (index_t r = 1; r <= rmax; ++r) {
        const Matrix<quad> K = kahan_matrix<quad>(r + 1, quad(c));
        const auto sv = singular_values(K);
        const quad best = sv[r];

        const auto alg = select_columns(K, Surrogate<quad>::truncated(K, r), r, opt).selection.indices;
        qopt.max_steps = r;
        const auto piv = qr_factorize(K, qopt).perm;
        const std::vector<index_t> base(piv.begin(), piv.begin() + static_cast<std::ptrdiff_t>(r));

        const quad ra = fro_norm(orthogonal_projector_residual(K, K.select_cols(alg))) / best;
        const quad rb = fro_norm(orthogonal_projector_residual(K, K.select_cols(base))) / best;
        *os << r << ',' << static_cast<double>(ra) << ',' << static_cast<double>(rb) << ','
            << std::sqrt(static_cast<double>(r) + 1.0) << '\n';
    }
    return ok;
}

template <typename F>
int dispatch(const io::LoadedMatrix& m, F&& f) {
    if (m.is_complex())
        return f(*m.complex);
    return f(*m.real);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"column subset, skeleton and maximum-volume submatrix selection"};
    app.require_subcommand(1);

    Common cc;
    index_t rank = 0;
    std::string sur_path, mode = "projective";
    bool use_svd = false;
    double rho = 2.0, kc = 0.8;
    index_t rmax = 40;

    auto add_common = [&](CLI::App* s) {
        s->add_option("input", cc.input, "matrix file (MatrixMarket or CSV)")->required()->check(CLI::ExistingFile);
        s->add_option("--format", cc.format, "input format; detected when omitted")
            ->check(CLI::IsMember({"mtx", "csv"}));
        s->add_option("--out", cc.out, "report path, - for stdout");
    };

    auto* sc = app.add_subcommand("select-columns", "r columns with interpolation weights");
    add_common(sc);
    sc->add_option("--rank,-r", rank, "number of columns")->required();
    auto* sur_opt = sc->add_option("--surrogate", sur_path, "rank-r matrix Z (M x N) or orthonormal rows (r x N)");
    sc->add_flag("--svd", use_svd, "use the truncated SVD of the input (default)")->excludes(sur_opt);

    auto* sk = app.add_subcommand("skeleton", "r rows and r columns");
    add_common(sk);
    sk->add_option("--rank,-r", rank, "skeleton rank")->required();
    sk->add_option("--mode", mode, "projective, cross or spectral")
        ->check(CLI::IsMember({"projective", "cross", "spectral"}));
    sk->add_option("--rho", rho, "swap threshold for the spectral mode")->check(CLI::Range(1.0, 1e6));
    auto* sk_sur = sk->add_option("--surrogate", sur_path, "rank-r matrix Z (M x N)");
    sk->add_flag("--svd", use_svd, "use the truncated SVD of the input (default)")->excludes(sk_sur);

    auto* sm = app.add_subcommand("submatrix", "r x r submatrix of r x N orthonormal rows");
    add_common(sm);

    auto* bk = app.add_subcommand("bench-kahan", "relative errors on Kahan matrices of size r + 1");
    bk->add_option("--c", kc, "Kahan parameter, 0 < c < 1")->check(CLI::Range(0.0, 1.0));
    bk->add_option("--rmax", rmax, "largest rank");
    bk->add_option("--out", cc.out, "CSV path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : input_error;
    }

    try {
        if (*bk)
            return run_bench_kahan(kc, rmax, cc.out);
        const io::LoadedMatrix m = io::read_matrix(cc.input, format_of(cc.format));
        if (*sc)
            return dispatch(m, [&](const auto& A) { return run_select_columns(A, rank, sur_path, cc); });
        if (*sk)
            return dispatch(m, [&](const auto& A) { return run_skeleton(A, rank, mode, rho, sur_path, cc); });
        return dispatch(m, [&](const auto& V) { return run_submatrix(V, cc); });
    } catch (const cssel::error& e) {
        std::cerr << "cssel: " << e.what() << '\n';
        return exit_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "cssel: " << e.what() << '\n';
        return input_error;
    }
}
