// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance               all criteria
//   acceptance --criterion N only criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/multiprecision/float128.hpp>

#include "test_util.hpp"

using namespace cssel;
using namespace testutil;
using quad = boost::multiprecision::float128;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

double truncate3(double x) { return std::trunc(x * 1000.0) / 1000.0; }

// M, N <= 30, r <= 8; Z is either A_r or the rank-r truncation of a perturbed A
struct Instance {
    Matrix<double> A, Z;
    index_t r;
    bool perturbed;
};

Instance random_instance(std::mt19937_64& g, int t, index_t max_dim = 30, index_t max_r = 8) {
    const index_t m = 2 + g() % (max_dim - 1), n = 2 + g() % (max_dim - 1);
    const index_t r = 1 + g() % std::min<index_t>(max_r, std::min(m, n));
    Instance in{t % 3 == 2 ? random_lowrank_plus_noise(m, n, r, 0.1, g) : random_matrix(m, n, g), {}, r, t % 2 == 1};
    if (in.perturbed) {
        const auto E = random_matrix(m, n, g);
        in.Z = truncated_svd(in.A + E * (0.05 * fro_norm(in.A) / fro_norm(E)), r).reconstruct();
    } else {
        in.Z = truncated_svd(in.A, r).reconstruct();
    }
    return in;
}

// 1
Outcome example_reproduction() {
    Outcome o;
    const auto A = example_5x4(1e-3);
    const auto s = select_columns(A, Surrogate<double>::truncated(A, 2), 2).selection;
    const std::vector<index_t> want{3, 1};
    o.require(s.indices == want, "selected columns differ from {4,2}");
    const double cw = s.err_cw_fro, proj = s.err_proj_fro, best = oracle::best_rank_fro(A, 2);
    o.require(std::abs(truncate3(cw) - 0.835) <= 1e-3 + 1e-12, "||A-CW||_F = " + fmt(cw) + ", expected 0.835");
    o.require(std::abs(truncate3(proj) - 0.816) <= 1e-3 + 1e-12, "||A-CC+A||_F = " + fmt(proj) + ", expected 0.816");
    o.require(std::abs(truncate3(best) - 0.629) <= 1e-3 + 1e-12, "||A-A_2||_F = " + fmt(best) + ", expected 0.629");
    return o;
}

// 2
Outcome kahan_reproduction() {
    Outcome o;
    const quad c(0.8);
    ColumnSelectOptions<quad> opt;
    opt.compute_errors = false;
    QROptions qopt;
    double worst_alg = 0.0;
    for (index_t r = 1; r <= 40; ++r) {
        const auto K = kahan_matrix<quad>(r + 1, c);
        const quad best = singular_values(K)[r];
        const auto alg = select_columns(K, Surrogate<quad>::truncated(K, r), r, opt).selection.indices;
        qopt.max_steps = r;
        const auto perm = qr_factorize(K, qopt).perm;
        const std::vector<index_t> base(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(r));
        const double ra = static_cast<double>(fro_norm(orthogonal_projector_residual(K, K.select_cols(alg))) / best);
        const double rb = static_cast<double>(fro_norm(orthogonal_projector_residual(K, K.select_cols(base))) / best);
        worst_alg = std::max(worst_alg, ra / std::sqrt(r + 1.0));
        if (r > 1) {
            std::vector<index_t> want(r);
            std::iota(want.begin(), want.end(), index_t(1));
            auto got = alg;
            std::sort(got.begin(), got.end());
            o.require(got == want, "r=" + std::to_string(r) + ": selection is not {2..r+1}");
            const double floor = 0.8 * std::pow(1.8, static_cast<double>(r) - 1.0);
            o.require(rb >= floor, "r=" + std::to_string(r) + ": pivoted QR ratio " + fmt(rb) + " < " + fmt(floor));
        }
        o.require(ra <= std::sqrt(r + 1.0) * (1 + 1e-12), "r=" + std::to_string(r) + ": ratio " + fmt(ra));
    }
    o.notes.push_back("max ratio/sqrt(r+1) = " + fmt(worst_alg));
    return o;
}

// 3
Outcome column_bound_suite() {
    Outcome o;
    std::mt19937_64 g(3001);
    std::map<std::string, int> failures;
    int proj_fail = 0;
    for (int t = 0; t < 200; ++t) {
        const auto in = random_instance(g, t);
        const auto s = select_columns(in.A, Surrogate<double>::dense(in.Z), in.r).selection;
        const auto rep =
            column_bounds(s, in.A.rows(), in.A.cols(), 1e-8, static_cast<double>(roundoff_scale(in.A)));
        for (const auto& c : rep.checks)
            if (!c.pass)
                ++failures[c.name];
        proj_fail += !(s.err_proj_fro <= s.err_cw_fro * (1 + 1e-12) + 1e-14);
    }
    for (const auto& [name, count] : failures)
        o.require(false, name + " failed on " + std::to_string(count) + "/200");
    o.require(proj_fail == 0, "projector error exceeded ||A-CW||_F on " + std::to_string(proj_fail) + "/200");
    return o;
}

// 4
Outcome skeleton_bound_suite() {
    Outcome o;
    std::mt19937_64 g(4001);
    std::map<std::string, int> failures;
    double worst_gap = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto in = random_instance(g, t);
        const auto sur = Surrogate<double>::dense(in.Z);
        for (const auto& sel : {select_skeleton_projective(in.A, sur, in.r), select_skeleton_cross(in.A, sur, in.r)}) {
            for (const auto& c : evaluate_skeleton(in.A, sel, 1e-8).checks)
                if (!c.pass)
                    ++failures[c.name];
            if (sel.identity_gap)
                worst_gap = std::max(worst_gap, static_cast<double>(*sel.identity_gap / fro_norm(in.A)));
        }
    }
    for (const auto& [name, count] : failures)
        o.require(false, name + " failed on " + std::to_string(count) + "/100");
    o.require(worst_gap <= 1e-9, "identity gap " + fmt(worst_gap) + " ||A||_F");
    return o;
}

// 5
template <typename T>
bool rrqr_skeleton_within(const Matrix<T>& A, index_t r, double& ratio) {
    const double rho = 2.0;
    const auto s = select_skeleton_spectral(A, r, RrqrParams(rho));
    const auto sv = oracle::singular_values(A);
    const double sig = r < sv.size() ? static_cast<double>(sv[r]) : 0.0;
    const double mn = static_cast<double>(std::min(A.rows(), A.cols()));
    const double rr = static_cast<double>(r);
    const double bound = std::sqrt(1 + rr * (rho * rho * rr + rho * rho + 1) * (mn - rr)) * sig;
    const double err = static_cast<double>(s.err_spec);
    ratio = bound > 0 ? err / bound : 0.0;
    return err <= bound * (1 + 1e-8) + static_cast<double>(roundoff_scale(A));
}

Outcome rrqr_skeleton_bound() {
    Outcome o;
    std::mt19937_64 g(5001);
    double worst = 0.0, ratio = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto in = random_instance(g, t);
        o.require(rrqr_skeleton_within(in.A, in.r, ratio), "random instance " + std::to_string(t));
        worst = std::max(worst, ratio);
    }
    for (const index_t r : {index_t(5), index_t(10), index_t(19)}) {
        const auto K = kahan_matrix<quad>(20, quad(0.8));
        o.require(rrqr_skeleton_within(K, r, ratio), "Kahan r=" + std::to_string(r));
        worst = std::max(worst, ratio);
    }
    o.notes.push_back("max error/bound = " + fmt(worst));
    return o;
}

// 6
double median_seconds(const Matrix<double>& V, int reps) {
    std::vector<double> t;
    for (int k = 0; k < 15; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < reps; ++i)
            select_submatrix(V);
        t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::nth_element(t.begin(), t.begin() + 7, t.end());
    return t[7];
}

Outcome submatrix_suite() {
    Outcome o;
    std::mt19937_64 g(6001);
    int bound_fail = 0, ind_fail = 0;
    for (int t = 0; t < 200; ++t) {
        const index_t r = 1 + g() % 10;
        const index_t n = r + g() % (201 - r);
        const auto V = random_orthonormal_rows<double>(r, n, g);
        const auto s = select_submatrix(V);
        bound_fail += !verify_maxvol_bounds(V, s.col_indices, 1e-8).all_pass();
        for (index_t k = 1; k <= r; ++k)
            ind_fail += !(s.trace[k - 1] <= induction_bound(k, n, r) * (1 + 1e-8));
    }
    o.require(bound_fail == 0, "norm bounds failed on " + std::to_string(bound_fail) + "/200");
    o.require(ind_fail == 0, "induction invariant failed at " + std::to_string(ind_fail) + " steps");

    const auto V1 = random_orthonormal_rows<double>(10, 100, g);
    const auto V2 = random_orthonormal_rows<double>(10, 200, g);
    median_seconds(V2, 20);
    const double ratio = median_seconds(V2, 100) / median_seconds(V1, 100);
    o.require(ratio >= 1.5 && ratio <= 3.0, "timing ratio N=200/N=100 is " + fmt(ratio));
    o.notes.push_back("timing ratio " + fmt(ratio));
    return o;
}

// 7
Outcome oracle_optimality() {
    Outcome o;
    std::mt19937_64 g(7001);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        const auto in = random_instance(g, t, 10, 3);
        if (in.A.cols() > 10 || in.r > 3)
            continue;
        ++checked;
        ColumnSelectOptions<double> opt;
        const auto s = select_columns(in.A, Surrogate<double>::truncated(in.A, in.r), in.r, opt).selection;
        const double best_r = oracle::best_rank_fro(in.A, in.r);
        const double scale = static_cast<double>(roundoff_scale(in.A));
        o.require(s.err_proj_fro <= std::sqrt(in.r + 1.0) * best_r * (1 + 1e-8) + scale,
                  "instance " + std::to_string(t) + " exceeds sqrt(r+1) ||A-A_r||_F");
        const auto bf = oracle::best_columns_bruteforce(in.A, in.r);
        o.require(bf.best_value <= s.err_proj_fro * (1 + 1e-10) + scale, "oracle worse than selection");
    }
    o.notes.push_back(std::to_string(checked) + " random instances");

    const auto A = example_5x4(1e-3);
    for (const index_t r : {index_t(1), index_t(2)}) {
        auto got = select_columns(A, Surrogate<double>::truncated(A, r), r).selection.indices;
        std::sort(got.begin(), got.end());
        o.require(got == oracle::best_columns_bruteforce(A, r).best_indices,
                  "example r=" + std::to_string(r) + " differs from the optimal subset");
    }
    return o;
}

// 8
Outcome ones_plus_eps_closed_forms() {
    Outcome o;
    const index_t n = 100;
    const double eps = 1e-3;
    const auto A = ones_plus_eps(n, eps);
    const double want[3] = {(n - 1) * (1 - 1 / (1 + eps)), eps * std::sqrt(n - 1.0), eps};
    const std::vector<index_t> choice[3] = {{0}, {1}, {1}};
    const std::vector<index_t> rows[3] = {{0}, {0}, {1}};
    for (int i = 0; i < 3; ++i) {
        const double e = spectral_norm(skeleton_residual(A, rows[i], choice[i], SkeletonMode::cross));
        o.require(std::abs(e / want[i] - 1) <= 1e-9, "case " + std::to_string(i + 1) + ": " + fmt(e));
    }
    Matrix<double> J(n, n);
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < n; ++i)
            J(i, j) = 1.0;
    const auto s = select_skeleton_cross(A, Surrogate<double>::dense(J), 1);
    o.require(s.row_indices == std::vector<index_t>{1} && s.col_indices == std::vector<index_t>{1},
              "cross path did not select row 2, column 2");
    return o;
}

// 9
Outcome kernel_properties() {
    Outcome o;
    std::mt19937_64 g(9001);
    int fails = 0;
    for (int t = 0; t < 100; ++t) {
        const index_t m = 2 + g() % 15, n = 2 + g() % 15;
        const auto A = random_matrix(m, n, g);
        const index_t r = 1 + g() % std::min(m, n);

        const auto svd = truncated_svd(A, r);
        const double res = fro_norm(A - svd.reconstruct());
        double s2 = 0.0;
        for (const double x : svd.sigma)
            s2 += x * x;
        const double f = fro_norm(A), sp = spectral_norm(A);
        fails += std::abs(res * res + s2 - f * f) > 1e-9 * f * f;
        fails += sp > f * (1 + 1e-12) || f > std::sqrt(static_cast<double>(std::min(m, n))) * sp * (1 + 1e-12);

        std::vector<index_t> cols;
        for (index_t j = 0; j < n && cols.size() < r; ++j)
            if (g() % 2 || n - j <= r - cols.size())
                cols.push_back(j);
        const auto C = A.select_cols(cols);
        const auto P = orthogonal_projector_residual(A, C);
        fails += fro_norm(adjoint_multiply(C, P)) > 1e-11 * f * fro_norm(C);

        const index_t k = g() % std::min(m, n);
        auto B = A;
        const auto H = householder_from_column(B, k);
        double vn = 0.0;
        for (const double x : H.v)
            vn += x * x;
        fails += std::abs(std::sqrt(vn) - 1) > 1e-14;
        apply_reflector_rows(H, B);
        for (index_t j = 0; j < n; ++j)
            fails += std::abs(column_norm<double>(std::span<const double>(B.col(j))) -
                              column_norm<double>(std::span<const double>(A.col(j)))) > 1e-13 * f;
        for (index_t i = k + 1; i < m; ++i)
            fails += std::abs(B(i, k)) > 1e-13 * f;
        apply_reflector_rows(H, B);
        fails += max_abs_diff(A, B) > 1e-12 * f;
    }
    o.require(fails == 0, std::to_string(fails) + " property violations");
    return o;
}

struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"5x4 example reproduction", 1.0, example_reproduction},
        {"Kahan reproduction", 10.0, kahan_reproduction},
        {"column selection bound suite", 30.0, column_bound_suite},
        {"skeleton bound suite", 30.0, skeleton_bound_suite},
        {"rank-revealing skeleton bound", 30.0, rrqr_skeleton_bound},
        {"submatrix suite", 30.0, submatrix_suite},
        {"oracle optimality", 60.0, oracle_optimality},
        {"ones_plus_eps closed forms", 1.0, ones_plus_eps_closed_forms},
        {"kernel property suite", 10.0, kernel_properties},
    };
    return all;
}

bool run_one(std::size_t i) {
    const auto& c = criteria()[i];
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(dt < c.limit_s, "runtime " + fmt(dt) + " s over " + fmt(c.limit_s) + " s");
    std::string detail;
    for (const auto& n : o.notes)
        detail += (detail.empty() ? "" : "; ") + n;
    std::printf("%s criterion %zu (%s) %.3f s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, dt,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::size_t which = 0;
    app.add_option("--criterion", which, "run only this criterion (1-based)")
        ->check(CLI::Range(std::size_t(1), criteria().size()));
    CLI11_PARSE(app, argc, argv);

    bool all = true;
    for (std::size_t i = 0; i < criteria().size(); ++i)
        if (which == 0 || which == i + 1)
            all = run_one(i) && all;
    return all ? 0 : 1;
}
