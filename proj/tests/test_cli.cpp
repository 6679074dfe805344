#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#ifndef CSSEL_CLI
#error "CSSEL_CLI must name the cssel executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    Run r;
    const std::string cmd = std::string(CSSEL_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("cssel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string file(const std::string& name, const std::string& body) {
        const auto p = dir / name;
        std::ofstream(p) << body;
        return p.string();
    }

    std::string example() {
        return file("ex.csv", "1,1,1,0\n1,1,1.001,0\n1,0,0,1.001\n1,0,0,1\n0,0,0,1\n");
    }
};

nlohmann::json without_time(nlohmann::json j) {
    j.erase("wall_time_s");
    return j;
}

}  // namespace

TEST_F(Cli, SelectColumnsOnExample) {
    const auto r = run("select-columns " + example() + " --rank 2 --svd");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["col_indices"], nlohmann::json({4, 2}));
    EXPECT_TRUE(j["all_pass"].get<bool>());
    EXPECT_NEAR(j["errors"]["cw_fro"].get<double>(), 0.8377283111, 1e-9);
    EXPECT_NEAR(j["errors"]["proj_fro"].get<double>(), 0.8162249258, 1e-9);
    bool found = false;
    for (const auto& b : j["bounds"])
        if (b["name"] == "cw_fro_le_sqrt_r1_z_fro") {
            found = true;
            EXPECT_TRUE(b["pass"].get<bool>());
        }
    EXPECT_TRUE(found);
}

TEST_F(Cli, ReportToFileMatchesStdout) {
    const auto in = example();
    const auto out = (dir / "rep.json").string();
    const auto a = run("select-columns " + in + " -r 1 --out " + out);
    ASSERT_EQ(a.status, 0);
    EXPECT_TRUE(a.out.empty());
    std::ifstream f(out);
    const auto j = nlohmann::json::parse(f);
    EXPECT_EQ(j["col_indices"], nlohmann::json({1}));
    EXPECT_EQ(j["command"], "select-columns");
}

TEST_F(Cli, DeterministicApartFromWallTime) {
    const auto in = example();
    for (const std::string cmd : {"select-columns " + in + " -r 2", "skeleton " + in + " -r 2 --mode cross",
                                  "skeleton " + in + " -r 2 --mode spectral --rho 2"}) {
        const auto a = run(cmd), b = run(cmd);
        ASSERT_EQ(a.status, 0) << cmd;
        EXPECT_EQ(without_time(nlohmann::json::parse(a.out)), without_time(nlohmann::json::parse(b.out))) << cmd;
    }
}

TEST_F(Cli, SurrogateFileShapes) {
    const auto in = example();
    const auto rows = file("v.mtx", "%%MatrixMarket matrix array real general\n1 4\n0\n0\n0\n1\n");
    const auto r = run("select-columns " + in + " -r 1 --surrogate " + rows);
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["col_indices"], nlohmann::json({4}));
    const auto bad = file("bad.csv", "1,2\n3,4\n");
    EXPECT_EQ(run("select-columns " + in + " -r 1 --surrogate " + bad).status, 2);
}

TEST_F(Cli, SkeletonModes) {
    const auto in = example();
    for (const std::string mode : {"projective", "cross", "spectral"}) {
        const auto r = run("skeleton " + in + " -r 2 --mode " + mode);
        ASSERT_EQ(r.status, 0) << mode;
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_EQ(j["row_indices"].size(), 2u);
        EXPECT_EQ(j["col_indices"].size(), 2u);
        EXPECT_TRUE(j["all_pass"].get<bool>()) << mode;
    }
    EXPECT_EQ(run("skeleton " + in + " -r 2 --mode bogus").status, 2);
}

TEST_F(Cli, SubmatrixIdentityBlock) {
    const auto v = file("v.csv", "1,0,0,0\n0,1,0,0\n0,0,1,0\n");
    const auto r = run("submatrix " + v);
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["col_indices"], nlohmann::json({1, 2, 3}));
    EXPECT_NEAR(j["errors"]["inv_fro"].get<double>(), std::sqrt(3.0), 1e-12);
    EXPECT_TRUE(j["all_pass"].get<bool>());
}

TEST_F(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(run("select-columns " + file("c.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n") +
                  " -r 1")
                  .status,
              2);
    EXPECT_EQ(run("select-columns " + file("c.csv", "1,2\n3\n") + " -r 1").status, 2);
    EXPECT_EQ(run("submatrix " + file("n.csv", "1,0,0\n0,2,0\n")).status, 2);
    EXPECT_EQ(run("select-columns " + example() + " -r 9").status, 2);
    EXPECT_EQ(run("select-columns " + (dir / "missing.csv").string() + " -r 1").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("select-columns " + example() + " -r 1 --format xml").status, 2);
}

TEST_F(Cli, DegeneracyExitsThree) {
    EXPECT_EQ(run("select-columns " + file("r1.csv", "1,1\n1,1\n") + " -r 2").status, 3);
    const auto a = file("a.csv", "1,1,0\n2,2,0\n0,0,1\n");
    const auto z = file("z.csv", "1,0,0\n0,1,0\n0,0,0\n");
    EXPECT_EQ(run("skeleton " + a + " -r 2 --mode cross --surrogate " + z).status, 3);
}

TEST_F(Cli, BenchKahanCsv) {
    const auto r = run("bench-kahan --rmax 4 --out -");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "r,ratio_alg1,ratio_pivqr,bound_sqrt_r_plus_1");
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}
