// Drives the built command-line tool as a subprocess.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "so3ft/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(SO3FT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size() + 1));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("so3ft_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RoundtripReportsErrorAndStatus) {
  const Outcome ok = run("roundtrip -B 8 --seed 3");
  EXPECT_EQ(ok.code, 0);
  EXPECT_LT(field(ok.out, "error"), 1e-12);
  EXPECT_EQ(run("roundtrip -B 1").code, 0);
  EXPECT_LT(field(run("roundtrip -B 1").out, "error"), 1e-15);
  EXPECT_EQ(run("roundtrip -B 8 --tol 1e-30").code, 2);
  EXPECT_EQ(run("roundtrip -B 8 --flavor complex").code, 0);
}

TEST_F(Cli, ConstBuiltinIsSingleCoefficient) {
  const Outcome r = run("fft --builtin const -B 4");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  const auto c = std::get<so3ft::RealCoefficients>(so3ft::read_so3_coefficients(in));
  EXPECT_NEAR(c(0, 0, 0), 1.0, 1e-14);
  double rest = 0.0;
  for (int l = 1; l < 4; ++l) rest += c.block(l).norm();
  EXPECT_LT(rest, 1e-13);
}

TEST_F(Cli, TraceBuiltinLivesInDegreeOne) {
  const Outcome r = run("fft --builtin trace -B 8");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  const auto c = std::get<so3ft::RealCoefficients>(so3ft::read_so3_coefficients(in));
  EXPECT_LT((c.block(1) - Eigen::Matrix3d::Identity() / 3.0).norm(), 1e-13);
  for (int l = 0; l < 8; ++l)
    if (l != 1) EXPECT_LT(c.block(l).norm(), 1e-13);
}

TEST_F(Cli, FileRoundTripIsStable) {
  ASSERT_EQ(run("fft --builtin random -B 4 --seed 9 --out " + path("c1.txt")).code, 0);
  ASSERT_EQ(run("ifft --in " + path("c1.txt") + " --out " + path("s.txt")).code, 0);
  ASSERT_EQ(run("fft --in " + path("s.txt") + " --out " + path("c2.txt")).code, 0);
  std::ifstream a(path("c1.txt")), b(path("c2.txt"));
  const auto c1 = std::get<so3ft::RealCoefficients>(so3ft::read_so3_coefficients(a));
  const auto c2 = std::get<so3ft::RealCoefficients>(so3ft::read_so3_coefficients(b));
  EXPECT_LT(c1.distance(c2), 1e-12);
}

TEST_F(Cli, MalformedInputExitsOne) {
  std::ofstream(path("bad.txt")) << "SO3FT v1 B=2 flavor=real\n0 0 0 1\n5 0 0 1\n";
  EXPECT_EQ(run("ifft --in " + path("bad.txt")).code, 1);
  EXPECT_EQ(run("ifft --in " + path("missing.txt")).code, 1);
  EXPECT_EQ(run("roundtrip --flavor quaternion").code, 1);
  EXPECT_EQ(run("roundtrip -B 0").code, 1);
  EXPECT_EQ(run("roundtrip --no-such-flag").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST_F(Cli, CgTableRows) {
  const Outcome r = run("cg-table --l1 1 --l2 1");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  int rows = 0;
  for (std::string line; std::getline(in, line); ++rows) {
    std::istringstream ls(line);
    int l1, l2, l, m, m1, m2;
    double re, im;
    ASSERT_TRUE(ls >> l1 >> l2 >> l >> m >> m1 >> m2 >> re >> im) << line;
    EXPECT_EQ(l1, 1);
    EXPECT_GT(std::abs(re) + std::abs(im), 1e-15);
  }
  EXPECT_GT(rows, 9);
}

TEST_F(Cli, MatchRecoversRotation) {
  const Outcome r = run("match --rotate 0.5235987755982988 1.0471975511965976 0.7853981633974483 "
                        "--init 0.3 0.3 0.3 -B 16 --out " + path("trace.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(field(r.out, "alpha"), 0.5235987755982988, 1e-3);
  EXPECT_NEAR(field(r.out, "beta"), 1.0471975511965976, 1e-3);
  EXPECT_NEAR(field(r.out, "gamma"), 0.7853981633974483, 1e-3);
  EXPECT_EQ(slurp(path("trace.csv")).rfind("iteration,correlation,gradient_norm,alpha,beta,gamma\n", 0), 0u);

  const Outcome id = run("match --rotate 0 0 0 --init 0 0 0");
  EXPECT_EQ(id.code, 0);
  EXPECT_EQ(field(id.out, "iterations"), 1.0);
}

TEST_F(Cli, MatchNonConvergenceExitsTwo) {
  const Outcome r = run("match --rotate 0.5 1.0 0.7 --max-iters 3");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("converged=no"), std::string::npos);
  EXPECT_NE(r.out.find("alpha="), std::string::npos);
}

TEST_F(Cli, MultistartFromBadStart) {
  // The truth composed with a half turn about e3 stalls a single run.
  const std::string rot = "--rotate 0.5235987755982988 1.0471975511965976 0.7853981633974483 -B 8 --seed 6";
  const Outcome single = run("match " + rot + " --init 0.5235987755982988 1.0471975511965976 3.8853981633974483");
  const Outcome multi =
      run("match " + rot + " --init 0.5235987755982988 1.0471975511965976 3.8853981633974483 --multistart 8");
  EXPECT_GT(std::abs(field(single.out, "gamma") - 0.7853981633974483), 0.5);
  ASSERT_EQ(multi.code, 0);
  EXPECT_NEAR(field(multi.out, "gamma"), 0.7853981633974483, 1e-4);
}

TEST_F(Cli, IngestAndMatchGrids) {
  {
    std::ofstream raw(path("raw.csv"));
    raw << "lat,lon,value\n";
    for (int i = 0; i <= 36; ++i)
      for (int j = 0; j < 72; ++j) {
        const double lat = 90.0 - 5.0 * i, lon = 5.0 * j;
        const double la = lat * M_PI / 180.0, lo = lon * M_PI / 180.0;
        const double v = std::sin(la) + 0.5 * std::cos(la) * std::cos(lo) + 0.3 * std::pow(std::cos(la), 2) * std::sin(2 * lo);
        raw << lat << ',' << lon << ',' << v << '\n';
      }
  }
  ASSERT_EQ(run("ingest --in " + path("raw.csv") + " -B 8 --out " + path("f.grid")).code, 0);
  const std::string grid = slurp(path("f.grid"));
  EXPECT_EQ(grid.rfind("S2GRID v1 B=8\n", 0), 0u);
  EXPECT_EQ(run("ingest --in " + path("raw.csv") + " -B 8").out, grid);

  EXPECT_EQ(run("match --f " + path("f.grid") + " --g " + path("f.grid") + " --init 0 0 0").code, 0);
  EXPECT_EQ(run("match --f " + path("f.grid") + " --g " + path("f.grid") + " -B 4").code, 1);
}

TEST_F(Cli, BenchCsv) {
  const Outcome r = run("bench -B 4 8 --threads 1 2 --repeats 1");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "B,threads,forward_s,inverse_s,speedup");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 5u) << line;
    if (cells[1] == "1") EXPECT_EQ(cells[4], "1");
    EXPECT_GT(std::stod(cells[2]), 0.0);
  }
  EXPECT_EQ(rows, 4);
}
