// Acceptance suite. One PASS/FAIL line per criterion, details indented
// beneath. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "oracles.hpp"
#include "so3ft/so3ft.hpp"

using namespace so3ft;

namespace {

// ---- pinned tolerances ----------------------------------------------------

constexpr double kRoundTripTol8 = 1e-12;
constexpr double kRoundTripTol16 = 1e-11;
constexpr double kRoundTripTol32 = 1e-11;
constexpr double kRoundTripTol64 = 1e-10;
constexpr double kRoundTripSeconds64 = 60.0;

constexpr int kRepMaxDegree = 16;
constexpr int kRepRotations = 100;
constexpr double kRepComplexTol = 1e-11;
constexpr double kRepEntrywiseTol = 1e-12;

constexpr double kWeightTol = 1e-12;

constexpr int kCGProductMaxDegree = 4;
constexpr int kCGRotations = 10;
constexpr double kCGProductTol = 1e-10;
constexpr int kCGUnitaryMaxDegree = 5;
constexpr double kCGUnitaryTol = 1e-12;
constexpr double kCGTableTol = 1e-12;

constexpr int kDerivMaxDegree = 8;
constexpr double kDerivStep = 1e-6;
constexpr double kDerivTol = 1e-6;
constexpr double kCommutatorTol = 1e-12;

constexpr int kMatchBandwidth = 16;
constexpr double kMatchAngleTol = 1e-3;
constexpr int kGradientInstances = 50;
constexpr double kGradientStep = 1e-6;
constexpr double kGradientTol = 1e-6;

constexpr int kNaiveMaxBandwidth = 4;
constexpr double kNaiveTol = 1e-12;
constexpr int kStackMaxDegree = 20;
constexpr double kStackTol = 1e-10;

constexpr int kBenchBandwidth = 64;
constexpr int kBenchRepeats = 3;
constexpr double kMinSpeedup = 1.0;
constexpr double kMinSpeedupAt4 = 1.5;

// ---------------------------------------------------------------------------

struct Report {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { lines.push_back("      " + what); }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class M>
double max_abs(const M& m) {
  return oracle::max_abs(m);
}

double angle_gap(double a, double b) {
  const double d = std::remainder(a - b, kTwoPi);
  return std::abs(d);
}

Report round_trip() {
  Report r;
  const std::pair<int, double> cases[] = {
      {8, kRoundTripTol8}, {16, kRoundTripTol16}, {32, kRoundTripTol32}, {64, kRoundTripTol64}};
  TransformOptions single;
  single.threads = 1;
  for (const auto& [bandwidth, tol] : cases) {
    std::mt19937_64 rng(1000 + bandwidth);
    const RealCoefficients c = RealCoefficients::random(bandwidth, rng);
    const auto t0 = std::chrono::steady_clock::now();
    const double err = forward_real(inverse_real(c, single), single).distance(c);
    const double secs = seconds_since(t0);
    r.check(err <= tol, "B=" + std::to_string(bandwidth) + " error " + sci(err) + " <= " + sci(tol) + " (" +
                            sci(secs) + " s)");
    if (bandwidth == 64)
      r.check(secs < kRoundTripSeconds64, "B=64 single-threaded round trip " + sci(secs) + " s < 60 s");
  }
  return r;
}

Report real_representation() {
  Report r;
  std::mt19937_64 rng(2000);
  double via_complex = 0.0, entrywise = 0.0;
  for (int i = 0; i < kRepRotations; ++i) {
    const EulerAngles e = oracle::random_euler(rng);
    for (int l = 0; l <= kRepMaxDegree; ++l) {
      const RealRepMatrix factored = real_U(l, e);
      const Eigen::MatrixXd d = oracle::wigner_d_matrix(l, e.beta());
      via_complex = std::max(via_complex, max_abs(Eigen::MatrixXd(
                                              factored - oracle::real_U_via_complex_from(d, e.alpha(), e.gamma()))));
      entrywise = std::max(entrywise, max_abs(Eigen::MatrixXd(
                                          oracle::real_U_entrywise_from(d, e.alpha(), e.gamma()) - factored)));
    }
  }
  r.check(via_complex <= kRepComplexTol, "factored U vs conj(T) D T^T: " + sci(via_complex));
  r.check(entrywise <= kRepEntrywiseTol, "entrywise U vs factored U: " + sci(entrywise));
  return r;
}

Report quadrature_weights() {
  Report r;
  for (int bandwidth : {2, 4, 8, 16, 32}) {
    const SampleGrid g = make_grid(bandwidth);
    double worst = 0.0;
    for (int l = 0; l <= 2 * bandwidth - 1; ++l) {
      double s = 0.0;
      for (int k = 0; k < g.size(); ++k)
        s += g.weight[static_cast<std::size_t>(k)] * oracle::legendre(l, std::cos(g.beta[static_cast<std::size_t>(k)]));
      const double expect = l == 0 ? 1.0 / (4.0 * bandwidth * bandwidth) : 0.0;
      worst = std::max(worst, std::abs(s - expect));
    }
    r.check(worst <= kWeightTol, "B=" + std::to_string(bandwidth) + " max deviation " + sci(worst));
  }
  return r;
}

Report clebsch_gordan() {
  Report r;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4000);
  std::vector<EulerAngles> rotations;
  for (int i = 0; i < kCGRotations; ++i) rotations.push_back(oracle::random_euler(rng));
  std::vector<std::vector<RealRepMatrix>> u;
  std::vector<std::vector<ComplexRepMatrix>> dd;
  for (const EulerAngles& e : rotations) {
    u.push_back(real_U_all(2 * kCGProductMaxDegree + 1, e));
    std::vector<ComplexRepMatrix> row;
    for (int l = 0; l <= 2 * kCGProductMaxDegree; ++l) row.push_back(wigner_D(l, e));
    dd.push_back(std::move(row));
  }

  double complex_kron = 0.0, real_kron = 0.0, complex_expand = 0.0, real_expand = 0.0;
  for (int l1 = 0; l1 <= kCGProductMaxDegree; ++l1) {
    for (int l2 = 0; l2 <= kCGProductMaxDegree; ++l2) {
      const Eigen::MatrixXcd& cc = cg_complex_matrix(l1, l2)->entries;
      const Eigen::MatrixXcd& cr = cg_real_matrix(l1, l2)->entries;
      for (std::size_t i = 0; i < rotations.size(); ++i) {
        const Eigen::MatrixXcd lhs = Eigen::kroneckerProduct(dd[i][l1], dd[i][l2]);
        const Eigen::MatrixXcd sum = direct_sum(l1, l2, [&](int l) { return dd[i][l]; });
        complex_kron = std::max(complex_kron, max_abs(Eigen::MatrixXcd(lhs - cc * sum * cc.transpose())));
        const Eigen::MatrixXd rl = Eigen::kroneckerProduct(u[i][l1], u[i][l2]);
        const Eigen::MatrixXd rs = direct_sum(l1, l2, [&](int l) { return u[i][l]; });
        const Eigen::MatrixXcd rr = cr * rs.cast<std::complex<double>>() * cr.adjoint();
        real_kron = std::max({real_kron, max_abs(Eigen::MatrixXd(rl - rr.real())), max_abs(Eigen::MatrixXd(rr.imag()))});
      }
      for (int m1 = -l1; m1 <= l1; ++m1)
        for (int n1 = -l1; n1 <= l1; ++n1)
          for (int m2 = -l2; m2 <= l2; ++m2)
            for (int n2 = -l2; n2 <= l2; ++n2) {
              const auto ct = product_expand_complex(l1, m1, n1, l2, m2, n2);
              const auto rt = product_expand_real(l1, m1, n1, l2, m2, n2);
              for (std::size_t i = 0; i < rotations.size(); ++i) {
                std::complex<double> cs = 0.0;
                for (const auto& t : ct) cs += t.coefficient * dd[i][t.l](t.m + t.l, t.n + t.l);
                complex_expand = std::max(
                    complex_expand, std::abs(dd[i][l1](m1 + l1, n1 + l1) * dd[i][l2](m2 + l2, n2 + l2) - cs));
                double rsum = 0.0;
                for (const auto& t : rt) rsum += t.coefficient * u[i][t.l](t.m + t.l, t.n + t.l);
                real_expand =
                    std::max(real_expand, std::abs(u[i][l1](m1 + l1, n1 + l1) * u[i][l2](m2 + l2, n2 + l2) - rsum));
              }
            }
    }
  }
  r.check(complex_kron <= kCGProductTol, "complex Kronecker identity: " + sci(complex_kron));
  r.check(real_kron <= kCGProductTol, "real Kronecker identity: " + sci(real_kron));
  r.check(complex_expand <= kCGProductTol, "complex entrywise expansion: " + sci(complex_expand));
  r.check(real_expand <= kCGProductTol, "real entrywise expansion: " + sci(real_expand));

  double unitary = 0.0, table = 0.0;
  for (int l1 = 0; l1 <= kCGUnitaryMaxDegree; ++l1)
    for (int l2 = 0; l2 <= kCGUnitaryMaxDegree; ++l2) {
      const Eigen::MatrixXcd& c = cg_real_matrix(l1, l2)->entries;
      const int dim = static_cast<int>(c.rows());
      unitary = std::max(unitary, max_abs(Eigen::MatrixXcd(c * c.adjoint() - Eigen::MatrixXcd::Identity(dim, dim))));
      table = std::max(table, max_abs(Eigen::MatrixXcd(c - cg_real_matrix_triple_product(l1, l2).entries)));
    }
  r.check(unitary <= kCGUnitaryTol, "real c conj(c)^T = I: " + sci(unitary));
  r.check(table <= kCGTableTol, "sign-pattern table vs triple product: " + sci(table));
  r.note("runtime " + sci(seconds_since(t0)) + " s");
  return r;
}

Report derivatives() {
  Report r;
  double real_fd = 0.0, complex_fd = 0.0, real_comm = 0.0, complex_comm = 0.0;
  for (int l = 0; l <= kDerivMaxDegree; ++l) {
    for (Axis a : {Axis::e1, Axis::e2, Axis::e3}) {
      const Vector3 step = kDerivStep * axis_vector(a);
      const Eigen::MatrixXd fdr = (real_U(l, exp_so3(step)) - real_U(l, exp_so3(-step))) / (2.0 * kDerivStep);
      real_fd = std::max(real_fd, max_abs(Eigen::MatrixXd(fdr - deriv_u_real(l, a))));
      const Eigen::MatrixXcd fdc = (wigner_D(l, exp_so3(step)) - wigner_D(l, exp_so3(-step))) / (2.0 * kDerivStep);
      complex_fd = std::max(complex_fd, max_abs(Eigen::MatrixXcd(fdc - deriv_u_complex(l, a))));
    }
    const Eigen::MatrixXd r1 = deriv_u_real(l, Axis::e1), r2 = deriv_u_real(l, Axis::e2), r3 = deriv_u_real(l, Axis::e3);
    real_comm = std::max(real_comm, max_abs(Eigen::MatrixXd(r2 * r3 - r3 * r2 - r1)));
    const Eigen::MatrixXcd c1 = deriv_u_complex(l, Axis::e1), c2 = deriv_u_complex(l, Axis::e2),
                           c3 = deriv_u_complex(l, Axis::e3);
    complex_comm = std::max(complex_comm, max_abs(Eigen::MatrixXcd(c2 * c3 - c3 * c2 - c1)));
  }
  r.check(real_fd <= kDerivTol, "real derivative vs central differences: " + sci(real_fd));
  r.check(complex_fd <= kDerivTol, "complex derivative vs central differences: " + sci(complex_fd));
  r.check(real_comm <= kCommutatorTol, "real [u(e2), u(e3)] = u(e1): " + sci(real_comm));
  r.check(complex_comm <= kCommutatorTol, "complex [u(e2), u(e3)] = u(e1): " + sci(complex_comm));
  return r;
}

Report shape_matching() {
  Report r;
  const EulerAngles truth(kPi / 6.0, kPi / 3.0, kPi / 4.0);
  const S2Coefficients f = synthetic_shape(kMatchBandwidth, 6006);
  const S2Coefficients g = rotate_coefficients(f, euler_to_matrix(truth));
  MatchConfig cfg;
  cfg.initial_guess = EulerAngles(0.3, 0.3, 0.3);
  const MatchResult m = match(f, g, cfg);
  const EulerAngles got = matrix_to_euler(m.rotation);
  const double gap = std::max({angle_gap(got.alpha(), truth.alpha()), angle_gap(got.beta(), truth.beta()),
                               angle_gap(got.gamma(), truth.gamma())});
  r.check(m.trace.converged && gap <= kMatchAngleTol,
          "B=16 recovery: max Euler error " + sci(gap) + " after " + std::to_string(m.trace.records.size()) +
              " iterations, converged=" + (m.trace.converged ? "yes" : "no"));

  std::mt19937_64 rng(6000);
  std::uniform_int_distribution<int> bw(1, kMatchBandwidth);
  double worst = 0.0;
  for (int i = 0; i < kGradientInstances; ++i) {
    const int bandwidth = bw(rng);
    const S2Coefficients a = S2Coefficients::random(bandwidth, rng), b = S2Coefficients::random(bandwidth, rng);
    const RotationMatrix rot = random_rotation(rng);
    const Correlator corr(a, b);
    const Vector3 grad = corr.evaluate(rot).gradient;
    for (int axis = 0; axis < 3; ++axis) {
      const Vector3 e = Vector3::Unit(axis) * kGradientStep;
      const double fd = (corr.evaluate(rot * exp_so3(e)).correlation - corr.evaluate(rot * exp_so3(-e)).correlation) /
                        (2.0 * kGradientStep);
      worst = std::max(worst, std::abs(grad(axis) - fd));
    }
  }
  r.check(worst <= kGradientTol, "gradient vs central differences on 50 instances: " + sci(worst));
  return r;
}

Report oracle_equivalence() {
  Report r;
  std::mt19937_64 rng(7000);
  std::normal_distribution<double> normal;
  double transform = 0.0;
  for (int bandwidth = 1; bandwidth <= kNaiveMaxBandwidth; ++bandwidth) {
    RealSamples s(bandwidth);
    for (double& v : s.values()) v = normal(rng);
    const RealCoefficients fast = forward_real(s), naive = oracle::naive_forward_real(s);
    for (int l = 0; l < bandwidth; ++l)
      transform = std::max(transform, max_abs(Eigen::MatrixXd(fast.block(l) - naive.block(l))));
  }
  r.check(transform <= kNaiveTol, "forward transform vs naive triple sum (B <= 4): " + sci(transform));

  std::uniform_real_distribution<double> beta(0.0, kPi);
  std::vector<double> betas{1e-3, kPi / 2.0, kPi - 1e-3};
  for (int i = 0; i < 20; ++i) betas.push_back(beta(rng));
  double stack = 0.0;
  for (double b : betas) {
    const WignerDStack d(kStackMaxDegree + 1, b);
    for (int l = 0; l <= kStackMaxDegree; ++l)
      stack = std::max(stack, max_abs(Eigen::MatrixXd(d.block(l) - oracle::wigner_d_matrix(l, b))));
  }
  r.check(stack <= kStackTol, "d-matrix recursion vs closed form (l <= 20): " + sci(stack));
  return r;
}

Report concurrency() {
  Report r;
  const unsigned hw = std::thread::hardware_concurrency();
  r.note("hardware threads available: " + std::to_string(hw));

  std::mt19937_64 rng(8000);
  const RealCoefficients c = RealCoefficients::random(kBenchBandwidth, rng);
  TransformOptions o1;
  o1.threads = 1;
  const RealSamples samples = inverse_real(c, o1);

  std::vector<double> times;
  RealCoefficients reference;
  for (int threads : {1, 2, 4}) {
    TransformOptions o;
    o.threads = threads;
    std::vector<double> runs;
    RealCoefficients out;
    for (int rep = 0; rep < kBenchRepeats; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      out = forward_real(samples, o);
      runs.push_back(seconds_since(t0));
    }
    std::sort(runs.begin(), runs.end());
    times.push_back(runs[runs.size() / 2]);
    if (threads == 1) {
      reference = out;
    } else {
      r.check(out == reference, "forward output bit-identical at " + std::to_string(threads) + " threads");
      r.check(inverse_real(c, o) == samples, "inverse output bit-identical at " + std::to_string(threads) + " threads");
    }
  }
  const double s2 = times[0] / times[1], s4 = times[0] / times[2];
  r.note("B=64 forward median of 3: 1 thread " + sci(times[0]) + " s, 2 threads " + sci(times[1]) + " s, 4 threads " +
         sci(times[2]) + " s");
  r.check(s2 >= kMinSpeedup, "speedup at 2 threads " + sci(s2) + " >= 1.0");
  r.check(s4 >= kMinSpeedup && s4 >= kMinSpeedupAt4, "speedup at 4 threads " + sci(s4) + " >= 1.5");
  return r;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Report()>> criteria[] = {
      {"round-trip accuracy and B=64 runtime", round_trip},
      {"real representation three ways", real_representation},
      {"quadrature weight identity", quadrature_weights},
      {"Clebsch-Gordan product identities", clebsch_gordan},
      {"Lie algebra derivatives", derivatives},
      {"shape matching and correlation gradient", shape_matching},
      {"transform and d-matrix oracles", oracle_equivalence},
      {"thread determinism and speedup", concurrency},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    const Report r = run();
    std::printf("criterion %d %s: %s (%.1f s)\n", index++, r.pass ? "PASS" : "FAIL", name, seconds_since(t0));
    for (const auto& line : r.lines) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed;
}
