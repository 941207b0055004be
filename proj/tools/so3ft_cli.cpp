// so3ft command-line tool: transforms, round-trip checks, benchmarks,
// Clebsch-Gordan dumps, elevation ingest and shape matching.
//
// Exit codes: 0 success, 1 input error, 2 non-convergence or tolerance miss.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "so3ft/so3ft.hpp"

using namespace so3ft;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNotConverged = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw InputError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_token(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string t;
    if (ls >> t && t[0] != '#') return t;
  }
  return {};
}

// report values without a signed zero
std::string fmt(double v) { return format_double(v == 0.0 ? 0.0 : v); }

void check_bandwidth(int bandwidth) {
  if (bandwidth < 1 || bandwidth > kMaxBandwidth)
    throw InputError("bandwidth must lie in [1, " + std::to_string(kMaxBandwidth) + "]");
}

// ---- fft / ifft ---------------------------------------------------------

struct FftArgs {
  std::string in, builtin, out, flavor = "real";
  int bandwidth = 8;
  std::uint64_t seed = 1;
  int threads = 0;
};

AnySO3Samples builtin_samples(const FftArgs& a, const TransformOptions& opt) {
  check_bandwidth(a.bandwidth);
  const Flavor flavor = parse_flavor(a.flavor);
  if (a.builtin == "trace" || a.builtin == "const") {
    const bool trace = a.builtin == "trace";
    auto f = [trace](const EulerAngles& e) { return trace ? euler_to_matrix(e).matrix().trace() : 1.0; };
    if (flavor == Flavor::real) return sample_function<double>(a.bandwidth, f);
    return sample_function<std::complex<double>>(a.bandwidth, f);
  }
  if (a.builtin == "random") {
    std::mt19937_64 rng(a.seed);
    if (flavor == Flavor::real) return inverse_real(RealCoefficients::random(a.bandwidth, rng), opt);
    return inverse_complex(ComplexCoefficients::random(a.bandwidth, rng), opt);
  }
  throw InputError("unknown builtin '" + a.builtin + "' (expected trace, const or random)");
}

int cmd_fft(const FftArgs& a) {
  const TransformOptions opt{a.threads};
  if (a.in.empty() == a.builtin.empty()) throw InputError("give exactly one of --in or --builtin");
  Sink sink(a.out);
  if (!a.builtin.empty()) {
    const AnySO3Samples s = builtin_samples(a, opt);
    if (const auto* r = std::get_if<RealSamples>(&s)) write_coefficients(sink.stream(), forward_real(*r, opt));
    else write_coefficients(sink.stream(), forward_complex(std::get<ComplexSamples>(s), opt));
    return kOk;
  }
  const std::string text = read_file(a.in);
  std::istringstream in(text);
  if (first_token(text) == "S2GRID") {
    write_coefficients(sink.stream(), forward_s2_real(read_s2_samples(in)));
    return kOk;
  }
  const AnySO3Samples s = read_so3_samples(in);
  if (const auto* r = std::get_if<RealSamples>(&s)) write_coefficients(sink.stream(), forward_real(*r, opt));
  else write_coefficients(sink.stream(), forward_complex(std::get<ComplexSamples>(s), opt));
  return kOk;
}

int cmd_ifft(const FftArgs& a) {
  const TransformOptions opt{a.threads};
  const std::string text = read_file(a.in);
  std::istringstream in(text);
  Sink sink(a.out);
  if (first_token(text) == "S2FT") {
    write_samples(sink.stream(), inverse_s2_real(read_s2_coefficients(in)));
    return kOk;
  }
  const AnySO3Coefficients c = read_so3_coefficients(in);
  if (const auto* r = std::get_if<RealCoefficients>(&c)) write_samples(sink.stream(), inverse_real(*r, opt));
  else write_samples(sink.stream(), inverse_complex(std::get<ComplexCoefficients>(c), opt));
  return kOk;
}

// ---- roundtrip / bench --------------------------------------------------

struct RoundtripArgs {
  int bandwidth = 8;
  std::uint64_t seed = 1;
  std::string flavor = "real";
  double tol = 1e-10;
  int threads = 0;
};

double roundtrip_error(int bandwidth, Flavor flavor, std::uint64_t seed, const TransformOptions& opt) {
  std::mt19937_64 rng(seed);
  if (flavor == Flavor::real) {
    const RealCoefficients c = RealCoefficients::random(bandwidth, rng);
    return forward_real(inverse_real(c, opt), opt).distance(c);
  }
  const ComplexCoefficients c = ComplexCoefficients::random(bandwidth, rng);
  return forward_complex(inverse_complex(c, opt), opt).distance(c);
}

int cmd_roundtrip(const RoundtripArgs& a) {
  check_bandwidth(a.bandwidth);
  const Flavor flavor = parse_flavor(a.flavor);
  const double err = roundtrip_error(a.bandwidth, flavor, a.seed, TransformOptions{a.threads});
  std::cout << "B=" << a.bandwidth << " flavor=" << to_string(flavor) << " error=" << fmt(err)
            << " tol=" << fmt(a.tol) << (err < a.tol ? " ok" : " exceeded") << '\n';
  return err < a.tol ? kOk : kNotConverged;
}

struct BenchArgs {
  std::vector<int> bandwidths{8, 16, 32, 64};
  std::vector<int> threads{1, 2, 4};
  int repeats = 10;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  if (a.repeats < 1) throw InputError("--repeats must be >= 1");
  for (int t : a.threads)
    if (t < 1) throw InputError("thread counts must be >= 1");
  Sink sink(a.out);
  auto& os = sink.stream();
  os << "B,threads,forward_s,inverse_s,speedup\n";
  using clock = std::chrono::steady_clock;
  for (int bandwidth : a.bandwidths) {
    check_bandwidth(bandwidth);
    std::mt19937_64 rng(a.seed);
    const RealCoefficients c = RealCoefficients::random(bandwidth, rng);
    const RealSamples s = inverse_real(c);
    std::optional<double> base;
    for (int t : a.threads) {
      const TransformOptions opt{t};
      double fwd = 0.0, inv = 0.0;
      for (int r = 0; r < a.repeats; ++r) {
        const auto t0 = clock::now();
        const RealCoefficients f = forward_real(s, opt);
        const auto t1 = clock::now();
        const RealSamples g = inverse_real(c, opt);
        const auto t2 = clock::now();
        fwd += std::chrono::duration<double>(t1 - t0).count();
        inv += std::chrono::duration<double>(t2 - t1).count();
      }
      fwd /= a.repeats;
      inv /= a.repeats;
      if (!base) base = fwd;  // speedup is relative to the first thread count listed
      os << bandwidth << ',' << t << ',' << fmt(fwd) << ',' << fmt(inv) << ',' << fmt(*base / fwd) << '\n';
    }
  }
  return kOk;
}

// ---- cg-table -----------------------------------------------------------

struct CgArgs {
  int l1 = 1, l2 = 1;
  std::string flavor = "real";
  std::string out;
};

int cmd_cg_table(const CgArgs& a) {
  if (a.l1 < 0 || a.l2 < 0) throw InputError("degrees must be non-negative");
  const Flavor flavor = parse_flavor(a.flavor);
  const auto c = flavor == Flavor::real ? cg_real_matrix(a.l1, a.l2) : cg_complex_matrix(a.l1, a.l2);
  Sink sink(a.out);
  auto& os = sink.stream();
  for (int l = std::abs(a.l1 - a.l2); l <= a.l1 + a.l2; ++l)
    for (int m = -l; m <= l; ++m)
      for (int m1 = -a.l1; m1 <= a.l1; ++m1)
        for (int m2 = -a.l2; m2 <= a.l2; ++m2) {
          const std::complex<double> v = (*c)(l, m, m1, m2);
          if (std::abs(v) <= 1e-15) continue;
          os << a.l1 << ' ' << a.l2 << ' ' << l << ' ' << m << ' ' << m1 << ' ' << m2 << ' ' << fmt(v.real()) << ' '
             << fmt(v.imag()) << '\n';
        }
  return kOk;
}

// ---- ingest / match -----------------------------------------------------

struct IngestArgs {
  std::string in, out;
  int bandwidth = 16;
  bool raw_values = false;
};

// S2GRID files are taken as they are; anything else is a raw grid to resample.
ElevationGrid load_grid(const std::string& path, std::optional<int> bandwidth, bool normalise) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  if (first_token(text) == "S2GRID") {
    ElevationGrid g = read_s2_samples(in);
    if (bandwidth && g.bandwidth() != *bandwidth)
      throw InputError("'" + path + "' has B=" + std::to_string(g.bandwidth()) + ", expected " +
                       std::to_string(*bandwidth));
    return g;
  }
  if (!bandwidth) throw InputError("raw grid '" + path + "' needs --bandwidth");
  check_bandwidth(*bandwidth);
  return ingest_elevation(in, *bandwidth, normalise);
}

int cmd_ingest(const IngestArgs& a) {
  const ElevationGrid g = load_grid(a.in, a.bandwidth, !a.raw_values);
  Sink sink(a.out);
  write_samples(sink.stream(), g);
  return kOk;
}

struct MatchArgs {
  std::string f, g, out;
  std::vector<double> rotate, init{0.3, 0.3, 0.3};
  std::optional<int> bandwidth;
  double step = 5e-3, tol = 1e-6;
  int max_iters = 10000, multistart = 0;
  std::uint64_t seed = 1;
  bool raw_values = false;
};

int cmd_match(const MatchArgs& a) {
  if (!a.rotate.empty() && !a.g.empty()) throw InputError("give at most one of --g and --rotate");
  if (a.rotate.empty() && a.g.empty()) throw InputError("give --g or --rotate");
  if (a.multistart < 0) throw InputError("--multistart must be >= 0");

  S2Coefficients f;
  if (a.f.empty()) {
    const int bandwidth = a.bandwidth.value_or(16);
    check_bandwidth(bandwidth);
    f = synthetic_shape(bandwidth, a.seed);
  } else {
    f = forward_s2_real(load_grid(a.f, a.bandwidth, !a.raw_values));
  }
  S2Coefficients g;
  if (!a.rotate.empty()) {
    g = rotate_coefficients(f, euler_to_matrix({a.rotate[0], a.rotate[1], a.rotate[2]}));
  } else {
    const ElevationGrid gg = load_grid(a.g, f.bandwidth(), !a.raw_values);
    g = forward_s2_real(gg);
  }

  MatchConfig cfg;
  cfg.step = a.step;
  cfg.tolerance = a.tol;
  cfg.max_iters = a.max_iters;
  cfg.initial_guess = EulerAngles(a.init[0], a.init[1], a.init[2]);
  cfg.validate();
  const MatchResult r = a.multistart > 0 ? match_multistart(f, g, cfg, a.multistart, a.seed) : match(f, g, cfg);

  if (!a.out.empty()) {
    Sink sink(a.out);
    auto& os = sink.stream();
    os << "iteration,correlation,gradient_norm,alpha,beta,gamma\n";
    for (const auto& rec : r.trace.records)
      os << rec.iteration << ',' << fmt(rec.correlation) << ',' << fmt(rec.gradient_norm) << ','
         << fmt(rec.angles.alpha()) << ',' << fmt(rec.angles.beta()) << ',' << fmt(rec.angles.gamma()) << '\n';
  }
  const EulerAngles e = matrix_to_euler(r.rotation);
  const MatchRecord& last = r.final_record();
  std::cout << "alpha=" << fmt(e.alpha()) << " beta=" << fmt(e.beta()) << " gamma=" << fmt(e.gamma()) << '\n'
            << "iterations=" << r.trace.records.size() << " correlation=" << fmt(correlation(f, g, r.rotation))
            << " gradient_norm=" << fmt(last.gradient_norm) << '\n'
            << "converged=" << (r.trace.converged ? "yes" : "no") << '\n';
  return r.trace.converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier transforms on SO(3) and spherical shape matching"};
  app.require_subcommand(1);

  FftArgs fa;
  auto* fft = app.add_subcommand("fft", "forward transform of a sample file or builtin function");
  fft->add_option("--in", fa.in, "SO3GRID or S2GRID sample file");
  fft->add_option("--builtin", fa.builtin, "trace | const | random");
  fft->add_option("-B,--bandwidth", fa.bandwidth, "bandwidth for builtins");
  fft->add_option("--flavor", fa.flavor, "real | complex (builtins)");
  fft->add_option("--seed", fa.seed, "seed for the random builtin");
  fft->add_option("--threads", fa.threads, "worker threads (0: default)");
  fft->add_option("--out", fa.out, "output file (default stdout)");

  FftArgs ia;
  auto* ifft = app.add_subcommand("ifft", "inverse transform of a coefficient file onto its grid");
  ifft->add_option("--in", ia.in, "SO3FT or S2FT coefficient file")->required();
  ifft->add_option("--threads", ia.threads, "worker threads (0: default)");
  ifft->add_option("--out", ia.out, "output file (default stdout)");

  RoundtripArgs ra;
  auto* rt = app.add_subcommand("roundtrip", "forward(inverse(F)) for random F; error is sum_l |F^l - G^l|_F");
  rt->add_option("-B,--bandwidth", ra.bandwidth)->capture_default_str();
  rt->add_option("--seed", ra.seed)->capture_default_str();
  rt->add_option("--flavor", ra.flavor)->capture_default_str();
  rt->add_option("--tol", ra.tol, "exit 0 iff error < tol")->capture_default_str();
  rt->add_option("--threads", ra.threads, "worker threads (0: default)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "timing CSV: B,threads,forward_s,inverse_s,speedup");
  bench->add_option("-B,--bandwidth", ba.bandwidths, "bandwidths")->capture_default_str();
  bench->add_option("--threads", ba.threads, "thread counts; speedup is relative to the first")->capture_default_str();
  bench->add_option("--repeats", ba.repeats)->capture_default_str();
  bench->add_option("--seed", ba.seed)->capture_default_str();
  bench->add_option("--out", ba.out, "output file (default stdout)");

  CgArgs ca;
  auto* cg = app.add_subcommand("cg-table", "nonzero Clebsch-Gordan coefficients: l1 l2 l m m1 m2 re im");
  cg->add_option("--l1", ca.l1)->required();
  cg->add_option("--l2", ca.l2)->required();
  cg->add_option("--flavor", ca.flavor, "real | complex harmonics")->capture_default_str();
  cg->add_option("--out", ca.out, "output file (default stdout)");

  IngestArgs ga;
  auto* ingest = app.add_subcommand("ingest", "resample a raw lat/lon grid onto the sphere grid");
  ingest->add_option("--in", ga.in, "CSV (lat, lon, value) or dense ('rows cols' + values)")->required();
  ingest->add_option("-B,--bandwidth", ga.bandwidth)->capture_default_str();
  ingest->add_flag("--no-normalize", ga.raw_values, "keep raw values (default: zero mean, unit max-abs)");
  ingest->add_option("--out", ga.out, "output S2GRID file (default stdout)");

  MatchArgs ma;
  auto* mt = app.add_subcommand("match", "recover the rotation taking f to g");
  mt->add_option("--f", ma.f, "S2GRID or raw grid (default: synthetic shape from --seed)");
  mt->add_option("--g", ma.g, "S2GRID or raw grid");
  mt->add_option("--rotate", ma.rotate, "build g by rotating f: alpha beta gamma")->expected(3);
  mt->add_option("-B,--bandwidth", ma.bandwidth, "bandwidth (synthetic default 16)");
  mt->add_option("--init", ma.init, "initial Euler angles")->expected(3)->capture_default_str();
  mt->add_option("--step", ma.step)->capture_default_str();
  mt->add_option("--tol", ma.tol)->capture_default_str();
  mt->add_option("--max-iters", ma.max_iters)->capture_default_str();
  mt->add_option("--multistart", ma.multistart, "extra uniform random starts")->capture_default_str();
  mt->add_option("--seed", ma.seed)->capture_default_str();
  mt->add_flag("--no-normalize", ma.raw_values, "keep raw values of raw grids");
  mt->add_option("--out", ma.out, "trace CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*fft) return cmd_fft(fa);
    if (*ifft) return cmd_ifft(ia);
    if (*rt) return cmd_roundtrip(ra);
    if (*bench) return cmd_bench(ba);
    if (*cg) return cmd_cg_table(ca);
    if (*ingest) return cmd_ingest(ga);
    if (*mt) return cmd_match(ma);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
