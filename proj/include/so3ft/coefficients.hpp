#pragma once

// Containers for Fourier parameters and sample sets.

#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace so3ft {

enum class Flavor { real, complex };

inline std::string to_string(Flavor f) { return f == Flavor::real ? "real" : "complex"; }

inline Flavor parse_flavor(const std::string& s) {
  if (s == "real") return Flavor::real;
  if (s == "complex") return Flavor::complex;
  throw std::invalid_argument("unknown flavor '" + s + "' (expected real or complex)");
}

/// Largest bandwidth accepted from files and the command line.
inline constexpr int kMaxBandwidth = 256;

namespace detail {
template <class Scalar>
inline constexpr bool is_complex_v = !std::is_same_v<Scalar, double>;

inline void check_bandwidth(int bandwidth, const char* who) {
  if (bandwidth < 1) throw std::invalid_argument(std::string(who) + ": bandwidth must be >= 1");
}

template <class Scalar>
Scalar uniform_entry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if constexpr (is_complex_v<Scalar>) {
    const double re = u(rng);
    return {re, u(rng)};
  } else {
    return u(rng);
  }
}
}  // namespace detail

/// Band-limited Fourier parameters on SO(3): one (2l+1) x (2l+1) block per
/// degree l < bandwidth, entry (m + l, n + l).
template <class Scalar>
class SO3Coefficients {
 public:
  using scalar_type = Scalar;
  using Block = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  static constexpr Flavor flavor = detail::is_complex_v<Scalar> ? Flavor::complex : Flavor::real;

  SO3Coefficients() = default;

  explicit SO3Coefficients(int bandwidth) : bandwidth_(bandwidth) {
    detail::check_bandwidth(bandwidth, "SO3Coefficients");
    blocks_.reserve(static_cast<std::size_t>(bandwidth));
    for (int l = 0; l < bandwidth; ++l) blocks_.push_back(Block::Zero(2 * l + 1, 2 * l + 1));
  }

  /// Entries uniform in [-1, 1] (both parts for complex).
  static SO3Coefficients random(int bandwidth, std::mt19937_64& rng) {
    SO3Coefficients c(bandwidth);
    for (auto& b : c.blocks_)
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, j) = detail::uniform_entry<Scalar>(rng);
    return c;
  }

  int bandwidth() const { return bandwidth_; }

  Block& block(int l) { return blocks_.at(static_cast<std::size_t>(l)); }
  const Block& block(int l) const { return blocks_.at(static_cast<std::size_t>(l)); }

  Scalar& operator()(int l, int m, int n) { return blocks_[static_cast<std::size_t>(l)](m + l, n + l); }
  const Scalar& operator()(int l, int m, int n) const { return blocks_[static_cast<std::size_t>(l)](m + l, n + l); }

  Scalar& at(int l, int m, int n) {
    check_index(l, m, n);
    return (*this)(l, m, n);
  }
  const Scalar& at(int l, int m, int n) const {
    check_index(l, m, n);
    return (*this)(l, m, n);
  }

  /// Sum over l of the Frobenius norm of the block difference.
  double distance(const SO3Coefficients& other) const {
    if (other.bandwidth_ != bandwidth_) throw std::invalid_argument("SO3Coefficients::distance: bandwidth mismatch");
    double sum = 0.0;
    for (int l = 0; l < bandwidth_; ++l) sum += (block(l) - other.block(l)).norm();
    return sum;
  }

  friend bool operator==(const SO3Coefficients& a, const SO3Coefficients& b) {
    if (a.bandwidth_ != b.bandwidth_) return false;
    for (int l = 0; l < a.bandwidth_; ++l)
      if (a.block(l) != b.block(l)) return false;
    return true;
  }

 private:
  void check_index(int l, int m, int n) const {
    if (l < 0 || l >= bandwidth_ || m < -l || m > l || n < -l || n > l)
      throw std::out_of_range("SO3Coefficients: index (" + std::to_string(l) + ", " + std::to_string(m) + ", " +
                              std::to_string(n) + ") outside bandwidth " + std::to_string(bandwidth_));
  }

  int bandwidth_ = 0;
  std::vector<Block> blocks_;
};

using RealCoefficients = SO3Coefficients<double>;
using ComplexCoefficients = SO3Coefficients<std::complex<double>>;

/// Samples on the (2B)^3 grid, row-major in (j1 for alpha, k for beta, j2 for gamma).
template <class Scalar>
class SO3Samples {
 public:
  using scalar_type = Scalar;

  SO3Samples() = default;
  explicit SO3Samples(int bandwidth) : bandwidth_(bandwidth) {
    detail::check_bandwidth(bandwidth, "SO3Samples");
    const std::size_t n = static_cast<std::size_t>(2 * bandwidth);
    values_.assign(n * n * n, Scalar(0));
  }

  int bandwidth() const { return bandwidth_; }
  int side() const { return 2 * bandwidth_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int j1, int k, int j2) const {
    const std::size_t n = static_cast<std::size_t>(side());
    return (static_cast<std::size_t>(j1) * n + static_cast<std::size_t>(k)) * n + static_cast<std::size_t>(j2);
  }

  Scalar& operator()(int j1, int k, int j2) { return values_[index(j1, k, j2)]; }
  const Scalar& operator()(int j1, int k, int j2) const { return values_[index(j1, k, j2)]; }

  std::vector<Scalar>& values() { return values_; }
  const std::vector<Scalar>& values() const { return values_; }

  friend bool operator==(const SO3Samples& a, const SO3Samples& b) {
    return a.bandwidth_ == b.bandwidth_ && a.values_ == b.values_;
  }

 private:
  int bandwidth_ = 0;
  std::vector<Scalar> values_;
};

using RealSamples = SO3Samples<double>;
using ComplexSamples = SO3Samples<std::complex<double>>;

/// Real Fourier parameters on the sphere: one vector of length 2l+1 per l,
/// with f(x) = sum_l (F^l)^T S^l(x).
class S2Coefficients {
 public:
  static constexpr Flavor flavor = Flavor::real;

  S2Coefficients() = default;
  explicit S2Coefficients(int bandwidth) : bandwidth_(bandwidth) {
    detail::check_bandwidth(bandwidth, "S2Coefficients");
    for (int l = 0; l < bandwidth; ++l) blocks_.push_back(Eigen::VectorXd::Zero(2 * l + 1));
  }

  static S2Coefficients random(int bandwidth, std::mt19937_64& rng) {
    S2Coefficients c(bandwidth);
    for (auto& b : c.blocks_)
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = detail::uniform_entry<double>(rng);
    return c;
  }

  int bandwidth() const { return bandwidth_; }
  Eigen::VectorXd& block(int l) { return blocks_.at(static_cast<std::size_t>(l)); }
  const Eigen::VectorXd& block(int l) const { return blocks_.at(static_cast<std::size_t>(l)); }
  double& operator()(int l, int m) { return blocks_[static_cast<std::size_t>(l)](m + l); }
  double operator()(int l, int m) const { return blocks_[static_cast<std::size_t>(l)](m + l); }

  double distance(const S2Coefficients& other) const {
    if (other.bandwidth_ != bandwidth_) throw std::invalid_argument("S2Coefficients::distance: bandwidth mismatch");
    double sum = 0.0;
    for (int l = 0; l < bandwidth_; ++l) sum += (block(l) - other.block(l)).norm();
    return sum;
  }

 private:
  int bandwidth_ = 0;
  std::vector<Eigen::VectorXd> blocks_;
};

/// Samples on the 2B x 2B sphere grid, row-major in (k for theta, j for phi),
/// theta_k = pi (2k+1) / (4B), phi_j = pi j / B.
class S2Samples {
 public:
  S2Samples() = default;
  explicit S2Samples(int bandwidth) : bandwidth_(bandwidth) {
    detail::check_bandwidth(bandwidth, "S2Samples");
    values_.assign(static_cast<std::size_t>(4 * bandwidth * bandwidth), 0.0);
  }

  int bandwidth() const { return bandwidth_; }
  int side() const { return 2 * bandwidth_; }
  double& operator()(int k, int j) { return values_[static_cast<std::size_t>(k * side() + j)]; }
  double operator()(int k, int j) const { return values_[static_cast<std::size_t>(k * side() + j)]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  int bandwidth_ = 0;
  std::vector<double> values_;
};

}  // namespace so3ft
