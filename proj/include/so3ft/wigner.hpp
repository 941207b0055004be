#pragma once

// Real Wigner d-matrices d^l(beta) for all degrees below a bandwidth.
//
// Interior entries come from the three-term recursion in the degree,
//
//   d^l_{mn} = l(2l-1) / sqrt((l^2-m^2)(l^2-n^2))
//              * [ (cos b - mn / (l(l-1))) d^{l-1}_{mn}
//                  - sqrt(((l-1)^2-m^2)((l-1)^2-n^2)) / ((l-1)(2l-1)) d^{l-2}_{mn} ],
//
// and the four edges (|m| = l or |n| = l) from the closed-form product of
// half-angle powers. Factorial ratios are evaluated with lgamma.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "so3ft/geometry.hpp"

namespace so3ft {

namespace detail {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_binomial(int n, int k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// sqrt(binom(2l, k)) * cos(b/2)^cos_power * sin(b/2)^sin_power in log space;
/// 0^0 is taken as 1.
inline double half_angle_product(int l, int k, int cos_power, int sin_power, double log_c,
                                 double log_s) {
  double lg = 0.5 * log_binomial(2 * l, k);
  if (cos_power > 0) lg += cos_power * log_c;
  if (sin_power > 0) lg += sin_power * log_s;
  return std::exp(lg);
}

inline double check_beta(double beta) {
  if (!std::isfinite(beta) || beta < -1e-12 || beta > kPi + 1e-12) {
    throw std::domain_error("wigner: beta=" + std::to_string(beta) + " outside [0, pi]");
  }
  return std::clamp(beta, 0.0, kPi);
}

}  // namespace detail

/// d^l(beta) for l = 0 .. bandwidth-1. Block l is (2l+1)x(2l+1) with row m
/// and column n, both ascending from -l.
class WignerDStack {
 public:
  WignerDStack() = default;
  WignerDStack(int bandwidth, double beta) : bandwidth_(bandwidth), beta_(detail::check_beta(beta)) {
    if (bandwidth < 1) throw std::invalid_argument("wigner_d_stack: bandwidth must be >= 1");
    compute();
  }

  int bandwidth() const { return bandwidth_; }
  double beta() const { return beta_; }

  const Eigen::MatrixXd& block(int l) const { return blocks_[static_cast<std::size_t>(l)]; }

  double operator()(int l, int m, int n) const { return blocks_[static_cast<std::size_t>(l)](m + l, n + l); }

 private:
  void compute() {
    blocks_.resize(static_cast<std::size_t>(bandwidth_));
    const double cb = std::cos(beta_);
    const double c = std::cos(beta_ / 2.0);
    const double s = std::sin(beta_ / 2.0);
    const double log_c = std::log(c);
    const double log_s = std::log(s);

    blocks_[0] = Eigen::MatrixXd::Constant(1, 1, 1.0);
    for (int l = 1; l < bandwidth_; ++l) {
      const int dim = 2 * l + 1;
      Eigen::MatrixXd& d = blocks_[static_cast<std::size_t>(l)];
      d.setZero(dim, dim);

      if (l >= 2) {
        const Eigen::MatrixXd& d1 = blocks_[static_cast<std::size_t>(l - 1)];
        const Eigen::MatrixXd* d2 = &blocks_[static_cast<std::size_t>(l - 2)];
        const double ld = l;
        const double a = ld * (2.0 * ld - 1.0);
        const double b = 1.0 / ((ld - 1.0) * (2.0 * ld - 1.0));
        for (int m = -(l - 1); m <= l - 1; ++m) {
          for (int n = -(l - 1); n <= l - 1; ++n) {
            const double mm = m, nn = n;
            double v = (cb - mm * nn / (ld * (ld - 1.0))) * d1(m + l - 1, n + l - 1);
            if (std::abs(m) <= l - 2 && std::abs(n) <= l - 2) {
              const double lm1 = ld - 1.0;
              v -= std::sqrt((lm1 * lm1 - mm * mm) * (lm1 * lm1 - nn * nn)) * b *
                   (*d2)(m + l - 2, n + l - 2);
            }
            d(m + l, n + l) = a / std::sqrt((ld * ld - mm * mm) * (ld * ld - nn * nn)) * v;
          }
        }
      } else {
        d(1, 1) = cb;
      }

      // Edges. With c = cos(b/2), s = sin(b/2) and C(k) = sqrt(binom(2l, k)):
      //   d_{l,n}  = (-1)^{l-n} C(l+n) c^{l+n} s^{l-n}
      //   d_{-l,n} =            C(l-n) c^{l-n} s^{l+n}
      //   d_{m,l}  =            C(l+m) c^{l+m} s^{l-m}
      //   d_{m,-l} = (-1)^{l+m} C(l-m) c^{l-m} s^{l+m}
      for (int n = -l; n <= l; ++n) {
        const double sign = ((l - n) % 2 == 0) ? 1.0 : -1.0;
        d(2 * l, n + l) = sign * detail::half_angle_product(l, l + n, l + n, l - n, log_c, log_s);
        d(0, n + l) = detail::half_angle_product(l, l - n, l - n, l + n, log_c, log_s);
      }
      for (int m = -l + 1; m <= l - 1; ++m) {
        const double sign = ((l + m) % 2 == 0) ? 1.0 : -1.0;
        d(m + l, 2 * l) = detail::half_angle_product(l, l + m, l + m, l - m, log_c, log_s);
        d(m + l, 0) = sign * detail::half_angle_product(l, l - m, l - m, l + m, log_c, log_s);
      }
    }
  }

  int bandwidth_ = 0;
  double beta_ = 0.0;
  std::vector<Eigen::MatrixXd> blocks_;
};

inline WignerDStack wigner_d_stack(int bandwidth, double beta) { return WignerDStack(bandwidth, beta); }

inline double wigner_d_entry(int l, int m, int n, double beta) {
  if (l < 0 || std::abs(m) > l || std::abs(n) > l) {
    throw std::out_of_range("wigner_d_entry: index (" + std::to_string(l) + "," + std::to_string(m) +
                            "," + std::to_string(n) + ") out of range");
  }
  return WignerDStack(l + 1, beta)(l, m, n);
}

}  // namespace so3ft
