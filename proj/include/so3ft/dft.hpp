#pragma once

// Exponential sums on the periodic (2B)-point grid:
//
//   out[p] = sum_j in[j] exp(sign * 2 pi i p j / N)                  (1-D)
//   out[p][q] = sum_{j1,j2} in[j1][j2] exp(sign * 2 pi i (p j1 + q j2) / N)   (2-D)
//
// No normalisation is applied. Negative frequencies live at index p mod N.
// The fast backend is Eigen's FFT module; the naive backend is a direct sum
// kept as an oracle. Instances hold scratch space and are not shared between
// threads.

#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "so3ft/geometry.hpp"

namespace so3ft {

enum class DftBackend { fast, naive };

class Dft1D {
 public:
  using cdouble = std::complex<double>;

  explicit Dft1D(int n, DftBackend backend = DftBackend::fast) : n_(n), backend_(backend) {
    if (n < 1) throw std::invalid_argument("Dft1D: size must be >= 1");
    fft_.SetFlag(Eigen::FFT<double>::Unscaled);
    if (backend_ == DftBackend::naive) {
      twiddle_.resize(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) twiddle_[static_cast<std::size_t>(j)] = std::polar(1.0, kTwoPi * j / n);
    }
  }

  int size() const { return n_; }

  /// in and out may not alias.
  void transform(const cdouble* in, cdouble* out, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("Dft1D: sign must be +1 or -1");
    if (n_ == 1) {
      out[0] = in[0];
      return;
    }
    if (backend_ == DftBackend::fast) {
      if (sign > 0) fft_.inv(out, in, n_);
      else fft_.fwd(out, in, n_);
      return;
    }
    for (int p = 0; p < n_; ++p) {
      cdouble acc = 0.0;
      for (int j = 0; j < n_; ++j) {
        const cdouble w = twiddle_[static_cast<std::size_t>((static_cast<long>(p) * j) % n_)];
        acc += in[j] * (sign > 0 ? w : std::conj(w));
      }
      out[p] = acc;
    }
  }

 private:
  int n_;
  DftBackend backend_;
  Eigen::FFT<double> fft_;
  std::vector<cdouble> twiddle_;
};

/// Square N x N transform on row-major data, done as rows then columns.
class Dft2D {
 public:
  using cdouble = std::complex<double>;

  explicit Dft2D(int n, DftBackend backend = DftBackend::fast)
      : n_(n), line_(n, backend), tmp_(static_cast<std::size_t>(n) * n), col_in_(static_cast<std::size_t>(n)),
        col_out_(static_cast<std::size_t>(n)) {}

  int size() const { return n_; }

  void transform(const cdouble* in, cdouble* out, int sign) {
    const std::size_t n = static_cast<std::size_t>(n_);
    for (std::size_t r = 0; r < n; ++r) line_.transform(in + r * n, tmp_.data() + r * n, sign);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t r = 0; r < n; ++r) col_in_[r] = tmp_[r * n + c];
      line_.transform(col_in_.data(), col_out_.data(), sign);
      for (std::size_t r = 0; r < n; ++r) out[r * n + c] = col_out_[r];
    }
  }

 private:
  int n_;
  Dft1D line_;
  std::vector<cdouble> tmp_, col_in_, col_out_;
};

}  // namespace so3ft
