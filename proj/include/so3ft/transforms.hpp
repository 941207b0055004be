#pragma once

// Fourier transforms on SO(3) over the equiangular grid.
//
// Real flavour:    f = sum_l (2l+1) sum_{m,n} F^l_{mn} U^l_{mn},  F^l_{mn} = <U^l_{mn}, f>
// Complex flavour: f = sum_l (2l+1) sum_{m,n} F^l_{mn} D^l_{mn},  F^l_{mn} = <D^l_{mn}, f>
//
// Both forward transforms factor through the per-beta exponential sums
//
//   H^k_{m,n} = sum_{j1,j2} f(alpha_j1, beta_k, gamma_j2) exp(i (m alpha_j1 + n gamma_j2)),
//
// computed with a 2-D FFT on each beta slab. For the real flavour the cosine
// and sine parts of H are combined with the Psi kernel through the product
// formulas for cos(m a) cos(n g) and friends, giving an O(B^4) beta stage.
//
// Work is split into batches of beta slabs. Inside a batch the slab FFTs and
// kernels run in parallel over k, then the degree blocks are accumulated in
// parallel over l with k always summed in ascending order, so results do not
// depend on the worker count or batch size.

#include <algorithm>
#include <complex>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "so3ft/coefficients.hpp"
#include "so3ft/complex_rep.hpp"
#include "so3ft/dft.hpp"
#include "so3ft/grid.hpp"
#include "so3ft/parallel.hpp"
#include "so3ft/real_rep.hpp"
#include "so3ft/wigner.hpp"

namespace so3ft {

struct TransformOptions {
  int threads = 0;  // 0: library default
  DftBackend backend = DftBackend::fast;
  int batch = 16;  // beta slabs held in memory at once
};

/// values(j1, k, j2) = f(alpha_j1, beta_k, gamma_j2).
template <class Scalar = double, class F>
SO3Samples<Scalar> sample_function(int bandwidth, F&& f) {
  const SampleGrid g = make_grid(bandwidth);
  SO3Samples<Scalar> s(bandwidth);
  for (int j1 = 0; j1 < g.size(); ++j1)
    for (int k = 0; k < g.size(); ++k)
      for (int j2 = 0; j2 < g.size(); ++j2) {
        try {
          s(j1, k, j2) = static_cast<Scalar>(f(g.angles(j1, k, j2)));
        } catch (const std::exception& e) {
          throw std::runtime_error("sample_function: evaluation failed at grid index (" + std::to_string(j1) + ", " +
                                   std::to_string(k) + ", " + std::to_string(j2) + "): " + e.what());
        }
      }
  return s;
}

namespace detail {

inline std::size_t wrap_index(int m, int n) { return static_cast<std::size_t>(m < 0 ? m + n : m); }

template <class Scalar>
void gather_slab(const SO3Samples<Scalar>& s, int k, std::vector<std::complex<double>>& out) {
  const int n = s.side();
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) out[static_cast<std::size_t>(j1 * n + j2)] = s(j1, k, j2);
}

// Workspace shared by both forward transforms.
struct SlabBatch {
  int side;
  std::vector<std::vector<std::complex<double>>> sums;  // H^k per slot
  std::vector<std::vector<std::complex<double>>> inputs;  // per thread
  std::vector<Dft2D> dfts;                                // per thread

  SlabBatch(int side_, int slots, int threads, DftBackend backend) : side(side_) {
    const std::size_t area = static_cast<std::size_t>(side) * side;
    sums.assign(static_cast<std::size_t>(slots), std::vector<std::complex<double>>(area));
    inputs.assign(static_cast<std::size_t>(threads), std::vector<std::complex<double>>(area));
    for (int t = 0; t < threads; ++t) dfts.emplace_back(side, backend);
  }

  std::complex<double> at(int slot, int m, int n) const {
    return sums[static_cast<std::size_t>(slot)][wrap_index(m, side) * static_cast<std::size_t>(side) + wrap_index(n, side)];
  }
};

// One beta slab's contribution to the real block of degree l.
inline void accumulate_real_block(Eigen::MatrixXd& block, int l, const SlabBatch& batch, int slot,
                                  const PsiKernel& psi, double weight) {
  for (int m = -l; m <= l; ++m) {
    for (int n = -l; n <= l; ++n) {
      const double p = psi(l, m, n), q = psi(l, -m, n);
      const std::complex<double> hp = batch.at(slot, m, n), hm = batch.at(slot, m, -n);
      double v;
      if ((m >= 0) == (n >= 0)) {
        // cos(m a) cos(n g) and sin(m a) sin(n g) against the cosine sums
        v = 0.5 * (hp.real() + hm.real()) * p - 0.5 * (hm.real() - hp.real()) * q;
      } else {
        // cos(m a) sin(n g) and sin(m a) cos(n g) against the sine sums
        v = 0.5 * (hp.imag() - hm.imag()) * p - 0.5 * (hp.imag() + hm.imag()) * q;
      }
      block(m + l, n + l) += weight * v;
    }
  }
}

template <class Scalar, class Kernel, class MakeKernel, class Accumulate>
void forward_staged(const SO3Samples<Scalar>& samples, const TransformOptions& opt, MakeKernel&& make_kernel,
                    Accumulate&& accumulate) {
  const int bandwidth = samples.bandwidth();
  const int side = samples.side();
  const int threads = resolve_threads(opt.threads);
  const int slots = std::clamp(opt.batch, 1, side);
  const SampleGrid grid = make_grid(bandwidth);
  SlabBatch batch(side, slots, threads, opt.backend);
  std::vector<Kernel> kernels(static_cast<std::size_t>(slots));

  for (int k0 = 0; k0 < side; k0 += slots) {
    const int count = std::min(slots, side - k0);
#pragma omp parallel for num_threads(threads) schedule(static)
    for (int i = 0; i < count; ++i) {
      const int t = thread_index();
      auto& in = batch.inputs[static_cast<std::size_t>(t)];
      gather_slab(samples, k0 + i, in);
      batch.dfts[static_cast<std::size_t>(t)].transform(in.data(), batch.sums[static_cast<std::size_t>(i)].data(), +1);
      kernels[static_cast<std::size_t>(i)] = make_kernel(bandwidth, grid.beta[static_cast<std::size_t>(k0 + i)]);
    }
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
    for (int l = bandwidth - 1; l >= 0; --l) {
      for (int i = 0; i < count; ++i)
        accumulate(l, batch, i, kernels[static_cast<std::size_t>(i)], grid.weight[static_cast<std::size_t>(k0 + i)]);
    }
  }
}

}  // namespace detail

/// Real Fourier parameters of real samples.
inline RealCoefficients forward_real(const RealSamples& samples, const TransformOptions& opt = {}) {
  RealCoefficients out(samples.bandwidth());
  detail::forward_staged<double, PsiKernel>(
      samples, opt, [](int b, double beta) { return PsiKernel(b, beta); },
      [&](int l, const detail::SlabBatch& batch, int slot, const PsiKernel& psi, double w) {
        detail::accumulate_real_block(out.block(l), l, batch, slot, psi, w);
      });
  return out;
}

/// Complex Fourier parameters of real or complex samples.
template <class Scalar>
ComplexCoefficients forward_complex(const SO3Samples<Scalar>& samples, const TransformOptions& opt = {}) {
  ComplexCoefficients out(samples.bandwidth());
  detail::forward_staged<Scalar, WignerDStack>(
      samples, opt, [](int b, double beta) { return WignerDStack(b, beta); },
      [&](int l, const detail::SlabBatch& batch, int slot, const WignerDStack& d, double w) {
        auto& block = out.block(l);
        // conj(D_{mn}) = exp(i m a) d_{mn} exp(i n g)
        for (int m = -l; m <= l; ++m)
          for (int n = -l; n <= l; ++n) block(m + l, n + l) += (w * d(l, m, n)) * batch.at(slot, m, n);
      });
  return out;
}

/// Real synthesis on the full grid.
inline RealSamples inverse_real(const RealCoefficients& coeffs, const TransformOptions& opt = {}) {
  const int bandwidth = coeffs.bandwidth();
  RealSamples out(bandwidth);
  const int side = out.side();
  const int threads = resolve_threads(opt.threads);
  const SampleGrid grid = make_grid(bandwidth);
  const std::size_t area = static_cast<std::size_t>(side) * side;
  const std::complex<double> i1(0.0, 1.0);

#pragma omp parallel num_threads(threads)
  {
    Dft2D dft(side, opt.backend);
    std::vector<std::complex<double>> spec(area), vals(area);
#pragma omp for schedule(static)
    for (int k = 0; k < side; ++k) {
      std::fill(spec.begin(), spec.end(), std::complex<double>(0.0));
      auto cell = [&](int m, int n) -> std::complex<double>& {
        return spec[detail::wrap_index(m, side) * static_cast<std::size_t>(side) + detail::wrap_index(n, side)];
      };
      const PsiKernel psi(bandwidth, grid.beta[static_cast<std::size_t>(k)]);
      for (int l = 0; l < bandwidth; ++l) {
        const auto& block = coeffs.block(l);
        for (int m = -l; m <= l; ++m) {
          for (int n = -l; n <= l; ++n) {
            const double c = (2.0 * l + 1.0) * block(m + l, n + l);
            if (c == 0.0) continue;
            const double p = psi(l, m, n), q = psi(l, -m, n);
            if ((m >= 0) == (n >= 0)) {
              cell(m, n) += c * 0.5 * (p + q);
              cell(m, -n) += c * 0.5 * (p - q);
            } else {
              // sin(t) = Re(-i exp(i t))
              cell(m, n) += -i1 * (c * 0.5 * (p - q));
              cell(m, -n) += i1 * (c * 0.5 * (p + q));
            }
          }
        }
      }
      dft.transform(spec.data(), vals.data(), +1);
      for (int j1 = 0; j1 < side; ++j1)
        for (int j2 = 0; j2 < side; ++j2) out(j1, k, j2) = vals[static_cast<std::size_t>(j1 * side + j2)].real();
    }
  }
  return out;
}

/// Real synthesis at one rotation.
inline double inverse_real(const RealCoefficients& coeffs, const EulerAngles& e) {
  const int bandwidth = coeffs.bandwidth();
  const PsiKernel psi(bandwidth, e.beta());
  double f = 0.0;
  for (int l = 0; l < bandwidth; ++l)
    f += (2.0 * l + 1.0) * coeffs.block(l).cwiseProduct(real_U(psi, l, e.alpha(), e.gamma())).sum();
  return f;
}

/// Complex synthesis on the full grid.
inline ComplexSamples inverse_complex(const ComplexCoefficients& coeffs, const TransformOptions& opt = {}) {
  const int bandwidth = coeffs.bandwidth();
  ComplexSamples out(bandwidth);
  const int side = out.side();
  const int threads = resolve_threads(opt.threads);
  const SampleGrid grid = make_grid(bandwidth);
  const std::size_t area = static_cast<std::size_t>(side) * side;

#pragma omp parallel num_threads(threads)
  {
    Dft2D dft(side, opt.backend);
    std::vector<std::complex<double>> spec(area), vals(area);
#pragma omp for schedule(static)
    for (int k = 0; k < side; ++k) {
      std::fill(spec.begin(), spec.end(), std::complex<double>(0.0));
      const WignerDStack d(bandwidth, grid.beta[static_cast<std::size_t>(k)]);
      for (int l = 0; l < bandwidth; ++l) {
        const auto& block = coeffs.block(l);
        for (int m = -l; m <= l; ++m)
          for (int n = -l; n <= l; ++n)
            spec[detail::wrap_index(m, side) * static_cast<std::size_t>(side) + detail::wrap_index(n, side)] +=
                ((2.0 * l + 1.0) * d(l, m, n)) * block(m + l, n + l);
      }
      dft.transform(spec.data(), vals.data(), -1);
      for (int j1 = 0; j1 < side; ++j1)
        for (int j2 = 0; j2 < side; ++j2) out(j1, k, j2) = vals[static_cast<std::size_t>(j1 * side + j2)];
    }
  }
  return out;
}

/// Complex synthesis at one rotation.
inline std::complex<double> inverse_complex(const ComplexCoefficients& coeffs, const EulerAngles& e) {
  std::complex<double> f = 0.0;
  for (int l = 0; l < coeffs.bandwidth(); ++l)
    f += (2.0 * l + 1.0) * coeffs.block(l).cwiseProduct(wigner_D(l, e)).sum();
  return f;
}

/// Grid quadrature of f^2 under the unit-mass Haar measure.
inline double grid_mean_square(const RealSamples& s) {
  const SampleGrid g = make_grid(s.bandwidth());
  double acc = 0.0;
  for (int j1 = 0; j1 < s.side(); ++j1)
    for (int k = 0; k < s.side(); ++k)
      for (int j2 = 0; j2 < s.side(); ++j2) acc += g.weight[static_cast<std::size_t>(k)] * s(j1, k, j2) * s(j1, k, j2);
  return acc;
}

}  // namespace so3ft
