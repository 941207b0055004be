#pragma once

// Real spherical-harmonic transforms on the 2B x 2B sphere grid.
//
//   f(x) = sum_{l<B} (F^l)^T S^l(x),   F^l_m = 4 pi * mean_{S^2}(S^l_m f)
//
// A function on the sphere is a gamma-independent function on SO(3), so the
// beta nodes and weights of the SO(3) grid integrate it exactly once scaled
// by 2B (the gamma sum that is no longer there).
//
// With lambda^m_l the normalised associated Legendre function (phase
// included), the real harmonics are
//   S_0 = lambda^0,  S_m = (-1)^m sqrt2 lambda^m cos(m phi),  S_{-m} = (-1)^m sqrt2 lambda^m sin(m phi).

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "so3ft/coefficients.hpp"
#include "so3ft/complex_rep.hpp"
#include "so3ft/dft.hpp"
#include "so3ft/grid.hpp"
#include "so3ft/real_rep.hpp"

namespace so3ft {

inline SphericalPoint s2_node(const SampleGrid& g, int k, int j) {
  return {g.beta[static_cast<std::size_t>(k)], g.alpha[static_cast<std::size_t>(j)]};
}

template <class F>
S2Samples sample_sphere(int bandwidth, F&& f) {
  const SampleGrid g = make_grid(bandwidth);
  S2Samples s(bandwidth);
  for (int k = 0; k < g.size(); ++k)
    for (int j = 0; j < g.size(); ++j) s(k, j) = f(s2_node(g, k, j));
  return s;
}

inline S2Coefficients forward_s2_real(const S2Samples& samples, DftBackend backend = DftBackend::fast) {
  const int bandwidth = samples.bandwidth();
  const int side = samples.side();
  const SampleGrid g = make_grid(bandwidth);
  S2Coefficients out(bandwidth);
  Dft1D dft(side, backend);
  std::vector<std::complex<double>> in(static_cast<std::size_t>(side)), sums(static_cast<std::size_t>(side));
  for (int k = 0; k < side; ++k) {
    for (int j = 0; j < side; ++j) in[static_cast<std::size_t>(j)] = samples(k, j);
    dft.transform(in.data(), sums.data(), +1);  // sum_j f exp(i m phi_j)
    const NormalizedLegendre lambda(bandwidth, g.beta[static_cast<std::size_t>(k)]);
    const double w = 4.0 * kPi * 2.0 * bandwidth * g.weight[static_cast<std::size_t>(k)];
    for (int l = 0; l < bandwidth; ++l) {
      out(l, 0) += w * lambda(l, 0) * sums[0].real();
      for (int m = 1; m <= l; ++m) {
        const double a = w * detail::parity(m) * std::numbers::sqrt2 * lambda(l, m);
        out(l, m) += a * sums[static_cast<std::size_t>(m)].real();
        out(l, -m) += a * sums[static_cast<std::size_t>(m)].imag();
      }
    }
  }
  return out;
}

inline S2Samples inverse_s2_real(const S2Coefficients& coeffs, DftBackend backend = DftBackend::fast) {
  const int bandwidth = coeffs.bandwidth();
  S2Samples out(bandwidth);
  const int side = out.side();
  const SampleGrid g = make_grid(bandwidth);
  Dft1D dft(side, backend);
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(side)), vals(static_cast<std::size_t>(side));
  for (int k = 0; k < side; ++k) {
    std::fill(spec.begin(), spec.end(), std::complex<double>(0.0));
    const NormalizedLegendre lambda(bandwidth, g.beta[static_cast<std::size_t>(k)]);
    for (int l = 0; l < bandwidth; ++l) {
      spec[0] += coeffs(l, 0) * lambda(l, 0);
      for (int m = 1; m <= l; ++m) {
        const double a = detail::parity(m) * std::numbers::sqrt2 * lambda(l, m);
        // F_m cos + F_{-m} sin = Re((F_m - i F_{-m}) exp(i m phi))
        spec[static_cast<std::size_t>(m)] += a * std::complex<double>(coeffs(l, m), -coeffs(l, -m));
      }
    }
    dft.transform(spec.data(), vals.data(), +1);
    for (int j = 0; j < side; ++j) out(k, j) = vals[static_cast<std::size_t>(j)].real();
  }
  return out;
}

inline double inverse_s2_real(const S2Coefficients& coeffs, const SphericalPoint& p) {
  double f = 0.0;
  for (int l = 0; l < coeffs.bandwidth(); ++l) f += coeffs.block(l).dot(real_S(l, p));
  return f;
}

}  // namespace so3ft
