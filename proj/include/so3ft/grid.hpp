#pragma once

// Equiangular sampling grid on SO(3) for bandwidth B:
//   alpha_j = gamma_j = pi j / B,  beta_k = pi (2k + 1) / (4B),  j, k = 0 .. 2B-1,
// with beta weights
//   w_k = sin(beta_k) / (4 B^3) * sum_{j<B} sin((2j+1) beta_k) / (2j+1).
// Summing w_k * U(grid) * f(grid) over the (2B)^3 nodes gives the Fourier
// parameters of any f band-limited to B exactly.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "so3ft/geometry.hpp"

namespace so3ft {

struct SampleGrid {
  int bandwidth = 0;
  std::vector<double> alpha;  // also the gamma nodes
  std::vector<double> beta;
  std::vector<double> weight;

  int size() const { return 2 * bandwidth; }
  double gamma(int j) const { return alpha[static_cast<std::size_t>(j)]; }
  EulerAngles angles(int j1, int k, int j2) const {
    return {alpha[static_cast<std::size_t>(j1)], beta[static_cast<std::size_t>(k)], alpha[static_cast<std::size_t>(j2)]};
  }
};

inline SampleGrid make_grid(int bandwidth) {
  if (bandwidth < 1) throw std::invalid_argument("make_grid: bandwidth must be >= 1");
  SampleGrid g;
  g.bandwidth = bandwidth;
  const int n = 2 * bandwidth;
  const double b = bandwidth;
  g.alpha.resize(static_cast<std::size_t>(n));
  g.beta.resize(static_cast<std::size_t>(n));
  g.weight.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    g.alpha[static_cast<std::size_t>(j)] = kPi * j / b;
    const double bk = kPi * (2.0 * j + 1.0) / (4.0 * b);
    g.beta[static_cast<std::size_t>(j)] = bk;
    double sum = 0.0;
    for (int i = 0; i < bandwidth; ++i) sum += std::sin((2.0 * i + 1.0) * bk) / (2.0 * i + 1.0);
    g.weight[static_cast<std::size_t>(j)] = std::sin(bk) * sum / (4.0 * b * b * b);
  }
  return g;
}

}  // namespace so3ft
