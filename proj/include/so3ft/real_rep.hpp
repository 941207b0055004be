#pragma once

// Real orthogonal irreducible representations U^l of SO(3).
//
// U^l(R(alpha, beta, gamma)) = X^l(alpha) W^l(beta) X^l(gamma), where
//
//   X^l_{mn}(a) = 1 (m = n = 0), cos(m a) (m = n != 0), -sin(m a) (m = -n != 0),
//   W^l_{mn}(b) = Psi^l_{mn}(b) when m and n have the same sign class
//                 (both >= 0 or both < 0), 0 otherwise,
//
// and Psi^l is a signed recombination of the Wigner d-matrix:
//
//   Psi^l_{mn} = (-1)^{m-n} d_{|m|,|n|} + (-1)^m sgn(m) d_{|m|,-|n|}   (mn != 0)
//              = (-1)^{m-n} sqrt(2) d_{|m|,|n|}                      (exactly one of m, n is 0)
//              = d_{00}                                              (m = n = 0)
//
// Only real arithmetic is used. The complex change of basis T^l relating U^l
// to the Wigner D-matrix is provided for real spherical harmonics and for the
// Clebsch-Gordan construction.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "so3ft/complex_rep.hpp"
#include "so3ft/geometry.hpp"
#include "so3ft/wigner.hpp"

namespace so3ft {

using RealRepMatrix = Eigen::MatrixXd;

namespace detail {
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
inline double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }
}  // namespace detail

/// The unitary matrix T^l with S^l = T^l Y^l. Nonzero only where |m| = |n|.
inline Eigen::MatrixXcd t_matrix(int l) {
  if (l < 0) throw std::invalid_argument("t_matrix: negative degree");
  const int dim = 2 * l + 1;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
  const double h = detail::kInvSqrt2;
  t(l, l) = 1.0;
  for (int m = 1; m <= l; ++m) {
    const double sgn = detail::parity(m);
    t(l + m, l + m) = sgn * h;                    // m > 0, n = m
    t(l + m, l - m) = h;                          // m > 0, n = -m
    t(l - m, l - m) = cdouble(0.0, h);            // m < 0, n = m
    t(l - m, l + m) = cdouble(0.0, -sgn * h);     // m < 0, n = -m; (-1)^{-m} = (-1)^m
  }
  return t;
}

/// Psi^l_{mn}(beta) for all l < bandwidth. Since Psi^l_{m,n} = Psi^l_{m,-n},
/// only n >= 0 is stored: block l is (2l+1) x (l+1), row m + l, column |n|.
class PsiKernel {
 public:
  PsiKernel() = default;
  PsiKernel(int bandwidth, double beta) : PsiKernel(WignerDStack(bandwidth, beta)) {}

  explicit PsiKernel(const WignerDStack& d) : bandwidth_(d.bandwidth()), beta_(d.beta()) {
    blocks_.resize(static_cast<std::size_t>(bandwidth_));
    for (int l = 0; l < bandwidth_; ++l) {
      Eigen::MatrixXd& psi = blocks_[static_cast<std::size_t>(l)];
      psi.resize(2 * l + 1, l + 1);
      const Eigen::MatrixXd& dl = d.block(l);
      for (int m = -l; m <= l; ++m) {
        const int am = std::abs(m);
        for (int n = 0; n <= l; ++n) {
          double v;
          if (m != 0 && n != 0) {
            // sgn(m) only enters here, where m != 0.
            const double sgn_m = m > 0 ? 1.0 : -1.0;
            v = detail::parity(m - n) * dl(am + l, n + l) + detail::parity(m) * sgn_m * dl(am + l, -n + l);
          } else if (m != 0 || n != 0) {
            v = detail::parity(m - n) * std::numbers::sqrt2 * dl(am + l, n + l);
          } else {
            v = dl(l, l);
          }
          psi(m + l, n) = v;
        }
      }
    }
  }

  int bandwidth() const { return bandwidth_; }
  double beta() const { return beta_; }

  double operator()(int l, int m, int n) const {
    return blocks_[static_cast<std::size_t>(l)](m + l, std::abs(n));
  }

  const Eigen::MatrixXd& block(int l) const { return blocks_[static_cast<std::size_t>(l)]; }

 private:
  int bandwidth_ = 0;
  double beta_ = 0.0;
  std::vector<Eigen::MatrixXd> blocks_;
};

inline PsiKernel psi_kernel(int bandwidth, double beta) { return PsiKernel(bandwidth, beta); }

/// U^l from a precomputed kernel via X(alpha) W(beta) X(gamma). X is applied
/// as a two-band operator; W is never formed.
inline RealRepMatrix real_U(const PsiKernel& psi, int l, double alpha, double gamma) {
  if (l < 0 || l >= psi.bandwidth()) throw std::out_of_range("real_U: degree outside kernel bandwidth");
  const int dim = 2 * l + 1;
  auto w = [&](int p, int q) -> double {
    const bool same_class = (p >= 0) == (q >= 0);
    return same_class ? psi(l, p, q) : 0.0;
  };

  // M = W X(gamma): column n mixes W columns n and -n.
  Eigen::MatrixXd wx(dim, dim);
  for (int n = -l; n <= l; ++n) {
    if (n == 0) {
      for (int p = -l; p <= l; ++p) wx(p + l, l) = w(p, 0);
      continue;
    }
    // X_{n,n} = cos(n g), X_{-n,n} = -sin(-n g) = sin(n g)
    const double c = std::cos(n * gamma), s = std::sin(n * gamma);
    for (int p = -l; p <= l; ++p) wx(p + l, n + l) = w(p, n) * c + w(p, -n) * s;
  }

  RealRepMatrix u(dim, dim);
  u.row(l) = wx.row(l);
  for (int m = -l; m <= l; ++m) {
    if (m == 0) continue;
    // X_{m,m} = cos(m a), X_{m,-m} = -sin(m a)
    const double c = std::cos(m * alpha), s = std::sin(m * alpha);
    u.row(m + l) = c * wx.row(m + l) - s * wx.row(-m + l);
  }
  return u;
}

inline RealRepMatrix real_U(int l, const EulerAngles& e) {
  if (l < 0) throw std::invalid_argument("real_U: negative degree");
  return real_U(PsiKernel(l + 1, e.beta()), l, e.alpha(), e.gamma());
}

inline RealRepMatrix real_U(int l, const RotationMatrix& r) { return real_U(l, matrix_to_euler(r)); }

/// U^0 .. U^{bandwidth-1} at one rotation, sharing a single d-matrix stack.
inline std::vector<RealRepMatrix> real_U_all(int bandwidth, const EulerAngles& e) {
  const PsiKernel psi(bandwidth, e.beta());
  std::vector<RealRepMatrix> out;
  out.reserve(static_cast<std::size_t>(bandwidth));
  for (int l = 0; l < bandwidth; ++l) out.push_back(real_U(psi, l, e.alpha(), e.gamma()));
  return out;
}

/// Real spherical harmonics S^l(x) = T^l Y^l(x).
inline Eigen::VectorXd real_S(int l, const SphericalPoint& p) {
  const Eigen::VectorXcd s = t_matrix(l) * sph_harm_Y(l, p);
  const double residue = s.imag().cwiseAbs().maxCoeff();
  if (residue > 1e-10) {
    throw std::runtime_error("real_S: imaginary residue " + std::to_string(residue));
  }
  return s.real();
}

/// u^l(e_i) = d/de U^l(exp(e e_i^)) at e = 0. Antisymmetric, banded.
inline RealRepMatrix deriv_u_real(int l, Axis axis) {
  if (l < 0) throw std::invalid_argument("deriv_u_real: negative degree");
  const int dim = 2 * l + 1;
  RealRepMatrix u = RealRepMatrix::Zero(dim, dim);
  if (l == 0) return u;
  auto set = [&](int m, int n, double v) {
    if (std::abs(m) <= l && std::abs(n) <= l) u(m + l, n + l) = v;
  };
  const double ll = l;
  // sqrt((l + |m|)(l - |m| + 1)) and sqrt((l - |m|)(l + |m| + 1))
  auto down = [&](int m) { return std::sqrt((ll + std::abs(m)) * (ll - std::abs(m) + 1.0)); };
  auto up = [&](int m) { return std::sqrt((ll - std::abs(m)) * (ll + std::abs(m) + 1.0)); };
  const double axial = std::sqrt(ll * (ll + 1.0) / 2.0);

  switch (axis) {
    case Axis::e3:
      for (int m = -l; m <= l; ++m) {
        if (m != 0) set(m, -m, -static_cast<double>(m));
      }
      break;
    case Axis::e2:
      for (int m = 2; m <= l; ++m) set(m, m - 1, 0.5 * down(m));
      for (int m = -l; m <= -2; ++m) set(m, m + 1, 0.5 * down(m));
      for (int m = 1; m <= l - 1; ++m) set(m, m + 1, -0.5 * up(m));
      for (int m = -l + 1; m <= -1; ++m) set(m, m - 1, -0.5 * up(m));
      set(1, 0, axial);
      set(0, 1, -axial);
      break;
    case Axis::e1:
      for (int m = 2; m <= l; ++m) {
        const int n = -m + 1;
        set(m, n, 0.5 * (m + n) * down(m));
      }
      for (int m = -l; m <= -2; ++m) {
        const int n = -m - 1;
        set(m, n, 0.5 * (m + n) * down(m));
      }
      for (int m = 1; m <= l - 1; ++m) {
        const int n = -m - 1;
        set(m, n, -0.5 * (m + n) * up(m));
      }
      for (int m = -l + 1; m <= -1; ++m) {
        const int n = -m + 1;
        set(m, n, -0.5 * (m + n) * up(m));
      }
      set(-1, 0, -axial);
      set(0, -1, axial);
      break;
  }
  return u;
}

}  // namespace so3ft
