#pragma once

// Complex irreducible representations of SO(3): Wigner D-matrices, complex
// spherical harmonics and the Lie-algebra representation u^l(e_i).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "so3ft/geometry.hpp"
#include "so3ft/wigner.hpp"

namespace so3ft {

using cdouble = std::complex<double>;
using ComplexRepMatrix = Eigen::MatrixXcd;

enum class Axis { e1, e2, e3 };

inline Vector3 axis_vector(Axis axis) {
  switch (axis) {
    case Axis::e1: return Vector3::UnitX();
    case Axis::e2: return Vector3::UnitY();
    case Axis::e3: return Vector3::UnitZ();
  }
  return Vector3::Zero();
}

/// A point on the unit sphere by co-latitude theta in [0, pi] and longitude
/// phi in [0, 2pi); x = (cos phi sin theta, sin phi sin theta, cos theta).
class SphericalPoint {
 public:
  SphericalPoint() = default;
  SphericalPoint(double theta, double phi) : theta_(detail::check_beta(theta)), phi_(wrap_two_pi(phi)) {}

  static SphericalPoint from_vector(const Vector3& x) {
    const double r = x.norm();
    if (!(r > 0.0)) throw std::domain_error("SphericalPoint: zero vector");
    return {std::atan2(std::hypot(x.x(), x.y()), x.z()), std::atan2(x.y(), x.x())};
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  Vector3 to_vector() const {
    return {std::cos(phi_) * std::sin(theta_), std::sin(phi_) * std::sin(theta_), std::cos(theta_)};
  }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// D^l_{mn}(alpha, beta, gamma) = e^{-i m alpha} d^l_{mn}(beta) e^{-i n gamma}.
inline ComplexRepMatrix wigner_D(int l, const EulerAngles& e) {
  if (l < 0) throw std::invalid_argument("wigner_D: negative degree");
  const WignerDStack stack(l + 1, e.beta());
  const Eigen::MatrixXd& d = stack.block(l);
  const int dim = 2 * l + 1;
  ComplexRepMatrix out(dim, dim);
  for (int m = -l; m <= l; ++m) {
    const cdouble em = std::polar(1.0, -m * e.alpha());
    for (int n = -l; n <= l; ++n) {
      out(m + l, n + l) = em * d(m + l, n + l) * std::polar(1.0, -n * e.gamma());
    }
  }
  return out;
}

inline ComplexRepMatrix wigner_D(int l, const RotationMatrix& r) { return wigner_D(l, matrix_to_euler(r)); }

/// Associated Legendre function P^m_l(t), 0 <= m <= l, including the
/// Condon-Shortley factor (-1)^m.
inline double assoc_legendre(int l, int m, double t) {
  if (m < 0 || m > l) throw std::out_of_range("assoc_legendre: need 0 <= m <= l");
  if (!(std::abs(t) <= 1.0)) throw std::domain_error("assoc_legendre: |t| > 1");
  double pmm = 1.0;
  const double somx2 = std::sqrt((1.0 - t) * (1.0 + t));
  for (int i = 1; i <= m; ++i) pmm *= -(2.0 * i - 1.0) * somx2;
  if (l == m) return pmm;
  double pmm1 = t * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmm1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (t * (2.0 * ll - 1.0) * pmm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmm1;
    pmm1 = pll;
  }
  return pll;
}

/// Table of lambda^m_l(theta) = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) P^m_l(cos theta)
/// for 0 <= m <= l < bandwidth. Entry (l, m) is stored at l*(l+1)/2 + m.
/// Uses the normalised recursion, so it is stable for large degrees.
class NormalizedLegendre {
 public:
  NormalizedLegendre(int bandwidth, double theta) : bandwidth_(bandwidth) {
    values_.assign(static_cast<std::size_t>(bandwidth) * (bandwidth + 1) / 2, 0.0);
    const double t = std::cos(theta);
    const double st = std::sin(theta);
    double pmm = std::sqrt(1.0 / (4.0 * kPi));
    for (int m = 0; m < bandwidth; ++m) {
      if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st;
      at(m, m) = pmm;
      if (m + 1 >= bandwidth) break;
      double prev = pmm;
      double cur = t * std::sqrt(2.0 * m + 3.0) * pmm;
      at(m + 1, m) = cur;
      for (int l = m + 2; l < bandwidth; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        const double a_prev = std::sqrt((4.0 * (l - 1.0) * (l - 1.0) - 1.0) /
                                        ((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m));
        const double next = a * (t * cur - prev / a_prev);
        at(l, m) = next;
        prev = cur;
        cur = next;
      }
    }
  }

  int bandwidth() const { return bandwidth_; }
  double operator()(int l, int m) const { return values_[index(l, m)]; }

 private:
  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }
  double& at(int l, int m) { return values_[index(l, m)]; }

  int bandwidth_;
  std::vector<double> values_;
};

/// Y^l_m(theta, phi) for m = -l..l, normalised so that <Y^l_m, Y^l_m> = 1/(4pi)
/// under the unit-mass measure on the sphere.
inline Eigen::VectorXcd sph_harm_Y(int l, const SphericalPoint& p) {
  if (l < 0) throw std::invalid_argument("sph_harm_Y: negative degree");
  const NormalizedLegendre lambda(l + 1, p.theta());
  Eigen::VectorXcd y(2 * l + 1);
  for (int m = 0; m <= l; ++m) {
    const double v = lambda(l, m);
    y(l + m) = std::polar(v, m * p.phi());
    // P^{-m}_l = (-1)^m (l-m)!/(l+m)! P^m_l
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    y(l - m) = std::polar(sign * v, -m * p.phi());
  }
  return y;
}

/// u^l(e_i) = d/de D^l(exp(e e_i^)) at e = 0.
inline ComplexRepMatrix deriv_u_complex(int l, Axis axis) {
  if (l < 0) throw std::invalid_argument("deriv_u_complex: negative degree");
  const int dim = 2 * l + 1;
  ComplexRepMatrix u = ComplexRepMatrix::Zero(dim, dim);
  const cdouble i1(0.0, 1.0);
  for (int m = -l; m <= l; ++m) {
    const double lower = 0.5 * std::sqrt(static_cast<double>((l + m) * (l - m + 1)));
    const double upper = 0.5 * std::sqrt(static_cast<double>((l - m) * (l + m + 1)));
    switch (axis) {
      case Axis::e3:
        u(m + l, m + l) = -i1 * static_cast<double>(m);
        break;
      case Axis::e2:
        if (m - 1 >= -l) u(m + l, m - 1 + l) = -lower;
        if (m + 1 <= l) u(m + l, m + 1 + l) = upper;
        break;
      case Axis::e1:
        if (m - 1 >= -l) u(m + l, m - 1 + l) = -i1 * lower;
        if (m + 1 <= l) u(m + l, m + 1 + l) = -i1 * upper;
        break;
    }
  }
  return u;
}

struct RotatedHarmonics {
  Eigen::VectorXcd direct;   // Y^l(R^T x) evaluated at the rotated point
  Eigen::VectorXcd via_rep;  // (D^l(R))^T Y^l(x)
};

/// Y^l(R^T x) computed directly and through the representation.
inline RotatedHarmonics rotate_Y(int l, const RotationMatrix& r, const SphericalPoint& p) {
  const Vector3 x = p.to_vector();
  RotatedHarmonics out;
  out.direct = sph_harm_Y(l, SphericalPoint::from_vector(r.transpose() * x));
  out.via_rep = wigner_D(l, r).transpose() * sph_harm_Y(l, p);
  return out;
}

}  // namespace so3ft
