#pragma once

// Rotation-group primitives: 3-2-3 Euler angles, rotation matrices, the
// hat/vee isomorphism between R^3 and so(3), and the exponential map.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace so3ft {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
inline double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod can return 2*pi - tiny, which rounds back to 2*pi after the add.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// 3-2-3 Euler angles, R = exp(alpha e3^) exp(beta e2^) exp(gamma e3^).
///
/// alpha and gamma are normalised into [0, 2*pi). beta must lie in [0, pi];
/// values within 1e-12 outside that range are clamped, anything further out
/// is rejected.
class EulerAngles {
 public:
  static constexpr double kBetaTolerance = 1e-12;

  EulerAngles() = default;
  EulerAngles(double alpha, double beta, double gamma)
      : alpha_(wrap_two_pi(alpha)), beta_(checked_beta(beta)), gamma_(wrap_two_pi(gamma)) {}

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

 private:
  static double checked_beta(double beta) {
    if (!std::isfinite(beta) || beta < -kBetaTolerance || beta > kPi + kBetaTolerance) {
      throw std::domain_error("EulerAngles: beta=" + std::to_string(beta) + " outside [0, pi]");
    }
    return std::clamp(beta, 0.0, kPi);
  }

  double alpha_ = 0.0;
  double beta_ = 0.0;
  double gamma_ = 0.0;
};

/// An element of SO(3). Construction from a raw matrix checks R^T R = I and
/// det R = 1 to within `tolerance` (max-abs entry norm).
class RotationMatrix {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  RotationMatrix() : m_(Matrix3::Identity()) {}
  explicit RotationMatrix(const Matrix3& m, double tolerance = kDefaultTolerance) : m_(m) {
    const double orth = (m.transpose() * m - Matrix3::Identity()).cwiseAbs().maxCoeff();
    const double det = std::abs(m.determinant() - 1.0);
    if (!(orth <= tolerance) || !(det <= tolerance)) {
      throw std::domain_error("RotationMatrix: not in SO(3) (orthogonality residual " +
                              std::to_string(orth) + ", det residual " + std::to_string(det) + ")");
    }
  }

  /// Projects an almost-rotation onto SO(3) with the SVD polar factor.
  static RotationMatrix nearest(const Matrix3& m) {
    Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix3 u = svd.matrixU();
    const Matrix3 v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
    RotationMatrix r;
    r.m_ = u * v.transpose();
    return r;
  }

  const Matrix3& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  RotationMatrix transpose() const {
    RotationMatrix r;
    r.m_ = m_.transpose();
    return r;
  }

  friend RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b) {
    RotationMatrix r;
    r.m_ = a.m_ * b.m_;
    return r;
  }
  friend Vector3 operator*(const RotationMatrix& a, const Vector3& x) { return a.m_ * x; }

 private:
  Matrix3 m_;
};

/// hat(v) y = v x y.
inline Matrix3 hat(const Vector3& v) {
  Matrix3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

/// Inverse of hat. Rejects matrices whose symmetric part exceeds 1e-10.
inline Vector3 vee(const Matrix3& s) {
  const double sym = (s + s.transpose()).cwiseAbs().maxCoeff() / 2.0;
  if (sym > 1e-10) {
    throw std::domain_error("vee: matrix is not skew-symmetric (symmetric part " +
                            std::to_string(sym) + ")");
  }
  return Vector3((s(2, 1) - s(1, 2)) / 2.0, (s(0, 2) - s(2, 0)) / 2.0,
                 (s(1, 0) - s(0, 1)) / 2.0);
}

/// Rodrigues formula for exp(hat(v)).
inline RotationMatrix exp_so3(const Vector3& v) {
  const double theta = v.norm();
  if (theta < 1e-15) return RotationMatrix();
  const Matrix3 k = hat(v / theta);
  const Matrix3 r = Matrix3::Identity() + std::sin(theta) * k + (1.0 - std::cos(theta)) * (k * k);
  return RotationMatrix::nearest(r);
}

namespace detail {

inline Matrix3 rot_e3(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Matrix3 r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

inline Matrix3 rot_e2(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Matrix3 r;
  r << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return r;
}

}  // namespace detail

inline RotationMatrix euler_to_matrix(const EulerAngles& e) {
  const Matrix3 r = detail::rot_e3(e.alpha()) * detail::rot_e2(e.beta()) * detail::rot_e3(e.gamma());
  // Products of exact elementary rotations stay orthogonal to rounding.
  return RotationMatrix(r, 1e-12);
}

/// Inverse of euler_to_matrix. At gimbal lock (beta = 0 or pi) the twist is
/// folded into alpha and gamma is reported as 0.
inline EulerAngles matrix_to_euler(const RotationMatrix& rot) {
  const Matrix3& r = rot.matrix();
  const double beta = std::atan2(std::hypot(r(2, 0), r(2, 1)), r(2, 2));
  constexpr double kLock = 1e-12;
  if (std::sin(beta) < kLock) {
    // beta = 0: R = Rz(alpha + gamma); beta = pi: R = Rz(alpha - gamma) Ry(pi).
    // Either way the second column is Rz(.) e2.
    return {std::atan2(-r(0, 1), r(1, 1)), r(2, 2) > 0.0 ? 0.0 : kPi, 0.0};
  }
  const double alpha = std::atan2(r(1, 2), r(0, 2));
  const double gamma = std::atan2(r(2, 1), -r(2, 0));
  return {alpha, beta, gamma};
}

}  // namespace so3ft
