// Prints U^1 for a rotation, checks it against the rotation matrix, and
// rotates a real harmonic expansion on the sphere.

#include <cstdio>

#include "so3ft/so3ft.hpp"

using namespace so3ft;

int main() {
  const EulerAngles e(0.4, 1.1, -0.7);
  const RotationMatrix r = euler_to_matrix(e);

  std::printf("R =\n");
  for (int i = 0; i < 3; ++i) std::printf("  % .6f % .6f % .6f\n", r.matrix()(i, 0), r.matrix()(i, 1), r.matrix()(i, 2));

  // degree one in (y, z, x) order
  const RealRepMatrix u1 = real_U(1, e);
  std::printf("U^1 =\n");
  for (int i = 0; i < 3; ++i) std::printf("  % .6f % .6f % .6f\n", u1(i, 0), u1(i, 1), u1(i, 2));

  // S(R^T x) = U(R)^T S(x) at a sample point
  const SphericalPoint p(0.9, 2.3);
  const SphericalPoint q = SphericalPoint::from_vector(r.matrix().transpose() * p.to_vector());
  for (int l = 0; l <= 4; ++l) {
    const double gap = (real_S(l, q) - real_U(l, e).transpose() * real_S(l, p)).cwiseAbs().maxCoeff();
    std::printf("l=%d  |S(R^T x) - U^T S(x)| = %.2e\n", l, gap);
  }

  // d/dt U(exp(t e3)) at t = 0
  std::printf("u(e3) for l=2:\n");
  const RealRepMatrix u = deriv_u_real(2, Axis::e3);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) std::printf(" % .3f", u(i, j));
    std::printf("\n");
  }
  return 0;
}
