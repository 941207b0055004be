#pragma once

// Rotational registration of two functions on the sphere from their real
// harmonic coefficients F, G:
//
//   C(R)          = (1/4pi) sum_l (G^l)^T U^l(R) F^l
//   [grad C(R)]_i = (1/4pi) sum_l (G^l)^T U^l(R) u^l(e_i) F^l
//
// C(R) is the mean over the sphere of g(x) f(R^T x), so for g = f(R*^T .)
// the maximum sits at R*. The matcher is fixed-step ascent along the body
// frame, R <- R exp(step * hat(grad C)), stopping once |grad C| < tolerance.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "so3ft/coefficients.hpp"
#include "so3ft/geometry.hpp"
#include "so3ft/real_rep.hpp"

namespace so3ft {

struct MatchConfig {
  double step = 5e-3;
  double tolerance = 1e-6;
  int max_iters = 10000;
  EulerAngles initial_guess{};

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("MatchConfig: step must be positive");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance))
      throw std::invalid_argument("MatchConfig: tolerance must be positive");
    if (max_iters < 1) throw std::invalid_argument("MatchConfig: max_iters must be >= 1");
  }
};

struct MatchRecord {
  int iteration = 0;
  double correlation = 0.0;
  double gradient_norm = 0.0;
  EulerAngles angles{};
};

struct MatchTrace {
  std::vector<MatchRecord> records;
  bool converged = false;
};

struct MatchResult {
  RotationMatrix rotation;
  MatchTrace trace;

  const MatchRecord& final_record() const { return trace.records.back(); }
};

/// Evaluates C and grad C for a fixed pair (F, G). The products u^l(e_i) F^l
/// are formed once.
class Correlator {
 public:
  struct Value {
    double correlation = 0.0;
    Vector3 gradient = Vector3::Zero();
  };

  Correlator(const S2Coefficients& f, const S2Coefficients& g) : f_(f), g_(g) {
    if (f.bandwidth() != g.bandwidth())
      throw std::invalid_argument("correlation: bandwidth mismatch (" + std::to_string(f.bandwidth()) + " vs " +
                                  std::to_string(g.bandwidth()) + ")");
    const int bandwidth = f.bandwidth();
    uf_.resize(static_cast<std::size_t>(bandwidth));
    for (int l = 0; l < bandwidth; ++l) {
      Eigen::MatrixXd cols(2 * l + 1, 3);
      cols.col(0) = deriv_u_real(l, Axis::e1) * f.block(l);
      cols.col(1) = deriv_u_real(l, Axis::e2) * f.block(l);
      cols.col(2) = deriv_u_real(l, Axis::e3) * f.block(l);
      uf_[static_cast<std::size_t>(l)] = std::move(cols);
    }
  }

  int bandwidth() const { return f_.bandwidth(); }

  Value evaluate(const RotationMatrix& r) const {
    const std::vector<RealRepMatrix> u = real_U_all(bandwidth(), matrix_to_euler(r));
    Value v;
    for (int l = 0; l < bandwidth(); ++l) {
      const Eigen::RowVectorXd gu = g_.block(l).transpose() * u[static_cast<std::size_t>(l)];
      v.correlation += gu.dot(f_.block(l));
      v.gradient += (gu * uf_[static_cast<std::size_t>(l)]).transpose();
    }
    v.correlation /= 4.0 * kPi;
    v.gradient /= 4.0 * kPi;
    return v;
  }

 private:
  S2Coefficients f_;
  S2Coefficients g_;
  std::vector<Eigen::MatrixXd> uf_;
};

inline double correlation(const S2Coefficients& f, const S2Coefficients& g, const RotationMatrix& r) {
  return Correlator(f, g).evaluate(r).correlation;
}

inline Vector3 correlation_gradient(const S2Coefficients& f, const S2Coefficients& g, const RotationMatrix& r) {
  return Correlator(f, g).evaluate(r).gradient;
}

/// Fixed-step gradient ascent from cfg.initial_guess. Without convergence the
/// best-correlation iterate is returned and trace.converged stays false.
inline MatchResult match(const S2Coefficients& f, const S2Coefficients& g, const MatchConfig& cfg) {
  cfg.validate();
  const Correlator corr(f, g);
  MatchResult result;
  RotationMatrix r = euler_to_matrix(cfg.initial_guess);
  RotationMatrix best = r;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Correlator::Value v = corr.evaluate(r);
    const double norm = v.gradient.norm();
    result.trace.records.push_back({it, v.correlation, norm, matrix_to_euler(r)});
    if (v.correlation > best_value) {
      best_value = v.correlation;
      best = r;
    }
    if (norm < cfg.tolerance) {
      result.trace.converged = true;
      result.rotation = r;
      return result;
    }
    r = RotationMatrix::nearest((r * exp_so3(cfg.step * v.gradient)).matrix());
  }
  result.rotation = best;
  return result;
}

/// Uniformly distributed rotation (normalised Gaussian quaternion).
inline RotationMatrix random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return RotationMatrix::nearest(q.toRotationMatrix());
}

/// Runs match from cfg.initial_guess and from `starts` uniform random
/// rotations, keeping the run with the largest final correlation. Converged
/// runs win over unconverged ones.
inline MatchResult match_multistart(const S2Coefficients& f, const S2Coefficients& g, const MatchConfig& cfg,
                                    int starts, std::uint64_t seed) {
  if (starts < 0) throw std::invalid_argument("match_multistart: negative start count");
  std::mt19937_64 rng(seed);
  std::optional<MatchResult> best;
  MatchConfig run = cfg;
  for (int s = 0; s <= starts; ++s) {
    if (s > 0) run.initial_guess = matrix_to_euler(random_rotation(rng));
    MatchResult r = match(f, g, run);
    const bool better = !best || (r.trace.converged && !best->trace.converged) ||
                        (r.trace.converged == best->trace.converged &&
                         r.final_record().correlation > best->final_record().correlation);
    if (better) best = std::move(r);
  }
  return *best;
}

/// G^l = U^l(R) F^l, the coefficients of x -> f(R^T x).
inline S2Coefficients rotate_coefficients(const S2Coefficients& f, const RotationMatrix& r) {
  const std::vector<RealRepMatrix> u = real_U_all(f.bandwidth(), matrix_to_euler(r));
  S2Coefficients g(f.bandwidth());
  for (int l = 0; l < f.bandwidth(); ++l) g.block(l) = u[static_cast<std::size_t>(l)] * f.block(l);
  return g;
}

/// Random band-limited shape whose degree-l block is a uniformly random
/// direction of length amplitude * (l+1)^-decay. With the default step of
/// MatchConfig, amplitude 10 and decay 1 give a curvature at the optimum
/// where ascent settles in a few hundred iterations.
inline S2Coefficients synthetic_shape(int bandwidth, std::uint64_t seed, double amplitude = 10.0, double decay = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  S2Coefficients f(bandwidth);
  for (int l = 0; l < bandwidth; ++l) {
    Eigen::VectorXd v(2 * l + 1);
    for (int m = 0; m < 2 * l + 1; ++m) v(m) = n(rng);
    f.block(l) = v.normalized() * (amplitude * std::pow(l + 1.0, -decay));
  }
  return f;
}

}  // namespace so3ft
