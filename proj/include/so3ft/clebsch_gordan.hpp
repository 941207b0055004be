#pragma once

// Clebsch-Gordan coefficients for products of representations.
//
// Complex harmonics:  D^{l1} (x) D^{l2} = C [ (+)_l D^l ] C^T,  C real orthogonal.
// Real harmonics:     U^{l1} (x) U^{l2} = c [ (+)_l U^l ] conj(c)^T,
//                     c = (conj(T^{l1}) (x) conj(T^{l2})) C [ (+)_l (T^l)^T ],  c unitary.
//
// Packing (zero-based), with l running from |l1 - l2| to l1 + l2:
//   row    = (l1 + m1)(2 l2 + 1) + l2 + m2
//   column = l^2 - (l1 - l2)^2 + l + m
//
// Complex coefficients come from the standard lowering recurrence seeded at
// the highest-weight state of each l, with C^{l,l}_{l1,l1,l2,l-l1} > 0. The
// real coefficients are read from a closed-form sign-pattern table in units
// of complex coefficients; the triple product above is also provided.
//
// Matrices are memoised per (l1, l2, flavour). Each entry is built at most
// once and never modified afterwards.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "so3ft/coefficients.hpp"
#include "so3ft/real_rep.hpp"

namespace so3ft {

/// Packed Clebsch-Gordan matrix for a pair of degrees. Flavor::complex holds
/// the coefficients for complex harmonics (real-valued); Flavor::real holds
/// those for real harmonics (complex-valued).
struct CGMatrix {
  int l1 = 0;
  int l2 = 0;
  Flavor flavor = Flavor::complex;
  Eigen::MatrixXcd entries;

  int dimension() const { return (2 * l1 + 1) * (2 * l2 + 1); }

  static int row_index(int l1, int l2, int m1, int m2) { return (l1 + m1) * (2 * l2 + 1) + l2 + m2; }
  static int column_index(int l1, int l2, int l, int m) {
    const int d = l1 - l2;
    return l * l - d * d + l + m;
  }

  /// Coefficient with upper indices (l, m) and lower indices (l1, m1, l2, m2).
  std::complex<double> operator()(int l, int m, int m1, int m2) const {
    return entries(row_index(l1, l2, m1, m2), column_index(l1, l2, l, m));
  }
};

namespace detail {

inline void check_cg_indices(int l, int m, int l1, int m1, int l2, int m2) {
  if (l1 < 0 || l2 < 0 || std::abs(m1) > l1 || std::abs(m2) > l2 || l < std::abs(l1 - l2) || l > l1 + l2 ||
      std::abs(m) > l) {
    throw std::out_of_range("clebsch_gordan: invalid indices l=" + std::to_string(l) + " m=" + std::to_string(m) +
                            " l1=" + std::to_string(l1) + " m1=" + std::to_string(m1) + " l2=" + std::to_string(l2) +
                            " m2=" + std::to_string(m2));
  }
}

// sqrt((j - m)(j + m + 1)), the raising factor
inline double raise(int j, int m) { return std::sqrt(static_cast<double>(j - m) * (j + m + 1)); }
// sqrt((j + m)(j - m + 1)), the lowering factor
inline double lower(int j, int m) { return std::sqrt(static_cast<double>(j + m) * (j - m + 1)); }

inline Eigen::MatrixXd build_complex_cg(int l1, int l2) {
  const int dim = (2 * l1 + 1) * (2 * l2 + 1);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
  auto at = [&](int l, int m, int m1) -> double& {
    return c(CGMatrix::row_index(l1, l2, m1, m - m1), CGMatrix::column_index(l1, l2, l, m));
  };
  for (int l = std::abs(l1 - l2); l <= l1 + l2; ++l) {
    // Highest weight: J+ annihilates sum_p c(p) |p, l - p>, so
    // c(p - 1) raise(l1, p - 1) + c(p) raise(l2, l - p) = 0.
    const int lo = std::max(-l1, l - l2);
    std::vector<double> top(static_cast<std::size_t>(l1 - lo + 1));
    top.back() = 1.0;
    for (int p = l1; p > lo; --p) {
      const std::size_t i = static_cast<std::size_t>(p - lo);
      top[i - 1] = -top[i] * raise(l2, l - p) / raise(l1, p - 1);
    }
    double norm = 0.0;
    for (double v : top) norm += v * v;
    norm = std::sqrt(norm);
    for (int p = lo; p <= l1; ++p) at(l, l, p) = top[static_cast<std::size_t>(p - lo)] / norm;

    // Lowering: J- |l, m> = lower(l, m) |l, m - 1>.
    for (int m = l; m > -l; --m) {
      const double a = lower(l, m);
      for (int p = -l1; p <= l1; ++p) {
        const int q = m - 1 - p;
        if (std::abs(q) > l2) continue;
        double v = 0.0;
        if (p + 1 <= l1) v += at(l, m, p + 1) * lower(l1, p + 1);
        if (std::abs(q + 1) <= l2) v += at(l, m, p) * lower(l2, q + 1);
        at(l, m - 1, p) = v / a;
      }
    }
  }
  return c;
}

// One cell of the real-harmonics table: value = magnitude * sign * [i] *
// [(-1)^{m1} or (-1)^{m2}] * [eta or zeta] times a complex coefficient.
struct TableCell {
  double magnitude;
  bool imaginary;
  int sign;
  int parity_of;  // 0: none, 1: m1, 2: m2
  int factor;     // 0: none, 1: eta, 2: zeta
};

struct TableRow {
  std::array<int, 4> signs;  // sgn m1, sgn m2, sgn(m1 + m2), sgn(m1 - m2)
  std::array<TableCell, 4> cells;
};

inline constexpr double kHalf = 0.5;
inline constexpr double kEighthRoot = 0.35355339059327376;  // 1 / sqrt(8)

// Columns give c^{l,m} for m = m1+m2, -m1-m2 (in units of C^{l,m1+m2}_{l1,m1,l2,m2})
// and m = m1-m2, -m1+m2 (in units of C^{l,m1-m2}_{l1,m1,l2,-m2}).
inline constexpr std::array<TableRow, 17> kRealCGTable{{
    {{0, 0, 0, 0}, {{{1, false, 1, 0, 0}, {1, false, 1, 0, 0}, {1, false, 1, 0, 0}, {1, false, 1, 0, 0}}}},
    {{1, 0, 1, 1}, {{{kHalf, false, 1, 0, 1}, {kHalf, true, 1, 0, 2}, {kHalf, false, 1, 0, 1}, {kHalf, true, 1, 0, 2}}}},
    {{1, 1, 1, 1},
     {{{kEighthRoot, false, 1, 0, 1}, {kEighthRoot, true, 1, 0, 2}, {kEighthRoot, false, 1, 2, 1},
       {kEighthRoot, true, 1, 2, 2}}}},
    {{1, 1, 1, 0},
     {{{kEighthRoot, false, 1, 0, 1}, {kEighthRoot, true, 1, 0, 2}, {kHalf, false, 1, 1, 1}, {kHalf, false, 1, 1, 1}}}},
    // last cell carries eta like its neighbours
    {{1, 1, 1, -1},
     {{{kEighthRoot, false, 1, 0, 1}, {kEighthRoot, true, 1, 0, 2}, {kEighthRoot, true, -1, 1, 2},
       {kEighthRoot, false, 1, 1, 1}}}},
    // m1 = 0: columns 3 and 4 are relative to C^{l,-m2}_{l1,0,l2,-m2} = (-1)^{l1+l2-l} C^{l,m2}_{l1,0,l2,m2}
    {{0, 1, 1, -1}, {{{kHalf, false, 1, 0, 1}, {kHalf, true, 1, 0, 2}, {kHalf, true, -1, 0, 2}, {kHalf, false, 1, 0, 1}}}},
    {{-1, 1, 1, -1},
     {{{kEighthRoot, true, 1, 1, 2}, {kEighthRoot, false, -1, 1, 1}, {kEighthRoot, false, 1, 0, 1},
       {kEighthRoot, true, 1, 0, 2}}}},
    {{-1, 1, 0, -1},
     {{{kHalf, true, 1, 1, 2}, {kHalf, true, 1, 1, 2}, {kEighthRoot, false, 1, 0, 1}, {kEighthRoot, true, 1, 0, 2}}}},
    {{-1, 1, -1, -1},
     {{{kEighthRoot, false, 1, 2, 1}, {kEighthRoot, true, 1, 2, 2}, {kEighthRoot, false, 1, 0, 1},
       {kEighthRoot, true, 1, 0, 2}}}},
    {{-1, 0, -1, -1},
     {{{kHalf, false, 1, 0, 1}, {kHalf, true, 1, 0, 2}, {kHalf, false, 1, 0, 1}, {kHalf, true, 1, 0, 2}}}},
    {{-1, -1, -1, -1},
     {{{kEighthRoot, true, 1, 0, 2}, {kEighthRoot, false, -1, 0, 1}, {kEighthRoot, true, -1, 2, 2},
       {kEighthRoot, false, 1, 2, 1}}}},
    {{-1, -1, -1, 0},
     {{{kEighthRoot, true, 1, 0, 2}, {kEighthRoot, false, -1, 0, 1}, {kHalf, false, 1, 1, 1}, {kHalf, false, 1, 1, 1}}}},
    // last cell carries zeta like its neighbours
    {{-1, -1, -1, 1},
     {{{kEighthRoot, true, 1, 0, 2}, {kEighthRoot, false, -1, 0, 1}, {kEighthRoot, false, 1, 1, 1},
       {kEighthRoot, true, 1, 1, 2}}}},
    {{0, -1, -1, 1},
     {{{kHalf, false, 1, 0, 1}, {kHalf, true, 1, 0, 2}, {kHalf, true, -1, 0, 2}, {kHalf, false, 1, 0, 1}}}},
    {{1, -1, -1, 1},
     {{{kEighthRoot, false, 1, 1, 1}, {kEighthRoot, true, 1, 1, 2}, {kEighthRoot, true, -1, 0, 2},
       {kEighthRoot, false, 1, 0, 1}}}},
    {{1, -1, 0, 1},
     {{{kHalf, true, 1, 1, 2}, {kHalf, true, 1, 1, 2}, {kEighthRoot, true, -1, 0, 2}, {kEighthRoot, false, 1, 0, 1}}}},
    {{1, -1, 1, 1},
     {{{kEighthRoot, true, 1, 2, 2}, {kEighthRoot, false, -1, 2, 1}, {kEighthRoot, true, -1, 0, 2},
       {kEighthRoot, false, 1, 0, 1}}}},
}};

inline int sign_of(int v) { return (v > 0) - (v < 0); }

inline const TableRow& table_row(int m1, int m2) {
  const std::array<int, 4> key{sign_of(m1), sign_of(m2), sign_of(m1 + m2), sign_of(m1 - m2)};
  for (const TableRow& r : kRealCGTable)
    if (r.signs == key) return r;
  throw std::logic_error("real Clebsch-Gordan table: missing sign pattern");
}

inline std::complex<double> table_factor(const TableCell& cell, int m1, int m2, int excess) {
  const double p = parity(excess);
  double f = cell.magnitude * cell.sign;
  if (cell.parity_of == 1) f *= parity(m1);
  if (cell.parity_of == 2) f *= parity(m2);
  if (cell.factor == 1) f *= p + 1.0;
  if (cell.factor == 2) f *= p - 1.0;
  return cell.imaginary ? std::complex<double>(0.0, f) : std::complex<double>(f, 0.0);
}

template <class Key, class Build>
std::shared_ptr<const CGMatrix> memoised(Key key, Build&& build) {
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const CGMatrix>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto made = std::make_shared<const CGMatrix>(build());
  cache.emplace(key, made);
  return made;
}

}  // namespace detail

/// Packed coefficients for complex harmonics. Real orthogonal.
inline std::shared_ptr<const CGMatrix> cg_complex_matrix(int l1, int l2) {
  if (l1 < 0 || l2 < 0) throw std::invalid_argument("cg_complex_matrix: negative degree");
  return detail::memoised(std::make_tuple(l1, l2, 0), [&] {
    return CGMatrix{l1, l2, Flavor::complex, detail::build_complex_cg(l1, l2).cast<std::complex<double>>()};
  });
}

/// C^{l,m}_{l1,m1,l2,m2}; zero when m != m1 + m2.
inline double cg_complex_coeff(int l, int m, int l1, int m1, int l2, int m2) {
  detail::check_cg_indices(l, m, l1, m1, l2, m2);
  if (m != m1 + m2) return 0.0;
  return (*cg_complex_matrix(l1, l2))(l, m, m1, m2).real();
}

/// Real-harmonics coefficients from the triple product with T matrices.
inline CGMatrix cg_real_matrix_triple_product(int l1, int l2) {
  if (l1 < 0 || l2 < 0) throw std::invalid_argument("cg_real_matrix_triple_product: negative degree");
  const int dim = (2 * l1 + 1) * (2 * l2 + 1);
  Eigen::MatrixXcd blocks = Eigen::MatrixXcd::Zero(dim, dim);
  for (int l = std::abs(l1 - l2); l <= l1 + l2; ++l) {
    const int off = CGMatrix::column_index(l1, l2, l, -l);
    blocks.block(off, off, 2 * l + 1, 2 * l + 1) = t_matrix(l).transpose();
  }
  const Eigen::MatrixXcd left = Eigen::kroneckerProduct(t_matrix(l1).conjugate(), t_matrix(l2).conjugate());
  return CGMatrix{l1, l2, Flavor::real, left * cg_complex_matrix(l1, l2)->entries * blocks};
}

/// Real-harmonics coefficients from the closed-form sign-pattern table.
inline std::shared_ptr<const CGMatrix> cg_real_matrix(int l1, int l2) {
  if (l1 < 0 || l2 < 0) throw std::invalid_argument("cg_real_matrix: negative degree");
  return detail::memoised(std::make_tuple(l1, l2, 1), [&] {
    const auto complex_cg = cg_complex_matrix(l1, l2);
    const CGMatrix& cc = *complex_cg;
    const int dim = (2 * l1 + 1) * (2 * l2 + 1);
    CGMatrix out{l1, l2, Flavor::real, Eigen::MatrixXcd::Zero(dim, dim)};
    for (int m1 = -l1; m1 <= l1; ++m1) {
      for (int m2 = -l2; m2 <= l2; ++m2) {
        const detail::TableRow& row = detail::table_row(m1, m2);
        const int sum = m1 + m2, diff = m1 - m2;
        const std::array<int, 4> targets{sum, -sum, diff, -diff};
        const int r = CGMatrix::row_index(l1, l2, m1, m2);
        for (int l = std::abs(l1 - l2); l <= l1 + l2; ++l) {
          const int excess = l1 + l2 - l;
          for (int col = 0; col < 4; ++col) {
            const int m = targets[static_cast<std::size_t>(col)];
            if (std::abs(m) > l) continue;
            const double unit = col < 2 ? cc(l, sum, m1, m2).real()
                                        : (std::abs(diff) <= l ? cc(l, diff, m1, -m2).real() : 0.0);
            out.entries(r, CGMatrix::column_index(l1, l2, l, m)) =
                detail::table_factor(row.cells[static_cast<std::size_t>(col)], m1, m2, excess) * unit;
          }
        }
      }
    }
    return out;
  });
}

/// c^{l,m}_{l1,m1,l2,m2} (complex in general).
inline std::complex<double> cg_real_coeff(int l, int m, int l1, int m1, int l2, int m2) {
  detail::check_cg_indices(l, m, l1, m1, l2, m2);
  return (*cg_real_matrix(l1, l2))(l, m, m1, m2);
}

struct ExpansionTerm {
  int l;
  int m;
  int n;
  double coefficient;
};

/// U^{l1}_{m1,n1} U^{l2}_{m2,n2} = sum over terms of coefficient * U^l_{m,n}.
/// Terms with |coefficient| <= 1e-14 are dropped.
inline std::vector<ExpansionTerm> product_expand_real(int l1, int m1, int n1, int l2, int m2, int n2) {
  if (l1 < 0 || l2 < 0 || std::abs(m1) > l1 || std::abs(n1) > l1 || std::abs(m2) > l2 || std::abs(n2) > l2)
    throw std::out_of_range("product_expand_real: invalid indices");
  const auto c = cg_real_matrix(l1, l2);
  auto distinct = [](int a, int b) {
    std::vector<int> v{a + b, a - b, -a + b, -a - b};
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  std::vector<ExpansionTerm> out;
  for (int m : distinct(m1, m2)) {
    for (int n : distinct(n1, n2)) {
      for (int l = std::max({std::abs(l1 - l2), std::abs(m), std::abs(n)}); l <= l1 + l2; ++l) {
        const std::complex<double> v = (*c)(l, m, m1, m2) * std::conj((*c)(l, n, n1, n2));
        if (std::abs(v.imag()) > 1e-12)
          throw std::runtime_error("product_expand_real: coefficient has imaginary part " + std::to_string(v.imag()));
        if (std::abs(v.real()) > 1e-14) out.push_back({l, m, n, v.real()});
      }
    }
  }
  return out;
}

/// D^{l1}_{m1,n1} D^{l2}_{m2,n2} = sum over terms of coefficient * D^l_{m1+m2, n1+n2}.
inline std::vector<ExpansionTerm> product_expand_complex(int l1, int m1, int n1, int l2, int m2, int n2) {
  if (l1 < 0 || l2 < 0 || std::abs(m1) > l1 || std::abs(n1) > l1 || std::abs(m2) > l2 || std::abs(n2) > l2)
    throw std::out_of_range("product_expand_complex: invalid indices");
  const auto c = cg_complex_matrix(l1, l2);
  const int m = m1 + m2, n = n1 + n2;
  std::vector<ExpansionTerm> out;
  for (int l = std::max({std::abs(l1 - l2), std::abs(m), std::abs(n)}); l <= l1 + l2; ++l) {
    const double v = (*c)(l, m, m1, m2).real() * (*c)(l, n, n1, n2).real();
    if (std::abs(v) > 1e-14) out.push_back({l, m, n, v});
  }
  return out;
}

/// Block-diagonal direct sum of representation matrices for l = |l1-l2| .. l1+l2.
template <class MatrixFn>
auto direct_sum(int l1, int l2, MatrixFn&& rep) {
  using M = std::decay_t<decltype(rep(0))>;
  const int dim = (2 * l1 + 1) * (2 * l2 + 1);
  M out = M::Zero(dim, dim);
  for (int l = std::abs(l1 - l2); l <= l1 + l2; ++l) {
    const int off = CGMatrix::column_index(l1, l2, l, -l);
    out.block(off, off, 2 * l + 1, 2 * l + 1) = rep(l);
  }
  return out;
}

}  // namespace so3ft
