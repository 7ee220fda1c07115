#pragma once

// Test-side oracles, kept independent of the library implementations they
// cross-check.

#include <cmath>
#include <functional>
#include <vector>

#include "navplan/manifold.hpp"

namespace oracles {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Flat torus distance by brute force over lattice translates k in [-3, 3]^n.
inline double torus_distance_lattice(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double best = 1e300;
    for (int k = -3; k <= 3; ++k)
      best = std::min(best, std::fabs(b[i] - a[i] + kTwoPi * k));
    sum += best * best;
  }
  return std::sqrt(sum);
}

// Number of lattice minimizers of the flat torus distance, counted within a
// length tolerance.
inline int torus_minimizer_count_lattice(const std::vector<double>& a,
                                         const std::vector<double>& b, double eps) {
  size_t n = a.size();
  double d = torus_distance_lattice(a, b);
  std::vector<int> idx(n, -3);
  int count = 0;
  while (true) {
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double v = b[i] - a[i] + kTwoPi * idx[i];
      sum += v * v;
    }
    if (std::fabs(std::sqrt(sum) - d) <= eps) ++count;
    size_t j = 0;
    while (j < n && ++idx[j] > 3) idx[j++] = -3;
    if (j == n) break;
  }
  return count;
}

// Distance from a point of M x M to the diagonal by brute force over a fine
// grid of diagonal points (flat torus ambient).
inline double torus_pair_diagonal_distance_grid(const std::vector<double>& x,
                                                const std::vector<double>& y, int grid) {
  size_t n = x.size();
  double best = 1e300;
  std::vector<int> idx(n, 0);
  while (true) {
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double z = kTwoPi * idx[i] / grid;
      double dx = 1e300, dy = 1e300;
      for (int k = -1; k <= 1; ++k) {
        dx = std::min(dx, std::fabs(x[i] - z + kTwoPi * k));
        dy = std::min(dy, std::fabs(y[i] - z + kTwoPi * k));
      }
      sum += dx * dx + dy * dy;
    }
    best = std::min(best, std::sqrt(sum));
    size_t j = 0;
    while (j < n && ++idx[j] >= grid) idx[j++] = 0;
    if (j == n) break;
  }
  return best;
}

// Central finite differences of a scalar field along an orthonormal tangent
// frame; returns the directional derivatives.
inline std::vector<double> fd_directional_derivatives(
    const std::function<double(const navplan::Point&)>& field, const navplan::Point& x,
    double h = 1e-5) {
  std::vector<double> out;
  for (const auto& e : navplan::tangent_basis(x)) {
    navplan::TangentVector neg{x, e.components};
    for (double& v : neg.components) v = -v;
    double fp = field(navplan::exp_map(x, e, h));
    double fm = field(navplan::exp_map(x, neg, h));
    out.push_back((fp - fm) / (2.0 * h));
  }
  return out;
}

// Fixed-step RK4 on the flat torus for u' = F(u); deliberately minimal and
// separate from the library's adaptive flow.
inline std::vector<double> torus_ode_rk4(
    const std::function<std::vector<double>(const std::vector<double>&)>& field,
    std::vector<double> u, double h, int steps) {
  auto add = [](std::vector<double> a, const std::vector<double>& b, double s) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
    return a;
  };
  for (int s = 0; s < steps; ++s) {
    auto k1 = field(u);
    auto k2 = field(add(u, k1, h / 2));
    auto k3 = field(add(u, k2, h / 2));
    auto k4 = field(add(u, k3, h));
    for (size_t i = 0; i < u.size(); ++i)
      u[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return u;
}

}  // namespace oracles
