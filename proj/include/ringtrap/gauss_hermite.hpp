// Gauss-Hermite quadrature nodes and weights for integrals of the form
// integral exp(-x^2) f(x) dx = sum w_i f(x_i).
//
// Newton iteration on the orthonormal Hermite recurrence; nodes returned in
// ascending order.
#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "ringtrap/errors.hpp"

namespace ringtrap {

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussHermiteRule gauss_hermite(std::size_t n) {
  if (n == 0) throw domain_error("gauss_hermite: need at least one node");
  constexpr double pi_quarter_inv = 0.7511255444649425;  // pi^{-1/4}
  constexpr int max_iter = 64;
  constexpr double eps = 3e-15;

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const std::size_t m = (n + 1) / 2;
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    // Initial guesses for the roots in decreasing order.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[n - 1];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[n - 2];
    } else {
      z = 2.0 * z - rule.nodes[n - i + 1];
    }

    double pp = 0.0;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
      double p1 = pi_quarter_inv;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= eps * std::max(1.0, std::abs(z))) break;
    }
    if (iter == max_iter) throw domain_error("gauss_hermite: Newton iteration stalled");

    rule.nodes[n - 1 - i] = z;
    rule.nodes[i] = -z;
    rule.weights[n - 1 - i] = 2.0 / (pp * pp);
    rule.weights[i] = rule.weights[n - 1 - i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace ringtrap
