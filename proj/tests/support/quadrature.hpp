#pragma once

// Gauss-Legendre quadrature used as the independent oracle for wavelet
// coefficients.  Nodes are found by Newton iteration on the Legendre
// polynomial, so no tabulated constants are involved.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace testsupport {

inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_16() {
  static const auto rule = [] {
    const int n = 16;
    std::vector<double> x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0;
        double p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      w[n - 1 - i] = w[i];
    }
    return std::make_pair(x, w);
  }();
  return rule;
}

template <typename F>
double integrate(F&& f, double a, double b) {
  const auto& [xs, ws] = gauss_legendre_16();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) sum += ws[i] * f(mid + half * xs[i]);
  return sum * half;
}

/// Composite rule: split [a,b] into `pieces` equal subintervals.
template <typename F>
double integrate_composite(F&& f, double a, double b, int pieces) {
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + (b - a) * p / pieces;
    const double hi = a + (b - a) * (p + 1) / pieces;
    sum += integrate(f, lo, hi);
  }
  return sum;
}

/// <f, psi_{j,k}> by quadrature; j = -1 integrates against the scaling
/// function.  Each monotone piece of the Haar atom gets a composite rule.
template <typename F>
double haar_inner_product(F&& f, int j, std::size_t k) {
  if (j == -1) return integrate_composite(f, 0.0, 1.0, 4);
  const double h = std::exp2(-static_cast<double>(j));
  const double left = static_cast<double>(k) * h;
  const double mid = left + 0.5 * h;
  const double right = left + h;
  const double scale = std::exp2(0.5 * j);
  return scale * (integrate_composite(f, left, mid, 2) - integrate_composite(f, mid, right, 2));
}

}  // namespace testsupport
