#include "demarg/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "demarg/error.hpp"

namespace demarg {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

std::vector<double> hermite_functions(int nmax, double u) {
  std::vector<double> phi(static_cast<size_t>(std::max(nmax, 0)) + 1, 0.0);
  phi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
  if (nmax >= 1) phi[1] = std::sqrt(2.0) * u * phi[0];
  for (int n = 1; n < nmax; ++n) {
    phi[n + 1] = std::sqrt(2.0 / (n + 1)) * u * phi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * phi[n - 1];
  }
  return phi;
}

std::vector<double> hermite_polynomials(int nmax, double x) {
  std::vector<double> h(static_cast<size_t>(std::max(nmax, 0)) + 1, 0.0);
  h[0] = 1.0;
  if (nmax >= 1) h[1] = 2.0 * x;
  for (int n = 1; n < nmax; ++n) h[n + 1] = 2.0 * x * h[n] - 2.0 * n * h[n - 1];
  return h;
}

std::vector<double> laguerre_functions(int nmax, int m, double x) {
  std::vector<double> l(static_cast<size_t>(std::max(nmax, 0)) + 1, 0.0);
  if (x == 0.0) {
    // L_n^{(m)}(0) = C(n+m, n); the prefactor x^{m/2} kills everything unless m = 0.
    if (m == 0) std::fill(l.begin(), l.end(), 1.0);
    return l;
  }
  l[0] = std::exp(0.5 * m * std::log(x) - 0.5 * x - 0.5 * log_factorial(m));
  if (nmax >= 1) l[1] = (1.0 + m - x) * l[0] / std::sqrt(1.0 + m);
  for (int n = 1; n < nmax; ++n) {
    const double a = 2.0 * n + 1.0 + m - x;
    const double b = std::sqrt(static_cast<double>(n) * (n + m));
    l[n + 1] = (a * l[n] - b * l[n - 1]) / std::sqrt((n + 1.0) * (n + 1.0 + m));
  }
  return l;
}

double laguerre_function(int n, int m, double x) { return laguerre_functions(n, m, x)[n]; }

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw ValidationError("gauss_hermite: need at least one node");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.nodes[i] = xm - xl * z;
    rule.nodes[n - 1 - i] = xm + xl * z;
    rule.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

double carlson_rf(double x, double y, double z) {
  if (std::min({x, y, z}) < 0.0 || std::min({x + y, x + z, y + z}) <= 0.0) {
    throw ValidationError("carlson_rf: arguments must be nonnegative with at most one zero");
  }
  for (int it = 0; it < 200; ++it) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lambda = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    const double mean = (x + y + z) / 3.0;
    const double dx = 1.0 - x / mean, dy = 1.0 - y / mean, dz = 1.0 - z / mean;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1e-4) {
      const double e2 = dx * dy - dz * dz;
      const double e3 = dx * dy * dz;
      return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(mean);
    }
  }
  throw Error("carlson_rf: no convergence");
}

double elliptic_f(double phi, double m) {
  if (std::abs(phi) > 0.5 * std::numbers::pi + 1e-15) throw ValidationError("elliptic_f: |phi| must not exceed pi/2");
  if (m >= 1.0) throw ValidationError("elliptic_f: parameter must be below 1");
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  if (s == 0.0) return 0.0;
  return s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
}

}  // namespace demarg
