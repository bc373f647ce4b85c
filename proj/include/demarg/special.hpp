#pragma once

#include <vector>

namespace demarg {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

double log_factorial(int n);

// Orthonormal Hermite functions phi_0..phi_nmax at u:
// phi_n(u) = exp(-u^2/2) H_n(u) / sqrt(2^n n! sqrt(pi)).
std::vector<double> hermite_functions(int nmax, double u);

// Physicists' Hermite polynomials H_0..H_nmax at x.
std::vector<double> hermite_polynomials(int nmax, double x);

// l_n = sqrt(n!/(n+m)!) x^{m/2} e^{-x/2} L_n^{(m)}(x) for n = 0..nmax,
// by the normalized three-term recurrence.
std::vector<double> laguerre_functions(int nmax, int m, double x);
double laguerre_function(int n, int m, double x);

// Nodes and weights for integral of f(x) exp(-x^2) over the real line.
QuadratureRule gauss_hermite(int n);

// Nodes and weights for integral of f(x) over [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Carlson's symmetric integral R_F(x, y, z).
double carlson_rf(double x, double y, double z);

// Incomplete elliptic integral of the first kind,
// F(phi, m) = int_0^phi (1 - m sin^2 t)^{-1/2} dt, for |phi| <= pi/2 and any m < 1.
double elliptic_f(double phi, double m);

}  // namespace demarg
