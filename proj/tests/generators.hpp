#pragma once

// Hand-rolled random generators for property tests. Fixed seeds keep runs
// reproducible; each suite takes its own stream.

#include <cmath>
#include <numbers>
#include <random>

#include "demarg/fock.hpp"

namespace gen {

using demarg::CMatrix;
using demarg::cplx;
using demarg::DensityMatrix;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  cplx complex_disk(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    return std::polar(r, uniform(0.0, 2.0 * std::numbers::pi));
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Random mixed state supported on levels 0..n with rho_nn bounded away from 0.
inline DensityMatrix random_fds(Rng& rng, int n, int dim) {
  const int rank = rng.integer(1, n + 1);
  CMatrix g = CMatrix::Zero(n + 1, rank);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  // Make sure the top level carries weight.
  CMatrix top = CMatrix::Zero(n + 1, n + 1);
  top(n, n) = 1.0;
  const double w = rng.uniform(0.1, 0.5);
  m = (1.0 - w) * m + w * top;
  CMatrix full = CMatrix::Zero(dim, dim);
  full.topLeftCorner(n + 1, n + 1) = m;
  return DensityMatrix(0.5 * (full + full.adjoint()));
}

// Random finite mixture of coherent states with |alpha| <= radius.
inline DensityMatrix random_coherent_mixture(Rng& rng, int components, double radius, int dim) {
  std::vector<std::pair<double, DensityMatrix>> parts;
  double total = 0.0;
  std::vector<double> ws;
  for (int i = 0; i < components; ++i) ws.push_back(rng.uniform(0.1, 1.0)), total += ws.back();
  for (int i = 0; i < components; ++i) parts.push_back({ws[i] / total, demarg::coherent_state(rng.complex_disk(radius), dim)});
  return demarg::mix(parts);
}

}  // namespace gen
