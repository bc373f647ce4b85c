#pragma once

#include <limits>
#include <vector>

#include "demarg/criteria.hpp"
#include "demarg/fock.hpp"

namespace demarg {

// n_rotations value standing for the continuous phase average.
inline constexpr int kInfiniteRotations = 0;

// (1/N) sum_k e^{-i theta_k n} rho e^{i theta_k n}, theta_k = k pi / N.
DensityMatrix phase_randomize(const DensityMatrix& rho, int n_rotations);

// DM2 negativity of a Gaussian marginal of variance v: max(1/(4 sqrt v) - 1/2, 0).
double gaussian_dm2_negativity(double v);

// Fully phase-randomized squeezed vacuum, elliptic-integral form.
double gaussian_bound_full(double r);
// Same quantity as (2/pi) int_0^{theta_c} N_DM2(V_theta) by Gauss-Legendre.
double gaussian_bound_full_quadrature(double r);

struct BoundMaximum {
  double r = 0.0;
  double value = 0.0;
};
// Golden-section maximum of gaussian_bound_full over r in [0.1, 2].
BoundMaximum gaussian_bound_maximum();

// max_theta (1/N) sum_k N_DM2(V_{theta + k pi/N}) for squeezed vacuum r.
// N = kInfiniteRotations gives gaussian_bound_full.
double gaussian_bound_value(int n_rotations, double r);

// max_theta N_DM2 of the N-rotated squeezed vacuum through the DM2 pipeline.
// dim = 0 starts at 40 levels and grows until the truncation check passes.
double randomized_gaussian_negativity(int n_rotations, double r, int dim = 0, int theta_points = 48);

struct GaussianBoundCurve {
  int n_rotations = kInfiniteRotations;
  std::vector<double> r_grid;
  std::vector<double> energy_grid;  // sinh^2 r
  std::vector<double> bound;
  double max_bound = 0.0;
};

GaussianBoundCurve gaussian_bound_finite(int n_rotations, const std::vector<double>& r_grid);

// Largest bound over squeezed vacua with sinh^2 r <= energy. Infinite energy
// gives the global maximum.
double gaussian_bound(int n_rotations, double energy = std::numeric_limits<double>::infinity());

// Verdict iff neg - 3 sigma exceeds gaussian_bound(n_rotations, energy).
CriterionReport genuine_non_gaussianity_verdict(double neg, double sigma, int n_rotations,
                                               double energy = std::numeric_limits<double>::infinity());

}  // namespace demarg
