#include "demarg/gaussian_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "demarg/demarg.hpp"
#include "demarg/error.hpp"
#include "demarg/kernels.hpp"
#include "demarg/special.hpp"

namespace demarg {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

template <class F>
double golden_max(F&& f, double a, double b, double tol, double* arg = nullptr) {
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - kInvPhi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + kInvPhi * (b - a), fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  if (arg) *arg = x;
  return f(x);
}

double squeezed_variance(double r, double theta) {
  return (std::cosh(2.0 * r) - std::cos(2.0 * theta) * std::sinh(2.0 * r)) / 4.0;
}

void check_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("squeezing r must be finite and non-negative");
}

}  // namespace

DensityMatrix phase_randomize(const DensityMatrix& rho, int n_rotations) {
  if (n_rotations < 0) throw ValidationError("phase_randomize: n_rotations must be positive (0 for the full average)");
  const int d = rho.dim();
  CMatrix out = CMatrix::Zero(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      cplx f = (m == n) ? 1.0 : 0.0;
      if (n_rotations != kInfiniteRotations && m != n) {
        f = 0.0;
        for (int k = 0; k < n_rotations; ++k) f += std::polar(1.0, -(m - n) * k * kPi / n_rotations);
        f /= static_cast<double>(n_rotations);
      }
      out(m, n) = f * rho(m, n);
    }
  return DensityMatrix(out, rho.fictitious());
}

double gaussian_dm2_negativity(double v) {
  if (!(v > 0.0)) throw ValidationError("gaussian_dm2_negativity: variance must be positive");
  return std::max(0.25 / std::sqrt(v) - 0.5, 0.0);
}

double gaussian_bound_full(double r) {
  check_r(r);
  if (r == 0.0) return 0.0;
  const double tc = 0.5 * std::acos(std::tanh(r));
  return (std::exp(r) * elliptic_f(tc, 1.0 - std::exp(4.0 * r)) - tc) / kPi;
}

double gaussian_bound_full_quadrature(double r) {
  check_r(r);
  if (r == 0.0) return 0.0;
  const double tc = 0.5 * std::acos(std::tanh(r));
  // The integrand is smooth on [0, theta_c]; split to follow its peak at 0.
  double s = 0.0;
  const int panels = 16;
  for (int i = 0; i < panels; ++i) {
    const QuadratureRule q = gauss_legendre(32, tc * i / panels, tc * (i + 1) / panels);
    for (size_t j = 0; j < q.nodes.size(); ++j) s += q.weights[j] * gaussian_dm2_negativity(squeezed_variance(r, q.nodes[j]));
  }
  return 2.0 * s / kPi;
}

BoundMaximum gaussian_bound_maximum() {
  BoundMaximum m;
  m.value = golden_max([](double r) { return gaussian_bound_full(r); }, 0.1, 2.0, 1e-10, &m.r);
  return m;
}

double gaussian_bound_value(int n_rotations, double r) {
  check_r(r);
  if (n_rotations < 0) throw ValidationError("gaussian_bound_value: n_rotations must be positive (0 for the full average)");
  if (n_rotations == kInfiniteRotations) return gaussian_bound_full(r);
  const int n = n_rotations;
  auto avg = [&](double theta) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += gaussian_dm2_negativity(squeezed_variance(r, theta + k * kPi / n));
    return s / n;
  };
  // Period pi/N; coarse scan, then refine around the best cell.
  const double period = kPi / n;
  const int cells = 64;
  int best = 0;
  double bv = -1.0;
  for (int i = 0; i <= cells; ++i) {
    const double v = avg(period * i / cells);
    if (v > bv) bv = v, best = i;
  }
  const double lo = period * (best - 1) / cells, hi = period * (best + 1) / cells;
  return std::max(bv, golden_max(avg, lo, hi, 1e-12));
}

double randomized_gaussian_negativity(int n_rotations, double r, int dim, int theta_points) {
  check_r(r);
  DensityMatrix sv = fock_state(0, 1);
  if (dim > 0) {
    sv = squeezed_thermal_state({r, 0.0, 0.0, 0.0}, dim);
  } else {
    for (dim = 40;; dim += 20) {
      try {
        sv = squeezed_thermal_state({r, 0.0, 0.0, 0.0}, dim);
        break;
      } catch (const CutoffError&) {
        if (dim >= 200) throw;
      }
    }
  }
  const DensityMatrix mixed = phase_randomize(sv, n_rotations);
  std::vector<double> grid(static_cast<size_t>(theta_points));
  // The randomized state has period pi/N in theta.
  const double span = (n_rotations == kInfiniteRotations) ? 0.0 : kPi / n_rotations;
  for (int i = 0; i < theta_points; ++i) grid[i] = span * i / theta_points;
  if (n_rotations == kInfiniteRotations) grid.assign(1, 0.0);
  return negativity_scan(mixed, MapKind::DM2, grid).max_value;
}

GaussianBoundCurve gaussian_bound_finite(int n_rotations, const std::vector<double>& r_grid) {
  GaussianBoundCurve c;
  c.n_rotations = n_rotations;
  c.r_grid = r_grid;
  c.bound.assign(r_grid.size(), 0.0);
  for (double r : r_grid) {
    check_r(r);
    c.energy_grid.push_back(std::sinh(r) * std::sinh(r));
  }
  parallel_for(static_cast<int>(r_grid.size()), [&](int i) { c.bound[i] = gaussian_bound_value(n_rotations, r_grid[i]); });
  c.max_bound = c.bound.empty() ? 0.0 : *std::max_element(c.bound.begin(), c.bound.end());
  return c;
}

double gaussian_bound(int n_rotations, double energy) {
  if (!(energy >= 0.0)) throw ValidationError("gaussian_bound: energy must be non-negative");
  if (n_rotations != kInfiniteRotations && std::isinf(energy))
    throw ValidationError("gaussian_bound: finite-N bounds grow without limit; an energy is required");
  auto f = [n_rotations](double r) { return gaussian_bound_value(n_rotations, r); };
  // For the full average the curve decreases past its peak near r = 1.2.
  const double r_max = std::min(std::asinh(std::sqrt(std::min(energy, 1e300))), 4.0);
  if (r_max <= 0.0) return 0.0;
  // Scan for the running maximum, then refine the best bracket.
  const int cells = 200;
  int best = 0;
  double bv = 0.0;
  for (int i = 1; i <= cells; ++i) {
    const double v = f(r_max * i / cells);
    if (v > bv) bv = v, best = i;
  }
  if (best == cells) return bv;
  const double lo = r_max * (best - 1) / cells, hi = r_max * (best + 1) / cells;
  return std::max(bv, golden_max(f, lo, hi, 1e-10));
}

CriterionReport genuine_non_gaussianity_verdict(double neg, double sigma, int n_rotations, double energy) {
  if (!(sigma >= 0.0)) throw ValidationError("genuine_non_gaussianity_verdict: sigma must be non-negative");
  CriterionReport r;
  r.name = "genuine non-Gaussianity";
  r.witness = neg;
  r.sigma = sigma;
  r.threshold = gaussian_bound(n_rotations, energy);
  r.margin = neg - 3.0 * sigma - r.threshold;
  r.verdict = r.margin > 0.0;
  std::ostringstream os;
  os << "N = ";
  if (n_rotations == kInfiniteRotations) os << "inf";
  else os << n_rotations;
  os << ", energy = " << energy;
  r.detail = os.str();
  return r;
}

}  // namespace demarg
