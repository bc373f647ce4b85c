// Randomized invariants. Each property draws at least kInstances cases from
// its own fixed-seed stream.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "demarg/criteria.hpp"
#include "demarg/demarg.hpp"
#include "demarg/entanglement.hpp"
#include "demarg/error.hpp"
#include "demarg/gaussian_bounds.hpp"
#include "demarg/kernels.hpp"
#include "demarg/phasespace.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace demarg;

namespace {

constexpr int kInstances = 100;
constexpr double kPi = std::numbers::pi;

MapKind random_kind(gen::Rng& rng) { return rng.integer(0, 1) ? MapKind::DM1 : MapKind::DM2; }

double neg_at(const DensityMatrix& rho, MapKind kind, double theta) { return negativity(dm_analytic(rho, kind, theta)); }

// Coherent mixture, thermal state, or a mixture of both.
DensityMatrix random_classical(gen::Rng& rng) {
  switch (rng.integer(0, 2)) {
    case 0:
      return gen::random_coherent_mixture(rng, rng.integer(1, 3), 1.2, 24);
    case 1:
      return thermal_state(rng.uniform(0.0, 0.6), 40);
    default: {
      const double w = rng.uniform(0.0, 1.0);
      return mix({{w, thermal_state(rng.uniform(0.0, 0.4), 40)},
                  {1.0 - w, coherent_state(rng.complex_disk(1.0), 40)}});
    }
  }
}

// Smallest cutoff from 40 upward (x1.25) that holds the state.
DensityMatrix squeezed_fitted(const GaussianParams& g) {
  for (int dim = 40;; dim = dim * 5 / 4) {
    try {
      return squeezed_thermal_state(g, dim);
    } catch (const CutoffError&) {
      if (dim > 400) throw;
    }
  }
}

std::vector<double> random_vector(gen::Rng& rng, int n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

std::vector<cplx> random_cvector(gen::Rng& rng, int n) {
  std::vector<cplx> v(n);
  for (cplx& x : v) x = cplx(rng.normal(), rng.normal());
  return v;
}

}  // namespace

TEST_CASE("classical states have no negativity under either map") {
  gen::Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix rho = random_classical(rng);
    const MapKind kind = random_kind(rng);
    const double th = rng.uniform(0.0, kPi);
    const double n = neg_at(rho, kind, th);
    worst = std::max(worst, n);
    CHECK_MESSAGE(n < 1e-7, "instance " << t << " theta " << th << " map " << to_string(kind));
  }
  MESSAGE("largest classical negativity " << worst);
}

TEST_CASE("negativity is convex under mixing") {
  gen::Rng rng(102);
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix a = gen::random_fds(rng, rng.integer(1, 4), 6);
    const DensityMatrix b = gen::random_fds(rng, rng.integer(1, 4), 6);
    const double p = rng.uniform(0.0, 1.0);
    const MapKind kind = random_kind(rng);
    const double th = rng.uniform(0.0, kPi);
    const double lhs = neg_at(mix({{p, a}, {1.0 - p, b}}), kind, th);
    const double rhs = p * neg_at(a, kind, th) + (1.0 - p) * neg_at(b, kind, th);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("negativity is invariant under displacement") {
  gen::Rng rng(103);
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix rho = gen::random_fds(rng, rng.integer(1, 3), 4);
    const DensityMatrix shifted = displace(rho, rng.complex_disk(0.5), 36);
    const MapKind kind = random_kind(rng);
    const double th = rng.uniform(0.0, kPi);
    CHECK(neg_at(shifted, kind, th) == doctest::Approx(neg_at(rho, kind, th)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("phase rotation shifts the axis") {
  gen::Rng rng(104);
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix rho = gen::random_fds(rng, rng.integer(1, 4), 6);
    const double th = rng.uniform(0.0, kPi), ph = rng.uniform(-kPi, kPi);
    const MapKind kind = random_kind(rng);
    CHECK(neg_at(phase_rotate(rho, ph), kind, th) == doctest::Approx(neg_at(rho, kind, th + ph)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("KLM matrices of classical states are positive") {
  gen::Rng rng(105);
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix rho = random_classical(rng);
    const MapKind kind = random_kind(rng);
    const double th = rng.uniform(0.0, kPi);
    const std::vector<double> ds{rng.uniform(0.1, 2.0)};
    const auto pts = klm_test(rho, th, kind, rng.integer(2, 3), ds);
    CHECK(pts.front().lambda_min >= -1e-9);
  }
}

TEST_CASE("Hankel moment matrices of coherent mixtures are positive") {
  gen::Rng rng(106);
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix rho = gen::random_coherent_mixture(rng, rng.integer(1, 3), 1.0, 24);
    const MomentReport m = tilde_moments(marginal_analytic(rho, rng.uniform(0.0, kPi)), 8, 1000);
    for (int n = 1; n <= 4; ++n) CHECK(m.lambda_min(n) >= -1e-9);
  }
}

TEST_CASE("nested Hankel minimum eigenvalues do not increase") {
  gen::Rng rng(107);
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix rho = rng.integer(0, 1) ? gen::random_fds(rng, rng.integer(1, 4), 6) : random_classical(rng);
    const MomentReport m = tilde_moments(marginal_analytic(rho, rng.uniform(0.0, kPi)), 10, 1000);
    for (int n = 1; n < 5; ++n) CHECK(m.lambda_min(n + 1) <= m.lambda_min(n) + 1e-12);
  }
}

TEST_CASE("finite-dimensional states are nonclassical on every axis") {
  gen::Rng rng(108);
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix rho = gen::random_fds(rng, rng.integer(1, 5), 6);
    const MapKind kind = random_kind(rng);
    for (int j = 0; j < 4; ++j) {
      const double th = rng.uniform(0.0, kPi);
      CHECK_MESSAGE(neg_at(rho, kind, th) > 1e-10, "instance " << t << " theta " << th);
    }
  }
}

TEST_CASE("fully randomized Gaussian mixtures stay under the Gaussian bound") {
  gen::Rng rng(109);
  const double bg = gaussian_bound(kInfiniteRotations);
  for (int t = 0; t < kInstances; ++t) {
    std::vector<std::pair<double, DensityMatrix>> parts;
    const int comps = rng.integer(1, 3);
    for (int c = 0; c < comps; ++c) {
      const GaussianParams g{rng.uniform(0.0, 1.0), rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 0.3), 0.0};
      parts.push_back({rng.uniform(0.1, 1.0), squeezed_fitted(g)});
    }
    double total = 0.0;
    for (auto& p : parts) total += p.first;
    for (auto& p : parts) p.first /= total;
    const DensityMatrix rho = phase_randomize(mix(parts), kInfiniteRotations);
    CHECK(neg_at(rho, MapKind::DM2, 0.0) <= bg + 1e-3);
  }
}

TEST_CASE("parallel kernels match their serial twins bit for bit") {
  gen::Rng rng(110);
  for (int t = 0; t < kInstances; ++t) {
    const int dim = rng.integer(2, 8);
    switch (t % 3) {
      case 0: {
        const DensityMatrix rho = gen::random_fds(rng, dim - 1, dim);
        std::vector<double> qs = random_vector(rng, rng.integer(1, 12)), ps = random_vector(rng, rng.integer(1, 12));
        const auto a = kernels::wigner_grid(rho, qs, ps);
        const auto b = kernels::reference::wigner_grid(rho, qs, ps);
        CHECK((a.array() == b.array()).all());
        break;
      }
      case 1: {
        const int n = rng.integer(4, 24);
        const QuadratureRule x = gauss_hermite(n), y = gauss_hermite(rng.integer(4, 24));
        const auto fx = random_vector(rng, static_cast<int>(x.nodes.size()));
        const auto fy = random_vector(rng, static_cast<int>(y.nodes.size()));
        const CMatrix a = kernels::project_product_grid(x, fx, y, fy, dim);
        const CMatrix b = kernels::reference::project_product_grid(x, fx, y, fy, dim);
        CHECK((a.array() == b.array()).all());
        break;
      }
      default: {
        const QuadratureRule kx = gauss_legendre(rng.integer(2, 16), -3.0, 3.0);
        const QuadratureRule ky = gauss_legendre(rng.integer(2, 16), -3.0, 3.0);
        const auto cx = random_cvector(rng, static_cast<int>(kx.nodes.size()));
        const auto cy = random_cvector(rng, static_cast<int>(ky.nodes.size()));
        const CMatrix a = kernels::invert_characteristic_grid(kx, cx, ky, cy, dim);
        const CMatrix b = kernels::reference::invert_characteristic_grid(kx, cx, ky, cy, dim);
        CHECK((a.array() == b.array()).all());
      }
    }
  }
}

TEST_CASE("entanglement potential is invariant under displacement") {
  gen::Rng rng(111);
  for (int t = 0; t < kInstances; ++t) {
    const DensityMatrix rho = gen::random_fds(rng, rng.integer(1, 2), 3);
    const DensityMatrix shifted = displace(rho, rng.complex_disk(0.3), 30);
    CHECK(entanglement_potential(shifted) == doctest::Approx(entanglement_potential(rho)).epsilon(1e-5).scale(1.0));
  }
}
