#include <cmath>
#include <numbers>

#include "demarg/criteria.hpp"
#include "demarg/data_pipeline.hpp"
#include "demarg/error.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace demarg;

namespace {

DensityMatrix psi02(int dim) {
  CVector v = CVector::Zero(dim);
  v(0) = v(2) = 1.0;
  return pure_state(v);
}

// <2^{-3m/2} H_m(sqrt2 x)> by Simpson over the wavefunction-route marginal.
double moment_oracle(const DensityMatrix& rho, double theta, int m) {
  return oracle::simpson(
      [&](double x) {
        return marginal_wavefunction_route(rho, theta, x) * std::pow(2.0, -1.5 * m) *
               oracle::hermite_explicit(m, std::sqrt(2.0) * x);
      },
      -8.0, 8.0, 4000);
}

double min_over(const std::vector<KlmPoint>& pts) {
  double v = 1e300;
  for (const auto& p : pts) v = std::min(v, p.lambda_min);
  return v;
}

}  // namespace

TEST_CASE("KLM lattice is centered and axis-aligned") {
  const auto pts = klm_lattice(3, 0.5);
  REQUIRE(pts.size() == 9);
  CHECK(std::abs(pts[4]) < 1e-15);
  cplx sum = 0.0;
  for (auto p : pts) sum += p;
  CHECK(std::abs(sum) < 1e-14);
  CHECK_THROWS_AS(klm_lattice(0, 0.5), ValidationError);
  CHECK_THROWS_AS(klm_lattice(3, 0.0), ValidationError);
}

TEST_CASE("KLM matrix against displacement-trace oracle") {
  const DensityMatrix rho = psi02(8);
  const int work = 60;
  CMatrix big = CMatrix::Zero(work, work);
  big.topLeftCorner(8, 8) = rho.elements();
  auto c_oracle = [&](cplx xi) {
    // DM2 fictitious state: C(kx) e^{-ky^2/2} with C(k) = tr[rho D(-i k)].
    const double kx = -xi.imag(), ky = xi.real();
    const CMatrix d = oracle::displacement_expm(cplx(0.0, -kx), work, work);
    return (big * d).trace() * std::exp(-0.5 * ky * ky);
  };
  const double d = 0.8;
  const KlmMatrix ref = klm_matrix(c_oracle, klm_lattice(3, d), d);
  const KlmMatrix got = klm_matrix(AxisCharacteristic::from_state(rho, 0.0), MapKind::DM2, 3, d);
  CHECK((ref.elements - got.elements).cwiseAbs().maxCoeff() < 1e-10);
  for (int j = 0; j < 9; ++j) CHECK(std::abs(got.elements(j, j) - 1.0) < 1e-12);
  CHECK((got.elements - got.elements.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(got.lambda_min == doctest::Approx(oracle::min_eigenvalue_general(got.elements)).epsilon(1e-9));
}

TEST_CASE("KLM examples") {
  const auto ds = default_d_range();
  REQUIRE(ds.size() == 20);
  CHECK(ds.front() == doctest::Approx(0.1));
  CHECK(ds.back() == doctest::Approx(2.0));

  SUBCASE("vacuum DM2 stays non-negative") {
    const auto pts = klm_test(fock_state(0, 4), 0.0, MapKind::DM2, 3, ds);
    CHECK(min_over(pts) >= -1e-9);
  }
  SUBCASE("psi02 DM2 at pi/2 goes negative") {
    const auto pts = klm_test(psi02(6), std::numbers::pi / 2, MapKind::DM2, 3, ds);
    CHECK(min_over(pts) < -1e-4);
  }
  SUBCASE("equal Fock 0/1 mixture on a 5x5 lattice") {
    const DensityMatrix rho = mix({{0.5, fock_state(0, 4)}, {0.5, fock_state(1, 4)}});
    CHECK(min_over(klm_test(rho, 0.0, MapKind::DM2, 5, ds)) < -1e-4);
  }
}

TEST_CASE("KLM on measured curves") {
  const DensityMatrix vac = fock_state(0, 4);
  std::vector<double> ks;
  for (int i = 1; i <= 40; ++i) ks.push_back(0.05 * i);
  const CharacteristicCurve curve = ideal_characteristic_curve(vac, 0.0, ks);

  SUBCASE("coverage is never extrapolated") {
    CHECK_THROWS_AS(klm_test(curve, MapKind::DM2, 3, {1.5}, 0, 1), CoverageError);
    const auto clipped = clip_d_range(default_d_range(), 3, 2.0);
    CHECK(clipped.back() <= 1.0 + 1e-12);
    CHECK(clipped.size() == 10);
    CHECK_NOTHROW(klm_test(curve, MapKind::DM2, 3, clipped, 0, 1));
  }
  SUBCASE("interpolated ideal curve agrees with the exact characteristic") {
    const auto exact = klm_test(vac, 0.0, MapKind::DM2, 3, {0.5, 1.0});
    const auto meas = klm_test(curve, MapKind::DM2, 3, {0.5, 1.0}, 0, 1);
    for (int i = 0; i < 2; ++i) CHECK(meas[i].lambda_min == doctest::Approx(exact[i].lambda_min).epsilon(1e-3));
  }
  SUBCASE("bootstrap sigma tracks shot noise") {
    const auto m = simulate_measurement(vac, 0.0, ks, 2000, 11);
    const auto pts = klm_test(to_curve(m), MapKind::DM2, 3, {0.6}, 200, 5);
    CHECK(pts[0].sigma > 0.0);
    CHECK(pts[0].sigma < 0.1);
    const auto again = klm_test(to_curve(m), MapKind::DM2, 3, {0.6}, 200, 5);
    CHECK(again[0].sigma == pts[0].sigma);
  }
  SUBCASE("negative k is ignored with a warning") {
    CharacteristicCurve c = curve;
    c.samples.insert(c.samples.begin(), CharacteristicSample{-0.1, cplx(0.99, 0.0), 0, 0, 0});
    std::string seen;
    auto prev = set_warning_handler([&](const std::string& m) { seen = m; });
    const AxisCharacteristic a = AxisCharacteristic::from_curve(c);
    set_warning_handler(prev);
    CHECK(seen.find("negative") != std::string::npos);
    CHECK(std::abs(a(0.0) - 1.0) < 1e-15);
    CHECK(std::abs(a(-0.5) - std::conj(a(0.5))) < 1e-15);
  }
}

TEST_CASE("tilde moments of the vacuum") {
  const MarginalDistribution m = marginal_analytic(fock_state(0, 4), 0.0);
  const MomentReport r = tilde_moments(m, 8, 1000);
  CHECK(r.tilde_moments[0] == 1.0);
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(r.tilde_moments[k]) < 1e-12);
  CHECK(r.deltas[2] == doctest::Approx(std::sqrt(2.0 / 16.0 / 1000.0)).epsilon(1e-10));
  CHECK(r.deltas[2] == doctest::Approx(0.01118).epsilon(1e-3));
  for (int k = 1; k <= 8; ++k)
    CHECK(r.deltas[k] == doctest::Approx(std::sqrt(std::tgamma(k + 1.0) * std::pow(4.0, -k) / 1000.0)).epsilon(1e-9));
  CHECK(std::abs(r.lambda_min(3)) < 1e-12);
  CHECK(std::abs(moment_matrix_test(r, 3, 0).lambda_min) < 1e-12);
}

TEST_CASE("tilde moments of |1>") {
  const DensityMatrix one = fock_state(1, 4);
  const MomentReport r = tilde_moments(marginal_analytic(one, 0.3), 6, 1000);
  for (int m = 0; m <= 6; ++m) CHECK(r.tilde_moments[m] == doctest::Approx(moment_oracle(one, 0.3, m)).epsilon(1e-8));
  CHECK(r.tilde_moments[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(r.tilde_moments[4]) < 1e-12);
  CHECK(r.lambda_min(3) == doctest::Approx((1.0 - std::sqrt(2.0)) / 2.0).epsilon(1e-12));

  const MomentReport vac = tilde_moments(marginal_analytic(fock_state(0, 4), 0.0), 6, 1000);
  for (int m = 2; m <= 6; ++m) CHECK(r.deltas[m] > vac.deltas[m]);

  const auto small = moment_matrix(r.tilde_moments, 2);
  const auto large = moment_matrix(r.tilde_moments, 3);
  CHECK((large.topLeftCorner(2, 2) - small).norm() == 0.0);
  CHECK_THROWS_AS(moment_matrix(r.tilde_moments, 5), ValidationError);
}

TEST_CASE("moments from shot data") {
  const auto xs = sample_quadrature(fock_state(1, 4), 0.0, 1000, 3);
  const MomentReport r = tilde_moments(xs, 4);
  CHECK(r.shots == 1000);
  CHECK(r.tilde_moments[2] == doctest::Approx(0.5).epsilon(0.15));
  const LambdaEstimate e = moment_matrix_test(r, 3, 300, 9);
  CHECK(e.lambda_min < 0.0);
  CHECK(e.sigma > 0.0);
  // Same input, same seed: same answer.
  CHECK(moment_matrix_test(r, 3, 300, 9).sigma == e.sigma);
  CHECK_THROWS_AS(moment_matrix_test(r, 3, 1, 9), ValidationError);

  // Without samples the Delta_m widths drive the bootstrap.
  MomentReport no_samples = r;
  no_samples.samples.clear();
  CHECK(moment_matrix_test(no_samples, 3, 300, 9).sigma > 0.0);
}

TEST_CASE("uncertainty check") {
  const MarginalDistribution vac = marginal_analytic(fock_state(0, 4), 0.0);
  for (MapKind k : {MapKind::DM1, MapKind::DM2}) {
    const auto r = uncertainty_check(vac, k);
    CHECK(std::abs(r.margin) < 1e-12);
    CHECK_FALSE(r.verdict);
  }
  const DensityMatrix sq = squeezed_thermal_state({0.5, 0.0, 0.0, 0.0}, 50);
  const MarginalDistribution m = marginal_analytic(sq, 0.0);
  REQUIRE(m.variance() == doctest::Approx(std::exp(-1.0) / 4.0).epsilon(1e-9));
  const auto r2 = uncertainty_check(m, MapKind::DM2);
  CHECK(r2.verdict);
  CHECK(r2.margin == doctest::Approx(0.25 * (1.0 - std::exp(-0.5))).epsilon(1e-8));
  CHECK(r2.margin == doctest::Approx(0.098367).epsilon(1e-5));
  const auto r1 = uncertainty_check(m, MapKind::DM1);
  CHECK(r1.margin == doctest::Approx(0.25 * (1.0 - std::exp(-1.0))).epsilon(1e-8));

  for (double nbar : {0.1, 1.0, 3.0}) CHECK_FALSE(uncertainty_check(marginal_analytic(thermal_state(nbar, 100), 0.7), MapKind::DM2).verdict);
}

TEST_CASE("squeezing success probability") {
  CHECK(squeezing_success_probability({1e-7, 0.0, 0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(squeezing_success_probability({0.5, 0.0, 0.0, 0.0}) == doctest::Approx(std::acos(std::tanh(0.5)) / std::numbers::pi));
  CHECK(squeezing_success_probability({0.5, 0.0, 0.0, 0.0}) == doctest::Approx(0.34700).epsilon(1e-4));
  CHECK(squeezing_success_probability({20.0, 0.0, 0.0, 0.0}) < 1e-8);
  CHECK(squeezing_success_probability({0.0, 0.0, 0.0, 0.0}) == 0.0);
  // Thermal noise that hides the squeezing.
  CHECK(squeezing_success_probability({0.1, 0.0, 2.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(squeezing_success_probability({-0.1, 0.0, 0.0, 0.0}), ValidationError);
  double prev = 0.0;
  for (double nbar = 0.5; nbar >= 0.0; nbar -= 0.05) {
    const double v = squeezing_success_probability({0.8, 0.0, nbar, 0.0});
    CHECK(v >= prev);
    CHECK(v <= 0.5);
    prev = v;
  }
}
