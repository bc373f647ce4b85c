#include <cmath>
#include <numbers>

#include "demarg/error.hpp"
#include "demarg/fock.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace demarg;

TEST_CASE("fock states") {
  auto v = fock_state(0, 10);
  CHECK(v(0, 0).real() == 1.0);
  CHECK(v.elements().cwiseAbs().sum() == 1.0);
  auto one = fock_state(1, 10);
  CHECK(one(1, 1).real() == 1.0);
  CHECK_THROWS_AS(fock_state(3, 3), CutoffError);

  int warnings = 0;
  auto prev = set_warning_handler([&](const std::string&) { ++warnings; });
  auto two = fock_state(2, 3);
  set_warning_handler(prev);
  CHECK(two(2, 2).real() == 1.0);
  CHECK(warnings == 1);
}

TEST_CASE("coherent states") {
  auto vac = coherent_state(0.0, 10);
  CHECK(std::abs(vac(0, 0) - 1.0) < 1e-15);
  CHECK(coherent_state(1.0, 30).mean_photon_number() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(coherent_state(cplx(0.0, 0.5), 20).purity() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(coherent_state(4.0, 10), CutoffError);
}

TEST_CASE("thermal states") {
  auto t = thermal_state(1.0, 60);
  CHECK(t(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t(1, 1).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(thermal_state(0.5, 40).mean_photon_number() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(thermal_state(0.0, 10)(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("squeezed thermal states") {
  GaussianParams vac;
  auto v = squeezed_thermal_state(vac, 12);
  CHECK(std::abs(v(0, 0) - 1.0) < 1e-12);

  GaussianParams p;
  p.r = 0.5;
  auto s = squeezed_thermal_state(p, 40);
  // vacuum-squeezed x variance e^{-2r}/4 from <a>, <a^2>, <n>
  const CMatrix& m = s.elements();
  cplx a2 = 0.0;
  for (int n = 0; n + 2 < 40; ++n) a2 += m(n + 2, n) * std::sqrt((n + 1.0) * (n + 2.0));
  const double vx = (2.0 * a2.real() + 2.0 * s.mean_photon_number() + 1.0) / 4.0;
  CHECK(vx == doctest::Approx(std::exp(-1.0) / 4.0).epsilon(1e-8));
  CHECK(vx == doctest::Approx(0.09196986029286058).epsilon(1e-8));

  GaussianParams q;
  q.r = 0.3;
  q.nbar = 0.2;
  auto st = squeezed_thermal_state(q, 40);
  CHECK(st.trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(st.min_eigenvalue() >= -1e-10);
  // thermal + squeezing: <n> = (2 nbar + 1) cosh 2r / 2 - 1/2
  CHECK(st.mean_photon_number() == doctest::Approx(1.4 * std::cosh(0.6) / 2.0 - 0.5).epsilon(1e-8));

  GaussianParams big;
  big.r = 1.5;
  CHECK_THROWS_AS(squeezed_thermal_state(big, 20), CutoffError);
}

TEST_CASE("photon-added coherent") {
  auto one = photon_added_coherent(0.0, 10);
  CHECK(std::abs(one(1, 1) - 1.0) < 1e-14);
  auto s = photon_added_coherent(1.0, 40);
  CHECK(s.purity() == doctest::Approx(1.0).epsilon(1e-12));
  // unnormalized norm^2 of a^dag|gamma> is 1 + |gamma|^2
  const CVector c = coherent_amplitudes(1.0, 40);
  double n2 = 0.0;
  for (int n = 1; n < 40; ++n) n2 += n * std::norm(c(n - 1));
  CHECK(n2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("photon-added thermal") {
  auto one = photon_added_thermal(0.0, 10);
  CHECK(std::abs(one(1, 1) - 1.0) < 1e-14);
  auto s = photon_added_thermal(1.0, 80);
  CHECK(std::abs(s(0, 0)) == 0.0);
  // oracle: a^dag rho_th a by explicit matrices, then normalize
  const int d = 80;
  CMatrix adag = CMatrix::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) adag(n + 1, n) = std::sqrt(n + 1.0);
  CMatrix r = adag * thermal_state(1.0, d).elements() * adag.adjoint();
  r /= r.trace().real();
  CHECK(s(1, 1).real() / s(2, 2).real() == doctest::Approx(r(1, 1).real() / r(2, 2).real()).epsilon(1e-12));
  CHECK(s(1, 1).real() / s(2, 2).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dephased odd cat") {
  auto small = dephased_odd_cat(0.1, 1.0, 12);
  CHECK(small(1, 1).real() > 0.99);
  auto mixed = dephased_odd_cat(1.0, 0.0, 30);
  CHECK(mixed.min_eigenvalue() >= -1e-10);
  auto cat = dephased_odd_cat(1.0, 1.0, 40);
  // brute force: normalized |g> - |-g>
  CVector c = coherent_amplitudes(1.0, 40);
  CVector v = c;
  for (int n = 0; n < 40; ++n) v(n) = c(n) - ((n % 2) ? -c(n) : c(n));
  v /= v.norm();
  double nbar = 0.0;
  for (int n = 0; n < 40; ++n) nbar += n * std::norm(v(n));
  CHECK(cat.mean_photon_number() == doctest::Approx(nbar).epsilon(1e-12));
  CHECK(cat.mean_photon_number() == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-12));
  CHECK(cat.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("displacement operator against matrix exponential") {
  for (cplx a : {cplx(0.3, -0.2), cplx(1.1, 0.4), cplx(-0.7, 0.9)}) {
    const CMatrix d = displacement_operator(a, 40).elements;
    const CMatrix ref = oracle::displacement_expm(a, 40, 140);
    const int inner = 40 - guard_band(40);
    CHECK((d - ref).topLeftCorner(inner, inner).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(d(0, 0) - std::exp(-0.5 * std::norm(a))) < 1e-15);
  }
  const CMatrix id = displacement_operator(0.0, 8).elements;
  CHECK((id - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("displacement group law on the inner block") {
  gen::Rng rng(11);
  const int dim = 60;
  const int inner = 25;
  for (int t = 0; t < 20; ++t) {
    const cplx a = rng.complex_disk(1.0), b = rng.complex_disk(1.0);
    const CMatrix lhs = displacement_operator(a, dim).elements * displacement_operator(b, dim).elements;
    const CMatrix rhs = std::exp(0.5 * (a * std::conj(b) - std::conj(a) * b)) * displacement_operator(a + b, dim).elements;
    CHECK((lhs - rhs).topLeftCorner(inner, inner).cwiseAbs().maxCoeff() < 1e-8);
    const CMatrix inv = displacement_operator(a, dim).elements * displacement_operator(-a, dim).elements;
    CHECK((inv - CMatrix::Identity(dim, dim)).topLeftCorner(inner, inner).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("photon-added coherent is a displaced two-level state") {
  gen::Rng rng(12);
  const int dim = 50;
  for (int t = 0; t < 10; ++t) {
    const cplx g = rng.complex_disk(1.5);
    CVector two = CVector::Zero(dim);
    two(0) = std::conj(g);
    two(1) = 1.0;
    two /= std::sqrt(1.0 + std::norm(g));
    const CVector v = displacement_operator(g, dim).elements * two;
    const CMatrix ref = v * v.adjoint();
    const auto pac = photon_added_coherent(g, dim);
    CHECK((pac.elements() - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("phase rotation") {
  gen::Rng rng(13);
  auto r = gen::random_fds(rng, 3, 6);
  CHECK((phase_rotate(r, 0.0).elements() - r.elements()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((phase_rotate(r, 2.0 * std::numbers::pi).elements() - r.elements()).cwiseAbs().maxCoeff() < 1e-14);
  auto f = fock_state(2, 5);
  CHECK((phase_rotate(f, 0.77).elements() - f.elements()).cwiseAbs().maxCoeff() == 0.0);
  const auto e0 = r.eigenvalues();
  const auto e1 = phase_rotate(r, 1.234).eigenvalues();
  for (size_t i = 0; i < e0.size(); ++i) CHECK(e1[i] == doctest::Approx(e0[i]).epsilon(1e-13));
}

TEST_CASE("trace-norm negativity") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.5;
  d(1, 1) = -0.5;
  CHECK(trace_norm_negativity(DensityMatrix(d, true)) == doctest::Approx(0.5));
  CHECK(trace_norm_negativity(coherent_state(0.5, 20)) == doctest::Approx(0.0).epsilon(1e-12));
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(trace_norm_negativity(bad), ValidationError);
  CHECK_THROWS_AS(DensityMatrix{bad}, ValidationError);
}

TEST_CASE("physical constructors over random parameters") {
  gen::Rng rng(14);
  for (int t = 0; t < 30; ++t) {
    GaussianParams p;
    p.r = rng.uniform(0.0, 0.6);
    p.phi = rng.uniform(0.0, 3.0);
    p.nbar = rng.uniform(0.0, 0.5);
    p.alpha = rng.complex_disk(0.8);
    for (const auto& rho : {squeezed_thermal_state(p, 60), coherent_state(p.alpha, 30), thermal_state(p.nbar, 40),
                            photon_added_coherent(p.alpha, 40), dephased_odd_cat(0.2 + p.r, p.nbar, 40)}) {
      CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(rho.min_eigenvalue() >= -1e-10);
    }
  }
}
