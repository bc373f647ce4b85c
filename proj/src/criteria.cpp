#include "demarg/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "demarg/data_pipeline.hpp"
#include "demarg/error.hpp"
#include "demarg/kernels.hpp"
#include "demarg/special.hpp"

namespace demarg {

namespace {

constexpr double kCoverageSlack = 1e-12;

// 2^{-3m/2} H_m(sqrt(2) x) for m = 0..m_max.
std::vector<double> normal_ordered_powers(int m_max, double x) {
  std::vector<double> h = hermite_polynomials(m_max, std::sqrt(2.0) * x);
  for (int m = 0; m <= m_max; ++m) h[m] *= std::pow(2.0, -1.5 * m);
  return h;
}

double hankel_lambda_min(const std::vector<double>& tm, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment_matrix(tm, n), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

std::vector<double> sample_moments(const std::vector<double>& xs, int m_max) {
  std::vector<double> tm(static_cast<size_t>(m_max) + 1, 0.0);
  for (double x : xs) {
    const auto f = normal_ordered_powers(m_max, x);
    for (int m = 0; m <= m_max; ++m) tm[m] += f[m];
  }
  for (double& t : tm) t /= static_cast<double>(xs.size());
  return tm;
}

}  // namespace

AxisCharacteristic AxisCharacteristic::from_curve(const CharacteristicCurve& c) {
  std::vector<double> ks;
  std::vector<cplx> vs;
  bool dropped = false;
  for (const auto& s : c.samples) {
    if (s.k < 0.0) {
      dropped = true;
      continue;
    }
    if (!ks.empty() && !(s.k > ks.back())) throw ValidationError("characteristic curve: k must be strictly increasing");
    ks.push_back(s.k);
    vs.push_back(s.value);
  }
  if (dropped) warn("characteristic curve: negative-k samples ignored; C(-k) = conj C(k) is used instead");
  if (ks.empty() || ks.front() > 0.0) {
    ks.insert(ks.begin(), 0.0);
    vs.insert(vs.begin(), cplx(1.0, 0.0));
  }
  AxisCharacteristic a;
  a.coverage_ = ks.back();
  a.f_ = [ks = std::move(ks), vs = std::move(vs)](double k) {
    if (ks.size() == 1) return vs[0];
    auto it = std::upper_bound(ks.begin(), ks.end(), k);
    size_t i = std::clamp<size_t>(static_cast<size_t>(it - ks.begin()), 1, ks.size() - 1);
    const double t = std::min((k - ks[i - 1]) / (ks[i] - ks[i - 1]), 1.0);
    return (1.0 - t) * vs[i - 1] + t * vs[i];
  };
  return a;
}

AxisCharacteristic AxisCharacteristic::from_state(const DensityMatrix& rho, double theta) {
  AxisCharacteristic a;
  a.coverage_ = std::numeric_limits<double>::infinity();
  a.f_ = [rho, theta](double k) { return characteristic(rho, theta, k); };
  return a;
}

cplx AxisCharacteristic::operator()(double k) const {
  const double ak = std::abs(k);
  if (ak > coverage_ + kCoverageSlack) {
    std::ostringstream os;
    os << "characteristic needed at |k| = " << ak << " beyond measured range " << coverage_;
    throw CoverageError(os.str());
  }
  const cplx v = f_(std::min(ak, coverage_));
  return k < 0.0 ? std::conj(v) : v;
}

cplx fictitious_characteristic(const AxisCharacteristic& c, MapKind kind, cplx xi) {
  const double kx = -xi.imag();
  const double ky = xi.real();
  if (kind == MapKind::DM1) return c(kx) * c(ky);
  return c(kx) * std::exp(-0.5 * ky * ky);
}

std::vector<cplx> klm_lattice(int n, double d) {
  if (n < 1) throw ValidationError("KLM lattice size must be positive");
  if (!(d > 0.0)) throw ValidationError("KLM lattice spacing must be positive");
  std::vector<cplx> pts;
  const double c = 0.5 * (n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pts.emplace_back((j - c) * d, -(i - c) * d);
  return pts;
}

KlmMatrix klm_matrix(const std::function<cplx(cplx)>& c, const std::vector<cplx>& points, double d) {
  const int m = static_cast<int>(points.size());
  KlmMatrix r;
  r.points = points;
  r.d = d;
  r.elements = CMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      const cplx a = points[j], b = points[k];
      r.elements(j, k) = c(a - b) * std::exp(0.5 * (a * std::conj(b) - std::conj(a) * b));
    }
  const CMatrix h = 0.5 * (r.elements + r.elements.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  r.lambda_min = es.eigenvalues()(0);
  return r;
}

KlmMatrix klm_matrix(const AxisCharacteristic& c, MapKind kind, int n, double d) {
  return klm_matrix([&](cplx xi) { return fictitious_characteristic(c, kind, xi); }, klm_lattice(n, d), d);
}

std::vector<double> default_d_range() {
  std::vector<double> d(20);
  for (int i = 0; i < 20; ++i) d[i] = 0.1 + (2.0 - 0.1) * i / 19.0;
  return d;
}

std::vector<double> clip_d_range(const std::vector<double>& d_values, int n, double coverage) {
  std::vector<double> out;
  for (double d : d_values)
    if ((n - 1) * d <= coverage + kCoverageSlack) out.push_back(d);
  return out;
}

std::vector<KlmPoint> klm_test(const DensityMatrix& rho, double theta, MapKind kind, int n,
                               const std::vector<double>& d_values) {
  const AxisCharacteristic c = AxisCharacteristic::from_state(rho, theta);
  std::vector<KlmPoint> out(d_values.size());
  parallel_for(static_cast<int>(d_values.size()), [&](int i) {
    out[i] = {d_values[i], klm_matrix(c, kind, n, d_values[i]).lambda_min, 0.0};
  });
  return out;
}

std::vector<KlmPoint> klm_test(const CharacteristicCurve& curve, MapKind kind, int n, const std::vector<double>& d_values,
                               int resamples, std::uint64_t seed) {
  const AxisCharacteristic c = AxisCharacteristic::from_curve(curve);
  // Fail before any bootstrap work if the lattice leaves the data.
  for (double d : d_values) (void)c((n - 1) * d);
  std::vector<KlmPoint> out(d_values.size());
  for (size_t i = 0; i < d_values.size(); ++i) out[i] = {d_values[i], klm_matrix(c, kind, n, d_values[i]).lambda_min, 0.0};
  if (resamples > 0) {
    const auto b = bootstrap_curve(curve, resamples, seed, [&](const CharacteristicCurve& rc) {
      const AxisCharacteristic ac = AxisCharacteristic::from_curve(rc);
      std::vector<double> v;
      for (double d : d_values) v.push_back(klm_matrix(ac, kind, n, d).lambda_min);
      return v;
    });
    for (size_t i = 0; i < out.size(); ++i) out[i].sigma = b[i].sigma;
  }
  return out;
}

Eigen::MatrixXd moment_matrix(const std::vector<double>& tm, int n) {
  if (n < 1) throw ValidationError("moment matrix size must be positive");
  if (static_cast<int>(tm.size()) < 2 * n - 1) {
    std::ostringstream os;
    os << "moment matrix of size " << n << " needs moments up to order " << 2 * n - 2;
    throw ValidationError(os.str());
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = tm[i + j];
  return m;
}

double MomentReport::lambda_min(int n) const { return hankel_lambda_min(tilde_moments, n); }

MomentReport tilde_moments(const std::vector<double>& samples, int m_max) {
  if (samples.empty()) throw ValidationError("tilde_moments: no samples");
  if (m_max < 0) throw ValidationError("tilde_moments: m_max must be non-negative");
  MomentReport r;
  r.m_max = m_max;
  r.shots = static_cast<long>(samples.size());
  r.samples = samples;
  r.tilde_moments = sample_moments(samples, m_max);
  std::vector<double> sq(static_cast<size_t>(m_max) + 1, 0.0);
  for (double x : samples) {
    const auto f = normal_ordered_powers(m_max, x);
    for (int m = 0; m <= m_max; ++m) sq[m] += f[m] * f[m];
  }
  const double n = static_cast<double>(samples.size());
  for (int m = 0; m <= m_max; ++m) {
    const double var = std::max(sq[m] / n - r.tilde_moments[m] * r.tilde_moments[m], 0.0);
    r.deltas.push_back(std::sqrt(var / n));
  }
  return r;
}

MomentReport tilde_moments(const MarginalDistribution& md, int m_max, long shots) {
  if (m_max < 0) throw ValidationError("tilde_moments: m_max must be non-negative");
  if (shots < 1) throw ValidationError("tilde_moments: shots must be positive");
  MomentReport r;
  r.m_max = m_max;
  r.shots = shots;
  const double norm = md.norm();
  for (int m = 0; m <= m_max; ++m) {
    const double mean = md.expect([m](double x) { return normal_ordered_powers(m, x)[m]; }, m) / norm;
    const double sq = md.expect(
                          [m](double x) {
                            const double f = normal_ordered_powers(m, x)[m];
                            return f * f;
                          },
                          2 * m) /
                      norm;
    r.tilde_moments.push_back(mean);
    r.deltas.push_back(std::sqrt(std::max(sq - mean * mean, 0.0) / static_cast<double>(shots)));
  }
  r.tilde_moments[0] = 1.0;
  return r;
}

LambdaEstimate moment_matrix_test(const MomentReport& r, int n, int resamples, std::uint64_t seed) {
  LambdaEstimate e;
  e.lambda_min = r.lambda_min(n);
  if (resamples == 0) return e;
  if (resamples < 2) throw ValidationError("bootstrap needs at least 2 resamples");
  const int order = 2 * n - 2;
  std::vector<double> v(resamples);
  parallel_for(resamples, [&](int i) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    std::vector<double> tm;
    if (!r.samples.empty()) {
      std::uniform_int_distribution<size_t> pick(0, r.samples.size() - 1);
      std::vector<double> xs(r.samples.size());
      for (auto& x : xs) x = r.samples[pick(rng)];
      tm = sample_moments(xs, order);
    } else {
      std::normal_distribution<double> g(0.0, 1.0);
      tm.assign(r.tilde_moments.begin(), r.tilde_moments.begin() + order + 1);
      for (int m = 1; m <= order; ++m) tm[m] += r.deltas[m] * g(rng);
    }
    v[i] = hankel_lambda_min(tm, n);
  });
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= resamples;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  e.sigma = std::sqrt(ss / (resamples - 1));
  return e;
}

CriterionReport uncertainty_check(const MarginalDistribution& m, MapKind kind) {
  const double vx = m.variance();
  if (!(vx > 0.0)) throw ValidationError("uncertainty_check: marginal variance must be positive");
  const double vy = (kind == MapKind::DM1) ? vx : 0.25;
  CriterionReport r;
  r.name = std::string("uncertainty/") + to_string(kind);
  r.witness = std::sqrt(vx * vy);
  r.threshold = 0.25;
  r.margin = 0.25 - r.witness;
  r.verdict = r.margin > 1e-12;
  std::ostringstream os;
  os << "V_x = " << vx << ", V_y = " << vy;
  r.detail = os.str();
  return r;
}

double squeezing_success_probability(const GaussianParams& p) {
  if (p.r < 0.0) throw ValidationError("squeezing_success_probability: r must be non-negative");
  if (p.r == 0.0) return 0.0;
  const double arg = (std::cosh(2.0 * p.r) - p.mu()) / std::sinh(2.0 * p.r);
  if (arg >= 1.0) return 0.0;
  return std::acos(std::clamp(arg, -1.0, 1.0)) / std::numbers::pi;
}

}  // namespace demarg
