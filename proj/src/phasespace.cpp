#include "demarg/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "demarg/error.hpp"
#include "demarg/special.hpp"

namespace demarg {

namespace {

constexpr cplx kI{0.0, 1.0};

double binom(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

cplx i_pow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// int phi_b(u) du over the real line.
double hermite_function_integral(int b) {
  if (b % 2) return 0.0;
  const int l = b / 2;
  return std::sqrt(2.0) * std::pow(std::numbers::pi, 0.25) *
         std::exp(0.5 * log_factorial(b) - l * std::log(2.0) - log_factorial(l));
}

}  // namespace

HermiteExpansion a_coefficients(int j, int k) {
  if (j < 0 || k < 0) throw ValidationError("a_coefficients: negative index");
  if (j < k) {
    HermiteExpansion e = a_coefficients(k, j);
    for (auto& c : e.coeffs) c = std::conj(c);
    std::swap(e.j, e.k);
    return e;
  }
  HermiteExpansion e{j, k, std::vector<cplx>(static_cast<size_t>(j + k) + 1, cplx{})};
  if (j == k) {
    for (int n = 0; n <= 2 * j; n += 2) {
      e.coeffs[n] = std::exp(-j * std::log(4.0) - log_factorial(n / 2) - log_factorial(j - n / 2));
    }
    return e;
  }
  const double pre = std::exp(0.5 * (log_factorial(k) - log_factorial(j)) - j * std::log(4.0) +
                              log_factorial(j - k) - log_factorial(j));
  for (int n = 0; n <= j + k; ++n) {
    double s = 0.0;
    for (int l = (n + 1) / 2; l <= (j - k + n) / 2; ++l) {
      if (l > j) break;
      const double t = binom(j, l) * binom(2 * l, 2 * l - n) * binom(2 * (j - l), j - k + n - 2 * l);
      s += (l % 2 ? -t : t);
    }
    e.coeffs[n] = pre * s / i_pow(j - k + n);
  }
  return e;
}

std::vector<std::optional<cplx>> a_coefficients_alt(int j, int k) {
  if (j < 0 || k < 0) throw ValidationError("a_coefficients_alt: negative index");
  const int d = j + k;
  std::vector<std::optional<cplx>> out(static_cast<size_t>(d) + 1);
  for (int n = 0; n <= d; ++n) {
    if ((d - n) % 2) continue;
    double s = 0.0;
    for (int r = 0; r <= n; ++r) {
      const double t = binom(n, r) * binom(d - n, k - r);
      s += ((k - r) % 2 ? -t : t);
    }
    const double sign = ((d - n) / 2) % 2 ? -1.0 : 1.0;
    const double pre = std::exp(0.5 * (log_factorial(j) + log_factorial(k)) - d * std::log(2.0) -
                                log_factorial(n) - log_factorial(d - n));
    out[n] = cplx(sign * pre * s, 0.0);
  }
  return out;
}

std::vector<double> hermite_linearization(int j, int k) {
  if (j < 0 || k < 0) throw ValidationError("hermite_linearization: negative index");
  const int d = j + k;
  std::vector<double> a(static_cast<size_t>(d) + 1, 0.0);
  for (int n = d % 2; n <= d; n += 2) {
    double s = 0.0;
    for (int r = 0; r <= n; ++r) {
      const double t = binom(n, r) * binom(d - n, k - r);
      s += ((k - r) % 2 ? -t : t);
    }
    const double sign = ((d - n) / 2) % 2 ? -1.0 : 1.0;
    a[n] = sign * s *
           std::exp(log_factorial(j) + log_factorial(k) - 0.5 * d * std::log(2.0) - log_factorial(n) -
                    log_factorial((d - n) / 2));
  }
  return a;
}

WignerHermiteTable::WignerHermiteTable(int levels) : levels_(levels) {
  if (levels < 1) throw ValidationError("WignerHermiteTable: need at least one level");
  rows_.resize(static_cast<size_t>(levels) * levels);
  auto at = [&](int j, int k) -> std::vector<cplx>& { return rows_[static_cast<size_t>(j) * levels_ + k]; };
  // W_{a^dag rho} = (alpha^* - d/d alpha / 2) W_rho raises the left index,
  // W_{rho a} = (alpha - d/d alpha^* / 2) W_rho the right one. Walking up the
  // diagonal first and then raising the left index keeps the recurrence
  // stable; sweeping the right index across a long row does not.
  auto raise = [](const std::vector<cplx>& src, int idx, double sign) {
    const int d = static_cast<int>(src.size()) - 1;
    std::vector<cplx> dst(static_cast<size_t>(d) + 2);
    for (int a = 0; a <= d + 1; ++a) {
      cplx v = 0.0;
      if (a >= 1) v += std::sqrt(static_cast<double>(a)) * src[a - 1];
      if (a <= d) v += sign * kI * std::sqrt(static_cast<double>(d + 1 - a)) * src[a];
      dst[a] = v / std::sqrt(2.0 * (idx + 1));
    }
    return dst;
  };
  at(0, 0) = {cplx(std::sqrt(std::numbers::pi), 0.0)};
  for (int k = 0; k < levels; ++k) {
    if (k > 0) at(k, k) = raise(at(k, k - 1), k - 1, 1.0);
    for (int j = k; j + 1 < levels; ++j) at(j + 1, k) = raise(at(j, k), j, -1.0);
  }
  for (int j = 0; j < levels; ++j) {
    for (int k = j + 1; k < levels; ++k) {
      auto row = at(k, j);
      for (auto& c : row) c = std::conj(c);
      at(j, k) = std::move(row);
    }
  }
}

std::shared_ptr<const WignerHermiteTable> wigner_hermite_table(int levels) {
  static std::mutex mu;
  static std::shared_ptr<const WignerHermiteTable> cached;
  std::lock_guard<std::mutex> lock(mu);
  if (!cached || cached->levels() < levels) {
    // Grow geometrically so repeated slightly larger requests stay cheap.
    const int want = cached ? std::max(levels, cached->levels() + cached->levels() / 2) : std::max(levels, 16);
    cached = std::make_shared<const WignerHermiteTable>(want);
  }
  return cached;
}

CMatrix wigner_basis(double q, double p, int dim) {
  CMatrix w(dim, dim);
  const double x = 4.0 * (q * q + p * p);
  const double ph = std::atan2(p, q);
  for (int delta = 0; delta < dim; ++delta) {
    const std::vector<double> l = laguerre_functions(dim - 1 - delta, delta, x);
    const cplx phase = std::polar(2.0 / std::numbers::pi, -delta * ph);
    for (int k = 0; k + delta < dim; ++k) {
      const cplx v = phase * (k % 2 ? -l[k] : l[k]);
      w(k + delta, k) = v;
      w(k, k + delta) = std::conj(v);
    }
  }
  return w;
}

double wigner(const DensityMatrix& rho, double q, double p) {
  const CMatrix w = wigner_basis(q, p, rho.dim());
  // tr-like contraction sum_jk rho_jk W_{|j><k|}.
  return rho.elements().cwiseProduct(w).sum().real();
}

std::vector<double> position_wavefunctions(int nmax, double x) {
  std::vector<double> psi = hermite_functions(nmax, std::sqrt(2.0) * x);
  const double s = std::pow(2.0, 0.25);
  for (auto& v : psi) v *= s;
  return psi;
}

MarginalDistribution MarginalDistribution::analytic(double theta, std::vector<double> hermite_coeffs) {
  if (hermite_coeffs.empty()) throw ValidationError("marginal: empty coefficient list");
  MarginalDistribution m;
  m.kind_ = Kind::Analytic;
  m.theta_ = theta;
  m.coeffs_ = std::move(hermite_coeffs);
  return m;
}

MarginalDistribution MarginalDistribution::sampled(double theta, std::vector<double> grid, std::vector<double> density) {
  if (grid.size() != density.size()) throw ValidationError("marginal: grid and density sizes differ");
  if (grid.size() < 3) throw ValidationError("marginal: need at least three grid points");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ValidationError("marginal: grid must be strictly increasing");
  }
  MarginalDistribution m;
  m.kind_ = Kind::Sampled;
  m.theta_ = theta;
  m.weights_.assign(grid.size(), 0.0);
  for (size_t i = 1; i < grid.size(); ++i) {
    const double h = 0.5 * (grid[i] - grid[i - 1]);
    m.weights_[i - 1] += h;
    m.weights_[i] += h;
  }
  m.grid_ = std::move(grid);
  m.values_ = std::move(density);
  return m;
}

double MarginalDistribution::raw_coefficient(int n) const {
  if (kind_ != Kind::Analytic) throw ValidationError("raw_coefficient: sampled marginal");
  if (n < 0 || n >= static_cast<int>(coeffs_.size())) return 0.0;
  const double norm_n = std::exp(0.5 * (n * std::log(2.0) + log_factorial(n)) + 0.25 * std::log(std::numbers::pi));
  return std::sqrt(2.0 * std::numbers::pi) * coeffs_[n] / norm_n;
}

double MarginalDistribution::density(double x) const {
  if (kind_ == Kind::Analytic) {
    const std::vector<double> phi = hermite_functions(static_cast<int>(coeffs_.size()) - 1, 2.0 * x);
    double s = 0.0;
    for (size_t a = 0; a < coeffs_.size(); ++a) s += coeffs_[a] * phi[a];
    return 2.0 * s;
  }
  if (x < grid_.front() || x > grid_.back()) return 0.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  if (it == grid_.end()) return values_.back();
  const size_t i = static_cast<size_t>(it - grid_.begin());
  const double t = (x - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
  return (1.0 - t) * values_[i - 1] + t * values_[i];
}

std::pair<std::vector<double>, std::vector<double>> MarginalDistribution::analytic_rule(int degree) const {
  const int n = (static_cast<int>(coeffs_.size()) + std::max(degree, 0)) / 2 + 2;
  QuadratureRule r = gauss_hermite(n);
  const double s = 1.0 / std::sqrt(2.0);
  for (auto& x : r.nodes) x *= s;
  for (auto& w : r.weights) w *= s;
  return {std::move(r.nodes), std::move(r.weights)};
}

double MarginalDistribution::analytic_expect_impl(const std::vector<double>& nodes, const std::vector<double>& weights,
                                                  const std::vector<double>& gvals) const {
  const int amax = static_cast<int>(coeffs_.size()) - 1;
  double total = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    const std::vector<double> phi = hermite_functions(amax, 2.0 * x);
    double s = 0.0;
    for (int a = 0; a <= amax; ++a) s += coeffs_[a] * phi[a];
    total += weights[i] * 2.0 * s * std::exp(2.0 * x * x) * gvals[i];
  }
  return total;
}

double MarginalDistribution::norm() const {
  return expect([](double) { return 1.0; }, 0);
}

double MarginalDistribution::moment(int power) const {
  return expect([power](double x) { return std::pow(x, power); }, power);
}

double MarginalDistribution::variance() const {
  const double n = norm();
  const double m1 = moment(1) / n;
  return moment(2) / n - m1 * m1;
}

std::vector<double> MarginalDistribution::hermite_projection(int amax) const {
  std::vector<double> h(static_cast<size_t>(amax) + 1, 0.0);
  if (kind_ == Kind::Analytic) {
    for (int a = 0; a <= amax && a < static_cast<int>(coeffs_.size()); ++a) h[a] = coeffs_[a];
    return h;
  }
  for (size_t i = 0; i < grid_.size(); ++i) {
    const double wm = weights_[i] * values_[i];
    if (wm == 0.0) continue;
    const std::vector<double> phi = hermite_functions(amax, 2.0 * grid_[i]);
    for (int a = 0; a <= amax; ++a) h[a] += wm * phi[a];
  }
  return h;
}

std::vector<double> marginal_hermite_coeffs(const DensityMatrix& rho) {
  const int dim = rho.dim();
  const auto table = wigner_hermite_table(dim);
  const int amax = 2 * (dim - 1);
  std::vector<double> g(static_cast<size_t>(amax) + 1);
  for (int b = 0; b <= amax; ++b) g[b] = hermite_function_integral(b);
  std::vector<double> h(static_cast<size_t>(amax) + 1, 0.0);
  const CMatrix& r = rho.elements();
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k <= j; ++k) {
      const cplx rjk = r(j, k);
      if (rjk == cplx(0.0, 0.0)) continue;
      const auto& b = (*table)(j, k);
      const int d = j + k;
      const double mult = (j == k) ? 1.0 : 2.0;
      for (int a = d % 2; a <= d; a += 2) h[a] += mult * (rjk * b[a]).real() * g[d - a];
    }
  }
  for (auto& v : h) v /= 2.0 * std::numbers::pi;
  return h;
}

MarginalDistribution marginal_analytic(const DensityMatrix& rho, double theta) {
  return MarginalDistribution::analytic(theta, marginal_hermite_coeffs(phase_rotate(rho, theta)));
}

double marginal_wavefunction_route(const DensityMatrix& rho, double theta, double x) {
  const DensityMatrix r = phase_rotate(rho, theta);
  const std::vector<double> psi = position_wavefunctions(r.dim() - 1, x);
  const Eigen::Map<const Eigen::VectorXd> v(psi.data(), static_cast<Eigen::Index>(psi.size()));
  return (v.transpose().cast<cplx>() * r.elements() * v.cast<cplx>()).value().real();
}

double marginal_variance(const DensityMatrix& rho, double theta) { return marginal_analytic(rho, theta).variance(); }

cplx characteristic(const DensityMatrix& rho, double theta, double k) {
  const cplx xi = -kI * k * std::polar(1.0, theta);
  const CMatrix d = displacement_operator(xi, rho.dim()).elements;
  return rho.elements().cwiseProduct(d.transpose()).sum();
}

cplx characteristic_from_hermite(const std::vector<double>& h, double k) {
  const std::vector<double> phi = hermite_functions(static_cast<int>(h.size()) - 1, k);
  cplx s = 0.0;
  for (size_t a = 0; a < h.size(); ++a) s += i_pow(-static_cast<int>(a)) * h[a] * phi[a];
  return std::sqrt(2.0 * std::numbers::pi) * s;
}

CharacteristicCurve ideal_characteristic_curve(const DensityMatrix& rho, double theta, const std::vector<double>& k_grid) {
  CharacteristicCurve c;
  c.theta = theta;
  const std::vector<double> h = marginal_hermite_coeffs(phase_rotate(rho, theta));
  for (double k : k_grid) c.samples.push_back({k, characteristic_from_hermite(h, k), 0.0, 0.0, 0});
  return c;
}

}  // namespace demarg
