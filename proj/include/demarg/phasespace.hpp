#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "demarg/fock.hpp"

namespace demarg {

struct HermiteExpansion {
  int j = 0;
  int k = 0;
  // A_{|j><k|}(n), n = 0..j+k, in
  // W_{|j><k|}(q,p) = (2/pi) e^{-2q^2-2p^2} sum_n A(n) H_n(2q) H_{j+k-n}(2p).
  std::vector<cplx> coeffs;
};

// Closed-form coefficients, double precision with log-gamma factorials.
// Cancellation makes them unreliable beyond j+k of about 30; the analytic
// maps use WignerHermiteTable instead.
HermiteExpansion a_coefficients(int j, int k);
// Second closed form, defined only for even j+k-n.
std::vector<std::optional<cplx>> a_coefficients_alt(int j, int k);

// Coefficients a_jk(n) of H_j(x) H_k(x) = sum_n a_jk(n) H_n(sqrt(2) x).
std::vector<double> hermite_linearization(int j, int k);

// B_jk(a) = A_{|j><k|}(a) sqrt(2^D a! (D-a)! pi), D = j+k, so that
// W_{|j><k|}(q,p) = (2/pi) sum_a B_jk(a) phi_a(2q) phi_{D-a}(2p)
// with orthonormal Hermite functions phi. Built by ladder recurrences.
class WignerHermiteTable {
 public:
  explicit WignerHermiteTable(int levels);
  int levels() const { return levels_; }
  // Coefficients a = 0..j+k for 0 <= j, k < levels().
  const std::vector<cplx>& operator()(int j, int k) const { return rows_[static_cast<size_t>(j) * levels_ + k]; }

 private:
  int levels_;
  std::vector<std::vector<cplx>> rows_;
};

// Shared table covering at least `levels` Fock levels. Thread-safe.
std::shared_ptr<const WignerHermiteTable> wigner_hermite_table(int levels);

// W_{|j><k|}(q, p) for all j, k < dim.
CMatrix wigner_basis(double q, double p, int dim);
double wigner(const DensityMatrix& rho, double q, double p);

// <x|n> for n = 0..nmax.
std::vector<double> position_wavefunctions(int nmax, double x);

class MarginalDistribution {
 public:
  enum class Kind { Analytic, Sampled };

  // Density 2 sum_a h_a phi_a(2x).
  static MarginalDistribution analytic(double theta, std::vector<double> hermite_coeffs);
  // Density samples on a strictly increasing grid; trapezoid weights.
  static MarginalDistribution sampled(double theta, std::vector<double> grid, std::vector<double> density);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  const std::vector<double>& hermite_coeffs() const { return coeffs_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }

  // c_n of the density sqrt(2/pi) e^{-2x^2} sum_n c_n H_n(2x). Analytic only.
  double raw_coefficient(int n) const;

  double density(double x) const;
  double norm() const;
  double moment(int power) const;
  double mean() const { return moment(1) / norm(); }
  double variance() const;

  // h_a = int M(x) phi_a(2x) dx for a = 0..amax.
  std::vector<double> hermite_projection(int amax) const;

  // Expectation of g over the distribution. For the analytic kind the
  // Gauss-Hermite order is chosen exact for polynomial g of `degree`.
  template <class G>
  double expect(G&& g, int degree) const;

 private:
  Kind kind_ = Kind::Analytic;
  double theta_ = 0.0;
  std::vector<double> coeffs_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> weights_;

  double analytic_expect_impl(const std::vector<double>& nodes, const std::vector<double>& weights,
                              const std::vector<double>& gvals) const;
  std::pair<std::vector<double>, std::vector<double>> analytic_rule(int degree) const;
};

// Marginal of x_theta = q cos(theta) + p sin(theta).
MarginalDistribution marginal_analytic(const DensityMatrix& rho, double theta);
// Hermite coefficients h_a of the theta = 0 marginal.
std::vector<double> marginal_hermite_coeffs(const DensityMatrix& rho);
// Direct route sum_jk rho_jk <x|j><k|x> after rotation.
double marginal_wavefunction_route(const DensityMatrix& rho, double theta, double x);

double marginal_variance(const DensityMatrix& rho, double theta);

// C(k) = <exp(-2 i k x_theta)> = tr[rho D(xi)], xi = -i k e^{i theta}.
cplx characteristic(const DensityMatrix& rho, double theta, double k);
// Same quantity from Hermite coefficients h_a: sqrt(2 pi) sum (-i)^a h_a phi_a(k).
cplx characteristic_from_hermite(const std::vector<double>& h, double k);

struct CharacteristicSample {
  double k = 0.0;
  cplx value{0.0, 0.0};
  double sigma_re = 0.0;
  double sigma_im = 0.0;
  long shots = 0;
};

struct CharacteristicCurve {
  double theta = 0.0;
  std::vector<CharacteristicSample> samples;
};

CharacteristicCurve ideal_characteristic_curve(const DensityMatrix& rho, double theta, const std::vector<double>& k_grid);

template <class G>
double MarginalDistribution::expect(G&& g, int degree) const {
  if (kind_ == Kind::Sampled) {
    double s = 0.0;
    for (size_t i = 0; i < grid_.size(); ++i) s += weights_[i] * values_[i] * g(grid_[i]);
    return s;
  }
  auto [nodes, w] = analytic_rule(degree);
  std::vector<double> gv(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) gv[i] = g(nodes[i]);
  return analytic_expect_impl(nodes, w, gv);
}

}  // namespace demarg
