#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "demarg/demarg.hpp"
#include "demarg/fock.hpp"
#include "demarg/phasespace.hpp"

namespace demarg {

struct CriterionReport {
  std::string name;
  double witness = 0.0;
  double threshold = 0.0;
  double sigma = 0.0;
  bool verdict = false;
  double margin = 0.0;
  std::string detail;
};

// One-dimensional characteristic function C(k) along the measured axis,
// with C(-k) = conj C(k). Throws CoverageError beyond `coverage()`.
class AxisCharacteristic {
 public:
  // Piecewise-linear interpolation of measured samples; C(0) = 1 is used
  // when k = 0 is absent.
  static AxisCharacteristic from_curve(const CharacteristicCurve& c);
  // Exact values of a state along theta.
  static AxisCharacteristic from_state(const DensityMatrix& rho, double theta);

  cplx operator()(double k) const;
  double coverage() const { return coverage_; }

 private:
  std::function<cplx(double)> f_;
  double coverage_ = 0.0;
};

// C of the fictitious state at xi = ky - i kx: C(kx) e^{-ky^2/2} (DM2) or C(kx) C(ky) (DM1).
cplx fictitious_characteristic(const AxisCharacteristic& c, MapKind kind, cplx xi);

struct KlmMatrix {
  std::vector<cplx> points;
  CMatrix elements;
  double d = 0.0;
  double lambda_min = 0.0;
};

// Centered n x n square lattice with spacing d.
std::vector<cplx> klm_lattice(int n, double d);
// M_jk = C(xi_j - xi_k) exp((xi_j xi_k^* - xi_j^* xi_k)/2).
KlmMatrix klm_matrix(const std::function<cplx(cplx)>& c, const std::vector<cplx>& points, double d);
KlmMatrix klm_matrix(const AxisCharacteristic& c, MapKind kind, int n, double d);

struct KlmPoint {
  double d = 0.0;
  double lambda_min = 0.0;
  double sigma = 0.0;
};

// 20 values spanning [0.1, 2.0].
std::vector<double> default_d_range();
// Drops spacings whose lattice differences exceed `coverage`.
std::vector<double> clip_d_range(const std::vector<double>& d_values, int n, double coverage);

// Exact characteristic of a state: sigma is zero.
std::vector<KlmPoint> klm_test(const DensityMatrix& rho, double theta, MapKind kind, int n, const std::vector<double>& d_values);
// Measured curve: sigma from `resamples` parametric bootstrap draws (0 disables).
std::vector<KlmPoint> klm_test(const CharacteristicCurve& curve, MapKind kind, int n, const std::vector<double>& d_values,
                               int resamples, std::uint64_t seed);

struct MomentReport {
  int m_max = 0;
  std::vector<double> tilde_moments;
  std::vector<double> deltas;
  long shots = 0;
  // Raw quadrature samples when the report came from data.
  std::vector<double> samples;
  double lambda_min(int n) const;
};

// Hankel matrix M_ij = <x~^{i+j}>, i, j < n.
Eigen::MatrixXd moment_matrix(const std::vector<double>& tilde_moments, int n);

MomentReport tilde_moments(const std::vector<double>& samples, int m_max);
MomentReport tilde_moments(const MarginalDistribution& m, int m_max, long shots);

struct LambdaEstimate {
  double lambda_min = 0.0;
  double sigma = 0.0;
};

// Minimum Hankel eigenvalue with bootstrap error: resampling the raw samples
// when present, otherwise Gaussian draws of each moment with width Delta_m.
LambdaEstimate moment_matrix_test(const MomentReport& r, int n, int resamples = 500, std::uint64_t seed = 1);

CriterionReport uncertainty_check(const MarginalDistribution& m, MapKind kind);

// (1/pi) arccos((cosh 2r - mu)/sinh 2r), clamped; 0 for unsqueezed states.
double squeezing_success_probability(const GaussianParams& p);

}  // namespace demarg
