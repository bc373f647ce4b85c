#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace demarg {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Quadratures x = (a + a^dag)/2, p = (a - a^dag)/(2i); vacuum variance 1/4.
inline constexpr const char* kConventionTag = "x=(a+adag)/2;vacuum_variance=1/4";

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTruncationTol = 1e-8;

// Number of top Fock levels reserved as a guard band.
inline int guard_band(int dim) { return (dim + 4) / 5; }

class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Throws ValidationError unless `elements` is square and Hermitian to
  // kHermitianTol (relative to its largest entry when that exceeds 1).
  explicit DensityMatrix(CMatrix elements, bool fictitious = false);

  int dim() const { return static_cast<int>(elements_.rows()); }
  const CMatrix& elements() const { return elements_; }
  cplx operator()(int m, int n) const { return elements_(m, n); }
  bool fictitious() const { return fictitious_; }
  const char* convention() const { return kConventionTag; }

  double trace() const { return elements_.trace().real(); }
  double purity() const;
  double mean_photon_number() const;
  std::vector<double> eigenvalues() const;
  double min_eigenvalue() const;
  double guard_band_weight() const;
  bool is_physical(double tol = 1e-10) const;

  // Zero-pads or truncates to `new_dim` levels. No renormalization.
  DensityMatrix resized(int new_dim) const;
  DensityMatrix normalized() const;

 private:
  CMatrix elements_;
  bool fictitious_ = false;
};

struct GaussianParams {
  double r = 0.0;
  double phi = 0.0;
  double nbar = 0.0;
  cplx alpha{0.0, 0.0};

  double mu() const { return 1.0 / (1.0 + 2.0 * nbar); }
  // Quadrature variance along angle theta.
  double variance(double theta) const;
};

struct Operator {
  CMatrix elements;
  std::string label;
  int dim() const { return static_cast<int>(elements.rows()); }
};

DensityMatrix pure_state(const CVector& amplitudes);
DensityMatrix fock_state(int n, int dim);
DensityMatrix coherent_state(cplx alpha, int dim);
DensityMatrix thermal_state(double nbar, int dim);
DensityMatrix squeezed_thermal_state(const GaussianParams& p, int dim);
DensityMatrix photon_added_coherent(cplx gamma, int dim);
DensityMatrix photon_added_thermal(double nbar, int dim);
DensityMatrix dephased_odd_cat(double gamma, double f, int dim);

// Convex combination; inputs are zero-padded to the largest dim.
DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts);

// Coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!), n < dim, unnormalized.
CVector coherent_amplitudes(cplx alpha, int dim);

Operator displacement_operator(cplx alpha, int dim);
Operator squeeze_operator(double r, double phi, int dim);

// D(alpha) rho D(alpha)^dag in `out_dim` levels (default: rho.dim()).
// Throws CutoffError if more than kTruncationTol of the weight falls outside.
DensityMatrix displace(const DensityMatrix& rho, cplx alpha, int out_dim = 0);

DensityMatrix phase_rotate(const DensityMatrix& rho, double theta);

// (sum |lambda_i| - 1)/2 over the eigenvalues of a Hermitian operator.
double trace_norm_negativity(const DensityMatrix& h);
double trace_norm_negativity(const CMatrix& h);

}  // namespace demarg
