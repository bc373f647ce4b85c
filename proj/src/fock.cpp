#include "demarg/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "demarg/error.hpp"
#include "demarg/special.hpp"

namespace demarg {

namespace {

void require_dim(int dim, const char* who) {
  if (dim < 1) throw ValidationError(std::string(who) + ": dim must be positive");
}

void check_truncation(double lost, const char* who, int dim) {
  if (lost > kTruncationTol) {
    std::ostringstream os;
    os << who << ": weight " << lost << " lies beyond dim " << dim << "; increase the cutoff";
    throw CutoffError(os.str());
  }
}

// Renormalizes and emits the guard-band warning shared by the constructors.
DensityMatrix finish_physical(CMatrix m, const char* who) {
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw CutoffError(std::string(who) + ": no weight inside the cutoff");
  m /= tr;
  m = 0.5 * (m + m.adjoint()).eval();
  DensityMatrix rho(std::move(m));
  const double g = rho.guard_band_weight();
  if (g > kTruncationTol) {
    std::ostringstream os;
    os << who << ": guard band holds weight " << g << " at dim " << rho.dim();
    warn(os.str());
  }
  return rho;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix elements, bool fictitious)
    : elements_(std::move(elements)), fictitious_(fictitious) {
  if (elements_.rows() != elements_.cols() || elements_.rows() == 0) {
    throw ValidationError("density matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, elements_.cwiseAbs().maxCoeff());
  const double asym = (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= kHermitianTol * scale)) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (max |H - H^dag| = " << asym << ")";
    throw ValidationError(os.str());
  }
  elements_ = 0.5 * (elements_ + elements_.adjoint()).eval();
}

double DensityMatrix::purity() const { return (elements_ * elements_).trace().real(); }

double DensityMatrix::mean_photon_number() const {
  double s = 0.0;
  for (int n = 0; n < dim(); ++n) s += n * elements_(n, n).real();
  return s;
}

std::vector<double> DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(elements_, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues().front(); }

double DensityMatrix::guard_band_weight() const {
  double w = 0.0;
  for (int n = dim() - guard_band(dim()); n < dim(); ++n) w += std::abs(elements_(n, n).real());
  return w;
}

bool DensityMatrix::is_physical(double tol) const {
  return std::abs(trace() - 1.0) <= tol && min_eigenvalue() >= -tol;
}

DensityMatrix DensityMatrix::resized(int new_dim) const {
  require_dim(new_dim, "resized");
  CMatrix m = CMatrix::Zero(new_dim, new_dim);
  const int k = std::min(new_dim, dim());
  m.topLeftCorner(k, k) = elements_.topLeftCorner(k, k);
  return DensityMatrix(std::move(m), fictitious_);
}

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace();
  if (tr == 0.0) throw ValidationError("cannot normalize a traceless operator");
  return DensityMatrix(elements_ / tr, fictitious_);
}

double GaussianParams::variance(double theta) const {
  return (std::cosh(2.0 * r) - std::cos(2.0 * (theta - phi)) * std::sinh(2.0 * r)) / (4.0 * mu());
}

DensityMatrix pure_state(const CVector& amplitudes) {
  const double n2 = amplitudes.squaredNorm();
  if (!(n2 > 0.0)) throw ValidationError("pure_state: zero vector");
  CVector v = amplitudes / std::sqrt(n2);
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix fock_state(int n, int dim) {
  require_dim(dim, "fock_state");
  if (n < 0) throw ValidationError("fock_state: negative photon number");
  if (n >= dim) throw CutoffError("fock_state: n must be below dim");
  CMatrix m = CMatrix::Zero(dim, dim);
  m(n, n) = 1.0;
  return finish_physical(std::move(m), "fock_state");
}

CVector coherent_amplitudes(cplx alpha, int dim) {
  CVector c = CVector::Zero(dim);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    c(0) = 1.0;
    return c;
  }
  const double ph = std::arg(alpha);
  for (int n = 0; n < dim; ++n) {
    const double mag = std::exp(-0.5 * r * r + n * std::log(r) - 0.5 * log_factorial(n));
    c(n) = std::polar(mag, n * ph);
  }
  return c;
}

DensityMatrix coherent_state(cplx alpha, int dim) {
  require_dim(dim, "coherent_state");
  CVector c = coherent_amplitudes(alpha, dim);
  check_truncation(1.0 - c.squaredNorm(), "coherent_state", dim);
  return finish_physical(c * c.adjoint(), "coherent_state");
}

DensityMatrix thermal_state(double nbar, int dim) {
  require_dim(dim, "thermal_state");
  if (!(nbar >= 0.0)) throw ValidationError("thermal_state: nbar must be nonnegative");
  CMatrix m = CMatrix::Zero(dim, dim);
  double total = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double p = (nbar == 0.0) ? (n == 0 ? 1.0 : 0.0)
                                   : std::exp(n * std::log(nbar) - (n + 1) * std::log1p(nbar));
    m(n, n) = p;
    total += p;
  }
  check_truncation(1.0 - total, "thermal_state", dim);
  return finish_physical(std::move(m), "thermal_state");
}

Operator displacement_operator(cplx alpha, int dim) {
  require_dim(dim, "displacement_operator");
  CMatrix d = CMatrix::Zero(dim, dim);
  const double x = std::norm(alpha);
  const double ph = std::arg(alpha);
  for (int delta = 0; delta < dim; ++delta) {
    const std::vector<double> l = laguerre_functions(dim - 1 - delta, delta, x);
    const cplx lower = std::polar(1.0, delta * ph);
    const cplx upper = (delta % 2 ? -1.0 : 1.0) * std::conj(lower);
    for (int n = 0; n + delta < dim; ++n) {
      d(n + delta, n) = lower * l[n];
      if (delta > 0) d(n, n + delta) = upper * l[n];
    }
  }
  return {std::move(d), "displacement"};
}

namespace {

// exp(-(r/2)(e^{2i phi} a^dag^2 - e^{-2i phi} a^2)) in exactly `dim` levels.
CMatrix squeeze_exact_truncated(double r, double phi, int dim) {
  CMatrix h = CMatrix::Zero(dim, dim);
  // H = i G with G the generator; S = exp(i H).
  const cplx e2 = std::polar(1.0, 2.0 * phi);
  for (int n = 0; n + 2 < dim; ++n) {
    const double s = std::sqrt((n + 1.0) * (n + 2.0));
    // <n+2| a^dag^2 |n> = s
    h(n + 2, n) = cplx(0.0, 1.0) * 0.5 * r * e2 * s;
    h(n, n + 2) = std::conj(h(n + 2, n));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd& lam = es.eigenvalues();
  CVector phase(dim);
  for (int i = 0; i < dim; ++i) phase(i) = std::polar(1.0, lam(i));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

int work_dim(int dim) { return 3 * dim + 60; }

}  // namespace

Operator squeeze_operator(double r, double phi, int dim) {
  require_dim(dim, "squeeze_operator");
  CMatrix s = squeeze_exact_truncated(r, phi, work_dim(dim)).topLeftCorner(dim, dim);
  return {std::move(s), "squeeze"};
}

DensityMatrix squeezed_thermal_state(const GaussianParams& p, int dim) {
  require_dim(dim, "squeezed_thermal_state");
  if (!(p.nbar >= 0.0) || !(p.r >= 0.0)) throw ValidationError("squeezed_thermal_state: r and nbar must be nonnegative");
  const int w = work_dim(dim);
  CMatrix sigma = CMatrix::Zero(w, w);
  for (int n = 0; n < w; ++n) {
    sigma(n, n) = (p.nbar == 0.0) ? (n == 0 ? 1.0 : 0.0)
                                  : std::exp(n * std::log(p.nbar) - (n + 1) * std::log1p(p.nbar));
  }
  if (p.r > 0.0) {
    const CMatrix s = squeeze_exact_truncated(p.r, p.phi, w);
    sigma = (s * sigma * s.adjoint()).eval();
  }
  if (p.alpha != cplx(0.0, 0.0)) {
    const CMatrix d = displacement_operator(p.alpha, w).elements;
    sigma = (d * sigma * d.adjoint()).eval();
  }
  CMatrix inner = sigma.topLeftCorner(dim, dim);
  check_truncation(1.0 - inner.trace().real(), "squeezed_thermal_state", dim);
  return finish_physical(std::move(inner), "squeezed_thermal_state");
}

DensityMatrix photon_added_coherent(cplx gamma, int dim) {
  require_dim(dim, "photon_added_coherent");
  if (dim < 2) throw CutoffError("photon_added_coherent: dim must be at least 2");
  const CVector c = coherent_amplitudes(gamma, dim);
  CVector b = CVector::Zero(dim);
  for (int n = 1; n < dim; ++n) b(n) = std::sqrt(static_cast<double>(n)) * c(n - 1);
  const double norm2 = 1.0 + std::norm(gamma);
  check_truncation(1.0 - b.squaredNorm() / norm2, "photon_added_coherent", dim);
  return finish_physical(b * b.adjoint(), "photon_added_coherent");
}

DensityMatrix photon_added_thermal(double nbar, int dim) {
  require_dim(dim, "photon_added_thermal");
  if (!(nbar >= 0.0)) throw ValidationError("photon_added_thermal: nbar must be nonnegative");
  if (dim < 2) throw CutoffError("photon_added_thermal: dim must be at least 2");
  CMatrix m = CMatrix::Zero(dim, dim);
  double total = 0.0;
  for (int n = 1; n < dim; ++n) {
    double p = 0.0;
    if (nbar == 0.0) {
      p = (n == 1) ? 1.0 : 0.0;
    } else {
      p = n * std::exp((n - 1) * std::log(nbar) - (n + 1) * std::log1p(nbar));
    }
    m(n, n) = p;
    total += p;
  }
  check_truncation(1.0 - total, "photon_added_thermal", dim);
  return finish_physical(std::move(m), "photon_added_thermal");
}

DensityMatrix dephased_odd_cat(double gamma, double f, int dim) {
  require_dim(dim, "dephased_odd_cat");
  if (!(gamma > 0.0)) throw ValidationError("dephased_odd_cat: gamma must be positive");
  if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("dephased_odd_cat: f must lie in [0, 1]");
  const CVector c = coherent_amplitudes(gamma, dim);
  const double z = 2.0 * (1.0 - f * std::exp(-2.0 * gamma * gamma));
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = j % 2; k < dim; k += 2) {
      const double w = (j % 2 == 0) ? 2.0 - 2.0 * f : 2.0 + 2.0 * f;
      m(j, k) = c(j) * std::conj(c(k)) * w / z;
    }
  }
  check_truncation(1.0 - m.trace().real(), "dephased_odd_cat", dim);
  return finish_physical(std::move(m), "dephased_odd_cat");
}

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts) {
  if (parts.empty()) throw ValidationError("mix: no components");
  int d = 0;
  for (const auto& [w, rho] : parts) {
    if (w < 0.0) throw ValidationError("mix: negative weight");
    d = std::max(d, rho.dim());
  }
  CMatrix m = CMatrix::Zero(d, d);
  for (const auto& [w, rho] : parts) m.topLeftCorner(rho.dim(), rho.dim()) += w * rho.elements();
  return DensityMatrix(std::move(m));
}

DensityMatrix displace(const DensityMatrix& rho, cplx alpha, int out_dim) {
  if (out_dim <= 0) out_dim = rho.dim();
  const int w = std::max(out_dim, rho.dim());
  const CMatrix d = displacement_operator(alpha, w).elements;
  const CMatrix big = rho.resized(w).elements();
  CMatrix out = (d * big * d.adjoint()).topLeftCorner(out_dim, out_dim);
  check_truncation(rho.trace() - out.trace().real(), "displace", out_dim);
  return DensityMatrix(std::move(out), rho.fictitious());
}

DensityMatrix phase_rotate(const DensityMatrix& rho, double theta) {
  CMatrix m = rho.elements();
  for (int a = 0; a < rho.dim(); ++a) {
    for (int b = 0; b < rho.dim(); ++b) {
      if (a != b) m(a, b) *= std::polar(1.0, -theta * (a - b));
    }
  }
  return DensityMatrix(std::move(m), rho.fictitious());
}

double trace_norm_negativity(const CMatrix& h) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (h.rows() != h.cols() || (h - h.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
    throw ValidationError("trace_norm_negativity: operator is not Hermitian");
  }
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real(), Eigen::EigenvaluesOnly);
    return 0.5 * (es.eigenvalues().cwiseAbs().sum() - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * (es.eigenvalues().cwiseAbs().sum() - 1.0);
}

double trace_norm_negativity(const DensityMatrix& h) { return trace_norm_negativity(h.elements()); }

}  // namespace demarg
