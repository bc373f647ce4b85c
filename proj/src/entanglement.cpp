#include "demarg/entanglement.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "demarg/demarg.hpp"
#include "demarg/error.hpp"

namespace demarg {

Operator beam_splitter_5050(int dim) {
  if (dim < 1) throw ValidationError("beam_splitter_5050: dim must be positive");
  const int full = dim * dim;
  CMatrix u = CMatrix::Zero(full, full);
  auto idx = [dim](int n1, int n2) { return n1 * dim + n2; };
  // Block of total photon number N spans n1 = lo..hi.
  for (int n = 0; n <= 2 * (dim - 1); ++n) {
    const int lo = std::max(0, n - (dim - 1));
    const int hi = std::min(n, dim - 1);
    const int m = hi - lo + 1;
    // H = i (a1^dag a2 - a1 a2^dag) restricted to the block; U = exp(i pi/4 H).
    CMatrix h = CMatrix::Zero(m, m);
    for (int a = 0; a + 1 < m; ++a) {
      const int n1 = lo + a;
      const double amp = std::sqrt((n1 + 1.0) * (n - n1));
      h(a + 1, a) = cplx(0.0, amp);
      h(a, a + 1) = cplx(0.0, -amp);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const CVector ph = (cplx(0.0, std::numbers::pi / 4) * es.eigenvalues().cast<cplx>()).array().exp();
    const CMatrix blk = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const int n2b = n - (lo + b);
        u(idx(lo + a, n - lo - a), idx(lo + b, n2b)) = blk(a, b) * ((n2b % 2) ? -1.0 : 1.0);
      }
  }
  return {u, "BS50"};
}

TwoModeState tensor(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw ValidationError("tensor: both modes need the same truncation");
  const int d = static_cast<int>(a.rows());
  TwoModeState s{d, CMatrix::Zero(d * d, d * d)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (a(i, j) != 0.0) s.elements.block(i * d, j * d, d, d) = a(i, j) * b;
  return s;
}

TwoModeState apply(const Operator& u, const TwoModeState& s) {
  if (u.dim() != s.dim * s.dim) throw ValidationError("apply: operator and state truncations differ");
  return {s.dim, u.elements * s.elements * u.elements.adjoint()};
}

TwoModeState partial_transpose(const TwoModeState& s) {
  const int d = s.dim;
  TwoModeState t{d, CMatrix(d * d, d * d)};
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2)
      for (int m1 = 0; m1 < d; ++m1)
        for (int m2 = 0; m2 < d; ++m2) t.elements(n1 * d + m2, m1 * d + n2) = s.elements(n1 * d + n2, m1 * d + m2);
  return t;
}

CMatrix partial_trace_mode2(const TwoModeState& s) {
  const int d = s.dim;
  CMatrix r = CMatrix::Zero(d, d);
  for (int n1 = 0; n1 < d; ++n1)
    for (int m1 = 0; m1 < d; ++m1)
      for (int k = 0; k < d; ++k) r(n1, m1) += s.elements(n1 * d + k, m1 * d + k);
  return r;
}

int entanglement_dim(const DensityMatrix& rho, double tail) {
  double acc = 0.0;
  int top = rho.dim() - 1;
  while (top > 0) {
    const double w = std::abs(rho(top, top).real());
    if (acc + w > tail) break;
    acc += w;
    --top;
  }
  return top + 1 + 2;
}

double entanglement_potential(const DensityMatrix& rho, int dim) {
  if (dim == 0) dim = entanglement_dim(rho);
  if (dim < 1) throw ValidationError("entanglement_potential: dim must be positive");
  const int keep = std::min(dim, rho.dim());
  if (keep < rho.dim()) {
    double lost = 0.0;
    for (int n = keep; n < rho.dim(); ++n) lost += rho(n, n).real();
    if (lost > kTruncationTol) {
      std::ostringstream os;
      os << "entanglement_potential: weight " << lost << " lies beyond per-mode dim " << dim;
      throw CutoffError(os.str());
    }
  }
  CMatrix a = CMatrix::Zero(dim, dim);
  a.topLeftCorner(keep, keep) = rho.elements().topLeftCorner(keep, keep);
  a /= a.trace().real();
  CMatrix vac = CMatrix::Zero(dim, dim);
  vac(0, 0) = 1.0;
  const TwoModeState out = apply(beam_splitter_5050(dim), tensor(a, vac));
  const TwoModeState pt = partial_transpose(out);
  return std::max(trace_norm_negativity(CMatrix(0.5 * (pt.elements + pt.elements.adjoint()))), 0.0);
}

CriterionReport verify_bound(const DensityMatrix& rho, const std::vector<double>& theta_grid, int dim) {
  const NegativityReport scan = negativity_scan(rho, MapKind::DM2, theta_grid);
  CriterionReport r;
  r.name = "entanglement-potential bound";
  r.witness = scan.max_value;
  r.threshold = entanglement_potential(rho, dim);
  r.margin = r.threshold - r.witness;
  r.verdict = r.witness <= r.threshold + 1e-6;
  std::ostringstream os;
  os << "max N_DM2 = " << r.witness << " at theta = " << scan.argmax_theta << ", P_ent = " << r.threshold;
  r.detail = os.str();
  return r;
}

namespace {

CMatrix chain(const DensityMatrix& rho, const CMatrix& second, int out_dim) {
  const int d = rho.dim();
  // BS conserves photon number: two inputs of support d-1 stay within 2(d-1)
  // per mode, and PT keeps the pair sums bounded by the same.
  const int work = std::max(4 * (d - 1) + 1, out_dim);
  CMatrix a = CMatrix::Zero(work, work), b = CMatrix::Zero(work, work);
  a.topLeftCorner(d, d) = rho.elements();
  b.topLeftCorner(second.rows(), second.cols()) = second;
  const Operator bs = beam_splitter_5050(work);
  const TwoModeState out = apply(bs, partial_transpose(apply(bs, tensor(a, b))));
  return partial_trace_mode2(out).topLeftCorner(out_dim, out_dim);
}

}  // namespace

CMatrix dm1_by_beam_splitters(const DensityMatrix& rho, int out_dim) {
  return chain(rho, phase_rotate(rho, -std::numbers::pi / 2).elements(), out_dim);
}

CMatrix dm2_by_beam_splitters(const DensityMatrix& rho, int out_dim) {
  CMatrix vac = CMatrix::Zero(1, 1);
  vac(0, 0) = 1.0;
  return chain(rho, vac, out_dim);
}

}  // namespace demarg
