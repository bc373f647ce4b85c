#include "demarg/demarg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "demarg/error.hpp"
#include "demarg/kernels.hpp"
#include "demarg/special.hpp"

namespace demarg {

namespace {

constexpr double kMaxSpacing = 0.25;
constexpr int kNodesPerInterval = 16;

void fill_witnesses(FictitiousState& s, int top) {
  const int d = s.rho_dm.dim();
  if (top > 0 && top < d) {
    s.witness_cache.push_back({"det{0," + std::to_string(top) + "}", 0, top, submatrix_determinant(s.rho_dm, 0, top)});
  }
}

}  // namespace

const char* to_string(MapKind kind) { return kind == MapKind::DM1 ? "dm1" : "dm2"; }

MapKind parse_map_kind(std::string_view s) {
  if (s == "dm1" || s == "DM1") return MapKind::DM1;
  if (s == "dm2" || s == "DM2") return MapKind::DM2;
  throw ValidationError("unknown map kind '" + std::string(s) + "' (expected dm1 or dm2)");
}

int highest_excitation(const DensityMatrix& rho, double tol) {
  for (int n = rho.dim() - 1; n > 0; --n) {
    if (std::abs(rho(n, n)) > tol) return n;
  }
  return 0;
}

int dm_output_dim(MapKind kind, int highest) { return (kind == MapKind::DM1 ? 4 : 2) * highest + 1; }

std::vector<double> vacuum_hermite_coeffs() { return {std::pow(std::numbers::pi, -0.25) / std::sqrt(2.0)}; }

CMatrix project_hermite_product(const std::vector<double>& hx, const std::vector<double>& hy, int dim) {
  if (dim < 1) throw ValidationError("project_hermite_product: dim must be positive");
  const auto table = wigner_hermite_table(dim);
  const int nx = static_cast<int>(hx.size());
  const int ny = static_cast<int>(hy.size());
  CMatrix out = CMatrix::Zero(dim, dim);
  for (int n1 = 0; n1 < dim; ++n1) {
    for (int n2 = 0; n2 <= n1; ++n2) {
      const int d = n1 + n2;
      if (d > nx + ny - 2) continue;
      const auto& b = (*table)(n2, n1);
      cplx s = 0.0;
      for (int a = std::max(0, d - ny + 1); a <= std::min(d, nx - 1); ++a) s += b[a] * (hx[a] * hy[d - a]);
      out(n1, n2) = 2.0 * s;
      out(n2, n1) = std::conj(out(n1, n2));
    }
    out(n1, n1) = out(n1, n1).real();
  }
  return out;
}

FictitiousState dm_analytic(const DensityMatrix& rho, MapKind kind, double theta, int out_dim) {
  const int top = highest_excitation(rho);
  const int need = dm_output_dim(kind, top);
  if (out_dim <= 0) {
    out_dim = need;
  } else if (out_dim < need) {
    std::ostringstream os;
    os << to_string(kind) << ": output dim " << out_dim << " below the required " << need;
    throw CutoffError(os.str());
  }
  const std::vector<double> hx = marginal_hermite_coeffs(phase_rotate(rho, theta));
  const std::vector<double> hy = (kind == MapKind::DM1) ? hx : vacuum_hermite_coeffs();
  FictitiousState s{DensityMatrix(project_hermite_product(hx, hy, out_dim), true), theta, kind, Source::Analytic, 1.0, {}};
  fill_witnesses(s, kind == MapKind::DM1 ? 4 * top : 2 * top);
  return s;
}

FictitiousState dm1_analytic(const DensityMatrix& rho, double theta, int out_dim) {
  return dm_analytic(rho, MapKind::DM1, theta, out_dim);
}

FictitiousState dm2_analytic(const DensityMatrix& rho, double theta, int out_dim) {
  return dm_analytic(rho, MapKind::DM2, theta, out_dim);
}

FictitiousState dm_from_marginal(const MarginalDistribution& m, MapKind kind, int dim) {
  if (dim < 1) throw ValidationError("dm_from_marginal: dim must be positive");
  const int amax = 2 * (dim - 1);
  if (m.kind() == MarginalDistribution::Kind::Sampled) {
    const double n = m.norm();
    if (std::abs(n - 1.0) > 1e-3) {
      std::ostringstream os;
      os << "dm_from_marginal: marginal integrates to " << n << ", expected 1";
      throw ValidationError(os.str());
    }
    // Mass beyond the grid, assuming a tail no wider than the vacuum's.
    const double tail = 0.5 * (std::abs(m.values().front()) + std::abs(m.values().back()));
    if (tail > 1e-4) {
      std::ostringstream os;
      os << "dm_from_marginal: grid [" << m.grid().front() << ", " << m.grid().back()
         << "] misses an estimated tail mass " << tail;
      throw CoverageError(os.str());
    }
  }
  const std::vector<double> hx = m.hermite_projection(amax);
  const std::vector<double> hy = (kind == MapKind::DM1) ? hx : vacuum_hermite_coeffs();
  FictitiousState s{DensityMatrix(project_hermite_product(hx, hy, dim), true), m.theta(), kind, Source::Measured, 1.0, {}};
  s.raw_trace = s.rho_dm.trace();
  s.rho_dm = s.rho_dm.normalized();
  fill_witnesses(s, kind == MapKind::DM1 ? 4 : 2);
  return s;
}

std::vector<double> hermite_coeffs_from_characteristic(const CharacteristicCurve& c, int amax, double k_max) {
  if (!(k_max > 0.0)) throw ValidationError("k_max must be positive");
  std::vector<double> ks;
  std::vector<cplx> vs;
  std::vector<double> sig;
  bool dropped = false;
  for (const auto& s : c.samples) {
    if (s.k < 0.0) {
      dropped = true;
      continue;
    }
    if (!ks.empty() && !(s.k > ks.back())) throw ValidationError("characteristic curve: k values must be strictly increasing");
    ks.push_back(s.k);
    vs.push_back(s.value);
    sig.push_back(std::hypot(s.sigma_re, s.sigma_im));
  }
  if (dropped) warn("characteristic curve: negative k samples ignored; C(-k) is taken as conj C(k)");
  if (ks.empty()) throw ValidationError("characteristic curve: no samples");
  if (ks.front() > 1e-12) {
    ks.insert(ks.begin(), 0.0);
    vs.insert(vs.begin(), cplx(1.0, 0.0));
    sig.insert(sig.begin(), 0.0);
  } else if (std::abs(vs.front() - 1.0) > 0.05) {
    std::ostringstream os;
    os << "characteristic curve: C(0) = " << vs.front().real() << (vs.front().imag() < 0 ? "" : "+") << vs.front().imag()
       << "i is not 1";
    throw ValidationError(os.str());
  }
  if (k_max > ks.back() + 1e-12) {
    std::ostringstream os;
    os << "characteristic curve ends at k = " << ks.back() << ", below k_max = " << k_max;
    throw CoverageError(os.str());
  }
  for (size_t i = 1; i < ks.size() && ks[i - 1] < k_max; ++i) {
    if (ks[i] - ks[i - 1] > kMaxSpacing + 1e-12) {
      std::ostringstream os;
      os << "characteristic curve: spacing " << ks[i] - ks[i - 1] << " between k = " << ks[i - 1] << " and " << ks[i]
         << " exceeds " << kMaxSpacing;
      throw ValidationError(os.str());
    }
  }

  std::vector<double> ire(static_cast<size_t>(amax) + 1, 0.0), iim(static_cast<size_t>(amax) + 1, 0.0);
  const QuadratureRule unit = gauss_legendre(kNodesPerInterval, 0.0, 1.0);
  cplx edge = vs.back();
  double edge_sigma = sig.back();
  for (size_t i = 0; i + 1 < ks.size() && ks[i] < k_max; ++i) {
    const double a = ks[i];
    const double b = std::min(ks[i + 1], k_max);
    const double len = ks[i + 1] - ks[i];
    for (int q = 0; q < kNodesPerInterval; ++q) {
      const double k = a + (b - a) * unit.nodes[q];
      const double w = (b - a) * unit.weights[q];
      const double t = (k - ks[i]) / len;
      const cplx v = (1.0 - t) * vs[i] + t * vs[i + 1];
      const std::vector<double> phi = hermite_functions(amax, k);
      for (int n = 0; n <= amax; ++n) {
        ire[n] += w * v.real() * phi[n];
        iim[n] += w * v.imag() * phi[n];
      }
    }
    if (b < ks[i + 1]) {
      edge = vs[i] + (vs[i + 1] - vs[i]) * ((b - ks[i]) / len);
      edge_sigma = std::max(sig[i], sig[i + 1]);
    } else {
      edge = vs[i + 1];
      edge_sigma = sig[i + 1];
    }
  }
  // shot noise alone can push a measured edge over 1e-3
  if (std::abs(edge) > std::max(1e-3, 3.0 * edge_sigma)) {
    std::ostringstream os;
    os << "characteristic curve: |C(k_max)| = " << std::abs(edge) << " exceeds 1e-3; truncation biases the result";
    warn(os.str());
  }
  std::vector<double> h(static_cast<size_t>(amax) + 1);
  const double pre = 2.0 / std::sqrt(2.0 * std::numbers::pi);
  for (int n = 0; n <= amax; ++n) {
    if (n % 2 == 0) h[n] = ((n / 2) % 2 ? -1.0 : 1.0) * pre * ire[n];
    else h[n] = (((n + 1) / 2) % 2 ? -1.0 : 1.0) * pre * iim[n];
  }
  return h;
}

FictitiousState dm_from_characteristic(const CharacteristicCurve& c, MapKind kind, int dim, double k_max) {
  if (dim < 1) throw ValidationError("dm_from_characteristic: dim must be positive");
  const std::vector<double> hx = hermite_coeffs_from_characteristic(c, 2 * (dim - 1), k_max);
  const std::vector<double> hy = (kind == MapKind::DM1) ? hx : vacuum_hermite_coeffs();
  FictitiousState s{DensityMatrix(project_hermite_product(hx, hy, dim), true), c.theta, kind, Source::Measured, 1.0, {}};
  s.raw_trace = s.rho_dm.trace();
  if (!(s.raw_trace > 0.0)) throw ValidationError("dm_from_characteristic: reconstructed trace is not positive");
  s.rho_dm = s.rho_dm.normalized();
  fill_witnesses(s, kind == MapKind::DM1 ? 4 : 2);
  return s;
}

double submatrix_determinant(const DensityMatrix& h, int i, int j) {
  return (h(i, i) * h(j, j) - h(i, j) * h(j, i)).real();
}

double negativity(const FictitiousState& s) { return trace_norm_negativity(s.rho_dm); }

std::vector<double> default_theta_grid(int n) {
  if (n < 1) throw ValidationError("theta grid needs at least one point");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = (i + 0.5) * std::numbers::pi / n;
  return g;
}

void finalize_report(NegativityReport& r) {
  if (r.negativity.empty()) return;
  const auto it = std::max_element(r.negativity.begin(), r.negativity.end());
  r.max_value = *it;
  r.argmax_theta = r.theta_grid[static_cast<size_t>(it - r.negativity.begin())];
}

NegativityReport negativity_scan(const DensityMatrix& rho, MapKind kind, const std::vector<double>& theta_grid) {
  NegativityReport r;
  r.theta_grid = theta_grid;
  r.negativity.assign(theta_grid.size(), 0.0);
  r.sigma.assign(theta_grid.size(), 0.0);
  wigner_hermite_table(dm_output_dim(kind, highest_excitation(rho)));
  parallel_for(static_cast<int>(theta_grid.size()),
               [&](int i) { r.negativity[i] = negativity(dm_analytic(rho, kind, theta_grid[i])); });
  finalize_report(r);
  return r;
}

NegativityReport negativity_scan(const std::vector<CharacteristicCurve>& curves, MapKind kind, int dim, double k_max) {
  NegativityReport r;
  for (const auto& c : curves) r.theta_grid.push_back(c.theta);
  r.negativity.assign(curves.size(), 0.0);
  r.sigma.assign(curves.size(), 0.0);
  wigner_hermite_table(dim);
  parallel_for(static_cast<int>(curves.size()),
               [&](int i) { r.negativity[i] = negativity(dm_from_characteristic(curves[i], kind, dim, k_max)); });
  finalize_report(r);
  return r;
}

}  // namespace demarg
