#include "demarg/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "demarg/error.hpp"
#include "demarg/phasespace.hpp"

namespace demarg {

void apply_thread_cap_from_env() {
  const char* v = std::getenv("DEMARG_THREADS");
  if (!v || !*v) return;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw ValidationError(std::string("DEMARG_THREADS must be a positive integer, got '") + v + "'");
  omp_set_num_threads(static_cast<int>(n));
}

int max_threads() { return omp_get_max_threads(); }

namespace {

void check_rule(const QuadratureRule& r, size_t n, const char* who) {
  if (r.nodes.size() != r.weights.size() || r.nodes.size() != n) {
    throw ValidationError(std::string(who) + ": rule and sample sizes differ");
  }
}

// Contribution of one x node: sum_j wy_j fy_j W_{|n2><n1|}(x, y_j), stored
// transposed so that out(n1, n2) is the coefficient of |n1><n2|.
CMatrix project_row(double x, const QuadratureRule& y, const std::vector<double>& fy, int dim) {
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (size_t j = 0; j < y.nodes.size(); ++j) {
    const double wf = y.weights[j] * fy[j];
    if (wf == 0.0) continue;
    acc += wf * wigner_basis(x, y.nodes[j], dim).transpose();
  }
  return acc;
}

CMatrix invert_row(double kx, const QuadratureRule& ky, const std::vector<cplx>& cy, int dim) {
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (size_t j = 0; j < ky.nodes.size(); ++j) {
    const cplx wc = ky.weights[j] * cy[j];
    if (wc == cplx(0.0, 0.0)) continue;
    const cplx xi(ky.nodes[j], -kx);
    acc += wc * displacement_operator(-xi, dim).elements;
  }
  return acc;
}

}  // namespace

namespace kernels {

Eigen::MatrixXd wigner_grid(const DensityMatrix& rho, const std::vector<double>& qs, const std::vector<double>& ps) {
  Eigen::MatrixXd out(qs.size(), ps.size());
  const int nq = static_cast<int>(qs.size());
  parallel_for(nq, [&](int i) {
    for (size_t j = 0; j < ps.size(); ++j) out(i, static_cast<Eigen::Index>(j)) = wigner(rho, qs[i], ps[j]);
  });
  return out;
}

CMatrix project_product_grid(const QuadratureRule& x, const std::vector<double>& fx, const QuadratureRule& y,
                             const std::vector<double>& fy, int dim) {
  check_rule(x, fx.size(), "project_product_grid");
  check_rule(y, fy.size(), "project_product_grid");
  const int nx = static_cast<int>(x.nodes.size());
  std::vector<CMatrix> rows(nx);
  parallel_for(nx, [&](int i) {
    const double wf = x.weights[i] * fx[i];
    rows[i] = (wf == 0.0) ? CMatrix::Zero(dim, dim) : CMatrix(wf * project_row(x.nodes[i], y, fy, dim));
  });
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& r : rows) out += r;
  return std::numbers::pi * out;
}

CMatrix invert_characteristic_grid(const QuadratureRule& kx, const std::vector<cplx>& cx, const QuadratureRule& ky,
                                   const std::vector<cplx>& cy, int dim) {
  check_rule(kx, cx.size(), "invert_characteristic_grid");
  check_rule(ky, cy.size(), "invert_characteristic_grid");
  const int nx = static_cast<int>(kx.nodes.size());
  std::vector<CMatrix> rows(nx);
  parallel_for(nx, [&](int i) {
    const cplx wc = kx.weights[i] * cx[i];
    rows[i] = (wc == cplx(0.0, 0.0)) ? CMatrix::Zero(dim, dim) : CMatrix(wc * invert_row(kx.nodes[i], ky, cy, dim));
  });
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& r : rows) out += r;
  return out / std::numbers::pi;
}

}  // namespace kernels

namespace kernels::reference {

Eigen::MatrixXd wigner_grid(const DensityMatrix& rho, const std::vector<double>& qs, const std::vector<double>& ps) {
  Eigen::MatrixXd out(qs.size(), ps.size());
  for (size_t i = 0; i < qs.size(); ++i)
    for (size_t j = 0; j < ps.size(); ++j) out(i, j) = wigner(rho, qs[i], ps[j]);
  return out;
}

CMatrix project_product_grid(const QuadratureRule& x, const std::vector<double>& fx, const QuadratureRule& y,
                             const std::vector<double>& fy, int dim) {
  check_rule(x, fx.size(), "project_product_grid");
  check_rule(y, fy.size(), "project_product_grid");
  CMatrix out = CMatrix::Zero(dim, dim);
  for (size_t i = 0; i < x.nodes.size(); ++i) {
    const double wf = x.weights[i] * fx[i];
    if (wf == 0.0) continue;
    out += wf * project_row(x.nodes[i], y, fy, dim);
  }
  return std::numbers::pi * out;
}

CMatrix invert_characteristic_grid(const QuadratureRule& kx, const std::vector<cplx>& cx, const QuadratureRule& ky,
                                   const std::vector<cplx>& cy, int dim) {
  check_rule(kx, cx.size(), "invert_characteristic_grid");
  check_rule(ky, cy.size(), "invert_characteristic_grid");
  CMatrix out = CMatrix::Zero(dim, dim);
  for (size_t i = 0; i < kx.nodes.size(); ++i) {
    const cplx wc = kx.weights[i] * cx[i];
    if (wc == cplx(0.0, 0.0)) continue;
    out += wc * invert_row(kx.nodes[i], ky, cy, dim);
  }
  return out / std::numbers::pi;
}

}  // namespace kernels::reference

}  // namespace demarg
