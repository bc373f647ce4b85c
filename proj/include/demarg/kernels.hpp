#pragma once

#include <algorithm>
#include <exception>
#include <vector>

#include "demarg/fock.hpp"
#include "demarg/special.hpp"

namespace demarg {

// Reads DEMARG_THREADS and caps the OpenMP team size accordingly.
void apply_thread_cap_from_env();
int max_threads();

// Runs f(0..n-1) across the OpenMP team. Callers write results into
// index-addressed slots, so the outcome does not depend on scheduling.
// An exception from any index is rethrown after the loop (lowest index wins).
template <class F>
void parallel_for(int n, F&& f) {
  std::vector<std::exception_ptr> errors(static_cast<size_t>(std::max(n, 0)));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace kernels {

// W_rho(qs[i], ps[j]).
Eigen::MatrixXd wigner_grid(const DensityMatrix& rho, const std::vector<double>& qs, const std::vector<double>& ps);

// rho_{n1 n2} = pi sum_ij wx_i wy_j fx_i fy_j W_{|n2><n1|}(x_i, y_j), the 2-D
// product quadrature of a factorized Wigner function onto Fock operators.
CMatrix project_product_grid(const QuadratureRule& x, const std::vector<double>& fx, const QuadratureRule& y,
                             const std::vector<double>& fy, int dim);

// rho_mn = (1/pi) sum_ij wx_i wy_j cx_i cy_j <m|D(-xi)|n>, xi = ky_j - i kx_i:
// the inversion rho = (1/pi) int C D^dag of a factorized characteristic function.
CMatrix invert_characteristic_grid(const QuadratureRule& kx, const std::vector<cplx>& cx, const QuadratureRule& ky,
                                   const std::vector<cplx>& cy, int dim);

}  // namespace kernels

// Single-threaded twins of the kernels above, kept as the test reference.
namespace kernels::reference {

Eigen::MatrixXd wigner_grid(const DensityMatrix& rho, const std::vector<double>& qs, const std::vector<double>& ps);
CMatrix project_product_grid(const QuadratureRule& x, const std::vector<double>& fx, const QuadratureRule& y,
                             const std::vector<double>& fy, int dim);
CMatrix invert_characteristic_grid(const QuadratureRule& kx, const std::vector<cplx>& cx, const QuadratureRule& ky,
                                   const std::vector<cplx>& cy, int dim);

}  // namespace kernels::reference

}  // namespace demarg
