#pragma once

// Independent reference computations used only by tests. Each avoids the
// closed forms the library relies on.

#include <functional>

#include "demarg/fock.hpp"

namespace oracle {

using demarg::CMatrix;
using demarg::cplx;

// exp(alpha a^dag - alpha^* a) by matrix exponential in `work` levels,
// truncated to `dim`.
CMatrix displacement_expm(cplx alpha, int dim, int work = 0);

// (2/pi) tr[rho D(alpha) Parity D(alpha)^dag] with the expm displacement.
// Valid for |alpha| up to about 4.5.
double wigner_parity(const demarg::DensityMatrix& rho, double q, double p);

// Composite Simpson rule on [a, b] with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int n);

// Marginal density at x by integrating a Wigner function along the axis
// orthogonal to theta.
double marginal_by_p_integration(const std::function<double(double, double)>& w, double theta, double x,
                                 double half_width = 7.0);

// Hermite polynomial from the explicit finite sum.
double hermite_explicit(int n, double x);

// Lowest eigenvalue through the general complex eigensolver, independent of
// the Hermitian path the library uses.
double min_eigenvalue_general(const CMatrix& h);

}  // namespace oracle
