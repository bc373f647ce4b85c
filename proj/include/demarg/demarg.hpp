#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "demarg/fock.hpp"
#include "demarg/phasespace.hpp"

namespace demarg {

enum class MapKind { DM1, DM2 };
enum class Source { Analytic, Measured };

const char* to_string(MapKind kind);
MapKind parse_map_kind(std::string_view s);

struct NamedDeterminant {
  std::string name;
  int i = 0;
  int j = 0;
  double value = 0.0;
};

struct FictitiousState {
  DensityMatrix rho_dm;
  double theta = 0.0;
  MapKind map = MapKind::DM2;
  Source source = Source::Analytic;
  // Trace before renormalization (measured data only; 1 otherwise).
  double raw_trace = 1.0;
  std::vector<NamedDeterminant> witness_cache;
};

// Highest n with |rho_nn| above tol.
int highest_excitation(const DensityMatrix& rho, double tol = 1e-14);
// Smallest output dim that holds the fictitious state of an input whose
// highest excitation is n: 4n+1 (DM1) or 2n+1 (DM2).
int dm_output_dim(MapKind kind, int highest);

// h_a of the vacuum marginal.
std::vector<double> vacuum_hermite_coeffs();

// Fock matrix of the fictitious Wigner function M_x(x) M_y(y) given the
// Hermite coefficients of both factors: rho_{n1 n2} = 2 sum_a B_{n2 n1}(a) hx_a hy_{D-a}.
CMatrix project_hermite_product(const std::vector<double>& hx, const std::vector<double>& hy, int dim);

FictitiousState dm1_analytic(const DensityMatrix& rho, double theta, int out_dim = 0);
FictitiousState dm2_analytic(const DensityMatrix& rho, double theta, int out_dim = 0);
FictitiousState dm_analytic(const DensityMatrix& rho, MapKind kind, double theta, int out_dim = 0);

// Sampled marginal: checks normalization and grid coverage.
FictitiousState dm_from_marginal(const MarginalDistribution& m, MapKind kind, int dim);

// h_a = (i^a / sqrt(2 pi)) int_{-kmax}^{kmax} C(k) phi_a(k) dk with C linearly
// interpolated between samples and C(-k) = conj C(k). A missing k = 0 point
// is filled with C(0) = 1.
std::vector<double> hermite_coeffs_from_characteristic(const CharacteristicCurve& c, int amax, double k_max);

FictitiousState dm_from_characteristic(const CharacteristicCurve& c, MapKind kind, int dim, double k_max);

double submatrix_determinant(const DensityMatrix& h, int i, int j);

// Trace-norm negativity of the fictitious state.
double negativity(const FictitiousState& s);

struct NegativityReport {
  std::vector<double> theta_grid;
  std::vector<double> negativity;
  std::vector<double> sigma;
  double max_value = 0.0;
  double argmax_theta = 0.0;
};

// n uniform midpoints of (0, pi).
std::vector<double> default_theta_grid(int n = 60);

NegativityReport negativity_scan(const DensityMatrix& rho, MapKind kind, const std::vector<double>& theta_grid);
// One measured curve per axis; sigma is left at zero.
NegativityReport negativity_scan(const std::vector<CharacteristicCurve>& curves, MapKind kind, int dim, double k_max);

void finalize_report(NegativityReport& r);

}  // namespace demarg
