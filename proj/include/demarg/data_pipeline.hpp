#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "demarg/demarg.hpp"
#include "demarg/fock.hpp"
#include "demarg/phasespace.hpp"

namespace demarg {

struct AxisSample {
  double k = 0.0;
  double re_mean = 0.0;
  double im_mean = 0.0;
  long shots_re = 0;
  long shots_im = 0;
};

struct MeasurementAxis {
  double theta = 0.0;
  std::vector<AxisSample> samples;
};

struct RecordMetadata {
  std::string convention = kConventionTag;
  std::string timestamp;
  std::string source;
  std::optional<std::uint64_t> seed;
};

struct MeasurementRecord {
  std::string state_label;
  std::vector<MeasurementAxis> axes;
  RecordMetadata metadata;
};

// 30 uniform points on (0, 3].
std::vector<double> default_k_grid();
// theta = j pi / 6, j = 0..5.
std::vector<double> default_axes();

// Independent generator for the stream (seed, a, b).
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Shot-noise simulation of the spin readout: cos(2k x_theta) outcomes give the
// real part, sin(2k x_theta) outcomes give -Im C.
MeasurementAxis simulate_measurement(const DensityMatrix& rho, double theta, const std::vector<double>& k_grid, long shots,
                                     std::uint64_t seed);
MeasurementRecord simulate_record(const DensityMatrix& rho, const std::string& label, const std::vector<double>& thetas,
                                  const std::vector<double>& k_grid, long shots, std::uint64_t seed);

// Throws ValidationError naming the axis and sample that break an invariant.
void validate_record(const MeasurementRecord& r);

CharacteristicCurve to_curve(const MeasurementAxis& axis);
// One parametric draw: each mean is replaced by a binomial resample at its
// recorded shot count. Samples with zero shots are kept as they are.
CharacteristicCurve resample_curve(const CharacteristicCurve& c, std::mt19937_64& rng);
MeasurementAxis resample_axis(const MeasurementAxis& a, std::mt19937_64& rng);

std::filesystem::path sidecar_path(const std::filesystem::path& csv);
void save_records(const std::filesystem::path& csv, const MeasurementRecord& r);
MeasurementRecord load_records(const std::filesystem::path& csv);

struct BootstrapResult {
  double mean = 0.0;
  double sigma = 0.0;
};

BootstrapResult bootstrap(const MeasurementAxis& axis, int resamples, std::uint64_t seed,
                          const std::function<double(const MeasurementAxis&)>& analysis);

// Vector-valued analysis over a curve; returns per-component mean and sigma.
std::vector<BootstrapResult> bootstrap_curve(const CharacteristicCurve& c, int resamples, std::uint64_t seed,
                                             const std::function<std::vector<double>(const CharacteristicCurve&)>& analysis);

// Per-axis negativity of measured data with bootstrap sigma.
NegativityReport negativity_scan(const MeasurementRecord& r, MapKind kind, int dim, double k_max, int resamples,
                                 std::uint64_t seed);

// Mean negativity of simulated vacuum data with the same k grid and shot
// counts as `axis`: the level shot noise alone produces.
double noise_floor(const MeasurementAxis& axis, MapKind kind, int dim, double k_max, int draws, std::uint64_t seed);

// Quadrature samples drawn from the exact marginal by inverse CDF.
std::vector<double> sample_quadrature(const DensityMatrix& rho, double theta, long n, std::uint64_t seed);

}  // namespace demarg
