#include "demarg/data_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "demarg/error.hpp"
#include "demarg/kernels.hpp"

namespace demarg {

namespace {

const char* const kColumns[] = {"theta_rad", "k", "re_mean", "im_mean", "shots_re", "shots_im"};

double binomial_mean(std::mt19937_64& rng, long shots, double p_plus) {
  p_plus = std::clamp(p_plus, 0.0, 1.0);
  const long n_plus = std::binomial_distribution<long>(shots, p_plus)(rng);
  return 2.0 * static_cast<double>(n_plus) / static_cast<double>(shots) - 1.0;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  for (auto& c : out) {
    const auto b = c.find_first_not_of(" \t\r");
    const auto e = c.find_last_not_of(" \t\r");
    c = (b == std::string::npos) ? std::string() : c.substr(b, e - b + 1);
  }
  return out;
}

[[noreturn]] void bad_line(const std::filesystem::path& p, size_t line, const std::string& what) {
  std::ostringstream os;
  os << p.string() << ":" << line << ": " << what;
  throw ValidationError(os.str());
}

double parse_double(const std::filesystem::path& p, size_t line, const char* col, const std::string& s) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad_line(p, line, std::string("column '") + col + "': cannot parse '" + s + "' as a number");
  }
}

long parse_long(const std::filesystem::path& p, size_t line, const char* col, const std::string& s) {
  try {
    size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad_line(p, line, std::string("column '") + col + "': cannot parse '" + s + "' as an integer");
  }
}

BootstrapResult summarize(const std::vector<double>& v) {
  BootstrapResult r;
  for (double x : v) r.mean += x;
  r.mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.sigma = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return r;
}

void check_resamples(int resamples) {
  if (resamples < 2) throw ValidationError("bootstrap needs at least 2 resamples");
}

}  // namespace

std::vector<double> default_k_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 30; ++i) g.push_back(0.1 * i);
  return g;
}

std::vector<double> default_axes() {
  std::vector<double> t;
  for (int j = 0; j < 6; ++j) t.push_back(j * std::numbers::pi / 6.0);
  return t;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

MeasurementAxis simulate_measurement(const DensityMatrix& rho, double theta, const std::vector<double>& k_grid, long shots,
                                     std::uint64_t seed) {
  if (shots < 1) throw ValidationError("simulate_measurement: shots must be positive");
  MeasurementAxis axis;
  axis.theta = theta;
  axis.samples.resize(k_grid.size());
  // The axis index is folded into the seed by simulate_record.
  parallel_for(static_cast<int>(k_grid.size()), [&](int i) {
    const cplx c = characteristic(rho, theta, k_grid[i]);
    auto rng_re = stream_rng(seed, static_cast<std::uint64_t>(i), 0);
    auto rng_im = stream_rng(seed, static_cast<std::uint64_t>(i), 1);
    AxisSample& s = axis.samples[i];
    s.k = k_grid[i];
    s.shots_re = s.shots_im = shots;
    s.re_mean = binomial_mean(rng_re, shots, 0.5 * (1.0 + c.real()));
    s.im_mean = -binomial_mean(rng_im, shots, 0.5 * (1.0 - c.imag()));
  });
  return axis;
}

MeasurementRecord simulate_record(const DensityMatrix& rho, const std::string& label, const std::vector<double>& thetas,
                                  const std::vector<double>& k_grid, long shots, std::uint64_t seed) {
  MeasurementRecord r;
  r.state_label = label;
  r.metadata.source = "simulated:" + label;
  r.metadata.seed = seed;
  for (size_t a = 0; a < thetas.size(); ++a) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), 0x5eedu};
    std::uint32_t axis_seed[2];
    seq.generate(axis_seed, axis_seed + 2);
    const std::uint64_t s = (static_cast<std::uint64_t>(axis_seed[0]) << 32) | axis_seed[1];
    r.axes.push_back(simulate_measurement(rho, thetas[a], k_grid, shots, s));
  }
  return r;
}

void validate_record(const MeasurementRecord& r) {
  if (r.axes.empty()) throw ValidationError("measurement record has no axes");
  for (size_t a = 0; a < r.axes.size(); ++a) {
    const auto& ax = r.axes[a];
    if (!std::isfinite(ax.theta)) throw ValidationError("axis " + std::to_string(a) + ": theta is not finite");
    if (ax.samples.empty()) throw ValidationError("axis " + std::to_string(a) + ": no samples");
    for (size_t i = 0; i < ax.samples.size(); ++i) {
      const auto& s = ax.samples[i];
      const std::string where = "axis " + std::to_string(a) + " sample " + std::to_string(i) + ": ";
      if (i > 0 && !(s.k > ax.samples[i - 1].k)) throw ValidationError(where + "k must be strictly increasing");
      if (s.shots_re < 1 || s.shots_im < 1) throw ValidationError(where + "shot counts must be positive");
      if (std::abs(s.re_mean) > 1.0 || std::abs(s.im_mean) > 1.0)
        throw ValidationError(where + "means must lie in [-1, 1]");
    }
  }
}

CharacteristicCurve to_curve(const MeasurementAxis& axis) {
  CharacteristicCurve c;
  c.theta = axis.theta;
  for (const auto& s : axis.samples) {
    CharacteristicSample cs;
    cs.k = s.k;
    cs.value = cplx(s.re_mean, s.im_mean);
    cs.sigma_re = s.shots_re > 0 ? std::sqrt(std::max(1.0 - s.re_mean * s.re_mean, 0.0) / s.shots_re) : 0.0;
    cs.sigma_im = s.shots_im > 0 ? std::sqrt(std::max(1.0 - s.im_mean * s.im_mean, 0.0) / s.shots_im) : 0.0;
    cs.shots = std::min(s.shots_re, s.shots_im);
    c.samples.push_back(cs);
  }
  return c;
}

CharacteristicCurve resample_curve(const CharacteristicCurve& c, std::mt19937_64& rng) {
  CharacteristicCurve out = c;
  for (auto& s : out.samples) {
    if (s.shots < 1) continue;
    const double re = binomial_mean(rng, s.shots, 0.5 * (1.0 + s.value.real()));
    const double im = -binomial_mean(rng, s.shots, 0.5 * (1.0 - s.value.imag()));
    s.value = cplx(re, im);
  }
  return out;
}

MeasurementAxis resample_axis(const MeasurementAxis& a, std::mt19937_64& rng) {
  MeasurementAxis out = a;
  for (auto& s : out.samples) {
    if (s.shots_re > 0) s.re_mean = binomial_mean(rng, s.shots_re, 0.5 * (1.0 + s.re_mean));
    if (s.shots_im > 0) s.im_mean = -binomial_mean(rng, s.shots_im, 0.5 * (1.0 - s.im_mean));
  }
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p += ".json";
  return p;
}

void save_records(const std::filesystem::path& csv, const MeasurementRecord& r) {
  validate_record(r);
  std::ofstream os(csv);
  if (!os) throw ValidationError("cannot open " + csv.string() + " for writing");
  os.precision(17);
  os << "theta_rad,k,re_mean,im_mean,shots_re,shots_im\n";
  for (const auto& ax : r.axes)
    for (const auto& s : ax.samples)
      os << ax.theta << ',' << s.k << ',' << s.re_mean << ',' << s.im_mean << ',' << s.shots_re << ',' << s.shots_im
         << '\n';
  if (!os) throw ValidationError("write failed: " + csv.string());

  nlohmann::json j;
  j["convention"] = r.metadata.convention;
  j["timestamp"] = r.metadata.timestamp;
  j["source"] = r.metadata.source;
  j["state_label"] = r.state_label;
  if (r.metadata.seed) j["seed"] = *r.metadata.seed;
  else j["seed"] = nullptr;
  std::ofstream js(sidecar_path(csv));
  if (!js) throw ValidationError("cannot open " + sidecar_path(csv).string() + " for writing");
  js << j.dump(2) << '\n';
}

MeasurementRecord load_records(const std::filesystem::path& csv) {
  std::ifstream is(csv);
  if (!is) throw ValidationError("cannot open " + csv.string());
  std::string line;
  if (!std::getline(is, line)) bad_line(csv, 1, "empty file");
  const auto header = split_csv(line);
  int col[6];
  for (int c = 0; c < 6; ++c) {
    const auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) bad_line(csv, 1, std::string("missing column '") + kColumns[c] + "'");
    col[c] = static_cast<int>(it - header.begin());
  }

  MeasurementRecord r;
  std::map<double, size_t> axis_of;
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      std::ostringstream os;
      os << "expected " << header.size() << " fields, found " << cells.size();
      bad_line(csv, lineno, os.str());
    }
    const double theta = parse_double(csv, lineno, kColumns[0], cells[col[0]]);
    AxisSample s;
    s.k = parse_double(csv, lineno, kColumns[1], cells[col[1]]);
    s.re_mean = parse_double(csv, lineno, kColumns[2], cells[col[2]]);
    s.im_mean = parse_double(csv, lineno, kColumns[3], cells[col[3]]);
    s.shots_re = parse_long(csv, lineno, kColumns[4], cells[col[4]]);
    s.shots_im = parse_long(csv, lineno, kColumns[5], cells[col[5]]);
    if (std::abs(s.re_mean) > 1.0) bad_line(csv, lineno, "column 're_mean': value outside [-1, 1]");
    if (std::abs(s.im_mean) > 1.0) bad_line(csv, lineno, "column 'im_mean': value outside [-1, 1]");
    if (s.shots_re < 1) bad_line(csv, lineno, "column 'shots_re': must be positive");
    if (s.shots_im < 1) bad_line(csv, lineno, "column 'shots_im': must be positive");
    auto [it, fresh] = axis_of.try_emplace(theta, r.axes.size());
    if (fresh) r.axes.push_back({theta, {}});
    auto& ax = r.axes[it->second];
    if (!ax.samples.empty() && !(s.k > ax.samples.back().k))
      bad_line(csv, lineno, "column 'k': must be strictly increasing within an axis");
    ax.samples.push_back(s);
  }
  if (r.axes.empty()) bad_line(csv, lineno, "no data rows");

  r.metadata.source = csv.string();
  const auto side = sidecar_path(csv);
  if (std::filesystem::exists(side)) {
    std::ifstream js(side);
    nlohmann::json j;
    try {
      js >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(side.string() + ": " + e.what());
    }
    if (j.contains("convention") && j["convention"] != kConventionTag)
      throw ValidationError(side.string() + ": convention '" + j["convention"].get<std::string>() +
                            "' does not match '" + kConventionTag + "'");
    if (j.contains("timestamp") && j["timestamp"].is_string()) r.metadata.timestamp = j["timestamp"];
    if (j.contains("source") && j["source"].is_string()) r.metadata.source = j["source"];
    if (j.contains("state_label") && j["state_label"].is_string()) r.state_label = j["state_label"];
    if (j.contains("seed") && j["seed"].is_number_unsigned()) r.metadata.seed = j["seed"].get<std::uint64_t>();
  }
  return r;
}

BootstrapResult bootstrap(const MeasurementAxis& axis, int resamples, std::uint64_t seed,
                          const std::function<double(const MeasurementAxis&)>& analysis) {
  check_resamples(resamples);
  QuietWarnings quiet;
  std::vector<double> v(resamples);
  parallel_for(resamples, [&](int i) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    v[i] = analysis(resample_axis(axis, rng));
  });
  return summarize(v);
}

std::vector<BootstrapResult> bootstrap_curve(const CharacteristicCurve& c, int resamples, std::uint64_t seed,
                                             const std::function<std::vector<double>(const CharacteristicCurve&)>& analysis) {
  check_resamples(resamples);
  std::vector<std::vector<double>> v(resamples);
  QuietWarnings quiet;
  parallel_for(resamples, [&](int i) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    v[i] = analysis(resample_curve(c, rng));
  });
  const size_t m = v.front().size();
  std::vector<BootstrapResult> out(m);
  std::vector<double> col(resamples);
  for (size_t j = 0; j < m; ++j) {
    for (int i = 0; i < resamples; ++i) {
      if (v[i].size() != m) throw Error("bootstrap_curve: analysis returned inconsistent sizes");
      col[i] = v[i][j];
    }
    out[j] = summarize(col);
  }
  return out;
}

NegativityReport negativity_scan(const MeasurementRecord& r, MapKind kind, int dim, double k_max, int resamples,
                                 std::uint64_t seed) {
  validate_record(r);
  std::vector<CharacteristicCurve> curves;
  for (const auto& ax : r.axes) curves.push_back(to_curve(ax));
  NegativityReport rep = negativity_scan(curves, kind, dim, k_max);
  if (resamples > 0) {
    for (size_t a = 0; a < curves.size(); ++a) {
      const auto b = bootstrap_curve(curves[a], resamples, seed + 7919 * a, [&](const CharacteristicCurve& c) {
        return std::vector<double>{negativity(dm_from_characteristic(c, kind, dim, k_max))};
      });
      rep.sigma[a] = b[0].sigma;
    }
  }
  return rep;
}

double noise_floor(const MeasurementAxis& axis, MapKind kind, int dim, double k_max, int draws, std::uint64_t seed) {
  if (draws < 1) throw ValidationError("noise_floor: draws must be positive");
  std::vector<double> v(draws);
  QuietWarnings quiet;
  parallel_for(draws, [&](int i) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(i), 0x6e6f697365ULL);
    MeasurementAxis null = axis;
    for (auto& s : null.samples) {
      const double c = std::exp(-0.5 * s.k * s.k);
      s.re_mean = binomial_mean(rng, s.shots_re, 0.5 * (1.0 + c));
      s.im_mean = -binomial_mean(rng, s.shots_im, 0.5);
    }
    v[i] = negativity(dm_from_characteristic(to_curve(null), kind, dim, k_max));
  });
  double m = 0.0;
  for (double x : v) m += x;
  return m / draws;
}

std::vector<double> sample_quadrature(const DensityMatrix& rho, double theta, long n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample_quadrature: n must be positive");
  const MarginalDistribution m = marginal_analytic(rho, theta);
  const double mu = m.mean();
  const double sd = std::sqrt(std::max(m.variance(), 0.01));
  const int pts = 8001;
  const double lo = mu - 12.0 * sd, hi = mu + 12.0 * sd;
  std::vector<double> xs(pts), cdf(pts, 0.0);
  double prev = std::max(m.density(lo), 0.0);
  xs[0] = lo;
  for (int i = 1; i < pts; ++i) {
    xs[i] = lo + (hi - lo) * i / (pts - 1);
    const double cur = std::max(m.density(xs[i]), 0.0);
    cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * (xs[i] - xs[i - 1]);
    prev = cur;
  }
  for (double& c : cdf) c /= cdf.back();
  auto rng = stream_rng(seed, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(static_cast<size_t>(n));
  for (auto& x : out) {
    const double t = u(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), t);
    const size_t i = std::clamp<size_t>(static_cast<size_t>(it - cdf.begin()), 1, pts - 1);
    const double span = cdf[i] - cdf[i - 1];
    const double f = span > 0 ? (t - cdf[i - 1]) / span : 0.5;
    x = xs[i - 1] + f * (xs[i] - xs[i - 1]);
  }
  return out;
}

}  // namespace demarg
