#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "demarg/criteria.hpp"
#include "demarg/data_pipeline.hpp"
#include "demarg/demarg.hpp"
#include "demarg/entanglement.hpp"
#include "demarg/error.hpp"
#include "demarg/gaussian_bounds.hpp"
#include "demarg/kernels.hpp"
#include "json.hpp"

using namespace demarg;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCutoff = 3;

struct RunConfig {
  std::string command;
  std::string input;
  std::string builtin;
  std::string map = "dm2";
  int theta_grid = 60;
  int dim = 0;
  double k_max = 0.0;
  int bootstrap = 500;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";

  // Command-specific.
  double theta = 0.0;
  int lattice = 3;
  int m_max = 12;
  long shots = 1000;
  bool shot_samples = false;
  int rotations = 12;
  double energy_max = 2.0;
  int points = 41;
  int axes = 6;
  int floor_draws = 50;
};

json config_echo(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["input"] = c.input;
  j["builtin"] = c.builtin;
  j["map"] = c.map;
  j["theta_grid"] = c.theta_grid;
  j["dim"] = c.dim;
  j["kmax"] = c.k_max;
  j["bootstrap"] = c.bootstrap;
  j["seed"] = c.seed;
  j["format"] = c.format;
  if (c.command == "klm") {
    j["theta"] = c.theta;
    j["lattice"] = c.lattice;
  } else if (c.command == "moments") {
    j["theta"] = c.theta;
    j["m_max"] = c.m_max;
    j["shots"] = c.shots;
    j["shot_samples"] = c.shot_samples;
  } else if (c.command == "gaussian-bound") {
    j["rotations"] = c.rotations;
    j["energy_max"] = c.energy_max;
    j["points"] = c.points;
  } else if (c.command == "simulate") {
    j["shots"] = c.shots;
    j["axes"] = c.axes;
  } else if (c.command == "negativity") {
    j["floor_draws"] = c.floor_draws;
  }
  j["convention"] = kConventionTag;
  return j;
}

// ---- builtin states ----

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double number(const std::string& spec, const std::string& s) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("builtin '" + spec + "': cannot parse '" + s + "' as a number");
}

int integer(const std::string& spec, const std::string& s) {
  const double v = number(spec, s);
  if (v != std::floor(v) || v < 0 || v > 1000) throw ValidationError("builtin '" + spec + "': '" + s + "' is not a valid level");
  return static_cast<int>(v);
}

DensityMatrix psi02_state(int dim) {
  CVector v = CVector::Zero(dim);
  v(0) = v(2) = 1.0;
  return pure_state(v);
}

// Returns a constructor taking the Fock cutoff, plus the smallest sensible cutoff.
std::pair<std::function<DensityMatrix(int)>, int> parse_builtin(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  const std::string& name = parts.empty() ? spec : parts[0];
  auto args = [&](size_t lo, size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
      std::ostringstream os;
      os << "builtin '" << spec << "': expected " << lo;
      if (hi != lo) os << " to " << hi;
      os << " argument(s) after '" << name << "'";
      throw ValidationError(os.str());
    }
  };
  auto unit = [&](double f) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("builtin '" + spec + "': mixing weight must lie in [0, 1]");
    return f;
  };

  if (name == "vacuum") {
    args(0, 0);
    return {[](int d) { return fock_state(0, d); }, 2};
  }
  if (name.rfind("fock", 0) == 0 && name != "fockmix") {
    int n = 0;
    if (name == "fock") {
      args(1, 1);
      n = integer(spec, parts[1]);
    } else {
      args(0, 0);
      n = integer(spec, name.substr(4));
    }
    return {[n](int d) { return fock_state(n, d); }, n + 1};
  }
  if (name == "coherent") {
    args(1, 1);
    const std::vector<std::string> c = split(parts[1], ',');
    if (c.empty() || c.size() > 2) throw ValidationError("builtin '" + spec + "': coherent:RE[,IM]");
    const cplx a(number(spec, c[0]), c.size() > 1 ? number(spec, c[1]) : 0.0);
    return {[a](int d) { return coherent_state(a, d); }, 4};
  }
  if (name == "thermal") {
    args(1, 1);
    const double nbar = number(spec, parts[1]);
    if (nbar < 0.0) throw ValidationError("builtin '" + spec + "': nbar must be non-negative");
    return {[nbar](int d) { return thermal_state(nbar, d); }, 4};
  }
  if (name == "squeezed") {
    args(1, 1);
    const std::vector<std::string> c = split(parts[1], ',');
    if (c.empty() || c.size() > 3) throw ValidationError("builtin '" + spec + "': squeezed:R[,PHI[,NBAR]]");
    GaussianParams g;
    g.r = number(spec, c[0]);
    if (c.size() > 1) g.phi = number(spec, c[1]);
    if (c.size() > 2) g.nbar = number(spec, c[2]);
    if (g.r < 0.0 || g.nbar < 0.0) throw ValidationError("builtin '" + spec + "': r and nbar must be non-negative");
    return {[g](int d) { return squeezed_thermal_state(g, d); }, 8};
  }
  if (name == "psi02") {
    args(0, 0);
    return {psi02_state, 3};
  }
  if (name == "psi02mix") {
    args(1, 1);
    const double f = unit(number(spec, parts[1]));
    return {[f](int d) { return mix({{f, fock_state(0, d)}, {1.0 - f, psi02_state(d)}}); }, 3};
  }
  if (name == "fockmix") {
    args(2, 2);
    const int n = integer(spec, parts[1]);
    const double f = unit(number(spec, parts[2]));
    return {[n, f](int d) { return mix({{f, fock_state(0, d)}, {1.0 - f, fock_state(n, d)}}); }, n + 1};
  }
  if (name == "pacs") {
    args(1, 1);
    const std::vector<std::string> c = split(parts[1], ',');
    if (c.empty() || c.size() > 2) throw ValidationError("builtin '" + spec + "': pacs:RE[,IM]");
    const cplx g(number(spec, c[0]), c.size() > 1 ? number(spec, c[1]) : 0.0);
    return {[g](int d) { return photon_added_coherent(g, d); }, 4};
  }
  if (name == "pats") {
    args(1, 1);
    const double nbar = number(spec, parts[1]);
    if (nbar < 0.0) throw ValidationError("builtin '" + spec + "': nbar must be non-negative");
    return {[nbar](int d) { return photon_added_thermal(nbar, d); }, 4};
  }
  if (name == "oddcat") {
    args(2, 2);
    const double g = number(spec, parts[1]);
    const double f = unit(number(spec, parts[2]));
    return {[g, f](int d) { return dephased_odd_cat(g, f, d); }, 4};
  }
  throw ValidationError("unknown builtin state '" + spec + "'");
}

DensityMatrix make_builtin(const RunConfig& c) {
  auto [make, min_dim] = parse_builtin(c.builtin);
  if (c.dim > 0) return make(c.dim);
  // Grow the cutoff until the guard band is empty to round-off: truncation
  // leaves spurious negativity of order sqrt(lost weight).
  auto prev = set_warning_handler([](const std::string&) {});
  try {
    for (int d = std::max(8, min_dim + guard_band(min_dim) + 1);; d = d + d / 2) {
      try {
        DensityMatrix rho = make(d);
        if (rho.guard_band_weight() <= 1e-15) {
          set_warning_handler(prev);
          return rho;
        }
      } catch (const CutoffError&) {
        if (d > 400) throw;
      }
      if (d > 400) throw CutoffError("builtin '" + c.builtin + "' needs more than 400 Fock levels");
    }
  } catch (...) {
    set_warning_handler(prev);
    throw;
  }
}

void require_one_source(const RunConfig& c, bool allow_input) {
  if (!c.input.empty() && !c.builtin.empty()) throw ValidationError("give either --input or --builtin, not both");
  if (c.input.empty() && c.builtin.empty()) throw ValidationError("one of --input or --builtin is required");
  if (!allow_input && !c.input.empty()) throw ValidationError(c.command + " works on --builtin states only");
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

// ---- output ----

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  json to_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json o;
      for (size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
      arr.push_back(o);
    }
    return arr;
  }
  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    return os.str();
  }
};

void emit(const RunConfig& c, json report, const Table& table) {
  report["config_echo"] = config_echo(c);
  report["table"] = table.to_json();
  const std::string text = (c.format == "csv") ? table.to_csv() : report.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(c.out);
    if (!os) throw ValidationError("cannot open " + c.out + " for writing");
    os << text;
  }
  if (c.format == "csv") std::cerr << report["verdict"].get<std::string>() << "\n";
}

json base_report(const std::string& verdict, double witness, double sigma) {
  json r;
  r["verdict"] = verdict;
  r["witness"] = witness;
  r["sigma"] = sigma;
  return r;
}

// ---- commands ----

int cmd_negativity(const RunConfig& c) {
  require_one_source(c, true);
  const MapKind kind = parse_map_kind(c.map);
  Table t;
  json rep;
  if (!c.builtin.empty()) {
    const DensityMatrix rho = make_builtin(c);
    const NegativityReport r = negativity_scan(rho, kind, default_theta_grid(c.theta_grid));
    t.header = {"theta_rad", "negativity", "sigma"};
    for (size_t i = 0; i < r.theta_grid.size(); ++i) t.rows.push_back({r.theta_grid[i], r.negativity[i], 0.0});
    // Exact data: anything above round-off counts.
    const bool v = r.max_value > 1e-9;
    rep = base_report("nonclassical: " + yes_no(v) + " (3σ rule)", r.max_value, 0.0);
    rep["argmax_theta"] = r.argmax_theta;
    rep["source"] = "analytic";
  } else {
    const MeasurementRecord rec = load_records(c.input);
    const int dim = c.dim > 0 ? c.dim : 7;
    double k_max = c.k_max;
    if (k_max <= 0.0) {
      k_max = 3.0;
      for (const auto& ax : rec.axes) k_max = std::min(k_max, ax.samples.back().k);
    }
    const NegativityReport r = negativity_scan(rec, kind, dim, k_max, c.bootstrap, c.seed);
    t.header = {"theta_rad", "negativity", "sigma", "noise_floor"};
    bool any = false;
    size_t best = 0;
    double best_excess = -1e300;
    for (size_t i = 0; i < rec.axes.size(); ++i) {
      const double floor = noise_floor(rec.axes[i], kind, dim, k_max, c.floor_draws, c.seed + 104729 * i);
      t.rows.push_back({r.theta_grid[i], r.negativity[i], r.sigma[i], floor});
      const double excess = r.negativity[i] - 3.0 * r.sigma[i] - floor;
      if (excess > 0.0) any = true;
      if (excess > best_excess) best_excess = excess, best = i;
    }
    rep = base_report("nonclassical: " + yes_no(any) + " (3σ rule)", r.negativity[best], r.sigma[best]);
    rep["argmax_theta"] = r.theta_grid[best];
    rep["noise_floor"] = t.rows[best][3];
    rep["source"] = "measured";
    rep["fictitious_dim"] = dim;
    rep["kmax_used"] = k_max;
  }
  rep["map"] = to_string(kind);
  emit(c, rep, t);
  return 0;
}

int cmd_klm(const RunConfig& c) {
  require_one_source(c, true);
  const MapKind kind = parse_map_kind(c.map);
  std::vector<KlmPoint> pts;
  if (!c.builtin.empty()) {
    pts = klm_test(make_builtin(c), c.theta, kind, c.lattice, default_d_range());
  } else {
    const MeasurementRecord rec = load_records(c.input);
    // Axis nearest the requested theta.
    size_t best = 0;
    for (size_t i = 1; i < rec.axes.size(); ++i)
      if (std::abs(rec.axes[i].theta - c.theta) < std::abs(rec.axes[best].theta - c.theta)) best = i;
    const CharacteristicCurve curve = to_curve(rec.axes[best]);
    double coverage = curve.samples.back().k;
    if (c.k_max > 0.0) coverage = std::min(coverage, c.k_max);
    const std::vector<double> ds = clip_d_range(default_d_range(), c.lattice, coverage);
    if (ds.empty()) throw CoverageError("measured k range is too short for any lattice spacing");
    pts = klm_test(curve, kind, c.lattice, ds, c.bootstrap, c.seed);
  }
  Table t;
  t.header = {"d", "lambda_min", "sigma"};
  size_t worst = 0;
  bool neg = false;
  for (size_t i = 0; i < pts.size(); ++i) {
    t.rows.push_back({pts[i].d, pts[i].lambda_min, pts[i].sigma});
    if (pts[i].lambda_min + 3.0 * pts[i].sigma < pts[worst].lambda_min + 3.0 * pts[worst].sigma) worst = i;
  }
  const double tol = c.builtin.empty() ? 0.0 : 1e-9;
  neg = pts[worst].lambda_min + 3.0 * pts[worst].sigma < -tol;
  json rep = base_report("nonclassical: " + yes_no(neg) + " (3σ rule)", pts[worst].lambda_min, pts[worst].sigma);
  rep["d_at_witness"] = pts[worst].d;
  rep["map"] = to_string(kind);
  emit(c, rep, t);
  return 0;
}

std::vector<double> read_samples(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open " + path);
  std::string line;
  std::getline(is, line);
  if (line.find('x') == std::string::npos) throw ValidationError(path + ":1: missing column 'x'");
  std::vector<double> xs;
  size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      size_t used = 0;
      const double v = std::stod(line, &used);
      if (line.find_first_not_of(" \t\r", used) != std::string::npos || !std::isfinite(v)) throw std::invalid_argument(line);
      xs.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError(path + ":" + std::to_string(n) + ": column 'x': cannot parse '" + line + "'");
    }
  }
  if (xs.empty()) throw ValidationError(path + ": no samples");
  return xs;
}

int cmd_moments(const RunConfig& c) {
  require_one_source(c, true);
  MomentReport r;
  if (!c.input.empty()) {
    r = tilde_moments(read_samples(c.input), c.m_max);
  } else {
    const DensityMatrix rho = make_builtin(c);
    if (c.shot_samples) r = tilde_moments(sample_quadrature(rho, c.theta, c.shots, c.seed), c.m_max);
    else r = tilde_moments(marginal_analytic(rho, c.theta), c.m_max, c.shots);
  }
  Table t;
  t.header = {"m", "tilde_moment", "delta"};
  for (int m = 0; m <= r.m_max; ++m) t.rows.push_back({static_cast<double>(m), r.tilde_moments[m], r.deltas[m]});
  json mats = json::array();
  bool neg = false;
  double witness = 0.0, sigma = 0.0;
  bool first = true;
  for (int n : {3, 5, 7}) {
    if (2 * n - 2 > r.m_max) break;
    const LambdaEstimate e = moment_matrix_test(r, n, c.bootstrap, c.seed);
    mats.push_back({{"n", n}, {"lambda_min", e.lambda_min}, {"sigma", e.sigma}});
    const bool v = e.lambda_min + 3.0 * e.sigma < (r.samples.empty() && c.bootstrap == 0 ? -1e-9 : 0.0);
    if (first || v) witness = e.lambda_min, sigma = e.sigma, first = false;
    neg = neg || v;
  }
  if (first) throw ValidationError("moments: --m-max must be at least 4 for a 3x3 matrix");
  json rep = base_report("nonclassical: " + yes_no(neg) + " (3σ rule)", witness, sigma);
  rep["shots"] = r.shots;
  rep["matrices"] = mats;
  emit(c, rep, t);
  return 0;
}

int cmd_entanglement(const RunConfig& c) {
  require_one_source(c, false);
  const DensityMatrix rho = make_builtin(c);
  const CriterionReport b = verify_bound(rho, default_theta_grid(c.theta_grid));
  Table t;
  t.header = {"max_negativity_dm2", "entanglement_potential"};
  t.rows.push_back({b.witness, b.threshold});
  json rep = base_report("nonclassical: " + yes_no(b.threshold > 1e-9) + " (3σ rule)", b.threshold, 0.0);
  rep["max_negativity_dm2"] = b.witness;
  rep["bound_holds"] = b.verdict;
  rep["detail"] = b.detail;
  emit(c, rep, t);
  return 0;
}

int cmd_gaussian_bound(const RunConfig& c) {
  if (c.points < 2) throw ValidationError("--points must be at least 2");
  if (!(c.energy_max > 0.0)) throw ValidationError("--energy-max must be positive");
  if (c.rotations < 0) throw ValidationError("--rotations must be non-negative (0 for the full average)");
  if (!c.input.empty()) throw ValidationError("gaussian-bound works on --builtin states only");
  std::vector<double> rs;
  for (int i = 0; i < c.points; ++i) rs.push_back(std::asinh(std::sqrt(c.energy_max * i / (c.points - 1))));
  const GaussianBoundCurve curve = gaussian_bound_finite(c.rotations, rs);
  Table t;
  t.header = {"energy", "r", "bound"};
  for (size_t i = 0; i < rs.size(); ++i) t.rows.push_back({curve.energy_grid[i], rs[i], curve.bound[i]});
  json rep;
  if (!c.builtin.empty()) {
    const DensityMatrix rho = make_builtin(c);
    const double energy = rho.mean_photon_number();
    const DensityMatrix mixed = phase_randomize(rho, c.rotations);
    const NegativityReport scan = negativity_scan(mixed, MapKind::DM2, default_theta_grid(c.theta_grid));
    const CriterionReport v = genuine_non_gaussianity_verdict(scan.max_value, 0.0, c.rotations, energy);
    rep = base_report("genuinely non-Gaussian: " + yes_no(v.verdict) + " (3σ rule)", v.witness, 0.0);
    rep["bound_at_energy"] = v.threshold;
    rep["energy"] = energy;
    rep["margin"] = v.margin;
  } else {
    rep = base_report("bound curve only: no state tested", curve.max_bound, 0.0);
  }
  rep["rotations"] = c.rotations == kInfiniteRotations ? json("inf") : json(c.rotations);
  rep["max_bound"] = curve.max_bound;
  if (c.rotations == kInfiniteRotations) {
    const BoundMaximum m = gaussian_bound_maximum();
    rep["B_G"] = m.value;
    rep["r_at_B_G"] = m.r;
  }
  emit(c, rep, t);
  return 0;
}

int cmd_simulate(const RunConfig& c) {
  require_one_source(c, false);
  if (c.out.empty()) throw ValidationError("simulate needs --out for the CSV record");
  if (c.axes < 1) throw ValidationError("--axes must be positive");
  const DensityMatrix rho = make_builtin(c);
  std::vector<double> thetas;
  for (int j = 0; j < c.axes; ++j) thetas.push_back(j * std::numbers::pi / c.axes);
  std::vector<double> ks = default_k_grid();
  if (c.k_max > 0.0) {
    ks.clear();
    for (int i = 1; i <= 30; ++i) ks.push_back(c.k_max * i / 30.0);
  }
  const MeasurementRecord rec = simulate_record(rho, c.builtin, thetas, ks, c.shots, c.seed);
  save_records(c.out, rec);
  std::cout << "wrote " << c.out << " (" << rec.axes.size() << " axes, " << ks.size() << " k points) and "
            << sidecar_path(c.out).string() << "\n";
  return 0;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--input", c.input, "Measurement record CSV (with optional .json sidecar)");
  sub->add_option("--builtin", c.builtin,
                  "Built-in state: vacuum, fock:N, fockN, coherent:RE[,IM], thermal:NBAR, squeezed:R[,PHI[,NBAR]], "
                  "psi02, psi02mix:F, fockmix:N:F, pacs:RE[,IM], pats:NBAR, oddcat:GAMMA:F");
  sub->add_option("--map", c.map, "Demarginalization map")->check(CLI::IsMember({"dm1", "dm2"}))->capture_default_str();
  sub->add_option("--theta-grid", c.theta_grid, "Number of theta midpoints on (0, pi)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--dim", c.dim,
                  "Fock cutoff for builtin states (0 = automatic); fictitious-state dimension for measured data "
                  "(0 = 7)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--kmax", c.k_max, "Largest k used from measured data (0 = min(3, coverage))")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--bootstrap", c.bootstrap, "Bootstrap resamples (0 disables)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  sub->add_option("--out", c.out, "Output path (default: stdout)");
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonclassicality tests from a single marginal distribution or characteristic-function cut"};
  app.require_subcommand(1);
  RunConfig c;

  auto* neg = app.add_subcommand("negativity", "DM negativity across measurement angles");
  add_common(neg, c);
  neg->add_option("--floor-draws", c.floor_draws, "Simulated vacuum records for the measured-data noise floor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* klm = app.add_subcommand("klm", "KLM lattice positivity of the fictitious characteristic function");
  add_common(klm, c);
  klm->add_option("--theta", c.theta, "Measurement angle (nearest axis for measured data)")->capture_default_str();
  klm->add_option("--lattice", c.lattice, "Lattice points per side")->check(CLI::Range(1, 8))->capture_default_str();

  auto* mom = app.add_subcommand("moments", "Normally ordered moments and Hankel moment matrices");
  add_common(mom, c);
  mom->add_option("--theta", c.theta, "Measurement angle")->capture_default_str();
  mom->add_option("--m-max", c.m_max, "Highest moment order")->check(CLI::Range(0, 40))->capture_default_str();
  mom->add_option("--shots", c.shots, "Number of quadrature samples N")->check(CLI::PositiveNumber)->capture_default_str();
  mom->add_flag("--shot-samples", c.shot_samples, "Draw N samples from the builtin state instead of exact moments");

  auto* ent = app.add_subcommand("entanglement", "Entanglement potential and the DM2 lower bound");
  add_common(ent, c);

  auto* gb = app.add_subcommand("gaussian-bound", "Gaussian negativity bounds under phase randomization");
  add_common(gb, c);
  gb->add_option("--rotations", c.rotations, "Number of phase rotations N (0 = continuous average)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gb->add_option("--energy-max", c.energy_max, "Largest mean photon number of the curve")->capture_default_str();
  gb->add_option("--points", c.points, "Energy grid points")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Synthetic shot-noise measurement record of a builtin state");
  add_common(sim, c);
  sim->add_option("--shots", c.shots, "Shots per k point and quadrature")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--axes", c.axes, "Number of uniformly spaced axes on [0, pi)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    apply_thread_cap_from_env();
    for (auto* s : app.get_subcommands()) c.command = s->get_name();
    if (c.command == "negativity") return cmd_negativity(c);
    if (c.command == "klm") return cmd_klm(c);
    if (c.command == "moments") return cmd_moments(c);
    if (c.command == "entanglement") return cmd_entanglement(c);
    if (c.command == "gaussian-bound") return cmd_gaussian_bound(c);
    if (c.command == "simulate") return cmd_simulate(c);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CutoffError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCutoff;
  } catch (const CoverageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCutoff;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
