#include "rydgate/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#include <omp.h>

#include "rydgate/analytic.hpp"
#include "rydgate/csv.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/format.hpp"

#ifndef RYDGATE_VERSION
#define RYDGATE_VERSION "unknown"
#endif

namespace rydgate::harness {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> integer_values(int first, int last) {
  std::vector<std::string> out;
  for (int v = first; v <= last; ++v) out.push_back(std::to_string(v));
  return out;
}

std::vector<ExperimentInfo> build_catalog() {
  std::vector<ExperimentInfo> c;
  c.push_back({Experiment::MomentumMap,
               "momentum-map",
               "joint momentum densities (parallel and perpendicular slices, both protocols) versus interaction time",
               {},
               {{"interaction.t_int", {"0", "2.5", "5"}}}});
  c.push_back({Experiment::FidelityVsSeparation,
               "fidelity-vs-separation",
               "F with and without the swap versus separation at the pi-phase interaction time",
               {{"interaction.t_int", "pi"}},
               {{"geometry.separation", integer_values(15, 30)}}});
  c.push_back({Experiment::EfficiencyVsSeparation,
               "efficiency-vs-separation",
               "per-photon and pair efficiency and t_pi versus separation",
               {{"interaction.t_int", "pi"}},
               {{"geometry.separation", integer_values(15, 30)}}});
  c.push_back({Experiment::FidelityVsWidth,
               "fidelity-vs-width",
               "F when compressing one width from the isotropic 8 um case at d = 21 um",
               {{"geometry.separation", "21"},
                {"profiles.w_par", "8"},
                {"profiles.w_perp", "8"},
                {"protocol.name", "swap"},
                {"interaction.t_int", "pi"}},
               {{"profiles.w_par", linear_values(8.0, 3.0, 11)}, {"profiles.w_perp", linear_values(8.0, 3.0, 11)}}});
  c.push_back({Experiment::EntropyVsFidelity,
               "entropy-vs-fidelity",
               "1 - F against the entanglement entropy over a separation (interaction strength) sweep with the swap",
               {{"protocol.name", "swap"}, {"interaction.t_int", "pi"}},
               {{"geometry.separation", linear_values(15.0, 40.0, 11)}}});
  c.push_back({Experiment::SwapError,
               "swap-error",
               "mean F under Gaussian positioning errors of the swap, parallel and perpendicular",
               {{"protocol.name", "swap"}},
               {{"protocol.err_sigma_par", linear_values(0.0, 2.0, 9)},
                {"protocol.err_sigma_perp", linear_values(0.0, 2.0, 9)}}});
  c.push_back({Experiment::Angular,
               "angular",
               "emission-angle distributions before and after the interaction, both protocols",
               {},
               {}});
  return c;
}

std::string slug(const std::string& key_path) {
  std::string out = key_path.substr(key_path.find('.') + 1);
  std::replace(out.begin(), out.end(), '.', '_');
  return out;
}

void check_sweep(const Sweep& sweep) {
  if (!is_known_key(sweep.parameter)) throw ConfigError("run.sweep_param", "unknown key '" + sweep.parameter + "'");
  if (sweep.values.empty()) throw ConfigError("run.sweep_values", "sweep has no values");
  std::vector<double> v;
  for (const std::string& s : sweep.values) {
    try {
      v.push_back(parse_scalar(s));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("run.sweep_values", e.what());
    }
  }
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    inc = inc && v[i] > v[i - 1];
    dec = dec && v[i] < v[i - 1];
  }
  if (!inc && !dec) throw ConfigError("run.sweep_values", "sweep values must be strictly monotone");
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("run.sweep_values", "empty sweep value");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::optional<Axis> error_axis_for(Experiment name, const std::string& parameter) {
  if (name != Experiment::SwapError) return std::nullopt;
  if (parameter == "protocol.err_sigma_par") return Axis::Parallel;
  if (parameter == "protocol.err_sigma_perp") return Axis::Perpendicular;
  throw ConfigError("run.sweep_param", "swap-error sweeps protocol.err_sigma_par or protocol.err_sigma_perp");
}

double error_sigma(const GateConfig& config, Axis axis) {
  const auto* swap = std::get_if<SwapProtocol>(&config.protocol);
  if (!swap) return 0.0;
  return axis == Axis::Parallel ? swap->err_sigma_par : swap->err_sigma_perp;
}

GateConfig with_protocol(GateConfig config, Protocol protocol) {
  config.protocol = protocol;
  return config;
}

struct MapOutput {
  std::string name;
  numerics::MomentumMap map;
};

struct PointRecord {
  int index = 0;
  std::string value;
  bool ok = false;
  std::string error;
  PointMetrics metrics;
  std::vector<std::string> warnings;
  std::vector<MapOutput> maps;
  std::vector<std::pair<std::string, numerics::AngularDistribution>> angular;
};

void write_map(const fs::path& path, const numerics::MomentumMap& map) {
  std::ofstream out(path);
  if (!out) throw ConfigError("out", "cannot write " + path.string());
  CsvWriter csv(out, {"K1", "K2", "density"});
  for (Eigen::Index i = 0; i < map.density.rows(); ++i)
    for (Eigen::Index j = 0; j < map.density.cols(); ++j)
      csv.field(map.k(0, i)).field(map.k(1, j)).field(map.density(i, j)).end_row();
}

void write_angular(const fs::path& path, const numerics::AngularDistribution& dist) {
  std::ofstream out(path);
  if (!out) throw ConfigError("out", "cannot write " + path.string());
  CsvWriter csv(out, {"angle_deg", "before_1", "before_2", "after_1", "after_2"});
  for (std::size_t i = 0; i < dist.angles.size(); ++i)
    csv.field(dist.angles[i] * 180.0 / kPi)
        .field(dist.before[0][i])
        .field(dist.before[1][i])
        .field(dist.after[0][i])
        .field(dist.after[1][i])
        .end_row();
}

void write_metrics(CsvWriter& csv, Experiment name, const PointMetrics& m) {
  csv.field(m.zeta.real()).field(m.zeta.imag()).field(m.zeta_converged ? "1" : "0");
  csv.field(m.fidelity).field(m.fidelity_direct).field(m.fidelity_swap);
  csv.field(m.k_d_analytic).field(m.centroid_1).field(m.centroid_2);
  csv.field(m.e_analytic).field(m.e_numeric).field(m.ellipse_angle * 180.0 / kPi);
  csv.field(m.entropy);
  csv.field(m.efficiency.photon[0]).field(m.efficiency.photon[1]).field(m.efficiency.pair).field(m.efficiency.t_pi);
  csv.field(m.t_int).field(m.near_field_mass);
  if (name == Experiment::SwapError) {
    const auto& e = *m.error_average;
    csv.field(e.mean).field(e.std).field(e.error_free - e.mean);
  }
}

PointRecord run_point(const ExperimentSpec& spec, const Sweep* sweep, int index, int global_index) {
  PointRecord rec;
  rec.index = index;
  try {
    ConfigDocument doc = spec.base;
    if (sweep) {
      rec.value = sweep->values[static_cast<std::size_t>(index)];
      doc.set(sweep->parameter, rec.value);
    }
    ConfigResult resolved = validate_config(doc);
    rec.warnings = std::move(resolved.warnings);
    GateConfig config = resolved.config;
    config.rng_seed = numerics::derive_seed(spec.base_config.rng_seed, static_cast<std::uint64_t>(global_index));
    // Sweep points already run in parallel.
    config.run.threads = 1;

    const std::optional<Axis> err_axis = error_axis_for(spec.name, sweep ? sweep->parameter : "");
    rec.metrics = evaluate_point(config, err_axis);
    if (rec.metrics.near_field_mass >= numerics::kNearFieldWarning)
      rec.warnings.push_back("near-field probability " + format_double(rec.metrics.near_field_mass) +
                             " within |x1 - x2| < d/10");
    if (!rec.metrics.zeta_converged)
      rec.warnings.push_back("zeta quadrature changed by " + format_double(rec.metrics.zeta_doubling_delta) +
                             " on node doubling");

    if (spec.name == Experiment::MomentumMap) {
      for (const Protocol& protocol : {Protocol{DirectProtocol{}}, Protocol{SwapProtocol{}}}) {
        const GateConfig c = with_protocol(config, protocol);
        for (Axis axis : {Axis::Parallel, Axis::Perpendicular}) {
          const auto grid = numerics::apply_interaction_phase(numerics::build_joint_grid(c, axis), c);
          rec.maps.push_back({to_string(axis) + "_" + protocol_name(protocol),
                              numerics::momentum_map(grid, c.run.map_padding).window(c.run.map_window)});
        }
      }
    }
    if (spec.name == Experiment::Angular) {
      for (const Protocol& protocol : {Protocol{DirectProtocol{}}, Protocol{SwapProtocol{}}}) {
        const GateConfig c = with_protocol(config, protocol);
        rec.angular.emplace_back(protocol_name(protocol), numerics::angular_distribution(c, c.run.angular_bins));
      }
    }
    rec.ok = true;
  } catch (const ConfigError& e) {
    rec.error = std::string("config error: ") + e.what();
  } catch (const PhysicsError& e) {
    rec.error = std::string("physics error: ") + e.what();
  } catch (const std::exception& e) {
    rec.error = std::string("error: ") + e.what();
  }
  return rec;
}

ordered_json sweep_summary(Experiment name, const std::vector<PointRecord>& points) {
  ordered_json s = ordered_json::object();
  std::vector<const PointMetrics*> ok;
  for (const auto& p : points)
    if (p.ok) ok.push_back(&p.metrics);
  s["points_ok"] = ok.size();
  if (ok.size() < 2) return s;

  auto all_pairs = [&](auto pred) {
    for (std::size_t i = 1; i < ok.size(); ++i)
      if (!pred(*ok[i - 1], *ok[i])) return false;
    return true;
  };
  switch (name) {
    case Experiment::FidelityVsSeparation:
    case Experiment::EfficiencyVsSeparation: {
      bool swap_ge = true;
      for (const auto* m : ok) swap_ge = swap_ge && m->fidelity_swap >= m->fidelity_direct;
      s["F_swap_ge_F_direct"] = swap_ge;
      s["F_direct_nondecreasing"] = all_pairs([](auto& a, auto& b) { return b.fidelity_direct >= a.fidelity_direct; });
      s["F_swap_nondecreasing"] = all_pairs([](auto& a, auto& b) { return b.fidelity_swap >= a.fidelity_swap; });
      s["eta_pair_strictly_decreasing"] = all_pairs([](auto& a, auto& b) { return b.efficiency.pair < a.efficiency.pair; });
      break;
    }
    case Experiment::EntropyVsFidelity: {
      std::vector<double> x, y;
      for (const auto* m : ok) {
        x.push_back(m->entropy);
        y.push_back(1.0 - m->fidelity);
      }
      s["r_squared_infidelity_vs_entropy"] = r_squared(x, y);
      break;
    }
    case Experiment::FidelityVsWidth:
      s["F_gain"] = ok.back()->fidelity - ok.front()->fidelity;
      break;
    case Experiment::SwapError:
      s["F_drop_at_last"] = ok.back()->error_average->error_free - ok.back()->error_average->mean;
      break;
    default:
      break;
  }
  return s;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = build_catalog();
  return catalog;
}

const ExperimentInfo& experiment_info(Experiment id) {
  for (const auto& info : experiment_catalog())
    if (info.id == id) return info;
  throw std::logic_error("experiment missing from catalog");
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& info : experiment_catalog())
    if (info.name == name) return info.id;
  std::string known;
  for (const auto& info : experiment_catalog()) known += (known.empty() ? "" : ", ") + info.name;
  throw ConfigError("experiment", "unknown experiment '" + std::string(name) + "' (known: " + known + ")");
}

ConfigDocument default_document() {
  return ConfigDocument::parse_string(
      "[profile1]\n"
      "w_par = 3\n"
      "w_perp = 8\n"
      "k0 = 0, 0, 2*pi/0.78\n"
      "[profile2]\n"
      "w_par = 3\n"
      "w_perp = 8\n"
      "k0 = 0, 0, 2*pi/0.78\n"
      "[geometry]\n"
      "separation = 21, 0, 0\n"
      "[interaction]\n"
      "t_int = 5\n");
}

std::vector<std::string> linear_values(double first, double last, int count) {
  if (count < 2) throw std::invalid_argument("linear_values needs at least two points");
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) {
    // Endpoints exact; interior points rounded to 12 significant digits so
    // the CSV carries the intended decimal values.
    const double v = i == count - 1 ? last : first + (last - first) * i / (count - 1);
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    out.push_back(ss.str());
  }
  return out;
}

fs::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env);
  return fs::path("rydgate-out");
}

ExperimentSpec make_experiment_spec(Experiment name, ConfigDocument doc, const std::vector<std::string>& overrides,
                                    std::optional<fs::path> output_dir, std::optional<std::uint64_t> seed,
                                    std::optional<std::string> config_source) {
  const ExperimentInfo& info = experiment_info(name);
  ExperimentSpec spec;
  spec.name = name;
  for (const auto& [key, value] : info.presets) doc.set(key, value);
  for (const std::string& o : overrides) doc.apply_override(o);
  if (seed) doc.set("run.seed", std::to_string(*seed));

  const auto param = doc.get("run.sweep_param");
  const auto values = doc.get("run.sweep_values");
  if (param && !param->empty()) {
    if (!values || values->empty()) throw ConfigError("run.sweep_values", "run.sweep_param needs run.sweep_values");
    for (const std::string& p : expand_key_path(*param)) {
      if (p.rfind("run.", 0) == 0) throw ConfigError("run.sweep_param", "run.* keys cannot be swept");
    }
    spec.sweeps.push_back({*param, split_values(*values)});
  } else if (values && !values->empty()) {
    throw ConfigError("run.sweep_param", "run.sweep_values given without run.sweep_param");
  } else {
    spec.sweeps = info.default_sweeps;
  }
  for (const Sweep& s : spec.sweeps) {
    const auto expanded = expand_key_path(s.parameter);
    check_sweep({expanded.front(), s.values});
  }
  doc.erase("run.sweep_param");
  doc.erase("run.sweep_values");

  ConfigResult resolved = validate_config(doc);
  spec.base = std::move(doc);
  spec.base_config = resolved.config;
  spec.warnings = std::move(resolved.warnings);
  spec.overrides = overrides;
  spec.config_source = std::move(config_source);
  spec.output_dir = output_dir.value_or(default_output_dir());
  for (const Sweep& s : spec.sweeps) error_axis_for(name, s.parameter);
  return spec;
}

PointMetrics evaluate_point(const GateConfig& config, std::optional<Axis> error_axis) {
  PointMetrics m;
  const auto zd = numerics::zeta(with_protocol(config, DirectProtocol{}));
  const auto zs = numerics::zeta(with_protocol(config, SwapProtocol{}));
  const numerics::ZetaResult& z = is_swap(config.protocol) ? zs : zd;
  m.zeta = z.value;
  m.zeta_converged = zd.converged && zs.converged;
  m.zeta_doubling_delta = std::max(zd.doubling_delta, zs.doubling_delta);
  m.near_field_mass = z.near_field_mass;
  m.fidelity_direct = numerics::fidelity_from_zeta(zd.value);
  m.fidelity_swap = numerics::fidelity_from_zeta(zs.value);
  m.fidelity = is_swap(config.protocol) ? m.fidelity_swap : m.fidelity_direct;

  const auto coeffs = analytic::expansion_coefficients(config);
  m.k_d_analytic = coeffs.k_D;
  m.e_analytic = coeffs.e_par;

  const auto grid =
      numerics::apply_interaction_phase(numerics::build_joint_grid(config, Axis::Parallel), config);
  const auto map = numerics::momentum_map(grid);
  std::tie(m.centroid_1, m.centroid_2) = numerics::momentum_centroid(map);
  const auto ellipse = numerics::ellipse_metrics(map);
  m.e_numeric = ellipse.eccentricity;
  m.ellipse_angle = ellipse.angle;
  m.entropy = numerics::entanglement_entropy(grid);

  m.efficiency = loss::pair_efficiency(config);
  m.t_int = config.t_int;

  if (error_axis) {
    if (!is_swap(config.protocol))
      throw ConfigError("protocol.name", "positioning errors need the swap protocol");
    m.error_average = numerics::swap_error_average_fidelity(config, *error_axis, error_sigma(config, *error_axis),
                                                            config.run.error_samples, config.rng_seed);
  }
  return m;
}

const std::vector<std::string>& metric_columns(Experiment name) {
  static const std::vector<std::string> base = {
      "zeta_re",     "zeta_im",      "zeta_converged", "F",          "F_direct",     "F_swap",
      "kD_analytic", "centroid_1",   "centroid_2",     "e_analytic", "e_numeric",    "ellipse_angle_deg",
      "entropy",     "eta_photon_1", "eta_photon_2",   "eta_pair",   "t_pi",         "t_int",
      "near_field_mass"};
  static const std::vector<std::string> with_errors = [] {
    auto v = base;
    v.insert(v.end(), {"F_err_mean", "F_err_std", "F_err_drop"});
    return v;
  }();
  return name == Experiment::SwapError ? with_errors : base;
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("r_squared needs two equal-length series");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy * sxy / (sxx * syy);
}

RunSummary run_experiment(const ExperimentSpec& spec, std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentInfo& info = experiment_info(spec.name);
  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec || !fs::is_directory(spec.output_dir))
    throw ConfigError("out", "cannot create output directory '" + spec.output_dir.string() + "'");

  // Flatten all sweep points so they share one parallel loop.
  struct Task {
    const Sweep* sweep;
    int index;
  };
  std::vector<Task> tasks;
  for (const Sweep& s : spec.sweeps)
    for (std::size_t i = 0; i < s.values.size(); ++i) tasks.push_back({&s, static_cast<int>(i)});
  if (spec.sweeps.empty()) tasks.push_back({nullptr, 0});

  std::vector<PointRecord> records(tasks.size());
  const int threads = numerics::thread_count(spec.base_config);
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::size_t t = 0; t < tasks.size(); ++t)
    records[t] = run_point(spec, tasks[t].sweep, tasks[t].index, static_cast<int>(t));

  RunSummary summary;
  ordered_json sweeps_json = ordered_json::array();
  std::size_t cursor = 0;
  const std::size_t groups = spec.sweeps.empty() ? 1 : spec.sweeps.size();
  for (std::size_t g = 0; g < groups; ++g) {
    const Sweep* sweep = spec.sweeps.empty() ? nullptr : &spec.sweeps[g];
    const std::size_t count = sweep ? sweep->values.size() : 1;
    const std::string stem = info.name + (groups > 1 ? "_" + slug(sweep->parameter) : std::string());
    const fs::path csv_path = spec.output_dir / (stem + ".csv");

    std::vector<std::string> header = {"point"};
    if (sweep) header.push_back(sweep->parameter);
    header.push_back("status");
    for (const auto& c : metric_columns(spec.name)) header.push_back(c);
    header.push_back("message");

    std::ofstream out(csv_path);
    if (!out) throw ConfigError("out", "cannot write " + csv_path.string());
    CsvWriter csv(out, header);
    ordered_json points_json = ordered_json::array();
    std::vector<PointRecord> group(records.begin() + static_cast<std::ptrdiff_t>(cursor),
                                   records.begin() + static_cast<std::ptrdiff_t>(cursor + count));
    for (const PointRecord& rec : group) {
      csv.field(rec.index);
      if (sweep) csv.field(rec.value);
      csv.field(rec.ok ? "ok" : "failed");
      if (rec.ok) {
        write_metrics(csv, spec.name, rec.metrics);
      } else {
        for (std::size_t i = 0; i < metric_columns(spec.name).size(); ++i) csv.empty();
      }
      csv.field(rec.error);
      csv.end_row();

      ordered_json p;
      p["point"] = rec.index;
      if (sweep) p["value"] = rec.value;
      p["status"] = rec.ok ? "ok" : "failed";
      if (!rec.ok) p["error"] = rec.error;
      p["warnings"] = rec.warnings;
      ordered_json files = ordered_json::array();
      for (const MapOutput& m : rec.maps) {
        const fs::path path = spec.output_dir / (stem + "_p" + std::to_string(rec.index) + "_" + m.name + ".csv");
        write_map(path, m.map);
        summary.files.push_back(path);
        files.push_back(path.filename().string());
      }
      for (const auto& [name, dist] : rec.angular) {
        const fs::path path = spec.output_dir / (stem + "_p" + std::to_string(rec.index) + "_" + name + ".csv");
        write_angular(path, dist);
        summary.files.push_back(path);
        files.push_back(path.filename().string());
      }
      if (!files.empty()) p["files"] = files;
      points_json.push_back(p);
      ++summary.points;
      if (!rec.ok) ++summary.failed;
      if (log && !rec.ok) *log << stem << " point " << rec.index << ": " << rec.error << "\n";
    }
    summary.files.push_back(csv_path);

    ordered_json sj;
    sj["parameter"] = sweep ? ordered_json(sweep->parameter) : ordered_json(nullptr);
    sj["values"] = sweep ? ordered_json(sweep->values) : ordered_json::array();
    sj["file"] = csv_path.filename().string();
    sj["columns"] = header;
    sj["points"] = points_json;
    sj["summary"] = sweep_summary(spec.name, group);
    sweeps_json.push_back(sj);
    cursor += count;
  }

  ordered_json manifest;
  manifest["schema"] = kManifestSchema;
  manifest["tool_version"] = RYDGATE_VERSION;
  manifest["experiment"] = info.name;
  manifest["seed"] = spec.base_config.rng_seed;
  manifest["config_source"] = spec.config_source ? ordered_json(*spec.config_source) : ordered_json(nullptr);
  ordered_json presets = ordered_json::object();
  for (const auto& [k, v] : info.presets) presets[k] = v;
  manifest["presets"] = presets;
  manifest["overrides"] = spec.overrides;
  ordered_json config = ordered_json::object();
  const ConfigDocument resolved = resolved_document(spec.base_config);
  for (const auto& [k, v] : resolved.entries()) config[k] = v;
  manifest["config"] = config;
  manifest["calibration"] = {{"c6", spec.base_config.c6},
                             {"c6_calibrated", spec.base_config.calibration.c6_calibrated},
                             {"calibrate_separation", spec.base_config.calibration.separation},
                             {"calibrate_time", spec.base_config.calibration.time},
                             {"calibrate_phase", spec.base_config.calibration.phase},
                             {"t_int_from_pi", spec.base_config.calibration.t_from_pi}};
  manifest["warnings"] = spec.warnings;
  manifest["sweeps"] = sweeps_json;
  if (spec.name == Experiment::FidelityVsWidth && sweeps_json.size() == 2) {
    const auto& a = sweeps_json[0]["summary"];
    const auto& b = sweeps_json[1]["summary"];
    if (a.contains("F_gain") && b.contains("F_gain")) {
      const double ga = a["F_gain"].get<double>();
      const double gb = b["F_gain"].get<double>();
      manifest["summary"] = {{"gain_ratio_" + slug(spec.sweeps[0].parameter) + "_over_" +
                                  slug(spec.sweeps[1].parameter),
                              gb != 0.0 ? ordered_json(ga / gb) : ordered_json(nullptr)}};
    }
  }
  manifest["points"] = summary.points;
  manifest["failed_points"] = summary.failed;
  manifest["threads"] = threads;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  summary.manifest = spec.output_dir / "manifest.json";
  std::ofstream mf(summary.manifest);
  if (!mf) throw ConfigError("out", "cannot write " + summary.manifest.string());
  mf << manifest.dump(2) << "\n";
  return summary;
}

}  // namespace rydgate::harness
