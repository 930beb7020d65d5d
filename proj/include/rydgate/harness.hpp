#pragma once

// Named experiments: parameter sweeps over a base configuration, written as
// CSV datasets plus a JSON manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rydgate/config.hpp"
#include "rydgate/core.hpp"
#include "rydgate/loss.hpp"
#include "rydgate/numerics.hpp"

namespace rydgate::harness {

inline constexpr const char* kManifestSchema = "rydgate-manifest/1";
inline constexpr const char* kOutputDirEnv = "RYDGATE_OUTPUT_DIR";

enum class Experiment {
  MomentumMap,
  FidelityVsSeparation,
  EfficiencyVsSeparation,
  FidelityVsWidth,
  EntropyVsFidelity,
  SwapError,
  Angular,
};

struct Sweep {
  std::string parameter;  // config key path, e.g. "geometry.separation"
  std::vector<std::string> values;
};

struct ExperimentInfo {
  Experiment id;
  std::string name;
  std::string description;
  /// Config entries applied on top of the config file.
  std::vector<std::pair<std::string, std::string>> presets;
  std::vector<Sweep> default_sweeps;
};

const std::vector<ExperimentInfo>& experiment_catalog();
const ExperimentInfo& experiment_info(Experiment id);
/// Throws ConfigError("experiment", ...) for unknown names.
Experiment parse_experiment(std::string_view name);

/// Working-point configuration used when no config file is given:
/// d = 21 μm, w∥ = 3 μm, w⊥ = 8 μm, 780 nm light along z, t = 5 μs,
/// c6 calibrated to a π phase at 21 μm in 5 μs.
ConfigDocument default_document();

/// Evenly spaced values from `first` to `last` inclusive.
std::vector<std::string> linear_values(double first, double last, int count);

struct ExperimentSpec {
  Experiment name = Experiment::MomentumMap;
  ConfigDocument base;  // config file, then presets, then overrides
  GateConfig base_config;
  std::vector<std::string> warnings;
  std::vector<std::string> overrides;
  std::optional<std::string> config_source;
  std::vector<Sweep> sweeps;
  std::filesystem::path output_dir;
};

/// Applies presets, overrides (`key=value`) and the seed, resolves the
/// sweeps (run.sweep_param / run.sweep_values replace the defaults) and
/// validates the base configuration. Throws ConfigError.
ExperimentSpec make_experiment_spec(Experiment name, ConfigDocument doc, const std::vector<std::string>& overrides,
                                    std::optional<std::filesystem::path> output_dir = std::nullopt,
                                    std::optional<std::uint64_t> seed = std::nullopt,
                                    std::optional<std::string> config_source = std::nullopt);

/// --out, else $RYDGATE_OUTPUT_DIR, else ./rydgate-out.
std::filesystem::path default_output_dir();

/// Everything reported for one configuration.
struct PointMetrics {
  Complex zeta{1.0, 0.0};
  bool zeta_converged = true;
  double zeta_doubling_delta = 0.0;
  double fidelity = 0.5;
  double fidelity_direct = 0.5;
  double fidelity_swap = 0.5;
  double k_d_analytic = 0.0;
  double centroid_1 = 0.0;
  double centroid_2 = 0.0;
  double e_analytic = 0.0;
  double e_numeric = 0.0;
  double ellipse_angle = 0.0;
  double entropy = 0.0;
  loss::PairEfficiency efficiency;
  double t_int = 0.0;
  double near_field_mass = 0.0;
  std::optional<numerics::ErrorAverage> error_average;
};

/// Metrics of `config` for its configured protocol, plus F for both
/// protocols. Positioning errors are averaged on `error_axis` when set.
PointMetrics evaluate_point(const GateConfig& config, std::optional<Axis> error_axis = std::nullopt);

/// Column order of the per-sweep CSV after the sweep parameter column.
const std::vector<std::string>& metric_columns(Experiment name);

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
  int points = 0;
  int failed = 0;
};

/// Runs every sweep point (in parallel, deterministic per-point seeds),
/// writes the datasets and the manifest. Failed points are recorded, not
/// fatal. Throws ConfigError when the output directory is unusable.
RunSummary run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr);

/// Coefficient of determination of the least-squares line y ~ x.
double r_squared(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rydgate::harness
