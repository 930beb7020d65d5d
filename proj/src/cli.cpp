#include "rydgate/cli.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rydgate/config.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/format.hpp"
#include "rydgate/harness.hpp"

#ifndef RYDGATE_VERSION
#define RYDGATE_VERSION "unknown"
#endif

namespace rydgate {

namespace {

struct Options {
  std::string config;
  std::string experiment;
  std::vector<std::string> sets;
  std::string out;
  std::optional<std::uint64_t> seed;
};

ConfigDocument load_document(const Options& o) {
  return o.config.empty() ? harness::default_document() : ConfigDocument::load(o.config);
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  ConfigDocument doc = load_document(o);
  for (const std::string& s : o.sets) doc.apply_override(s);
  const ConfigResult result = validate_config(doc);
  for (const std::string& w : result.warnings) err << "warning: " << w << "\n";
  out << resolved_document(result.config).to_ini();
  return kExitOk;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  std::map<std::string, double> values{{"phase", kPi}};
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, "expected key=value");
    std::string key = s.substr(0, eq);
    if (key == "d") key = "separation";
    if (key == "time" || key == "t_target") key = "t";
    if (key != "separation" && key != "t" && key != "phase")
      throw ConfigError(key, "calibrate accepts separation, t and phase");
    try {
      values[key] = parse_scalar(s.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  }
  for (const char* key : {"separation", "t"})
    if (!values.count(key)) throw ConfigError(key, "missing (use --set " + std::string(key) + "=...)");
  if (!(values["separation"] > 0.0)) throw ConfigError("separation", "separation must be > 0");
  if (!(values["t"] > 0.0)) throw ConfigError("t", "t must be > 0");
  if (values["phase"] < 0.0) throw ConfigError("phase", "phase must be >= 0");
  out << "c6 = " << format_double(calibrate_c6(values["separation"], values["t"], values["phase"]))
      << " rad um^6/us\n";
  return kExitOk;
}

int cmd_list(std::ostream& out) {
  for (const auto& info : harness::experiment_catalog()) {
    out << info.name << "\n    " << info.description << "\n";
    for (const auto& [k, v] : info.presets) out << "    preset " << k << " = " << v << "\n";
    for (const auto& s : info.default_sweeps)
      out << "    sweep " << s.parameter << ": " << s.values.front() << " .. " << s.values.back() << " ("
          << s.values.size() << " points)\n";
  }
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const harness::Experiment name = harness::parse_experiment(o.experiment);
  std::optional<std::filesystem::path> dir;
  if (!o.out.empty()) dir = o.out;
  const harness::ExperimentSpec spec =
      harness::make_experiment_spec(name, load_document(o), o.sets, dir, o.seed,
                                    o.config.empty() ? std::nullopt : std::optional<std::string>(o.config));
  for (const std::string& w : spec.warnings) err << "warning: " << w << "\n";
  const harness::RunSummary summary = harness::run_experiment(spec, &err);
  out << "wrote " << summary.files.size() << " files and " << summary.manifest.string() << " (" << summary.points
      << " points, " << summary.failed << " failed)\n";
  return summary.points > 0 && summary.failed == summary.points ? kExitPhysics : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-photon controlled-phase gate simulator (van der Waals interaction of stored Rydberg "
               "excitations)",
               "rydgate"};
  app.set_version_flag("--version", RYDGATE_VERSION);
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "run a named experiment and write CSV datasets plus a manifest");
  run->add_option("--experiment", o.experiment, "experiment name (see list-experiments)")->required();
  run->add_option("--config", o.config, "INI config file (default: built-in working point)");
  run->add_option("--set", o.sets, "override section.key=value (repeatable)")->take_all();
  run->add_option("--out", o.out, std::string("output directory (default: $") + harness::kOutputDirEnv +
                                      " or ./rydgate-out)");
  run->add_option("--seed", o.seed, "master RNG seed");

  auto* validate = app.add_subcommand("validate", "check a config and print its resolved form");
  validate->add_option("--config", o.config, "INI config file (default: built-in working point)");
  validate->add_option("--set", o.sets, "override section.key=value (repeatable)")->take_all();

  auto* calibrate = app.add_subcommand("calibrate", "print c6 giving `phase` at `separation` after time `t`");
  calibrate->add_option("--set", o.sets, "separation=<um>, t=<us>, phase=<rad> (default pi)")->take_all();

  auto* list = app.add_subcommand("list-experiments", "list experiments, presets and default sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(o, out, err);
    if (*validate) return cmd_validate(o, out, err);
    if (*calibrate) return cmd_calibrate(o, out);
    if (*list) return cmd_list(out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PhysicsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysics;
  }
  return kExitConfig;
}

}  // namespace rydgate
