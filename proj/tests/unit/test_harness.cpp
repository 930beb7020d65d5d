#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "rydgate/csv.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/format.hpp"
#include "rydgate/harness.hpp"

using namespace rydgate;
using namespace rydgate::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rydgate-test-" + name);
  fs::remove_all(dir);
  return dir;
}

// Small grids keep the experiment tests quick.
const std::vector<std::string> kFast = {"grid.points_per_axis=128", "grid.map_padding=1", "grid.map_window=32"};

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("csv escaping and number formatting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5e-12) == "-2.5e-12");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  }

  TEST_CASE("csv writer enforces the column count") {
    std::ostringstream out;
    CsvWriter csv(out, {"a", "b", "c"});
    csv.field(1);
    csv.field(0.5);
    csv.field("x,y");
    csv.end_row();
    csv.field(2);
    csv.empty();
    CHECK_THROWS_AS(csv.end_row(), std::logic_error);
    CHECK(out.str().rfind("a,b,c\n1,0.5,\"x,y\"\n", 0) == 0);
  }

  TEST_CASE("catalog and names") {
    CHECK(experiment_catalog().size() == 7);
    CHECK(parse_experiment("fidelity-vs-separation") == Experiment::FidelityVsSeparation);
    CHECK(experiment_info(Experiment::SwapError).name == "swap-error");
    CHECK_THROWS_AS(parse_experiment("fidelity"), ConfigError);
    const auto& sep = experiment_info(Experiment::FidelityVsSeparation).default_sweeps.at(0);
    CHECK(sep.values.front() == "15");
    CHECK(sep.values.back() == "30");
    CHECK(sep.values.size() == 16);
  }

  TEST_CASE("linear values") {
    const auto v = linear_values(8, 3, 11);
    CHECK(v.size() == 11);
    CHECK(v.front() == "8");
    CHECK(v[1] == "7.5");
    CHECK(v.back() == "3");
    CHECK_THROWS(linear_values(0, 1, 1));
  }

  TEST_CASE("r squared") {
    CHECK(r_squared({1, 2, 3, 4}, {3, 5, 7, 9}) == doctest::Approx(1.0));
    CHECK(r_squared({1, 2, 3, 4}, {1, -1, 1, -1}) < 0.3);
    CHECK_THROWS(r_squared({1}, {1}));
  }

  TEST_CASE("experiment setup: presets, overrides and sweeps") {
    const ExperimentSpec s = make_experiment_spec(Experiment::FidelityVsWidth, default_document(),
                                                  {"profiles.w_perp=7", "run.threads=1"}, fresh_dir("setup"), 99);
    // Preset w_perp = 8 is overridden; the preset protocol stays.
    CHECK(s.base_config.profile1.w_perp == 7.0);
    CHECK(is_swap(s.base_config.protocol));
    CHECK(s.base_config.rng_seed == 99);
    CHECK(s.base_config.calibration.t_from_pi);
    REQUIRE(s.sweeps.size() == 2);
    CHECK(s.sweeps[0].parameter == "profiles.w_par");

    const ExperimentSpec custom = make_experiment_spec(
        Experiment::FidelityVsSeparation, default_document(),
        {"run.sweep_param=geometry.separation", "run.sweep_values=18, 20, 22"}, fresh_dir("setup"));
    REQUIRE(custom.sweeps.size() == 1);
    CHECK(custom.sweeps[0].values == std::vector<std::string>{"18", "20", "22"});

    CHECK_THROWS_AS(make_experiment_spec(Experiment::FidelityVsSeparation, default_document(),
                                         {"run.sweep_param=geometry.bogus", "run.sweep_values=1,2"}),
                    ConfigError);
    CHECK_THROWS_AS(make_experiment_spec(Experiment::FidelityVsSeparation, default_document(),
                                         {"run.sweep_param=geometry.separation", "run.sweep_values=20,18,22"}),
                    ConfigError);
    CHECK_THROWS_AS(make_experiment_spec(Experiment::SwapError, default_document(),
                                         {"run.sweep_param=geometry.separation", "run.sweep_values=20,22"}),
                    ConfigError);
    CHECK_THROWS_AS(
        make_experiment_spec(Experiment::MomentumMap, default_document(), {"profile1.w_par=-3"}), ConfigError);
  }

  TEST_CASE("output directory falls back to the environment") {
    ::setenv(kOutputDirEnv, "/tmp/rydgate-env-dir", 1);
    CHECK(default_output_dir() == fs::path("/tmp/rydgate-env-dir"));
    ::unsetenv(kOutputDirEnv);
    CHECK(default_output_dir() == fs::path("rydgate-out"));
  }

  TEST_CASE("momentum-map experiment writes maps and a manifest") {
    const fs::path dir = fresh_dir("momentum");
    const ExperimentSpec s = make_experiment_spec(Experiment::MomentumMap, default_document(), kFast, dir, 5);
    const RunSummary r = run_experiment(s);
    CHECK(r.points == 3);
    CHECK(r.failed == 0);
    CHECK(fs::exists(dir / "momentum-map.csv"));
    CHECK(fs::exists(dir / "momentum-map_p0_par_direct.csv"));
    const std::string map = slurp(dir / "momentum-map_p2_par_direct.csv");
    CHECK(map.rfind("K1,K2,density\n", 0) == 0);

    const auto manifest = nlohmann::json::parse(slurp(r.manifest));
    CHECK(manifest["schema"] == kManifestSchema);
    CHECK(manifest["experiment"] == "momentum-map");
    CHECK(manifest["seed"] == 5);
    CHECK(manifest["config"]["interaction.t_int"] == "5");
    CHECK(manifest["sweeps"][0]["parameter"] == "interaction.t_int");
    CHECK(manifest["wall_time_s"].get<double>() >= 0.0);

    // At t = 0 the map is centred and round in the parallel slice.
    std::istringstream rows(slurp(dir / "momentum-map.csv"));
    std::string header, first;
    std::getline(rows, header);
    std::getline(rows, first);
    CHECK(header.rfind("point,interaction.t_int,status,zeta_re", 0) == 0);
    CHECK(first.rfind("0,0,ok,1,0,", 0) == 0);
  }

  TEST_CASE("failed points are recorded, not fatal") {
    const fs::path dir = fresh_dir("failed");
    std::vector<std::string> o = kFast;
    o.push_back("run.sweep_param=geometry.separation");
    o.push_back("run.sweep_values=5, 21");
    // Narrow transverse clouds put ~2e-4 of the pair inside d/10 at d = 5.
    o.push_back("profiles.w_perp=3");
    const ExperimentSpec s = make_experiment_spec(Experiment::FidelityVsSeparation, default_document(), o, dir);
    std::ostringstream log;
    const RunSummary r = run_experiment(s, &log);
    CHECK(r.points == 2);
    CHECK(r.failed == 1);
    CHECK(log.str().find("clouds too close") != std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(r.manifest));
    CHECK(manifest["failed_points"] == 1);
    CHECK(manifest["sweeps"][0]["points"][0]["status"] == "failed");
    CHECK(manifest["sweeps"][0]["points"][1]["status"] == "ok");
    CHECK(slurp(dir / "fidelity-vs-separation.csv").find("0,5,failed,,") != std::string::npos);
  }

  TEST_CASE("datasets are identical for any thread count") {
    const fs::path a = fresh_dir("threads-a"), b = fresh_dir("threads-b");
    std::vector<std::string> o = kFast;
    o.push_back("protocol.error_samples=24");
    o.push_back("run.sweep_param=protocol.err_sigma_par");
    o.push_back("run.sweep_values=0.5, 1");
    auto one = o, four = o;
    one.push_back("run.threads=1");
    four.push_back("run.threads=4");
    run_experiment(make_experiment_spec(Experiment::SwapError, default_document(), one, a, 21));
    run_experiment(make_experiment_spec(Experiment::SwapError, default_document(), four, b, 21));
    CHECK(slurp(a / "swap-error.csv") == slurp(b / "swap-error.csv"));
  }

  TEST_CASE("unwritable output directory") {
    const fs::path blocker = fresh_dir("blocker");
    std::ofstream(blocker) << "file";
    const ExperimentSpec s = make_experiment_spec(Experiment::Angular, default_document(), kFast, blocker / "sub");
    CHECK_THROWS_AS(run_experiment(s), ConfigError);
    fs::remove(blocker);
  }
}
