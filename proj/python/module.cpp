#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rydgate/analytic.hpp"
#include "rydgate/config.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/harness.hpp"
#include "rydgate/loss.hpp"
#include "rydgate/numerics.hpp"

namespace py = pybind11;
using namespace rydgate;

namespace {

// Python values become config strings: bools as true/false, sequences as
// comma-separated vectors, everything else through str().
std::string config_value(const py::handle& value) {
  if (py::isinstance<py::bool_>(value)) return value.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::str>(value)) return value.cast<std::string>();
  if (py::isinstance<py::sequence>(value)) {
    std::string out;
    for (const py::handle item : value.cast<py::sequence>()) {
      if (!out.empty()) out += ", ";
      out += py::str(item).cast<std::string>();
    }
    return out;
  }
  return py::str(value).cast<std::string>();
}

struct ConfigHandle {
  ConfigDocument doc;
  GateConfig config;
  std::vector<std::string> warnings;
};

ConfigHandle make_config(const py::dict& overrides, const std::optional<std::string>& ini, bool defaults) {
  ConfigHandle out;
  out.doc = defaults ? harness::default_document() : ConfigDocument{};
  if (ini) {
    for (const auto& [key, value] : ConfigDocument::parse_string(*ini).entries()) out.doc.set(key, value);
  }
  for (const auto& [key, value] : overrides) out.doc.set(py::str(key).cast<std::string>(), config_value(value));
  ConfigResult result = validate_config(out.doc);
  out.config = std::move(result.config);
  out.warnings = std::move(result.warnings);
  return out;
}

Axis parse_axis(const std::string& axis) {
  if (axis == "par") return Axis::Parallel;
  if (axis == "perp") return Axis::Perpendicular;
  throw ConfigError("", "axis must be 'par' or 'perp', got '" + axis + "'");
}

py::array_t<double> to_numpy(const numerics::RealMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  auto view = out.mutable_unchecked<2>();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) view(i, j) = m(i, j);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photon-photon controlled-phase gate via stored Rydberg excitations.";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<PhysicsError> physics_error(m, "PhysicsError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      config_error(e.what());
    } catch (const PhysicsError& e) {
      physics_error(e.what());
    }
  });

  py::class_<ConfigHandle>(m, "Config")
      .def_property_readonly("separation",
                             [](const ConfigHandle& c) {
                               const Vec3& s = c.config.separation;
                               return py::make_tuple(s[0], s[1], s[2]);
                             })
      .def_property_readonly("distance", [](const ConfigHandle& c) { return c.config.separation_mag(); })
      .def_property_readonly("c6", [](const ConfigHandle& c) { return c.config.c6; })
      .def_property_readonly("t_int", [](const ConfigHandle& c) { return c.config.t_int; })
      .def_property_readonly("central_phase", [](const ConfigHandle& c) { return c.config.central_phase(); })
      .def_property_readonly("protocol", [](const ConfigHandle& c) { return protocol_name(c.config.protocol); })
      .def_property_readonly("warnings", [](const ConfigHandle& c) { return c.warnings; })
      .def("to_ini", [](const ConfigHandle& c) { return resolved_document(c.config).to_ini(); },
           "Fully resolved configuration as INI text.")
      .def("__repr__", [](const ConfigHandle& c) {
        std::ostringstream out;
        out << "<rydgate.Config d=" << c.config.separation_mag() << " t_int=" << c.config.t_int
            << " protocol=" << protocol_name(c.config.protocol) << ">";
        return out.str();
      });

  m.def("config", &make_config, py::arg("overrides") = py::dict(), py::arg("ini") = py::none(),
        py::arg("defaults") = true,
        "Validated configuration: the working-point defaults (unless defaults=False), then INI text, then "
        "'section.key' overrides.");

  m.def("calibrate_c6", &calibrate_c6, py::arg("separation"), py::arg("time"), py::arg("phase") = kPi,
        "c6 giving `phase` at `separation` after `time`.");
  m.def("time_for_pi", &time_for_pi, py::arg("separation"), py::arg("c6"));
  m.def("fidelity_from_zeta", &numerics::fidelity_from_zeta, py::arg("zeta"));

  m.def(
      "zeta",
      [](const ConfigHandle& c, std::pair<double, double> offset, bool check) {
        numerics::ZetaResult z;
        {
          py::gil_scoped_release release;
          z = numerics::zeta(c.config, {offset.first, offset.second}, check);
        }
        py::dict out;
        out["value"] = z.value;
        out["fidelity"] = numerics::fidelity_from_zeta(z.value);
        out["converged"] = z.converged;
        out["doubling_delta"] = z.doubling_delta;
        out["near_field_mass"] = z.near_field_mass;
        return out;
      },
      py::arg("config"), py::arg("offset") = std::pair<double, double>{0.0, 0.0}, py::arg("check_convergence") = true);

  m.def(
      "zeta_monte_carlo",
      [](const ConfigHandle& c, std::int64_t samples, std::uint64_t seed, std::pair<double, double> offset) {
        const numerics::MonteCarloEstimate e =
            numerics::zeta_mc_oracle(c.config, samples, seed, {offset.first, offset.second});
        return py::make_tuple(e.mean, e.standard_error);
      },
      py::arg("config"), py::arg("samples") = 1'000'000, py::arg("seed") = 1,
      py::arg("offset") = std::pair<double, double>{0.0, 0.0}, "(mean, standard error) of the sampled zeta.");

  m.def(
      "expansion",
      [](const ConfigHandle& c) {
        const analytic::ExpansionCoefficients e = analytic::expansion_coefficients(c.config);
        py::dict out;
        out["phase0"] = e.phase0;
        out["k_D"] = e.k_D;
        out["S_par"] = e.S_par;
        out["S_perp"] = e.S_perp;
        out["e_par"] = e.e_par;
        out["e_perp"] = e.e_perp;
        return out;
      },
      py::arg("config"), "Closed-form second-order expansion coefficients.");

  m.def(
      "momentum_map",
      [](const ConfigHandle& c, const std::string& axis, int padding) {
        const numerics::MomentumMap map = numerics::momentum_map(
            numerics::apply_interaction_phase(numerics::build_joint_grid(c.config, parse_axis(axis)), c.config),
            padding);
        return py::make_tuple(to_numpy(map.density), map.dk[0], map.dk[1]);
      },
      py::arg("config"), py::arg("axis") = "par", py::arg("padding") = 1,
      "(density, dk1, dk2) of the post-interaction joint momentum density; index n/2 is k = 0.");

  m.def(
      "gate_metrics",
      [](const ConfigHandle& c) {
        const GateMetrics g = numerics::gate_metrics(c.config);
        py::dict out;
        out["zeta"] = g.zeta;
        out["fidelity"] = g.fidelity;
        out["k_centroid"] = py::make_tuple(g.k_centroid_1, g.k_centroid_2);
        out["eccentricity"] = g.eccentricity;
        out["ellipse_angle"] = g.ellipse_angle;
        out["entropy"] = g.entropy;
        return out;
      },
      py::arg("config"));

  m.def(
      "swap_error_average",
      [](const ConfigHandle& c, const std::string& axis, double sigma, int samples, std::uint64_t seed) {
        const Axis which = parse_axis(axis);
        numerics::ErrorAverage a;
        {
          py::gil_scoped_release release;
          a = numerics::swap_error_average_fidelity(c.config, which, sigma, samples, seed);
        }
        py::dict out;
        out["mean"] = a.mean;
        out["std"] = a.std;
        out["error_free"] = a.error_free;
        out["samples"] = a.samples;
        return out;
      },
      py::arg("config"), py::arg("axis"), py::arg("sigma"), py::arg("samples") = 1000, py::arg("seed") = 1);

  m.def(
      "pair_efficiency",
      [](const ConfigHandle& c) {
        const loss::PairEfficiency e = loss::pair_efficiency(c.config);
        py::dict out;
        out["t_pi"] = e.t_pi;
        out["photon"] = py::make_tuple(e.photon[0], e.photon[1]);
        out["pair"] = e.pair;
        return out;
      },
      py::arg("config"));
  m.def("lifetime_efficiency", &loss::lifetime_efficiency, py::arg("t"), py::arg("tau1"), py::arg("tau2"));
  m.def("thermal_efficiency", &loss::thermal_efficiency, py::arg("t"), py::arg("lambda_exc"), py::arg("w"),
        py::arg("v"));

  m.def("experiments", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const harness::ExperimentInfo& info : harness::experiment_catalog()) out.emplace_back(info.name, info.description);
    return out;
  });

  m.def(
      "run_experiment",
      [](const std::string& name, const py::dict& overrides, const std::filesystem::path& output_dir,
         std::optional<std::uint64_t> seed, const std::optional<std::filesystem::path>& config_path) {
        ConfigDocument doc =
            config_path ? ConfigDocument::load(*config_path) : harness::default_document();
        std::vector<std::string> assignments;
        for (const auto& [key, value] : overrides)
          assignments.push_back(py::str(key).cast<std::string>() + "=" + config_value(value));
        const harness::ExperimentSpec spec =
            harness::make_experiment_spec(harness::parse_experiment(name), std::move(doc), assignments, output_dir,
                                          seed, config_path ? std::optional(config_path->string()) : std::nullopt);
        harness::RunSummary summary;
        {
          py::gil_scoped_release release;
          summary = harness::run_experiment(spec);
        }
        py::dict out;
        out["files"] = summary.files;
        out["manifest"] = summary.manifest;
        out["points"] = summary.points;
        out["failed"] = summary.failed;
        return out;
      },
      py::arg("name"), py::arg("overrides") = py::dict(), py::arg("output_dir") = std::filesystem::path("rydgate-out"),
      py::arg("seed") = py::none(), py::arg("config_path") = py::none(),
      "Runs a named experiment and writes its CSV files and manifest to output_dir.");

  m.attr("__version__") = RYDGATE_VERSION;
}
