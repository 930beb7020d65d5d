#include "rydgate/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rydgate/errors.hpp"
#include "rydgate/format.hpp"

namespace rydgate {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<double> parse_number(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<ConfigKey> build_schema() {
  std::vector<ConfigKey> keys;
  auto add = [&](std::string path, std::string def, bool required, std::string desc) {
    keys.push_back({std::move(path), std::move(def), required, std::move(desc)});
  };
  for (const char* p : {"profile1", "profile2"}) {
    const std::string s = p;
    add(s + ".w_par", "", true, "1/e amplitude half-width along the separation (um)");
    add(s + ".w_perp", "", true, "1/e amplitude half-width transverse to the separation (um)");
    add(s + ".k0", "0, 0, 0", false, "central wavevector (rad/um)");
    add(s + ".rydberg_lifetime", s == "profile1" ? "1180" : "1150", false, "Rydberg lifetime (us)");
    add(s + ".center", "", false, "centre position (um); defaults to +-separation/2");
  }
  add("geometry.separation", "", true, "center1 - center2 (um); a scalar d means (d, 0, 0)");
  add("geometry.validity_factor", "3", false, "warn unless |separation| > factor * max(w_par)");
  add("geometry.near_field_limit", "1e-4", false, "reject when P(|x1 - x2| < d/10) reaches this");
  add("interaction.c6", "calibrate", false, "van der Waals coefficient (rad um^6/us) or 'calibrate'");
  add("interaction.t_int", "", true, "interaction time (us) or 'pi' for the pi-phase time");
  add("interaction.calibrate_separation", "21", false, "calibration separation (um)");
  add("interaction.calibrate_time", "5", false, "calibration time (us)");
  add("interaction.calibrate_phase", "pi", false, "calibration central phase (rad)");
  add("protocol.name", "direct", false, "'direct' or 'swap'");
  add("protocol.err_sigma_par", "0", false, "swap positioning error std along the separation (um)");
  add("protocol.err_sigma_perp", "0", false, "swap positioning error std transverse (um)");
  add("protocol.error_samples", "1000", false, "Monte Carlo samples for error averaging");
  add("grid.points_per_axis", "512", false, "points per coordinate, power of two >= 32");
  add("grid.extent_sigmas", "5", false, "grid half-extent in density standard deviations (>= 3)");
  add("grid.quadrature_nodes", "16", false, "Gauss-Legendre nodes per polar panel of the zeta integrator");
  add("grid.map_padding", "4", false, "zero-padding factor for exported momentum maps");
  add("grid.map_window", "128", false, "exported momentum map size per axis");
  add("grid.angular_bins", "121", false, "angular histogram bins");
  add("loss.temperature", "0.1", false, "ensemble temperature (uK)");
  add("loss.atomic_mass", "1.443e-25", false, "atomic mass (kg)");
  add("loss.lambda_exc", "0.297", false, "collective excitation wavelength (um)");
  add("loss.external_loss", "", false, "optional per-rail efficiency multiplier in (0, 1]");
  add("loss.width_axis", "par", false, "width entering thermal dephasing: 'par' or 'perp'");
  add("run.seed", "1", false, "master RNG seed");
  add("run.threads", "0", false, "worker threads (0: all available)");
  add("run.mc_samples", "1000000", false, "Monte Carlo samples for the zeta oracle");
  add("run.sweep_param", "", false, "sweep key path (replaces experiment default sweeps)");
  add("run.sweep_values", "", false, "comma-separated monotone sweep values");
  return keys;
}

const std::vector<std::string> kSections = {"profile1", "profile2", "geometry", "interaction",
                                            "protocol", "grid",     "loss",     "run"};

class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  std::optional<std::string> raw(const std::string& path) const {
    if (auto v = doc_.get(path); v && !trim(*v).empty()) return trim(*v);
    for (const auto& key : config_schema())
      if (key.path == path) {
        if (key.required) throw ConfigError(path, "missing required key");
        if (key.default_value.empty()) return std::nullopt;
        return key.default_value;
      }
    throw ConfigError(path, "unknown key");
  }

  double scalar(const std::string& path) const {
    const auto v = raw(path);
    if (!v) throw ConfigError(path, "missing value");
    try {
      return parse_scalar(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
  }

  std::optional<double> optional_scalar(const std::string& path) const {
    if (!raw(path)) return std::nullopt;
    return scalar(path);
  }

  Vec3 vector(const std::string& path) const {
    const auto v = raw(path);
    if (!v) throw ConfigError(path, "missing value");
    try {
      return parse_vector(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
  }

  long long integer(const std::string& path) const {
    const double v = scalar(path);
    if (std::floor(v) != v || std::abs(v) > 9.0e15) throw ConfigError(path, "expected an integer");
    return static_cast<long long>(v);
  }

  std::string word(const std::string& path) const { return lower(raw(path).value_or("")); }

 private:
  const ConfigDocument& doc_;
};

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

ExcitationProfile read_profile(const Reader& r, const std::string& s) {
  ExcitationProfile p;
  p.w_par = r.scalar(s + ".w_par");
  require(p.w_par > 0.0, s + ".w_par", "w_par must be > 0");
  p.w_perp = r.scalar(s + ".w_perp");
  require(p.w_perp > 0.0, s + ".w_perp", "w_perp must be > 0");
  p.k0 = r.vector(s + ".k0");
  p.rydberg_lifetime = r.scalar(s + ".rydberg_lifetime");
  require(p.rydberg_lifetime > 0.0, s + ".rydberg_lifetime", "rydberg_lifetime must be > 0");
  return p;
}

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = build_schema();
  return schema;
}

bool is_known_key(std::string_view key_path) {
  const auto& s = config_schema();
  return std::any_of(s.begin(), s.end(), [&](const ConfigKey& k) { return k.path == key_path; });
}

std::vector<std::string> expand_key_path(const std::string& key_path) {
  constexpr std::string_view alias = "profiles.";
  if (key_path.rfind(alias, 0) == 0) {
    const std::string key = key_path.substr(alias.size());
    return {"profile1." + key, "profile2." + key};
  }
  return {key_path};
}

double parse_scalar(std::string_view text) {
  std::string t = lower(trim(text));
  if (auto v = parse_number(t)) return *v;

  const auto pos = t.find("pi");
  if (pos == std::string::npos) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  std::string head = trim(t.substr(0, pos));
  std::string tail = trim(t.substr(pos + 2));
  double factor = 1.0;
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty() && head != "+") {
    const auto v = parse_number(head);
    if (!v) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    factor = *v;
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    const auto v = parse_number(tail.substr(1));
    if (!v || *v == 0.0) throw std::invalid_argument("bad divisor in '" + std::string(text) + "'");
    divisor = *v;
  }
  return factor * kPi / divisor;
}

Vec3 parse_vector(std::string_view text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw std::invalid_argument("unbalanced bracket in '" + t + "'");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<double> parts;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(parse_scalar(item));
  if (parts.size() == 1) return Vec3(parts[0], 0.0, 0.0);
  if (parts.size() != 3) throw std::invalid_argument("expected 1 or 3 components in '" + std::string(text) + "'");
  return Vec3(parts[0], parts[1], parts[2]);
}

ConfigDocument ConfigDocument::parse(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  ConfigDocument doc;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(section, "key outside of a section");
    if (std::find(kSections.begin(), kSections.end(), section) == kSections.end())
      throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) doc.set(section + "." + key, value.data());
  }
  return doc;
}

ConfigDocument ConfigDocument::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in, "<string>");
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  return parse(in, path.string());
}

void ConfigDocument::set(const std::string& key_path, const std::string& value) {
  for (const auto& path : expand_key_path(key_path)) {
    if (!is_known_key(path)) throw ConfigError(path, "unknown key");
    entries_[path] = trim(value);
  }
}

void ConfigDocument::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(assignment, "override must look like section.key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void ConfigDocument::erase(const std::string& key_path) {
  for (const auto& path : expand_key_path(key_path)) entries_.erase(path);
}

std::optional<std::string> ConfigDocument::get(const std::string& key_path) const {
  if (auto it = entries_.find(key_path); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::string ConfigDocument::to_ini() const {
  std::ostringstream out;
  for (const auto& section : kSections) {
    bool header = false;
    for (const auto& key : config_schema()) {
      if (key.path.rfind(section + ".", 0) != 0) continue;
      const auto value = get(key.path);
      if (!value) continue;
      if (!header) {
        if (out.tellp() > 0) out << "\n";
        out << "[" << section << "]\n";
        header = true;
      }
      out << key.path.substr(section.size() + 1) << " = " << *value << "\n";
    }
  }
  return out.str();
}

ConfigResult validate_config(const ConfigDocument& doc) {
  for (const auto& [path, value] : doc.entries())
    if (!is_known_key(path)) throw ConfigError(path, "unknown key");

  const Reader r(doc);
  ConfigResult result;
  GateConfig& c = result.config;

  c.profile1 = read_profile(r, "profile1");
  c.profile2 = read_profile(r, "profile2");

  c.separation = r.vector("geometry.separation");
  const double d = c.separation.norm();
  require(d > 0.0, "geometry.separation", "separation must be > 0");
  c.validity_factor = r.scalar("geometry.validity_factor");
  require(c.validity_factor > 0.0, "geometry.validity_factor", "validity_factor must be > 0");
  c.near_field_limit = r.scalar("geometry.near_field_limit");
  require(c.near_field_limit > 0.0 && c.near_field_limit < 1.0, "geometry.near_field_limit",
          "near_field_limit must be in (0, 1)");

  const auto c1 = r.raw("profile1.center");
  const auto c2 = r.raw("profile2.center");
  if (c1 && c2) {
    c.profile1.center = r.vector("profile1.center");
    c.profile2.center = r.vector("profile2.center");
    require((c.profile1.center - c.profile2.center - c.separation).norm() <= 1e-9 * d, "profile1.center",
            "center1 - center2 must equal geometry.separation");
  } else if (c1) {
    c.profile1.center = r.vector("profile1.center");
    c.profile2.center = c.profile1.center - c.separation;
  } else if (c2) {
    c.profile2.center = r.vector("profile2.center");
    c.profile1.center = c.profile2.center + c.separation;
  } else {
    c.profile1.center = 0.5 * c.separation;
    c.profile2.center = -0.5 * c.separation;
  }

  const double max_w = std::max(c.profile1.w_par, c.profile2.w_par);
  if (!(d > c.validity_factor * max_w))
    result.warnings.push_back("geometry.separation: |separation| = " + format_double(d) +
                              " does not exceed " + format_double(c.validity_factor) +
                              " x max(w_par) = " + format_double(c.validity_factor * max_w) +
                              "; the second-order expansion is unreliable");

  CalibrationInfo& cal = c.calibration;
  cal.separation = r.scalar("interaction.calibrate_separation");
  require(cal.separation > 0.0, "interaction.calibrate_separation", "calibrate_separation must be > 0");
  cal.time = r.scalar("interaction.calibrate_time");
  require(cal.time > 0.0, "interaction.calibrate_time", "calibrate_time must be > 0");
  cal.phase = r.scalar("interaction.calibrate_phase");
  require(cal.phase >= 0.0, "interaction.calibrate_phase", "calibrate_phase must be >= 0");
  if (r.word("interaction.c6") == "calibrate") {
    cal.c6_calibrated = true;
    c.c6 = calibrate_c6(cal.separation, cal.time, cal.phase);
  } else {
    c.c6 = r.scalar("interaction.c6");
  }
  if (r.word("interaction.t_int") == "pi") {
    if (c.c6 == 0.0) throw ConfigError("interaction.t_int", "t_int = pi needs a non-zero c6");
    cal.t_from_pi = true;
    c.t_int = time_for_pi(d, c.c6);
  } else {
    c.t_int = r.scalar("interaction.t_int");
  }
  require(c.t_int >= 0.0, "interaction.t_int", "t_int must be >= 0");

  const std::string proto = r.word("protocol.name");
  const double err_par = r.scalar("protocol.err_sigma_par");
  const double err_perp = r.scalar("protocol.err_sigma_perp");
  require(err_par >= 0.0, "protocol.err_sigma_par", "err_sigma_par must be >= 0");
  require(err_perp >= 0.0, "protocol.err_sigma_perp", "err_sigma_perp must be >= 0");
  if (proto == "direct") {
    c.protocol = DirectProtocol{};
  } else if (proto == "swap") {
    c.protocol = SwapProtocol{err_par, err_perp};
  } else {
    throw ConfigError("protocol.name", "unknown protocol '" + proto + "' (expected direct or swap)");
  }
  c.run.error_samples = static_cast<int>(r.integer("protocol.error_samples"));
  require(c.run.error_samples >= 1, "protocol.error_samples", "error_samples must be >= 1");

  const long long points = r.integer("grid.points_per_axis");
  require(points >= 32 && is_power_of_two(points), "grid.points_per_axis",
          "points_per_axis must be a power of two >= 32");
  require(points <= 8192, "grid.points_per_axis", "points_per_axis must be <= 8192");
  c.grid.points_per_axis = static_cast<int>(points);
  c.grid.extent_sigmas = r.scalar("grid.extent_sigmas");
  require(c.grid.extent_sigmas >= 3.0, "grid.extent_sigmas", "extent_sigmas must be >= 3");
  c.run.quadrature_nodes = static_cast<int>(r.integer("grid.quadrature_nodes"));
  require(c.run.quadrature_nodes >= 4 && c.run.quadrature_nodes <= 64, "grid.quadrature_nodes",
          "quadrature_nodes must be in [4, 64]");
  c.run.map_padding = static_cast<int>(r.integer("grid.map_padding"));
  require(c.run.map_padding >= 1 && c.run.map_padding <= 16, "grid.map_padding", "map_padding must be in [1, 16]");
  c.run.map_window = static_cast<int>(r.integer("grid.map_window"));
  require(c.run.map_window >= 8, "grid.map_window", "map_window must be >= 8");
  c.run.angular_bins = static_cast<int>(r.integer("grid.angular_bins"));
  require(c.run.angular_bins >= 3, "grid.angular_bins", "angular_bins must be >= 3");

  LossModel& loss = c.loss;
  loss.temperature = r.scalar("loss.temperature");
  require(loss.temperature >= 0.0, "loss.temperature", "temperature must be >= 0");
  loss.atomic_mass = r.scalar("loss.atomic_mass");
  require(loss.atomic_mass > 0.0, "loss.atomic_mass", "atomic_mass must be > 0");
  loss.lambda_exc = r.scalar("loss.lambda_exc");
  require(loss.lambda_exc > 0.0, "loss.lambda_exc", "lambda_exc must be > 0");
  loss.lifetimes = {c.profile1.rydberg_lifetime, c.profile2.rydberg_lifetime};
  loss.external_loss = r.optional_scalar("loss.external_loss");
  if (loss.external_loss)
    require(*loss.external_loss > 0.0 && *loss.external_loss <= 1.0, "loss.external_loss",
            "external_loss must be in (0, 1]");
  const std::string axis = r.word("loss.width_axis");
  if (axis == "par") {
    loss.width_axis = WidthAxis::Parallel;
  } else if (axis == "perp") {
    loss.width_axis = WidthAxis::Perpendicular;
  } else {
    throw ConfigError("loss.width_axis", "expected 'par' or 'perp'");
  }

  const long long seed = r.integer("run.seed");
  require(seed >= 0, "run.seed", "seed must be >= 0");
  c.rng_seed = static_cast<std::uint64_t>(seed);
  c.run.threads = static_cast<int>(r.integer("run.threads"));
  require(c.run.threads >= 0, "run.threads", "threads must be >= 0");
  c.run.mc_samples = r.integer("run.mc_samples");
  require(c.run.mc_samples >= 10000, "run.mc_samples", "mc_samples must be >= 1e4");

  return result;
}

ConfigDocument resolved_document(const GateConfig& c) {
  ConfigDocument doc;
  auto vec = [](const Vec3& v) {
    // "+ 0.0" turns -0 into 0.
    return format_double(v[0] + 0.0) + ", " + format_double(v[1] + 0.0) + ", " + format_double(v[2] + 0.0);
  };
  const std::pair<const char*, const ExcitationProfile*> profiles[] = {{"profile1", &c.profile1},
                                                                       {"profile2", &c.profile2}};
  for (const auto& [name, p] : profiles) {
    const std::string s = name;
    doc.set(s + ".w_par", format_double(p->w_par));
    doc.set(s + ".w_perp", format_double(p->w_perp));
    doc.set(s + ".k0", vec(p->k0));
    doc.set(s + ".rydberg_lifetime", format_double(p->rydberg_lifetime));
    doc.set(s + ".center", vec(p->center));
  }
  doc.set("geometry.separation", vec(c.separation));
  doc.set("geometry.validity_factor", format_double(c.validity_factor));
  doc.set("geometry.near_field_limit", format_double(c.near_field_limit));
  doc.set("interaction.c6", format_double(c.c6));
  doc.set("interaction.t_int", format_double(c.t_int));
  doc.set("interaction.calibrate_separation", format_double(c.calibration.separation));
  doc.set("interaction.calibrate_time", format_double(c.calibration.time));
  doc.set("interaction.calibrate_phase", format_double(c.calibration.phase));
  doc.set("protocol.name", protocol_name(c.protocol));
  if (const auto* swap = std::get_if<SwapProtocol>(&c.protocol)) {
    doc.set("protocol.err_sigma_par", format_double(swap->err_sigma_par));
    doc.set("protocol.err_sigma_perp", format_double(swap->err_sigma_perp));
  } else {
    doc.set("protocol.err_sigma_par", "0");
    doc.set("protocol.err_sigma_perp", "0");
  }
  doc.set("protocol.error_samples", std::to_string(c.run.error_samples));
  doc.set("grid.points_per_axis", std::to_string(c.grid.points_per_axis));
  doc.set("grid.extent_sigmas", format_double(c.grid.extent_sigmas));
  doc.set("grid.quadrature_nodes", std::to_string(c.run.quadrature_nodes));
  doc.set("grid.map_padding", std::to_string(c.run.map_padding));
  doc.set("grid.map_window", std::to_string(c.run.map_window));
  doc.set("grid.angular_bins", std::to_string(c.run.angular_bins));
  doc.set("loss.temperature", format_double(c.loss.temperature));
  doc.set("loss.atomic_mass", format_double(c.loss.atomic_mass));
  doc.set("loss.lambda_exc", format_double(c.loss.lambda_exc));
  if (c.loss.external_loss) doc.set("loss.external_loss", format_double(*c.loss.external_loss));
  doc.set("loss.width_axis", c.loss.width_axis == WidthAxis::Parallel ? "par" : "perp");
  doc.set("run.seed", std::to_string(c.rng_seed));
  doc.set("run.threads", std::to_string(c.run.threads));
  doc.set("run.mc_samples", std::to_string(c.run.mc_samples));
  return doc;
}

}  // namespace rydgate
