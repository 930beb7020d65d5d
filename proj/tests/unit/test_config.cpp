#include <cmath>
#include <string>

#include <doctest.h>

#include "rydgate/config.hpp"
#include "rydgate/errors.hpp"
#include "support.hpp"

using namespace rydgate;

namespace {

std::string error_key(const ConfigDocument& doc) {
  try {
    validate_config(doc);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("working point validates") {
    const ConfigResult r = validate_config(harness::default_document());
    CHECK(r.warnings.empty());
    const GateConfig& c = r.config;
    CHECK(c.separation.isApprox(Vec3(21.0, 0.0, 0.0)));
    CHECK(c.profile1.w_par == 3.0);
    CHECK(c.profile2.w_perp == 8.0);
    CHECK(c.profile1.center.isApprox(Vec3(10.5, 0.0, 0.0)));
    CHECK(c.profile2.center.isApprox(Vec3(-10.5, 0.0, 0.0)));
    CHECK(c.calibration.c6_calibrated);
    CHECK(c.c6 == doctest::Approx(kPi * std::pow(21.0, 6) / 5.0));
    CHECK(c.central_phase() == doctest::Approx(kPi));
    CHECK_FALSE(is_swap(c.protocol));
    CHECK(c.profile1.k0[2] == doctest::Approx(2 * kPi / 0.78));
  }

  TEST_CASE("non-positive widths name the key") {
    ConfigDocument doc = harness::default_document();
    doc.set("profile1.w_par", "0");
    CHECK(error_key(doc) == "profile1.w_par");
    try {
      validate_config(doc);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("w_par must be > 0") != std::string::npos);
    }
    doc = harness::default_document();
    doc.set("profile2.w_perp", "-1");
    CHECK(error_key(doc) == "profile2.w_perp");
  }

  TEST_CASE("separation at the validity factor warns but validates") {
    ConfigDocument doc = harness::default_document();
    doc.set("geometry.separation", "9, 0, 0");
    const ConfigResult r = validate_config(doc);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("geometry.separation") == 0);
    doc.set("geometry.separation", "9.01");
    CHECK(validate_config(doc).warnings.empty());
  }

  TEST_CASE("missing required keys") {
    ConfigDocument doc = ConfigDocument::parse_string("[profile1]\nw_perp = 8\n[profile2]\nw_par = 3\nw_perp = 8\n"
                                                      "[geometry]\nseparation = 21\n[interaction]\nt_int = 5\n");
    CHECK(error_key(doc) == "profile1.w_par");
    doc.set("profile1.w_par", "3");
    doc.erase("interaction.t_int");
    CHECK(error_key(doc) == "interaction.t_int");
  }

  TEST_CASE("unknown keys and sections are rejected") {
    ConfigDocument doc;
    CHECK_THROWS_AS(doc.set("geometry.sepration", "21"), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::parse_string("[geometri]\nseparation = 21\n"), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::parse_string("[geometry]\nfoo = 1\n"), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::parse_string("[geometry\nseparation = 21\n"), ConfigError);
    CHECK_THROWS_AS(doc.apply_override("geometry.separation"), ConfigError);
  }

  TEST_CASE("profiles alias sets both clouds") {
    ConfigDocument doc = harness::default_document();
    doc.apply_override("profiles.w_par = 4.5");
    const GateConfig c = validate_config(doc).config;
    CHECK(c.profile1.w_par == 4.5);
    CHECK(c.profile2.w_par == 4.5);
  }

  TEST_CASE("scalar grammar") {
    CHECK(parse_scalar("2.5") == 2.5);
    CHECK(parse_scalar(" 1e-3 ") == 1e-3);
    CHECK(parse_scalar("pi") == kPi);
    CHECK(parse_scalar("-pi") == -kPi);
    CHECK(parse_scalar("2*pi/0.78") == doctest::Approx(2 * kPi / 0.78));
    CHECK(parse_scalar("3pi/4") == doctest::Approx(0.75 * kPi));
    CHECK(parse_scalar("PI") == kPi);
    CHECK_THROWS(parse_scalar("abc"));
    CHECK_THROWS(parse_scalar("pi/0"));
    CHECK_THROWS(parse_scalar(""));
  }

  TEST_CASE("vector grammar") {
    CHECK(parse_vector("21").isApprox(Vec3(21, 0, 0)));
    CHECK(parse_vector("[1, 2, 3]").isApprox(Vec3(1, 2, 3)));
    CHECK(parse_vector("0, 0, 2*pi").isApprox(Vec3(0, 0, 2 * kPi)));
    CHECK_THROWS(parse_vector("1, 2"));
    CHECK_THROWS(parse_vector("[1, 2, 3"));
  }

  TEST_CASE("t_int = pi uses the configured separation") {
    const GateConfig c = test::working_point({{"geometry.separation", "30"}, {"interaction.t_int", "pi"}});
    CHECK(c.calibration.t_from_pi);
    CHECK(c.t_int == doctest::Approx(5.0 * std::pow(30.0 / 21.0, 6)));
    CHECK(c.central_phase() == doctest::Approx(kPi));
    ConfigDocument doc = harness::default_document();
    doc.set("interaction.c6", "0");
    doc.set("interaction.t_int", "pi");
    CHECK(error_key(doc) == "interaction.t_int");
  }

  TEST_CASE("explicit centres must agree with the separation") {
    ConfigDocument doc = harness::default_document();
    doc.set("profile1.center", "5, 0, 0");
    const GateConfig c = validate_config(doc).config;
    CHECK(c.profile2.center.isApprox(Vec3(-16, 0, 0)));
    doc.set("profile2.center", "0, 0, 0");
    CHECK(error_key(doc) == "profile1.center");
  }

  TEST_CASE("protocol, grid and loss validation") {
    const GateConfig swap = test::working_point({{"protocol.name", "SWAP"}, {"protocol.err_sigma_par", "1"}});
    REQUIRE(is_swap(swap.protocol));
    CHECK(std::get<SwapProtocol>(swap.protocol).err_sigma_par == 1.0);

    const std::pair<const char*, const char*> bad[] = {
        {"protocol.name", "teleport"},     {"protocol.err_sigma_perp", "-1"}, {"grid.points_per_axis", "100"},
        {"grid.points_per_axis", "16"},    {"grid.extent_sigmas", "2"},       {"grid.quadrature_nodes", "2"},
        {"loss.external_loss", "1.5"},     {"loss.width_axis", "diagonal"},   {"run.seed", "-3"},
        {"run.mc_samples", "10"},          {"geometry.near_field_limit", "0"}, {"protocol.error_samples", "0.5"},
        {"interaction.calibrate_time", "0"}};
    for (const auto& [key, value] : bad) {
      CAPTURE(key);
      ConfigDocument doc = harness::default_document();
      doc.set(key, value);
      CHECK(error_key(doc) == key);
    }
  }

  TEST_CASE("resolved document round-trips") {
    const GateConfig c = test::working_point({{"protocol.name", "swap"}, {"loss.external_loss", "0.9"}});
    const ConfigDocument resolved = resolved_document(c);
    CHECK(resolved.get("profile2.center") == std::string("-10.5, 0, 0"));
    const GateConfig again = validate_config(ConfigDocument::parse_string(resolved.to_ini())).config;
    CHECK(again.c6 == doctest::Approx(c.c6).epsilon(1e-15));
    CHECK(again.t_int == c.t_int);
    CHECK(again.profile1.k0.isApprox(c.profile1.k0));
    CHECK(is_swap(again.protocol));
    CHECK(again.loss.external_loss.value() == 0.9);
    CHECK(resolved_document(again).to_ini() == resolved.to_ini());
  }
}
