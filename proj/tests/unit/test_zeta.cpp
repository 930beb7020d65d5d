#include <cmath>
#include <string>

#include <doctest.h>

#include "rydgate/errors.hpp"
#include "rydgate/numerics.hpp"
#include "rydgate/quadrature.hpp"
#include "support.hpp"

using namespace rydgate;
using namespace rydgate::numerics;

namespace {

bool within_three_se(Complex value, const MonteCarloEstimate& mc) {
  const double se = std::hypot(mc.standard_error.real(), mc.standard_error.imag());
  return std::abs(value - mc.mean) <= 3.0 * se;
}

}  // namespace

TEST_SUITE("zeta") {
  TEST_CASE("fidelity endpoints") {
    CHECK(std::abs(fidelity_from_zeta({-1.0, 0.0}) - 1.0) < 1e-12);
    CHECK(std::abs(fidelity_from_zeta({1.0, 0.0}) - 0.5) < 1e-12);
    CHECK(std::abs(fidelity_from_zeta({0.0, 0.0}) - 0.75) < 1e-12);
    // Only Re ζ and |ζ| enter.
    CHECK(fidelity_from_zeta({0.2, 0.3}) == doctest::Approx(fidelity_from_zeta({0.2, -0.3})));
    CHECK_THROWS_AS(fidelity_from_zeta({1.1, 0.0}), PhysicsError);
  }

  TEST_CASE("Gauss-Legendre and Gauss-Hermite rules") {
    const QuadratureRule& gl = gauss_legendre(12);
    double s = 0.0, s10 = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      s += gl.weights[i];
      s10 += gl.weights[i] * std::pow(gl.nodes[i], 10);
    }
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s10 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
    const QuadratureRule& gh = gauss_hermite(10);
    double m0 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      m0 += gh.weights[i];
      m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(&gauss_legendre(12) == &gl);
    CHECK_THROWS(gauss_legendre(0));
  }

  TEST_CASE("zero time gives zeta = 1") {
    const GateConfig c = test::working_point({{"interaction.t_int", "0"}});
    const ZetaResult z = zeta(c);
    CHECK(std::abs(z.value - Complex(1.0, 0.0)) < 1e-12);
    const MonteCarloEstimate mc = zeta_mc_oracle(c, 20000, 3);
    CHECK(mc.mean == Complex(1.0, 0.0));
    CHECK(mc.standard_error == Complex(0.0, 0.0));
  }

  TEST_CASE("narrow clouds give the central phase") {
    for (const char* proto : {"direct", "swap"}) {
      CAPTURE(proto);
      const GateConfig c = test::narrow_clouds(0.002, {{"protocol.name", proto}, {"interaction.t_int", "3.7"}});
      const ZetaResult z = zeta(c);
      CHECK(std::abs(z.value - std::polar(1.0, -c.central_phase())) < 1e-5);
    }
  }

  TEST_CASE("working point converges and agrees with sampling") {
    for (const char* proto : {"direct", "swap"}) {
      CAPTURE(proto);
      const GateConfig c = test::working_point({{"protocol.name", proto}});
      const ZetaResult z = zeta(c);
      CHECK(z.converged);
      CHECK(z.doubling_delta < 1e-9);
      CHECK(std::abs(z.value) <= 1.0);
      const MonteCarloEstimate mc = zeta_mc_oracle(c, 1'000'000, 11);
      CHECK(within_three_se(z.value, mc));
    }
  }

  TEST_CASE("swap with positioning errors agrees with sampling") {
    const GateConfig c = test::working_point({{"protocol.name", "swap"}, {"interaction.t_int", "pi"}});
    for (SwapOffset off : {SwapOffset{0.3, 0.0}, SwapOffset{0.0, 1.0}, SwapOffset{-1.2, 2.5}}) {
      CAPTURE(off.par);
      CAPTURE(off.perp);
      const ZetaResult z = zeta(c, off);
      CHECK(z.doubling_delta < 1e-8);
      CHECK(within_three_se(z.value, zeta_mc_oracle(c, 1'000'000, 5, off)));
    }
  }

  TEST_CASE("swap beats direct at the working point") {
    const GateConfig d = test::working_point({{"interaction.t_int", "pi"}});
    const GateConfig s = test::working_point({{"interaction.t_int", "pi"}, {"protocol.name", "swap"}});
    CHECK(fidelity_from_zeta(zeta(s).value) > fidelity_from_zeta(zeta(d).value));
  }

  TEST_CASE("Monte Carlo oracle is deterministic across thread counts") {
    GateConfig c = test::working_point();
    c.run.threads = 1;
    const MonteCarloEstimate a = zeta_mc_oracle(c, 300'000, 42);
    c.run.threads = 3;
    const MonteCarloEstimate b = zeta_mc_oracle(c, 300'000, 42);
    CHECK(a.mean == b.mean);
    CHECK(a.standard_error == b.standard_error);
    CHECK(zeta_mc_oracle(c, 300'000, 43).mean != a.mean);
    CHECK_THROWS(zeta_mc_oracle(c, 100, 1));
  }

  TEST_CASE("separation guard") {
    const GateConfig ok = test::working_point();
    const double mass = near_field_mass(ok);
    CHECK(mass < kNearFieldWarning);
    CHECK(check_separation_guard(ok) == mass);

    // Isotropic clouds with relative std d/sqrt(3) maximise the ball mass
    // (~3e-4 of the relative coordinate within d/10 of the origin).
    const GateConfig close = test::working_point(
        {{"geometry.separation", "6"}, {"profiles.w_par", "4.9"}, {"profiles.w_perp", "4.9"}});
    CHECK(near_field_mass(close) >= close.near_field_limit);
    CHECK_THROWS_AS(zeta(close), PhysicsError);
    CHECK_THROWS_AS(check_separation_guard(close), PhysicsError);

    // Independent radial oracle for an isotropic Gaussian offset by d:
    // p(R) = R / (d s sqrt(2 pi)) [exp(-(R-d)^2/2s^2) - exp(-(R+d)^2/2s^2)].
    const double d = 6.0;
    const double s = 4.9 / std::sqrt(2.0);
    const double r = d / 10.0;
    const int n = 2000;
    double oracle = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double radius = r * i / n;
      const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double p = radius / (d * s * std::sqrt(2.0 * kPi)) *
                       (std::exp(-(radius - d) * (radius - d) / (2 * s * s)) -
                        std::exp(-(radius + d) * (radius + d) / (2 * s * s)));
      oracle += weight * p;
    }
    oracle *= r / n / 3.0;
    CHECK(near_field_mass(close) == doctest::Approx(oracle).epsilon(1e-8));

    // A narrow pair far from the collision ball carries no mass there.
    const GateConfig narrow = test::narrow_clouds(0.1);
    CHECK(near_field_mass(narrow) == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("error average: zero sigma reproduces the error-free swap") {
    const GateConfig c = test::working_point({{"protocol.name", "swap"}, {"interaction.t_int", "pi"}});
    const ErrorAverage avg = swap_error_average_fidelity(c, Axis::Parallel, 0.0, 5, 9);
    CHECK(avg.samples == 5);
    CHECK(avg.std < 1e-12);
    CHECK(avg.mean == doctest::Approx(avg.error_free).epsilon(1e-7));
    CHECK(avg.error_free == doctest::Approx(fidelity_from_zeta(zeta(c).value)).epsilon(1e-12));
    CHECK_THROWS(swap_error_average_fidelity(test::working_point(), Axis::Parallel, 1.0, 5, 9));
    CHECK_THROWS(swap_error_average_fidelity(c, Axis::Parallel, -1.0, 5, 9));
  }

  TEST_CASE("error average is deterministic and degrades fidelity") {
    GateConfig c = test::working_point({{"protocol.name", "swap"}, {"interaction.t_int", "pi"}});
    c.run.threads = 1;
    const ErrorAverage a = swap_error_average_fidelity(c, Axis::Parallel, 1.0, 64, 17);
    c.run.threads = 4;
    const ErrorAverage b = swap_error_average_fidelity(c, Axis::Parallel, 1.0, 64, 17);
    CHECK(a.mean == b.mean);
    CHECK(a.std == b.std);
    CHECK(a.mean < a.error_free);
    CHECK(a.std > 0.0);
  }

  TEST_CASE("gate_metrics bundles the working point") {
    const GateConfig c = test::working_point({{"grid.points_per_axis", "256"}});
    const GateMetrics m = gate_metrics(c);
    CHECK(m.fidelity == doctest::Approx(fidelity_from_zeta(zeta(c).value)));
    CHECK(m.k_centroid_1 > 0.0);
    CHECK(m.k_centroid_2 < 0.0);
    CHECK(m.entropy > 0.0);
    CHECK(m.eccentricity > 0.0);
  }

  TEST_CASE("derive_seed spreads nearby inputs") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  }
}
