#include <cmath>
#include <vector>

#include <doctest.h>

#include "rydgate/analytic.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/numerics.hpp"
#include "support.hpp"

using namespace rydgate;
using namespace rydgate::analytic;

namespace {

// Least-squares slope of log|err| against log(δ/d).
double error_exponent(const std::vector<double>& ratios, double (*err)(double)) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double q : ratios) {
    const double x = std::log(q), y = std::log(std::abs(err(q)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(ratios.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

constexpr double kD = 21.0;

double parallel_error(double q) {
  const double delta = q * kD;
  const double exact = 1.0 / std::pow(kD + delta, 6);
  return (vdw_expansion(kD, Vec3(delta, 0, 0), Vec3::Zero()) - exact) * std::pow(kD, 6);
}

double transverse_error(double q) {
  const double delta = q * kD;
  const double exact = 1.0 / std::pow(kD * kD + delta * delta, 3);
  return (vdw_expansion(kD, Vec3(0, delta, 0), Vec3::Zero()) - exact) * std::pow(kD, 6);
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("vdw_phase_rate") {
    CHECK(vdw_phase_rate(Vec3(1, 0, 0), 1.0) == 1.0);
    CHECK(vdw_phase_rate(Vec3(0, 2, 0), 1.0) == 1.0 / 64.0);
    CHECK(vdw_phase_rate(Vec3(21, 0, 0), calibrate_c6(21, 5, kPi)) == doctest::Approx(kPi / 5).epsilon(1e-14));
    CHECK_THROWS_AS(vdw_phase_rate(Vec3::Zero(), 1.0), PhysicsError);
  }

  TEST_CASE("expansion leading term and explicit second-order form") {
    CHECK(vdw_expansion(kD, Vec3::Zero(), Vec3::Zero()) == doctest::Approx(std::pow(kD, -6)).epsilon(1e-15));
    const double delta = 0.4;
    const double expected = std::pow(kD, -6) - 6 * delta / std::pow(kD, 7) + 21 * delta * delta / std::pow(kD, 8);
    // Only the difference X1 - X2 enters.
    CHECK(vdw_expansion(kD, Vec3(delta + 1.0, 0, 0), Vec3(1.0, 0, 0)) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(vdw_expansion(kD, Vec3(0, 0.3, 0.4), Vec3::Zero()) ==
          doctest::Approx(std::pow(kD, -6) - 3 * 0.25 / std::pow(kD, 8)).epsilon(1e-14));
  }

  TEST_CASE("expansion error is third order on the parallel axis, fourth transverse") {
    const std::vector<double> ratios{0.01, 0.02, 0.04};
    CHECK(error_exponent(ratios, parallel_error) == doctest::Approx(3.0).epsilon(0.03));
    CHECK(error_exponent(ratios, transverse_error) == doctest::Approx(4.0).epsilon(0.03));
  }

  TEST_CASE("coefficients at the working point") {
    const ExpansionCoefficients c = expansion_coefficients(kD, kPi * std::pow(kD, 6), 3.0, 8.0);
    CHECK(c.phase0 == doctest::Approx(kPi));
    CHECK(c.k_D == doctest::Approx(6 * kPi / 21).epsilon(1e-14));
    CHECK(c.k_D == doctest::Approx(0.8976).epsilon(1e-4));
    CHECK(c.S_par == doctest::Approx(9 * kPi / 21).epsilon(1e-14));
    CHECK(c.S_par == doctest::Approx(1.3464).epsilon(1e-4));
    CHECK(c.e_par * c.e_par == doctest::Approx(0.8788).epsilon(1e-4));
    CHECK(c.S_perp == doctest::Approx(3 * 64 * kPi / (21 * 21)).epsilon(1e-14));

    const ExpansionCoefficients from_config = expansion_coefficients(test::working_point());
    CHECK(from_config.k_D == doctest::Approx(c.k_D).epsilon(1e-14));
    CHECK(from_config.S_par == doctest::Approx(c.S_par).epsilon(1e-14));
  }

  TEST_CASE("zero time and equal widths") {
    const ExpansionCoefficients z = expansion_coefficients(kD, 0.0, 3.0, 8.0);
    CHECK(z.k_D == 0.0);
    CHECK(z.S_par == 0.0);
    CHECK(z.e_par == 0.0);
    CHECK(z.e_perp == 0.0);
    const ExpansionCoefficients e = expansion_coefficients(kD, 2.0e7, 5.0, 5.0);
    CHECK(e.S_par / e.S_perp == doctest::Approx(7.0).epsilon(1e-14));
  }

  TEST_CASE("small-S eccentricity ratio") {
    const double w_par = 3.0, w_perp = 8.0;
    const double c6t = 0.04 * std::pow(kD, 8) / (21 * w_par * w_par);
    const ExpansionCoefficients c = expansion_coefficients(kD, c6t, w_par, w_perp);
    REQUIRE(c.S_par < 0.05);
    CHECK(c.e_par * c.e_par / (c.e_perp * c.e_perp) ==
          doctest::Approx(49 * std::pow(w_par / w_perp, 4)).epsilon(0.01));
  }

  TEST_CASE("uncorrelated density factorises") {
    const ExpansionCoefficients none{};
    const double w = 3.0;
    for (double k1 : {-1.0, 0.0, 0.7})
      for (double k2 : {-0.4, 0.0, 1.3}) {
        const double joint = analytic_momentum_density(k1, k2, Axis::Parallel, none, w);
        const double product = analytic_momentum_density(k1, 0, Axis::Parallel, none, w) *
                               analytic_momentum_density(0, k2, Axis::Parallel, none, w);
        CHECK(joint == doctest::Approx(product).epsilon(1e-14));
      }
  }

  TEST_CASE("density peak, covariance and ellipse agree") {
    const ExpansionCoefficients c = expansion_coefficients(kD, kPi * std::pow(kD, 6), 3.0, 8.0);
    const double w = 3.0;
    CHECK(analytic_momentum_density(c.k_D, -c.k_D, Axis::Parallel, c, w) == 1.0);
    CHECK(analytic_momentum_density(c.k_D + 0.1, -c.k_D, Axis::Parallel, c, w) < 1.0);
    CHECK(analytic_momentum_density(0, 0, Axis::Perpendicular, c, 8.0) == 1.0);

    // Moments of the density on a grid against the closed-form covariance.
    const double h = 0.01;
    double m0 = 0, m11 = 0, m12 = 0, m22 = 0;
    for (double a = -4; a <= 4; a += h)
      for (double b = -4; b <= 4; b += h) {
        const double p = analytic_momentum_density(c.k_D + a, -c.k_D + b, Axis::Parallel, c, w);
        m0 += p;
        m11 += a * a * p;
        m12 += a * b * p;
        m22 += b * b * p;
      }
    const Eigen::Matrix2d cov = analytic_momentum_covariance(Axis::Parallel, c, w);
    CHECK(m11 / m0 == doctest::Approx(cov(0, 0)).epsilon(1e-6));
    CHECK(m12 / m0 == doctest::Approx(cov(0, 1)).epsilon(1e-6));
    CHECK(m22 / m0 == doctest::Approx(cov(1, 1)).epsilon(1e-6));

    const numerics::EllipseMetrics e = numerics::ellipse_from_covariance(cov);
    CHECK(e.eccentricity == doctest::Approx(c.e_par).epsilon(1e-12));
    CHECK(std::abs(e.angle) == doctest::Approx(kPi / 4).epsilon(1e-12));
  }
}
