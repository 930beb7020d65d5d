#include "rydgate/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "rydgate/errors.hpp"

namespace rydgate::analytic {

double vdw_phase_rate(const Vec3& r, double c6) {
  const double r2 = r.squaredNorm();
  if (!(r2 > 0.0)) throw PhysicsError("van der Waals rate is singular at |r| = 0");
  return c6 / (r2 * r2 * r2);
}

double vdw_expansion(double delta_x0_mag, const Vec3& X1, const Vec3& X2) {
  if (!(delta_x0_mag > 0.0)) throw std::invalid_argument("|delta_x0| must be > 0");
  const double d = delta_x0_mag;
  const double d6 = std::pow(d, 6);
  const double u = X1[0] - X2[0];
  const double t1 = X1[1] - X2[1];
  const double t2 = X1[2] - X2[2];
  return 1.0 / d6 - 6.0 * u / (d6 * d) - 3.0 * (t1 * t1 + t2 * t2) / (d6 * d * d) + 21.0 * u * u / (d6 * d * d);
}

double eccentricity_from_S(double S) {
  const double s2 = 4.0 * S * S;
  return std::sqrt(s2 / (1.0 + s2));
}

ExpansionCoefficients expansion_coefficients(double d, double c6t, double w_par, double w_perp) {
  ExpansionCoefficients c;
  const double d6 = std::pow(d, 6);
  c.phase0 = c6t / d6;
  c.k_D = 6.0 * c6t / (d6 * d);
  c.S_par = 21.0 * w_par * w_par * c6t / (d6 * d * d);
  c.S_perp = 3.0 * w_perp * w_perp * c6t / (d6 * d * d);
  c.e_par = eccentricity_from_S(c.S_par);
  c.e_perp = eccentricity_from_S(c.S_perp);
  return c;
}

ExpansionCoefficients expansion_coefficients(const GateConfig& config) {
  const auto rms = [](double a, double b) { return std::sqrt(0.5 * (a * a + b * b)); };
  return expansion_coefficients(config.separation_mag(), config.c6 * config.t_int,
                                rms(config.profile1.w_par, config.profile2.w_par),
                                rms(config.profile1.w_perp, config.profile2.w_perp));
}

namespace {

// Quadratic form Q with density ∝ exp(-(K - K̄)ᵀ Q (K - K̄)).
Eigen::Matrix2d quadratic_form(Axis axis, const ExpansionCoefficients& c, double w) {
  const double S = axis == Axis::Parallel ? c.S_par : c.S_perp;
  const double a = w * w / (2.0 * (1.0 + 4.0 * S * S));
  const double s2 = 2.0 * S * S;
  Eigen::Matrix2d Q;
  Q << a * (1.0 + s2), a * s2, a * s2, a * (1.0 + s2);
  return Q;
}

}  // namespace

double analytic_momentum_density(double K1, double K2, Axis axis, const ExpansionCoefficients& coeffs, double w) {
  const double kd = axis == Axis::Parallel ? coeffs.k_D : 0.0;
  const Eigen::Vector2d dK(K1 - kd, K2 + kd);
  return std::exp(-dK.dot(quadratic_form(axis, coeffs, w) * dK));
}

Eigen::Matrix2d analytic_momentum_covariance(Axis axis, const ExpansionCoefficients& coeffs, double w) {
  return 0.5 * quadratic_form(axis, coeffs, w).inverse();
}

}  // namespace rydgate::analytic
