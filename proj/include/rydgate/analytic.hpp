#pragma once

// Closed-form results of the second-order expansion of the van der Waals
// interaction about the cloud centres.

#include "rydgate/core.hpp"

namespace rydgate::analytic {

/// c6/|r|⁶ (rad/μs).
double vdw_phase_rate(const Vec3& r, double c6);

/// Second-order expansion of 1/|x1 - x2|⁶ about |Δx0| = d. Offsets are
/// given in the separation frame: component 0 is parallel, 1 and 2 are
/// transverse.
double vdw_expansion(double delta_x0_mag, const Vec3& X1, const Vec3& X2);

struct ExpansionCoefficients {
  double phase0 = 0.0;  // c6·t/d⁶
  double k_D = 0.0;     // 6c6·t/d⁷
  double S_par = 0.0;   // 21 w∥² c6·t/d⁸
  double S_perp = 0.0;  // 3 w⊥² c6·t/d⁸
  double e_par = 0.0;
  double e_perp = 0.0;
};

/// e = sqrt(4S²/(1 + 4S²)).
double eccentricity_from_S(double S);

/// Coefficients for the configured geometry. The closed forms assume equal
/// widths; unequal profiles use the rms width.
ExpansionCoefficients expansion_coefficients(const GateConfig& config);
ExpansionCoefficients expansion_coefficients(double d, double c6t, double w_par, double w_perp);

/// Unnormalised joint momentum density of the correlated Gaussian.
/// The perpendicular axis has no displacement.
double analytic_momentum_density(double K1, double K2, Axis axis, const ExpansionCoefficients& coeffs,
                                 double w);

/// Covariance of the analytic density in (K1, K2): the inverse of its
/// quadratic form.
Eigen::Matrix2d analytic_momentum_covariance(Axis axis, const ExpansionCoefficients& coeffs, double w);

}  // namespace rydgate::analytic
