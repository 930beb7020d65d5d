#pragma once

#include <array>

#include "rydgate/core.hpp"

namespace rydgate::loss {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

/// One-dimensional thermal speed sqrt(k_B·T/m) in μm/μs (= m/s).
/// temperature in μK, mass in kg.
double thermal_speed(double temperature, double atomic_mass);

/// Retrieval efficiency after motional dephasing over time t:
/// (1 + (t/ξ)²)⁻² · exp(-(t/τ)² / (1 + (t/ξ)²)), τ = Λ/(2πv), ξ = w/v.
double thermal_efficiency(double t, double lambda_exc, double w, double v);

/// Joint survival of both Rydberg excitations: exp(-t/τ₁ - t/τ₂).
double lifetime_efficiency(double t, double tau1, double tau2);

struct PairEfficiency {
  double t_pi = 0.0;
  std::array<double, 2> photon{1.0, 1.0};
  double pair = 1.0;
};

/// Efficiencies at the π-phase interaction time for the configured
/// separation. external_loss multiplies each rail.
PairEfficiency pair_efficiency(const GateConfig& config);

/// Added-loss multipliers min(η)/ηᵢ that equalise the four rails.
std::array<double, 4> uniform_loss_balancer(const std::array<double, 4>& rail_efficiencies);

}  // namespace rydgate::loss
