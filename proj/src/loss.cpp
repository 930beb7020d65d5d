#include "rydgate/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rydgate/errors.hpp"

namespace rydgate::loss {

double thermal_speed(double temperature, double atomic_mass) {
  if (temperature < 0.0 || !(atomic_mass > 0.0)) throw std::invalid_argument("thermal_speed: bad inputs");
  return std::sqrt(kBoltzmann * temperature * 1e-6 / atomic_mass);
}

double thermal_efficiency(double t, double lambda_exc, double w, double v) {
  if (t < 0.0 || !(lambda_exc > 0.0) || !(w > 0.0) || v < 0.0)
    throw std::invalid_argument("thermal_efficiency: bad inputs");
  // Written in terms of v so that v = 0 (frozen atoms) is regular.
  const double traverse = t * v / w;                       // t/ξ
  const double dephase = 2.0 * kPi * v * t / lambda_exc;  // t/τ
  const double a = 1.0 + traverse * traverse;
  return std::exp(-dephase * dephase / a) / (a * a);
}

double lifetime_efficiency(double t, double tau1, double tau2) {
  if (t < 0.0 || !(tau1 > 0.0) || !(tau2 > 0.0)) throw std::invalid_argument("lifetime_efficiency: bad inputs");
  return std::exp(-t / tau1) * std::exp(-t / tau2);
}

PairEfficiency pair_efficiency(const GateConfig& config) {
  const LossModel& m = config.loss;
  PairEfficiency out;
  out.t_pi = time_for_pi(config.separation_mag(), config.c6);
  const double v = thermal_speed(m.temperature, m.atomic_mass);
  const double rail = m.external_loss.value_or(1.0);
  const ExcitationProfile* profiles[] = {&config.profile1, &config.profile2};
  for (int j = 0; j < 2; ++j) {
    const double w = m.width_axis == WidthAxis::Parallel ? profiles[j]->w_par : profiles[j]->w_perp;
    out.photon[j] = thermal_efficiency(out.t_pi, m.lambda_exc, w, v) * std::exp(-out.t_pi / m.lifetimes[j]) * rail;
  }
  out.pair = out.photon[0] * out.photon[1];
  return out;
}

std::array<double, 4> uniform_loss_balancer(const std::array<double, 4>& rail_efficiencies) {
  for (double eta : rail_efficiencies) {
    if (eta == 0.0) throw PhysicsError("degenerate rail: zero efficiency cannot be balanced");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("rail efficiencies must lie in (0, 1]");
  }
  const double lowest = *std::min_element(rail_efficiencies.begin(), rail_efficiencies.end());
  std::array<double, 4> multipliers{};
  for (std::size_t i = 0; i < 4; ++i)
    multipliers[i] = rail_efficiencies[i] == lowest ? 1.0 : lowest / rail_efficiencies[i];
  return multipliers;
}

}  // namespace rydgate::loss
