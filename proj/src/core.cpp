#include "rydgate/core.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

#include "rydgate/errors.hpp"

namespace rydgate {

std::string to_string(Axis axis) { return axis == Axis::Parallel ? "par" : "perp"; }

double envelope_1d(double x, double w) {
  const double norm = std::pow(0.5 * kPi * w * w, -0.25);
  return norm * std::exp(-(x * x) / (w * w));
}

bool is_swap(const Protocol& protocol) { return std::holds_alternative<SwapProtocol>(protocol); }

std::string protocol_name(const Protocol& protocol) { return is_swap(protocol) ? "swap" : "direct"; }

double GateConfig::central_phase() const {
  const double d = separation_mag();
  return c6 * t_int / std::pow(d, 6);
}

SeparationFrame make_frame(const Vec3& separation, const Vec3& hint) {
  const double d = separation.norm();
  if (!(d > 0.0)) throw std::invalid_argument("separation must be non-zero");
  SeparationFrame frame;
  frame.par = separation / d;

  Vec3 transverse = hint - hint.dot(frame.par) * frame.par;
  if (transverse.norm() <= 1e-12 * std::max(1.0, hint.norm())) {
    // Least-aligned lab axis.
    Eigen::Index idx = 0;
    frame.par.cwiseAbs().minCoeff(&idx);
    Vec3 e = Vec3::Zero();
    e[idx] = 1.0;
    transverse = e - e.dot(frame.par) * frame.par;
  }
  frame.perp1 = transverse.normalized();
  frame.perp2 = frame.par.cross(frame.perp1);
  return frame;
}

SeparationFrame make_frame(const GateConfig& config) {
  return make_frame(config.separation, config.profile1.k0);
}

double time_for_pi(double separation_mag, double c6) {
  if (!(separation_mag > 0.0)) throw std::invalid_argument("separation magnitude must be > 0");
  if (c6 == 0.0) throw PhysicsError("time for a pi phase is undefined for c6 = 0");
  return kPi * std::pow(separation_mag, 6) / std::abs(c6);
}

double calibrate_c6(double separation_mag, double t_target, double phase_target) {
  if (!(separation_mag > 0.0)) throw std::invalid_argument("separation magnitude must be > 0");
  if (!(t_target > 0.0)) throw std::invalid_argument("calibration time must be > 0");
  if (!(phase_target >= 0.0)) throw std::invalid_argument("calibration phase must be >= 0");
  return phase_target * std::pow(separation_mag, 6) / t_target;
}

RelativeGaussian relative_distribution(const ExcitationProfile& p1, const ExcitationProfile& p2,
                                       const Vec3& separation) {
  RelativeGaussian g;
  g.mean = separation;
  g.frame = make_frame(separation, p1.k0);
  g.std_par = std::hypot(p1.sigma_par(), p2.sigma_par());
  g.std_perp = std::hypot(p1.sigma_perp(), p2.sigma_perp());
  return g;
}

}  // namespace rydgate
