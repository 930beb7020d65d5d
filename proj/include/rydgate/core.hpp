#pragma once

// Domain types and unit conventions shared by every module.
//
// Units: lengths in μm, times in μs, wavevectors in rad/μm, phases in rad,
// c6 in rad·μm⁶/μs, temperature in μK, mass in kg.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace rydgate {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class Axis { Parallel, Perpendicular };

std::string to_string(Axis axis);

/// Gaussian collective-excitation envelope.
///
/// Widths are 1/e amplitude half-widths: the amplitude is
/// exp(-X∥²/w_par² - |X⊥|²/w_perp²), so |f|² has standard deviation w/2 per
/// axis. Transverse profile is isotropic.
struct ExcitationProfile {
  Vec3 center = Vec3::Zero();
  double w_par = 0.0;
  double w_perp = 0.0;
  Vec3 k0 = Vec3::Zero();
  double rydberg_lifetime = 0.0;

  double sigma_par() const { return 0.5 * w_par; }
  double sigma_perp() const { return 0.5 * w_perp; }
  double sigma(Axis axis) const { return axis == Axis::Parallel ? sigma_par() : sigma_perp(); }
  double width(Axis axis) const { return axis == Axis::Parallel ? w_par : w_perp; }
};

/// Normalised 1D amplitude of a Gaussian with 1/e amplitude half-width w:
/// ∫ envelope(x, w)² dx = 1.
double envelope_1d(double x, double w);

struct GridSpec {
  int points_per_axis = 512;
  /// Grid half-extent in density standard deviations (w/2) of each axis.
  double extent_sigmas = 5.0;
};

struct DirectProtocol {};

/// Separation reversal at t/2. The sigmas parameterise the Gaussian
/// positioning error of the second half.
struct SwapProtocol {
  double err_sigma_par = 0.0;
  double err_sigma_perp = 0.0;
};

using Protocol = std::variant<DirectProtocol, SwapProtocol>;

bool is_swap(const Protocol& protocol);
std::string protocol_name(const Protocol& protocol);

/// Positioning error of the swapped configuration, in the separation frame.
struct SwapOffset {
  double par = 0.0;
  double perp = 0.0;
};

enum class WidthAxis { Parallel, Perpendicular };

struct LossModel {
  double temperature = 0.1;       // μK
  double atomic_mass = 1.443e-25;  // kg
  double lambda_exc = 0.297;       // μm
  std::array<double, 2> lifetimes{1180.0, 1150.0};  // μs
  std::optional<double> external_loss;
  WidthAxis width_axis = WidthAxis::Parallel;
};

/// Where c6 / t_int came from; carried into every output.
struct CalibrationInfo {
  bool c6_calibrated = false;
  double separation = 21.0;
  double time = 5.0;
  double phase = kPi;
  bool t_from_pi = false;
};

struct RunOptions {
  int quadrature_nodes = 16;
  std::int64_t mc_samples = 1'000'000;
  int error_samples = 1000;
  int map_padding = 4;
  int map_window = 128;
  int angular_bins = 121;
  int threads = 0;  // 0: OpenMP default
};

struct GateConfig {
  ExcitationProfile profile1;
  ExcitationProfile profile2;
  /// center1 - center2.
  Vec3 separation = Vec3::Zero();
  double c6 = 0.0;
  double t_int = 0.0;
  Protocol protocol = DirectProtocol{};
  GridSpec grid;
  LossModel loss;
  std::uint64_t rng_seed = 1;
  double validity_factor = 3.0;
  /// Largest tolerated probability of |x1 - x2| < d/10.
  double near_field_limit = 1e-4;
  CalibrationInfo calibration;
  RunOptions run;

  double separation_mag() const { return separation.norm(); }
  /// c6·t/|Δx0|⁶.
  double central_phase() const;
};

struct GateMetrics {
  Complex zeta{1.0, 0.0};
  double fidelity = 0.5;
  double k_centroid_1 = 0.0;
  double k_centroid_2 = 0.0;
  double eccentricity = 0.0;
  double ellipse_angle = 0.0;
  double entropy = 0.0;
};

/// Orthonormal frame with `par` along the separation. `perp1` follows the
/// transverse part of `hint` when it has one.
struct SeparationFrame {
  Vec3 par;
  Vec3 perp1;
  Vec3 perp2;
};

SeparationFrame make_frame(const Vec3& separation, const Vec3& hint = Vec3::Zero());
SeparationFrame make_frame(const GateConfig& config);

/// Interaction time giving a π centre-to-centre phase: π·d⁶/|c6|.
double time_for_pi(double separation_mag, double c6);

/// c6 such that c6·t_target/d⁶ = phase_target.
double calibrate_c6(double separation_mag, double t_target, double phase_target);

/// Distribution of r = x1 - x2 for the product state: a Gaussian with mean
/// Δx0 and per-axis variance σ1² + σ2² in the separation frame.
struct RelativeGaussian {
  Vec3 mean;
  double std_par = 0.0;
  double std_perp = 0.0;
  SeparationFrame frame;
};

RelativeGaussian relative_distribution(const ExcitationProfile& p1, const ExcitationProfile& p2,
                                       const Vec3& separation);

}  // namespace rydgate
