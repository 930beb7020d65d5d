#pragma once

// Exact evaluation of the interacting two-excitation state.
//
// ζ uses the full 3D relative coordinate (the state is a product and the
// phase depends only on x1 - x2). Momentum maps and entropy use 2D slices
// with one coordinate per excitation; the remaining coordinates sit at the
// cloud centres.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rydgate/core.hpp"

namespace rydgate::numerics {

using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// ψ(a, b): rows index excitation 1's offset a, columns excitation 2's
/// offset b, both measured from the cloud centres along `axis`.
struct JointAmplitudeGrid {
  ComplexMatrix values;
  Axis axis = Axis::Parallel;
  std::array<double, 2> spacing{0.0, 0.0};
  std::array<double, 2> origin{0.0, 0.0};

  double coordinate(int which, Eigen::Index index) const { return origin[which] + spacing[which] * index; }
  /// Σ|ψ|² da db.
  double norm() const;
};

JointAmplitudeGrid build_joint_grid(const GateConfig& config, Axis axis);

/// Multiplies by the accumulated interaction phase of the configured
/// protocol. `offset` displaces the swapped (second-half) configuration.
JointAmplitudeGrid apply_interaction_phase(JointAmplitudeGrid grid, const GateConfig& config,
                                           SwapOffset offset = {});

struct MomentumMap {
  RealMatrix density;  // over (K1, K2), integrates to 1
  Axis axis = Axis::Parallel;
  std::array<double, 2> dk{0.0, 0.0};

  /// K of row/column `index` on axis `which`; K = 0 at index size/2.
  double k(int which, Eigen::Index index) const {
    const Eigen::Index n = which == 0 ? density.rows() : density.cols();
    return dk[which] * static_cast<double>(index - n / 2);
  }
  /// Centred sub-window of `size` × `size` cells.
  MomentumMap window(Eigen::Index size) const;
};

/// |2D DFT|² of ψ with the origin centred; `padding` zero-pads each axis
/// by that factor for finer momentum sampling.
MomentumMap momentum_map(const JointAmplitudeGrid& grid, int padding = 1);

std::pair<double, double> momentum_centroid(const MomentumMap& map);
Eigen::Matrix2d momentum_covariance(const MomentumMap& map);

struct EllipseMetrics {
  double eccentricity = 0.0;
  /// Orientation of the major axis in (-π/2, π/2]; 0 for isotropic maps.
  double angle = 0.0;
};

EllipseMetrics ellipse_metrics(const MomentumMap& map);
EllipseMetrics ellipse_from_covariance(const Eigen::Matrix2d& covariance);

/// Von Neumann entropy (nats) of the Schmidt weights of ψ. Weights below
/// 1e-14 are dropped.
double entanglement_entropy(const JointAmplitudeGrid& grid);
double entanglement_entropy(const ComplexMatrix& psi);

struct ZetaResult {
  Complex value{1.0, 0.0};
  /// Change under a refined rule (doubled angular and panel orders, halved
  /// panel phase, tenfold smaller mass budget), or -1 when skipped.
  double doubling_delta = -1.0;
  bool converged = true;
  /// Gauss–Legendre nodes per polar panel of the base rule.
  int nodes = 0;
  double near_field_mass = 0.0;
};

/// ζ = E[exp(-iφ(r))] over the relative-coordinate Gaussian.
///
/// Integrated in spherical coordinates about each point where the phase
/// diverges (the origin, and for the swap also the second-half singular
/// point, the two regions meeting at their bisector plane). Radial
/// Gauss–Legendre panels follow the c6·t/R⁶ oscillation wherever the
/// enclosed probability matters. The polar angle uses Gauss–Legendre panels
/// (run.quadrature_nodes each) graded towards the direction of the Gaussian
/// mean; off axis, the azimuth is trapezoidal.
ZetaResult zeta(const GateConfig& config, SwapOffset offset = {}, bool check_convergence = true);

struct MonteCarloEstimate {
  Complex mean{0.0, 0.0};
  /// Standard error of the real and imaginary parts.
  Complex standard_error{0.0, 0.0};
  std::int64_t samples = 0;
};

/// Brute-force ζ: samples both excitations' positions from the 6D product
/// density. Deterministic in `seed` for any thread count.
MonteCarloEstimate zeta_mc_oracle(const GateConfig& config, std::int64_t n_samples, std::uint64_t seed,
                                  SwapOffset offset = {});

/// sqrt((9 - 3(ζ + ζ*) + |ζ|²)/16).
double fidelity_from_zeta(Complex zeta);

/// Relative-coordinate probability within |r| < d/10 (max over both
/// protocol halves).
double near_field_mass(const GateConfig& config);
/// Masses at or above this are reported as warnings.
inline constexpr double kNearFieldWarning = 1e-12;
/// Throws PhysicsError when near_field_mass reaches config.near_field_limit;
/// returns the mass.
double check_separation_guard(const GateConfig& config);

struct ErrorAverage {
  double mean = 0.0;
  double std = 0.0;
  double error_free = 0.0;
  int samples = 0;
};

/// Mean and spread of F over Gaussian positioning errors of the swap.
ErrorAverage swap_error_average_fidelity(const GateConfig& config, Axis axis, double sigma_err, int n_samples,
                                         std::uint64_t seed);

struct AngularDistribution {
  std::vector<double> angles;  // bin centres (rad)
  double bin_width = 0.0;
  std::array<std::vector<double>, 2> before;  // per excitation, weights sum to 1
  std::array<std::vector<double>, 2> after;
};

/// Emission-angle histograms of both excitations at t = 0 and after the
/// interaction.
AngularDistribution angular_distribution(const GateConfig& config, int bins);

/// Mean angle of a histogram.
double mean_angle(const AngularDistribution& dist, const std::vector<double>& weights);

/// ζ, F, parallel-map centroid and ellipse, parallel-slice entropy.
GateMetrics gate_metrics(const GateConfig& config);

/// Splitmix64 mixing of (seed, index) into a child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Thread count for OpenMP regions: run.threads, or all available.
int thread_count(const GateConfig& config);

}  // namespace rydgate::numerics
