#include <cmath>
#include <mutex>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fftw3.h>
#include <omp.h>

#include "rydgate/errors.hpp"
#include "rydgate/numerics.hpp"

namespace rydgate::numerics {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

}  // namespace

int thread_count(const GateConfig& config) {
  return config.run.threads > 0 ? config.run.threads : omp_get_max_threads();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double JointAmplitudeGrid::norm() const { return values.squaredNorm() * spacing[0] * spacing[1]; }

JointAmplitudeGrid build_joint_grid(const GateConfig& config, Axis axis) {
  const int n = config.grid.points_per_axis;
  const double extent = config.grid.extent_sigmas;
  if (n < 4.0 * extent)
    throw ConfigError("grid.points_per_axis", "grid too small: " + std::to_string(n) + " points cannot resolve " +
                                                  std::to_string(extent) + " sigmas at 2 points per sigma");

  JointAmplitudeGrid grid;
  grid.axis = axis;
  const ExcitationProfile* profiles[] = {&config.profile1, &config.profile2};
  std::array<Eigen::VectorXd, 2> envelope;
  for (int j = 0; j < 2; ++j) {
    const double half = extent * profiles[j]->sigma(axis);
    grid.spacing[j] = 2.0 * half / n;
    // Cell-centred samples keep the grid symmetric about the cloud centre.
    grid.origin[j] = -half + 0.5 * grid.spacing[j];
    envelope[j].resize(n);
    for (int i = 0; i < n; ++i) envelope[j][i] = envelope_1d(grid.coordinate(j, i), profiles[j]->width(axis));
  }
  grid.values = (envelope[0] * envelope[1].transpose()).cast<Complex>();
  grid.values /= std::sqrt(grid.norm());
  return grid;
}

JointAmplitudeGrid apply_interaction_phase(JointAmplitudeGrid grid, const GateConfig& config, SwapOffset offset) {
  const double d = config.separation_mag();
  const double c6t = config.c6 * config.t_int;
  const bool swap = is_swap(config.protocol);
  const bool parallel = grid.axis == Axis::Parallel;
  const Eigen::Index rows = grid.values.rows();
  const Eigen::Index cols = grid.values.cols();
  const double tiny = 1e-12 * d;
  bool overlap = false;

#pragma omp parallel for num_threads(thread_count(config)) reduction(|| : overlap)
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double a = grid.coordinate(0, i);
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double u = a - grid.coordinate(1, j);
      // Relative coordinate (parallel, transverse) for each half.
      const double first_p = parallel ? d + u : d;
      const double first_t = parallel ? 0.0 : u;
      const double r2 = first_p * first_p + first_t * first_t;
      double phase = 0.0;
      if (!swap) {
        if (r2 <= tiny * tiny) overlap = true;
        phase = c6t / (r2 * r2 * r2);
      } else {
        const double second_p = parallel ? -d + offset.par + u : -d + offset.par;
        const double second_t = parallel ? offset.perp : u + offset.perp;
        const double q2 = second_p * second_p + second_t * second_t;
        if (r2 <= tiny * tiny || q2 <= tiny * tiny) overlap = true;
        phase = 0.5 * c6t / (r2 * r2 * r2) + 0.5 * c6t / (q2 * q2 * q2);
      }
      grid.values(i, j) *= std::polar(1.0, -phase);
    }
  }
  if (overlap)
    throw PhysicsError("excitation overlap: |x1 - x2| = 0 on the grid; increase the separation or reduce "
                       "grid.extent_sigmas");
  return grid;
}

MomentumMap MomentumMap::window(Eigen::Index size) const {
  MomentumMap out;
  out.axis = axis;
  out.dk = dk;
  const Eigen::Index r = std::min(size, density.rows());
  const Eigen::Index c = std::min(size, density.cols());
  out.density = density.block(density.rows() / 2 - r / 2, density.cols() / 2 - c / 2, r, c);
  return out;
}

MomentumMap momentum_map(const JointAmplitudeGrid& grid, int padding) {
  if (padding < 1) throw std::invalid_argument("padding must be >= 1");
  const Eigen::Index n1 = grid.values.rows();
  const Eigen::Index n2 = grid.values.cols();
  const Eigen::Index m1 = n1 * padding;
  const Eigen::Index m2 = n2 * padding;

  std::vector<Complex> buffer(static_cast<std::size_t>(m1 * m2), Complex{0.0, 0.0});
  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(m1), static_cast<int>(m2), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j) buffer[i * m2 + j] = grid.values(i, j);
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  MomentumMap map;
  map.axis = grid.axis;
  map.dk = {2.0 * kPi / (m1 * grid.spacing[0]), 2.0 * kPi / (m2 * grid.spacing[1])};
  map.density.resize(m1, m2);
  for (Eigen::Index i = 0; i < m1; ++i) {
    const Eigen::Index si = (i + m1 / 2) % m1;
    for (Eigen::Index j = 0; j < m2; ++j) map.density(i, j) = std::norm(buffer[si * m2 + (j + m2 / 2) % m2]);
  }
  map.density /= map.density.sum() * map.dk[0] * map.dk[1];
  return map;
}

std::pair<double, double> momentum_centroid(const MomentumMap& map) {
  double k1 = 0.0;
  double k2 = 0.0;
  for (Eigen::Index i = 0; i < map.density.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < map.density.cols(); ++j) {
      row += map.density(i, j);
      k2 += map.density(i, j) * map.k(1, j);
    }
    k1 += row * map.k(0, i);
  }
  const double cell = map.dk[0] * map.dk[1];
  return {k1 * cell, k2 * cell};
}

Eigen::Matrix2d momentum_covariance(const MomentumMap& map) {
  const auto [m1, m2] = momentum_centroid(map);
  double c11 = 0.0, c12 = 0.0, c22 = 0.0;
  for (Eigen::Index i = 0; i < map.density.rows(); ++i) {
    const double x = map.k(0, i) - m1;
    for (Eigen::Index j = 0; j < map.density.cols(); ++j) {
      const double y = map.k(1, j) - m2;
      const double p = map.density(i, j);
      c11 += p * x * x;
      c12 += p * x * y;
      c22 += p * y * y;
    }
  }
  const double cell = map.dk[0] * map.dk[1];
  Eigen::Matrix2d cov;
  cov << c11 * cell, c12 * cell, c12 * cell, c22 * cell;
  return cov;
}

EllipseMetrics ellipse_from_covariance(const Eigen::Matrix2d& covariance) {
  if (!covariance.allFinite()) throw PhysicsError("degenerate momentum map: non-finite covariance");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(covariance);
  const double lo = solver.eigenvalues()[0];
  const double hi = solver.eigenvalues()[1];
  if (!(hi > 0.0) || !(lo > 0.0)) throw PhysicsError("degenerate momentum map: zero covariance");
  EllipseMetrics e;
  e.eccentricity = std::sqrt(std::max(0.0, 1.0 - lo / hi));
  if (hi - lo <= 1e-12 * hi) return e;
  const Eigen::Vector2d v = solver.eigenvectors().col(1);
  double angle = std::atan2(v[1], v[0]);
  if (angle <= -kPi / 2) angle += kPi;
  if (angle > kPi / 2) angle -= kPi;
  e.angle = angle;
  return e;
}

EllipseMetrics ellipse_metrics(const MomentumMap& map) { return ellipse_from_covariance(momentum_covariance(map)); }

double entanglement_entropy(const ComplexMatrix& psi) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(psi);
  if (svd.info() != Eigen::Success)
    throw PhysicsError("SVD failed on a " + std::to_string(psi.rows()) + "x" + std::to_string(psi.cols()) +
                       " amplitude grid");
  const Eigen::VectorXd s2 = svd.singularValues().array().square();
  const double total = s2.sum();
  if (!(total > 0.0)) throw PhysicsError("entropy of a zero amplitude grid");
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < s2.size(); ++i) {
    const double lambda = s2[i] / total;
    if (lambda >= 1e-14) entropy -= lambda * std::log(lambda);
  }
  return std::max(0.0, entropy);
}

double entanglement_entropy(const JointAmplitudeGrid& grid) { return entanglement_entropy(grid.values); }

}  // namespace rydgate::numerics
