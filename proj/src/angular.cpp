#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "rydgate/errors.hpp"
#include "rydgate/numerics.hpp"

namespace rydgate::numerics {

namespace {

struct Marginal {
  std::vector<double> k;
  std::vector<double> weight;  // probability per cell
};

// Marginal momentum distribution of one excitation from a joint map.
Marginal marginal(const MomentumMap& map, int which) {
  Marginal m;
  const Eigen::Index n = which == 0 ? map.density.rows() : map.density.cols();
  const Eigen::VectorXd sums = which == 0 ? Eigen::VectorXd(map.density.rowwise().sum())
                                          : Eigen::VectorXd(map.density.colwise().sum().transpose());
  const double cell = map.dk[0] * map.dk[1];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = sums[i] * cell;
    if (w < 1e-16) continue;
    m.k.push_back(map.k(which, i));
    m.weight.push_back(w);
  }
  return m;
}

struct Emission {
  Marginal par;
  Marginal perp;
  double k0_par = 0.0;
  double k0_perp = 0.0;

  double angle(double kp_offset, double kt_offset) const {
    const double kp = k0_par + kp_offset;
    const double kt = k0_perp + kt_offset;
    return std::atan2(kp * k0_perp - kt * k0_par, kp * k0_par + kt * k0_perp);
  }
};

std::array<Emission, 2> emissions(const GateConfig& config, const SeparationFrame& frame) {
  const int pad = config.run.map_padding;
  const MomentumMap par = momentum_map(apply_interaction_phase(build_joint_grid(config, Axis::Parallel), config), pad);
  const MomentumMap perp =
      momentum_map(apply_interaction_phase(build_joint_grid(config, Axis::Perpendicular), config), pad);
  std::array<Emission, 2> out;
  const ExcitationProfile* profiles[] = {&config.profile1, &config.profile2};
  for (int j = 0; j < 2; ++j) {
    out[j].par = marginal(par, j);
    out[j].perp = marginal(perp, j);
    out[j].k0_par = profiles[j]->k0.dot(frame.par);
    out[j].k0_perp = profiles[j]->k0.dot(frame.perp1);
  }
  return out;
}

}  // namespace

AngularDistribution angular_distribution(const GateConfig& config, int bins) {
  if (bins < 3) throw std::invalid_argument("angular histogram needs >= 3 bins");
  if (config.profile1.k0.norm() == 0.0 || config.profile2.k0.norm() == 0.0)
    throw PhysicsError("undefined emission angle: |k0| = 0");
  const SeparationFrame frame = make_frame(config);

  GateConfig frozen = config;
  frozen.t_int = 0.0;
  const std::array<std::array<Emission, 2>, 2> states = {emissions(frozen, frame), emissions(config, frame)};

  // The range covers all but kRangeTail of every distribution; the far tails
  // of the maps hold aliased near-field phase and are clamped into the end
  // bins instead of stretching the axis.
  constexpr double kRangeTail = 1e-9;
  double max_angle = 0.0;
  for (const auto& state : states)
    for (const Emission& e : state) {
      std::vector<std::pair<double, double>> cells;
      cells.reserve(e.par.k.size() * e.perp.k.size());
      for (std::size_t a = 0; a < e.par.k.size(); ++a)
        for (std::size_t b = 0; b < e.perp.k.size(); ++b)
          cells.emplace_back(std::abs(e.angle(e.par.k[a], e.perp.k[b])), e.par.weight[a] * e.perp.weight[b]);
      std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
      double tail = 0.0;
      for (const auto& [angle, weight] : cells) {
        tail += weight;
        if (tail > kRangeTail) {
          max_angle = std::max(max_angle, angle);
          break;
        }
      }
    }
  if (!(max_angle > 0.0)) max_angle = 1e-6;

  AngularDistribution dist;
  dist.bin_width = 2.0 * max_angle / bins;
  dist.angles.resize(bins);
  for (int i = 0; i < bins; ++i) dist.angles[i] = (i - 0.5 * (bins - 1)) * dist.bin_width;

  // Binning by |theta| keeps the histogram exactly mirror-symmetric; the
  // outermost bins collect everything beyond the range.
  const long half = bins / 2;
  auto bin_of = [&](double theta) {
    const double offset = bins % 2 == 1 ? 0.5 : 0.0;
    const long j = std::min(static_cast<long>(std::floor(std::abs(theta) / dist.bin_width + offset)),
                            static_cast<long>((bins - 1) / 2));
    if (bins % 2 == 1) return static_cast<std::size_t>(theta < 0.0 ? half - j : half + j);
    return static_cast<std::size_t>(theta < 0.0 ? half - 1 - j : half + j);
  };
  auto histogram = [&](const Emission& e) {
    std::vector<double> h(bins, 0.0);
    for (std::size_t a = 0; a < e.par.k.size(); ++a)
      for (std::size_t b = 0; b < e.perp.k.size(); ++b) {
        const double w = e.par.weight[a] * e.perp.weight[b];
        const double theta = e.angle(e.par.k[a], e.perp.k[b]);
        if (std::abs(theta) >= kPi) {
          // Straight backwards is both +pi and -pi.
          h.front() += 0.5 * w;
          h.back() += 0.5 * w;
        } else {
          h[bin_of(theta)] += w;
        }
      }
    double total = 0.0;
    for (double v : h) total += v;
    for (double& v : h) v /= total;
    return h;
  };
  for (int j = 0; j < 2; ++j) {
    dist.before[j] = histogram(states[0][j]);
    dist.after[j] = histogram(states[1][j]);
  }
  return dist;
}

double mean_angle(const AngularDistribution& dist, const std::vector<double>& weights) {
  double m = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) m += dist.angles[i] * weights[i];
  return m;
}

}  // namespace rydgate::numerics
