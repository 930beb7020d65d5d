#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "rydgate/errors.hpp"
#include "rydgate/numerics.hpp"
#include "rydgate/quadrature.hpp"

#include <Eigen/Geometry>

namespace rydgate::numerics {

namespace {

constexpr double kConvergenceTolerance = 1e-6;
constexpr std::int64_t kBatch = 1 << 16;
// Radial extent of each region beyond the Gaussian mean, in the largest
// standard deviation (tail mass below 1e-17).
constexpr double kRadialSigmas = 9.0;
// Smallest |ψ'|·L at which the near-field phase is integrated asymptotically.
constexpr double kAsymptoticRatio = 20.0;

// Integration rule for ζ in spherical coordinates about each singular
// point of the phase. The phase oscillates radially, so radial panels are
// narrowed until each spans at most `panel_phase` radians; panels whose
// Gaussian mass is below `mass_budget` are left coarse, since an
// unresolved panel can be off by at most twice its mass. Polar panels
// (`polar_nodes` each) are graded geometrically away from the direction of
// the Gaussian mean on the cloud's angular scale, so narrow clouds far from
// the singular point are resolved as well as wide ones. Each azimuthal ring
// gets enough trapezoid nodes to bring its aliasing error below
// `azimuth_tolerance`.
struct Rule {
  int polar_nodes = 16;
  int panel_order = 8;
  double panel_phase = 4.0;
  double mass_budget = 1e-11;
  double azimuth_tolerance = 1e-13;

  Rule refined() const {
    return {2 * polar_nodes, 2 * panel_order, 0.5 * panel_phase, 0.1 * mass_budget, 0.01 * azimuth_tolerance};
  }
};

// Positioning-error averages are limited by sampling noise near 1e-3, so
// each draw uses a rule accurate to about 1e-7.
constexpr Rule kErrorSampleRule{8, 6, 4.0, 1e-7, 1e-8};

// Trapezoid nodes for ∮ exp(κ cos φ + ...) dφ: the relative aliasing error
// is about I_n(κ)/I_0(κ) <= (κ/2)ⁿ/n! · exp(κ²/4(n+1)).
int azimuth_nodes(double kappa, double log_tol) {
  if (!(kappa > 0.0)) return 1;
  const double log_half = std::log(0.5 * kappa);
  double log_term = 0.0;
  for (int n = 1;; ++n) {
    log_term += log_half - std::log(static_cast<double>(n));
    if (log_term + kappa * kappa / (4.0 * (n + 1)) < log_tol) return n;
  }
}

Rule rule_for(const GateConfig& config) {
  Rule rule;
  rule.polar_nodes = config.run.quadrature_nodes;
  return rule;
}

// Region of relative-coordinate space handled in spherical coordinates
// about `center`: points with (x - center)·axis <= cut.
struct Region {
  Vec3 center;
  Vec3 axis;
  Vec3 b1, b2;
  double cut = std::numeric_limits<double>::infinity();
  double near_weight = 1.0;
  bool has_far = false;
  Vec3 far_center = Vec3::Zero();
  // Polar angle and distance of the Gaussian mean seen from `center`.
  double mean_angle = 0.0;
  double mean_distance = 0.0;
  // Inverse covariance applied to b1 and b2, and the spread of its
  // eigenvalues in the (b1, b2) plane: they set the azimuthal variation.
  Vec3 pb1 = Vec3::Zero(), pb2 = Vec3::Zero();
  double ring_anisotropy = 0.0;
  double ring_min_precision = 0.0;
};

// Widest polar panel, so the far-field phase is resolved as well.
constexpr double kMaxPolarPanel = kPi / 4.0;

void complete_basis(Region& region, const Vec3& mean, const Vec3& precision) {
  const Vec3 a = region.axis;
  const Vec3 helper = std::abs(a[0]) < 0.9 ? Vec3(1.0, 0.0, 0.0) : Vec3(0.0, 1.0, 0.0);
  region.b1 = (helper - helper.dot(a) * a).normalized();
  region.b2 = a.cross(region.b1);
  const Vec3 m = mean - region.center;
  region.mean_distance = m.norm();
  region.mean_angle = std::atan2(m.cross(a).norm(), m.dot(a));
  region.pb1 = precision.cwiseProduct(region.b1);
  region.pb2 = precision.cwiseProduct(region.b2);
  const double p11 = region.b1.dot(region.pb1), p22 = region.b2.dot(region.pb2), p12 = region.b1.dot(region.pb2);
  region.ring_anisotropy = std::hypot(p11 - p22, 2.0 * p12);
  region.ring_min_precision = 0.5 * (p11 + p22 - region.ring_anisotropy);
}

class ZetaIntegrator {
 public:
  ZetaIntegrator(const GateConfig& config, SwapOffset offset, Rule rule)
      : rule_(rule),
        polar_(gauss_legendre(rule.polar_nodes)),
        radial_(gauss_legendre(rule.panel_order)) {
    const RelativeGaussian rel = relative_distribution(config.profile1, config.profile2, config.separation);
    sp_ = rel.std_par;
    st_ = rel.std_perp;
    d_ = config.separation_mag();
    c6t_ = config.c6 * config.t_int;
    norm_ = 1.0 / (std::pow(2.0 * kPi, 1.5) * sp_ * st_ * st_);
    smooth_ = 0.5 * std::min(sp_, st_);
    // Frame coordinates: x = (parallel, transverse 1, transverse 2), mean (d, 0, 0).
    mean_ = Vec3(d_, 0.0, 0.0);
    precision_ = Vec3(1.0 / (sp_ * sp_), 1.0 / (st_ * st_), 1.0 / (st_ * st_));
    const Vec3& precision = precision_;
    if (!is_swap(config.protocol)) {
      Region r;
      r.center = Vec3::Zero();
      r.axis = Vec3(1.0, 0.0, 0.0);
      complete_basis(r, mean_, precision);
      regions_.push_back(r);
    } else {
      // Second half: r' = r - s vanishes at s; space is split at the
      // bisector of the two singular points.
      const Vec3 s(2.0 * d_ - offset.par, -offset.perp, 0.0);
      const Vec3 axis = s.normalized();
      Region a;
      a.center = Vec3::Zero();
      a.axis = axis;
      a.cut = 0.5 * s.norm();
      a.near_weight = 0.5;
      a.has_far = true;
      a.far_center = s;
      complete_basis(a, mean_, precision);
      Region b = a;
      b.center = s;
      b.axis = -axis;
      b.far_center = Vec3::Zero();
      complete_basis(b, mean_, precision);
      regions_.push_back(a);
      regions_.push_back(b);
    }
  }

  Complex integrate() const {
    Complex total{0.0, 0.0};
    for (const Region& region : regions_) total += integrate_region(region);
    return total;
  }

 private:
  double gaussian(const Vec3& x) const {
    const double a = x[0] - d_;
    return norm_ * std::exp(-0.5 * (a * a / (sp_ * sp_) + (x[1] * x[1] + x[2] * x[2]) / (st_ * st_)));
  }

  // ∫ dΩ g(x) exp(-i far phase) over the shell of radius R inside the region.
  Complex shell(const Region& region, double R, bool with_phase) const {
    const double mu_max = std::min(1.0, region.cut / R);
    if (mu_max <= -1.0) return {0.0, 0.0};
    const double theta_lo = std::acos(mu_max);
    // Angular scale of the Gaussian on this shell: |x - m|² grows as
    // R·|m|·θ² away from the mean direction.
    const double scale = smooth_ / std::sqrt(std::max(R * region.mean_distance, 1e-300));
    std::vector<double> breaks{theta_lo, kPi};
    const std::vector<double> origins =
        theta_lo > 0.0 ? std::vector<double>{region.mean_angle, theta_lo} : std::vector<double>{region.mean_angle};
    for (double origin : origins) {
      for (double step = 0.0;; step = 2.0 * step + scale) {
        const double up = origin + step, down = origin - step;
        if (up >= kPi && down <= theta_lo) break;
        if (up > theta_lo && up < kPi) breaks.push_back(up);
        if (down > theta_lo && down < kPi) breaks.push_back(down);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    Complex sum{0.0, 0.0};
    double lo = breaks.front();
    for (std::size_t i = 1; i < breaks.size(); ++i) {
      if (breaks[i] - lo < 0.25 * scale && i + 1 < breaks.size()) continue;
      const int pieces = static_cast<int>(std::ceil((breaks[i] - lo) / kMaxPolarPanel));
      const double width = (breaks[i] - lo) / pieces;
      for (int p = 0; p < pieces; ++p) sum += polar_panel(region, R, lo + p * width, lo + (p + 1) * width, with_phase);
      lo = breaks[i];
    }
    return sum;
  }

  Complex polar_panel(const Region& region, double R, double theta_a, double theta_b, bool with_phase) const {
    const double half = 0.5 * (theta_b - theta_a);
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < polar_.nodes.size(); ++k) {
      const double theta = half * polar_.nodes[k] + 0.5 * (theta_a + theta_b);
      const double mu = std::cos(theta);
      const double sin_t = std::sin(theta);
      // On the ring the Gaussian exponent varies as ρ·(P v₀)·u(φ) plus
      // ρ²·uᵀPu/2, with v₀ the ring centre relative to the mean.
      const double rho = R * sin_t;
      const Vec3 v0 = region.center + R * mu * region.axis - mean_;
      const double linear = rho * std::hypot(v0.dot(region.pb1), v0.dot(region.pb2));
      const double kappa = linear + 0.5 * rho * rho * region.ring_anisotropy;
      // Rings far out in the tail need less relative accuracy: allowing an
      // error of tol·sqrt(g_max·norm) per ring keeps the volume integral of
      // the error near 3·tol. Q_min bounds the exponent from below.
      const double q_min = std::max(
          0.0, v0.dot(precision_.cwiseProduct(v0)) - 2.0 * linear + rho * rho * region.ring_min_precision);
      const int n_phi = azimuth_nodes(kappa, std::log(rule_.azimuth_tolerance) + 0.25 * q_min);
      Complex ring{0.0, 0.0};
      for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * kPi * j / n_phi;
        const Vec3 x = region.center +
                       R * (mu * region.axis + sin_t * (std::cos(phi) * region.b1 + std::sin(phi) * region.b2));
        const double g = gaussian(x);
        if (with_phase && region.has_far) {
          const double q2 = (x - region.far_center).squaredNorm();
          ring += g * std::polar(1.0, -0.5 * c6t_ / (q2 * q2 * q2));
        } else {
          ring += g;
        }
      }
      sum += half * polar_.weights[k] * sin_t * ring * (2.0 * kPi / n_phi);
    }
    return sum;
  }

  Complex integrate_region(const Region& region) const {
    const double reach = (region.center - Vec3(d_, 0.0, 0.0)).norm() + kRadialSigmas * std::max(sp_, st_);
    const double smooth = smooth_;

    // Shell densities R²∫g dΩ bound the panel masses: tabulated within
    // kRadialSigmas of the mean distance, and below that by the isotropic
    // envelope 4πR² g_max exp(-(R - |m|)²/2σ_max²), which increases with R.
    const double sigma_max = std::max(sp_, st_);
    const double window = std::max(0.0, region.mean_distance - kRadialSigmas * sigma_max);
    auto envelope = [&](double R) {
      const double gap = (R - region.mean_distance) / sigma_max;
      return 4.0 * kPi * R * R * norm_ * std::exp(-0.5 * gap * gap);
    };
    const double table_step = smooth / 8.0;
    const int table_size = static_cast<int>(std::ceil((reach - window) / table_step)) + 2;
    std::vector<double> density(static_cast<std::size_t>(table_size));
    for (int i = 0; i < table_size; ++i) {
      const double R = std::max(window + i * table_step, 1e-9);
      density[static_cast<std::size_t>(i)] = R * R * shell(region, R, false).real();
    }
    // Twice the largest density on [a, b], with one table entry of slack.
    auto density_bound = [&](double a, double b) {
      double m = 0.0;
      if (a < window) m = envelope(std::min(b, window));
      if (b >= window) {
        const int first = std::max(0, static_cast<int>((a - window) / table_step) - 1);
        const int last = std::min(table_size - 1, static_cast<int>((b - window) / table_step) + 2);
        for (int j = first; j <= last; ++j) m = std::max(m, density[static_cast<std::size_t>(j)]);
      }
      return 2.0 * m;
    };

    const double rate = 6.0 * region.near_weight * std::abs(c6t_);
    Complex total{0.0, 0.0};
    double lo = 0.0;

    // Close to the singular point the phase ψ = w·c6·t/R⁶ turns so fast that
    // ∫₀^R₁ F e^{-iψ} dR is its integration-by-parts boundary term
    // F e^{-iψ}/(-iψ') at R₁, with the next term smaller by 1/(|ψ'|·L), L
    // being the length over which F/ψ' changes. R₁ is the largest radius
    // where that next term stays within the mass budget and the expansion
    // parameter |ψ'|·L exceeds kAsymptoticRatio.
    if (rate > 0.0) {
      const double sigma_min = std::min(sp_, st_);
      auto accepted = [&](double R) {
        const double slope = rate / std::pow(R, 7);
        const double length = std::min(R / 7.0, sigma_min * sigma_min / (region.mean_distance + R));
        return slope * length >= kAsymptoticRatio &&
               density_bound(0.0, R) / (slope * slope * length) <= rule_.mass_budget;
      };
      double a = 0.0, b = std::min({region.cut, region.mean_distance, reach});
      if (b > 0.0 && accepted(1e-3 * b)) {
        a = 1e-3 * b;
        for (int it = 0; it < 60 && b - a > 1e-12 * b; ++it) {
          const double m = 0.5 * (a + b);
          (accepted(m) ? a : b) = m;
        }
        const double R6 = std::pow(a, 6);
        const double psi = region.near_weight * c6t_ / R6;
        const double dpsi = -6.0 * psi / a;
        total += a * a * shell(region, a, true) * std::polar(1.0, -psi) / Complex(0.0, -dpsi);
        lo = a;
      }
    }

    while (lo < reach) {
      // Panels must follow the Gaussian (smooth) and the near-field phase
      // (resolved) only where they carry mass.
      const double resolved = rate > 0.0 ? rule_.panel_phase * std::pow(std::max(lo, 1e-12), 7) / rate
                                         : std::numeric_limits<double>::infinity();
      double h = reach - lo;
      while ((h > smooth || h > resolved) && h * density_bound(lo, lo + h) > rule_.mass_budget) h *= 0.5;
      h = std::max(h, std::min(smooth, resolved));
      // Just past the cut the region keeps only the transverse tail, whose
      // mass falls off over σ²/cut; grow panels geometrically from there.
      if (lo >= region.cut) h = std::min(h, std::max(lo - region.cut, smooth * smooth / region.cut));
      double hi = std::min(reach, lo + h);
      // The shell integrand has a kink where the cut first meets the shell.
      if (lo < region.cut && hi > region.cut) hi = region.cut;
      const double half = 0.5 * (hi - lo);
      for (std::size_t k = 0; k < radial_.nodes.size(); ++k) {
        const double R = half * radial_.nodes[k] + 0.5 * (hi + lo);
        const double R6 = R * R * R * R * R * R;
        const Complex near = std::polar(1.0, -region.near_weight * c6t_ / R6);
        total += half * radial_.weights[k] * R * R * near * shell(region, R, true);
      }
      lo = hi;
    }
    return total;
  }

  Rule rule_;
  const QuadratureRule& polar_;
  const QuadratureRule& radial_;
  std::vector<Region> regions_;
  double sp_ = 0.0, st_ = 0.0, d_ = 0.0, c6t_ = 0.0, norm_ = 0.0, smooth_ = 0.0;
  Vec3 mean_ = Vec3::Zero();
  Vec3 precision_ = Vec3::Zero();
};

Complex zeta_with_rule(const GateConfig& config, SwapOffset offset, Rule rule) {
  return ZetaIntegrator(config, offset, rule).integrate();
}

double ball_mass(const Vec3& mean_in_frame, double std_par, double std_perp, double radius) {
  const QuadratureRule& radial = gauss_legendre(32);
  const QuadratureRule& polar = gauss_legendre(64);
  constexpr int kAzimuth = 64;
  const double norm = 1.0 / (std::pow(2.0 * kPi, 1.5) * std_par * std_perp * std_perp);
  double total = 0.0;
  for (std::size_t a = 0; a < radial.nodes.size(); ++a) {
    const double rho = 0.5 * radius * (radial.nodes[a] + 1.0);
    const double wr = 0.5 * radius * radial.weights[a] * rho * rho;
    for (std::size_t b = 0; b < polar.nodes.size(); ++b) {
      const double mu = polar.nodes[b];
      const double s = std::sqrt(1.0 - mu * mu);
      for (int c = 0; c < kAzimuth; ++c) {
        const double phi = 2.0 * kPi * (c + 0.5) / kAzimuth;
        const Vec3 x(rho * mu, rho * s * std::cos(phi), rho * s * std::sin(phi));
        const Vec3 z = x - mean_in_frame;
        const double q = z[0] * z[0] / (std_par * std_par) + (z[1] * z[1] + z[2] * z[2]) / (std_perp * std_perp);
        total += wr * polar.weights[b] * (2.0 * kPi / kAzimuth) * std::exp(-0.5 * q);
      }
    }
  }
  return norm * total;
}

}  // namespace

double fidelity_from_zeta(Complex zeta) {
  const double mag2 = std::norm(zeta);
  if (mag2 > (1.0 + 1e-9) * (1.0 + 1e-9))
    throw PhysicsError("invalid overlap: |zeta| = " + std::to_string(std::sqrt(mag2)) + " > 1");
  return std::sqrt(std::max(0.0, (9.0 - 6.0 * zeta.real() + mag2) / 16.0));
}

double near_field_mass(const GateConfig& config) {
  const RelativeGaussian rel = relative_distribution(config.profile1, config.profile2, config.separation);
  const double d = config.separation_mag();
  return ball_mass(Vec3(d, 0.0, 0.0), rel.std_par, rel.std_perp, d / 10.0);
}

double check_separation_guard(const GateConfig& config) {
  const double mass = near_field_mass(config);
  if (mass >= config.near_field_limit)
    throw PhysicsError("clouds too close: probability " + std::to_string(mass) + " of |x1 - x2| < d/10 (limit " +
                       std::to_string(config.near_field_limit) +
                       "); increase the separation or reduce the widths");
  return mass;
}

ZetaResult zeta(const GateConfig& config, SwapOffset offset, bool check_convergence) {
  ZetaResult result;
  result.near_field_mass = check_separation_guard(config);
  const Rule rule = rule_for(config);
  result.nodes = rule.polar_nodes;
  result.value = zeta_with_rule(config, offset, rule);
  if (check_convergence) {
    const Complex refined = zeta_with_rule(config, offset, rule.refined());
    result.doubling_delta = std::abs(refined - result.value);
    result.converged = result.doubling_delta <= kConvergenceTolerance;
  }
  return result;
}

MonteCarloEstimate zeta_mc_oracle(const GateConfig& config, std::int64_t n_samples, std::uint64_t seed,
                                  SwapOffset offset) {
  if (n_samples < 10000) throw std::invalid_argument("zeta_mc_oracle needs at least 1e4 samples");
  const SeparationFrame frame = make_frame(config);
  const Vec3 c1 = config.profile1.center;
  const Vec3 c2 = config.profile2.center;
  const Vec3 eps = offset.par * frame.par + offset.perp * frame.perp1;
  const double c6t = config.c6 * config.t_int;
  const bool swap = is_swap(config.protocol);
  const ExcitationProfile& p1 = config.profile1;
  const ExcitationProfile& p2 = config.profile2;

  const std::int64_t batches = (n_samples + kBatch - 1) / kBatch;
  struct Sums {
    double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
  };
  std::vector<Sums> partial(static_cast<std::size_t>(batches));

#pragma omp parallel for num_threads(thread_count(config)) schedule(dynamic)
  for (std::int64_t b = 0; b < batches; ++b) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    std::normal_distribution<double> normal;
    const std::int64_t count = std::min(kBatch, n_samples - b * kBatch);
    Sums s;
    for (std::int64_t k = 0; k < count; ++k) {
      const Vec3 X1 = p1.sigma_par() * normal(rng) * frame.par + p1.sigma_perp() * normal(rng) * frame.perp1 +
                      p1.sigma_perp() * normal(rng) * frame.perp2;
      const Vec3 X2 = p2.sigma_par() * normal(rng) * frame.par + p2.sigma_perp() * normal(rng) * frame.perp1 +
                      p2.sigma_perp() * normal(rng) * frame.perp2;
      const double r2 = ((c1 + X1) - (c2 + X2)).squaredNorm();
      double phase = 0.0;
      if (!swap) {
        phase = c6t / (r2 * r2 * r2);
      } else {
        // Centres exchanged for the second half; shapes travel with them.
        const double q2 = ((c2 + X1 + eps) - (c1 + X2)).squaredNorm();
        phase = 0.5 * c6t / (r2 * r2 * r2) + 0.5 * c6t / (q2 * q2 * q2);
      }
      const double re = std::cos(phase);
      const double im = -std::sin(phase);
      s.re += re;
      s.im += im;
      s.re2 += re * re;
      s.im2 += im * im;
    }
    partial[static_cast<std::size_t>(b)] = s;
  }

  Sums total;
  for (const Sums& s : partial) {
    total.re += s.re;
    total.im += s.im;
    total.re2 += s.re2;
    total.im2 += s.im2;
  }
  const double n = static_cast<double>(n_samples);
  MonteCarloEstimate est;
  est.samples = n_samples;
  est.mean = Complex(total.re / n, total.im / n);
  const double var_re = std::max(0.0, (total.re2 - total.re * total.re / n) / (n - 1.0));
  const double var_im = std::max(0.0, (total.im2 - total.im * total.im / n) / (n - 1.0));
  est.standard_error = Complex(std::sqrt(var_re / n), std::sqrt(var_im / n));
  return est;
}

ErrorAverage swap_error_average_fidelity(const GateConfig& config, Axis axis, double sigma_err, int n_samples,
                                         std::uint64_t seed) {
  if (!is_swap(config.protocol)) throw std::invalid_argument("positioning-error averaging needs the swap protocol");
  if (sigma_err < 0.0) throw std::invalid_argument("sigma_err must be >= 0");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");

  ErrorAverage out;
  out.samples = n_samples;
  out.error_free = fidelity_from_zeta(zeta(config, {}, false).value);
  if (sigma_err == 0.0) {
    out.mean = out.error_free;
    return out;
  }

  std::vector<double> errors(static_cast<std::size_t>(n_samples));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma_err);
  for (double& e : errors) e = normal(rng);

  GateConfig serial = config;
  serial.run.threads = 1;
  std::vector<double> fidelities(errors.size());
#pragma omp parallel for num_threads(thread_count(config)) schedule(dynamic)
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const SwapOffset offset = axis == Axis::Parallel ? SwapOffset{errors[k], 0.0} : SwapOffset{0.0, errors[k]};
    fidelities[k] = fidelity_from_zeta(zeta_with_rule(serial, offset, kErrorSampleRule));
  }

  double sum = 0.0;
  for (double f : fidelities) sum += f;
  out.mean = sum / n_samples;
  double ss = 0.0;
  for (double f : fidelities) ss += (f - out.mean) * (f - out.mean);
  out.std = n_samples > 1 ? std::sqrt(ss / (n_samples - 1)) : 0.0;
  return out;
}

GateMetrics gate_metrics(const GateConfig& config) {
  GateMetrics m;
  m.zeta = zeta(config).value;
  m.fidelity = fidelity_from_zeta(m.zeta);
  const JointAmplitudeGrid grid = apply_interaction_phase(build_joint_grid(config, Axis::Parallel), config);
  const MomentumMap map = momentum_map(grid);
  std::tie(m.k_centroid_1, m.k_centroid_2) = momentum_centroid(map);
  const EllipseMetrics ellipse = ellipse_metrics(map);
  m.eccentricity = ellipse.eccentricity;
  m.ellipse_angle = ellipse.angle;
  m.entropy = entanglement_entropy(grid);
  return m;
}

}  // namespace rydgate::numerics
