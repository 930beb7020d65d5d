#include "rydgate/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rydgate {

namespace {

// Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// orthogonal-polynomial recurrence, weights μ0·v₀².
QuadratureRule golub_welsch(const Eigen::VectorXd& off_diagonal, double mu0) {
  const Eigen::Index n = off_diagonal.size() + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) J(k, k + 1) = J(k + 1, k) = off_diagonal[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
  if (solver.info() != Eigen::Success) throw std::runtime_error("quadrature eigensolver failed");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    rule.nodes[k] = solver.eigenvalues()[k];
    const double v = solver.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v * v;
  }
  // Exact symmetry about 0.
  for (Eigen::Index k = 0; k < n / 2; ++k) {
    const double x = 0.5 * (rule.nodes[n - 1 - k] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[n - 1 - k] + rule.weights[k]);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.weights[k] = rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

template <class Make>
const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, std::mutex& mutex, int n, Make make) {
  if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make(n)).first;
  return it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex mutex;
  return cached(cache, mutex, n, [](int m) {
    Eigen::VectorXd off(m - 1);
    for (int k = 1; k < m; ++k) off[k - 1] = std::sqrt(static_cast<double>(k));
    QuadratureRule rule = golub_welsch(off, 1.0);
    double total = 0.0;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w /= total;
    return rule;
  });
}

const QuadratureRule& gauss_legendre(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex mutex;
  return cached(cache, mutex, n, [](int m) {
    Eigen::VectorXd off(m - 1);
    for (int k = 1; k < m; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(off, 2.0);
  });
}

}  // namespace rydgate
