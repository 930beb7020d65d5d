#pragma once

#include <vector>

namespace rydgate {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Hermite rule for the standard normal density: Σ wᵢ g(xᵢ) ≈ E[g(X)],
/// X ~ N(0, 1), weights summing to 1. Cached; safe to call concurrently.
const QuadratureRule& gauss_hermite(int n);

/// Gauss–Legendre rule on [-1, 1]. Cached; safe to call concurrently.
const QuadratureRule& gauss_legendre(int n);

}  // namespace rydgate
