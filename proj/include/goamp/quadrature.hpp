#pragma once

#include "goamp/types.hpp"

namespace goamp {

/// Probabilists' Gauss-Hermite rule: sum_i w_i f(x_i) ~ E[f(G)], G ~ N(0, 1).
/// Weights sum to one.
struct GaussHermiteRule {
  Vector nodes;
  Vector weights;
};

/// Nodes and weights for `order` points (Golub-Welsch). Cached per order.
const GaussHermiteRule& gauss_hermite(int order);

template <class F>
double gaussian_expectation(const GaussHermiteRule& rule, F&& f) {
  double acc = 0.0;
  for (Index i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

}  // namespace goamp
