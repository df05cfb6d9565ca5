// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace alphadyn::quadrature
{

/// Composite Gauss-Legendre rule on (0, 1). All nodes are interior, so integrands with a
/// removable singularity at r = 0 are never evaluated there.
class QuadratureRule
{
public:
  static constexpr int kDefaultOrder = 12;

  static QuadratureRule composite_gauss_legendre(int panels, int order = kDefaultOrder);

  /// Panel count for integrands built from modes up to `highest_mode`: max(16, 4 * mode).
  static QuadratureRule for_modes(int highest_mode, int order = kDefaultOrder);

  const std::string &scheme() const { return scheme_; }
  int panels() const { return panels_; }
  int order() const { return order_; }
  bool open_at_endpoints() const { return true; }
  const std::vector<double> &nodes() const { return nodes_; }
  const std::vector<double> &weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

private:
  std::string scheme_;
  int panels_ = 0;
  int order_ = 0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights);

/// Throws NumericalError naming the node if f is not finite there.
double integrate(const std::function<double(double)> &f, const QuadratureRule &rule);

/// Weighted sum of precomputed integrand values at the rule's nodes.
double integrate_values(const std::vector<double> &values, const QuadratureRule &rule);

}  // namespace alphadyn::quadrature
