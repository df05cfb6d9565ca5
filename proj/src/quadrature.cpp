// SPDX-License-Identifier: Apache-2.0

#include "alphadyn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include "alphadyn/error.hpp"

namespace alphadyn::quadrature
{

namespace
{

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double &p, double &dp)
{
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k)
  {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = n == 0 ? 1.0 : p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights)
{
  if (n < 1)
  {
    throw DomainError("Gauss-Legendre order must be positive");
  }
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it)
    {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    legendre(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
  {
    nodes[n / 2] = 0.0;
  }
}

QuadratureRule QuadratureRule::composite_gauss_legendre(int panels, int order)
{
  if (panels < 1)
  {
    throw DomainError("panel count must be positive");
  }
  QuadratureRule rule;
  rule.scheme_ = "composite-gauss-legendre";
  rule.panels_ = panels;
  rule.order_ = order;
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  rule.nodes_.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights_.reserve(static_cast<std::size_t>(panels) * order);
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p)
  {
    const double a = p * h;
    for (int i = 0; i < order; ++i)
    {
      rule.nodes_.push_back(a + 0.5 * h * (x[i] + 1.0));
      rule.weights_.push_back(0.5 * h * w[i]);
    }
  }
  return rule;
}

QuadratureRule QuadratureRule::for_modes(int highest_mode, int order)
{
  return composite_gauss_legendre(std::max(16, 4 * highest_mode), order);
}

double integrate(const std::function<double(double)> &f, const QuadratureRule &rule)
{
  const auto &x = rule.nodes();
  const auto &w = rule.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    const double v = f(x[i]);
    if (!std::isfinite(v))
    {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at node r=" << x[i] << " (value " << v << ")";
      throw NumericalError(msg.str());
    }
    sum += w[i] * v;
  }
  return sum;
}

double integrate_values(const std::vector<double> &values, const QuadratureRule &rule)
{
  const auto &x = rule.nodes();
  const auto &w = rule.weights();
  if (values.size() != w.size())
  {
    throw DomainError("integrand sample count does not match the quadrature rule");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
  {
    if (!std::isfinite(values[i]))
    {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at node r=" << x[i];
      throw NumericalError(msg.str());
    }
    sum += w[i] * values[i];
  }
  return sum;
}

}  // namespace alphadyn::quadrature
