// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <numbers>
#include "alphadyn/error.hpp"
#include "alphadyn/quadrature.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace alphadyn;
using namespace alphadyn::quadrature;
using std::numbers::pi;

TEST_CASE("rule shape")
{
  const auto rule = QuadratureRule::composite_gauss_legendre(16);
  CHECK(rule.panels() == 16);
  CHECK(rule.order() == 12);
  CHECK(rule.size() == 16u * 12u);
  CHECK(rule.open_at_endpoints());
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
  {
    CHECK(rule.nodes()[i] > 0.0);
    CHECK(rule.nodes()[i] < 1.0);
    CHECK(rule.weights()[i] > 0.0);
    if (i > 0)
    {
      CHECK(rule.nodes()[i] > rule.nodes()[i - 1]);
    }
    total += rule.weights()[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(QuadratureRule::for_modes(1).panels() == 16);
  CHECK(QuadratureRule::for_modes(10).panels() == 40);
  CHECK_THROWS_AS(QuadratureRule::composite_gauss_legendre(0), DomainError);
  CHECK_THROWS_AS(QuadratureRule::composite_gauss_legendre(4, 0), DomainError);
}

TEST_CASE("Gauss-Legendre nodes are Legendre roots with textbook weights")
{
  std::vector<double> x, w;
  gauss_legendre(2, x, w);
  CHECK(x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(x[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(w[0] == doctest::Approx(1.0));
  gauss_legendre(3, x, w);
  CHECK(x[0] == doctest::Approx(-std::sqrt(0.6)));
  CHECK(x[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(w[0] == doctest::Approx(5.0 / 9.0));
  CHECK(w[1] == doctest::Approx(8.0 / 9.0));
  for (int n = 1; n <= 24; ++n)
  {
    gauss_legendre(n, x, w);
    for (int i = 0; i < n; ++i)
    {
      CHECK(std::legendre(n, x[i]) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("integration examples")
{
  const auto rule = QuadratureRule::for_modes(8);
  CHECK(integrate([](double) { return 1.0; }, rule) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate([](double r) { return 2 * std::pow(std::sin(3 * pi * r), 2); }, rule) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate([](double r) { return std::pow(std::cos(4 * pi * r), 2); }, rule) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("exactness on polynomials up to degree 2 * order - 1")
{
  for (int order : {4, 8, 12})
  {
    const auto rule = QuadratureRule::composite_gauss_legendre(3, order);
    for (int d = 0; d <= 2 * order - 1; ++d)
    {
      const double exact = 1.0 / (d + 1);
      CHECK(integrate([d](double r) { return std::pow(r, d); }, rule) ==
            doctest::Approx(exact).epsilon(1e-14));
    }
  }
}

TEST_CASE("non-finite integrand names the node")
{
  const auto rule = QuadratureRule::composite_gauss_legendre(2, 3);
  try
  {
    integrate([](double r) { return r > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }, rule);
    FAIL("expected a numerical failure");
  }
  catch (const NumericalError &e)
  {
    CHECK(std::string(e.what()).find("r=") != std::string::npos);
  }
  std::vector<double> values(rule.size(), 1.0);
  CHECK(integrate_values(values, rule) == doctest::Approx(1.0));
  values.pop_back();
  CHECK_THROWS_AS(integrate_values(values, rule), DomainError);
}

TEST_CASE("property: frequency-aware rule is converged on eigenfunction products")
{
  testing::Gen gen(0x51ab);
  for (int trial = 0; trial < 25; ++trial)
  {
    const int m = gen.integer(1, 16);
    const int n = gen.integer(1, 16);
    const int k = gen.integer(0, 8);
    auto f = [&](double r) {
      return 2.0 * std::sin(m * pi * r) * std::sin(n * pi * r) * std::cos(2 * pi * k * r);
    };
    double exact = 0.0;
    for (int s : {m - n + 2 * k, m - n - 2 * k})
    {
      exact += (s == 0 ? 0.5 : 0.0);
    }
    for (int s : {m + n + 2 * k, m + n - 2 * k})
    {
      exact -= (s == 0 ? 0.5 : 0.0);
    }
    const int modes = std::max({m, n, 2 * k});
    const auto rule = QuadratureRule::for_modes(modes);
    INFO("seed trial " << trial << " m=" << m << " n=" << n << " k=" << k);
    CHECK(std::abs(integrate(f, rule) - exact) <= 1e-10);

    const auto doubled = QuadratureRule::composite_gauss_legendre(2 * rule.panels());
    CHECK(std::abs(integrate(f, doubled) - integrate(f, rule)) <= 1e-12);
  }
}

TEST_CASE("property: doubling ratio approaches 2^(2n) on a smooth integrand")
{
  auto f = [](double r) { return std::exp(std::sin(3.0 * r)); };
  const auto ref_rule = QuadratureRule::composite_gauss_legendre(64, 12);
  const double ref = integrate(f, ref_rule);
  const double e1 = std::abs(integrate(f, QuadratureRule::composite_gauss_legendre(2, 3)) - ref);
  const double e2 = std::abs(integrate(f, QuadratureRule::composite_gauss_legendre(4, 3)) - ref);
  const double e3 = std::abs(integrate(f, QuadratureRule::composite_gauss_legendre(8, 3)) - ref);
  // 3-point rule: order 6, ratio 64
  CHECK(e1 / e2 > 20.0);
  CHECK(e2 / e3 == doctest::Approx(64.0).epsilon(0.15));
}
