// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>
#include "alphadyn/error.hpp"
#include "alphadyn/mesh.hpp"
#include "alphadyn/specfun.hpp"
#include "alphadyn/unfolding.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace alphadyn;
using namespace alphadyn::unfolding;
using fourier::FourierSpectrum;
using fourier::Perturbation;
using mesh::BranchId;
using std::numbers::pi;

namespace
{

const Perturbation kSin1{FourierSpectrum{0.0, {{1, 0.0, 1.0}}}};

double closed_form_l0_element(int m, int n, const FourierSpectrum &spec)
{
  const int sign = (m > 0) == (n > 0) ? 1 : -1;
  const int offset = std::abs(m) - sign * std::abs(n);
  const double q = offset == 0 ? spec.a0 : fourier::q_factor(spec, offset);
  return 0.5 * pi * std::sqrt(std::abs(m * n)) * q;
}

}  // namespace

TEST_CASE("gradient kernel examples")
{
  for (double r : {0.01, 0.3, 0.77, 1.0})
  {
    CHECK(gradient_g(0, BranchId(1), BranchId(1), r) == doctest::Approx(pi).epsilon(1e-13));
  }
  for (int l = 0; l <= 4; ++l)
  {
    for (int n = 1; n <= 6; ++n)
    {
      const double k = specfun::bessel_zero(l, n).sqrt_rho;
      CHECK(gradient_g(l, BranchId(n), BranchId(n), 1.0) == doctest::Approx(k).epsilon(1e-9));
      CHECK(gradient_g(l, BranchId(-n), BranchId(-n), 1.0) == doctest::Approx(k).epsilon(1e-9));
    }
  }
  const double k1 = specfun::bessel_zero(1, 1).sqrt_rho;
  const double k2 = specfun::bessel_zero(1, 2).sqrt_rho;
  CHECK(std::abs(gradient_g(1, BranchId(1), BranchId(2), 1.0)) ==
        doctest::Approx(std::sqrt(k1 * k2)).epsilon(1e-9));
  CHECK_THROWS_AS(gradient_g(1, BranchId(1), BranchId(1), 0.0), DomainError);
  CHECK_THROWS_AS(gradient_g(0, BranchId(1), BranchId(1), 1.2), DomainError);
}

TEST_CASE("property: l = 0 kernel is pi sqrt|mn| cos((|m| - e_m e_n |n|) pi r)")
{
  testing::Gen gen(0x9a9a);
  for (int trial = 0; trial < 200; ++trial)
  {
    const int m = gen.nonzero(12);
    const int n = gen.nonzero(12);
    const double r = gen.uniform(1e-3, 1.0);
    const int sign = (m > 0) == (n > 0) ? 1 : -1;
    const double expected = pi * std::sqrt(std::abs(m * n)) * std::cos((std::abs(m) - sign * std::abs(n)) * pi * r);
    CHECK(gradient_g(0, BranchId(m), BranchId(n), r) == doctest::Approx(expected).scale(10.0).epsilon(1e-12));
    CHECK(gradient_g(0, BranchId(m), BranchId(n), r) == gradient_g(0, BranchId(n), BranchId(m), r));
  }
}

TEST_CASE("matrix element examples")
{
  const Perturbation cos2{FourierSpectrum{0.0, {{2, 1.0, 0.0}}}};
  CHECK(perturb_matrix_element(0, BranchId(1), BranchId(5), cos2).value ==
        doctest::Approx(pi * std::sqrt(5.0) / 2).epsilon(1e-12));
  const Perturbation two{FourierSpectrum{2.0, {}}};
  CHECK(perturb_matrix_element(0, BranchId(2), BranchId(2), two).value == doctest::Approx(2 * pi).epsilon(1e-12));
  const Perturbation one{FourierSpectrum{2.0, {}}};
  const double sym = perturb_matrix_element(1, BranchId(1), BranchId(2), one).value;
  const double alt = perturb_matrix_element(1, BranchId(1), BranchId(2), one, ElementForm::kSecondDerivative).value;
  CHECK(std::abs(sym - alt) < 1e-8);
}

TEST_CASE("property: both integral representations agree")
{
  testing::Gen gen(0x10b1);
  for (int trial = 0; trial < 60; ++trial)
  {
    const int l = gen.integer(0, 3);
    const int m = gen.nonzero(8);
    const int n = gen.nonzero(8);
    const Perturbation phi{gen.spectrum(4, 2.0)};
    const double sym = perturb_matrix_element(l, BranchId(m), BranchId(n), phi).value;
    const double alt = perturb_matrix_element(l, BranchId(m), BranchId(n), phi, ElementForm::kSecondDerivative).value;
    const double swapped = perturb_matrix_element(l, BranchId(n), BranchId(m), phi).value;
    INFO("l=" << l << " m=" << m << " n=" << n);
    CHECK(std::abs(sym - alt) <= 1e-8 * std::max(1.0, std::abs(sym)));
    CHECK(sym == swapped);
  }
}

TEST_CASE("property: l = 0 elements match the Q_j closed form")
{
  testing::Gen gen(0x0c0f);
  for (int trial = 0; trial < 80; ++trial)
  {
    const int m = gen.nonzero(12);
    const int n = gen.nonzero(12);
    const auto spec = gen.spectrum(6, 3.0);
    const double got = perturb_matrix_element(0, BranchId(m), BranchId(n), Perturbation(spec)).value;
    CHECK(std::abs(got - closed_form_l0_element(m, n, spec)) <= 1e-9);
  }
}

TEST_CASE("unfolding examples")
{
  const auto dp = mesh::dp_from_node_l0(1, -3);
  const auto res = unfold_dp(dp, kSin1);
  CHECK(res.regime == Regime::kComplexUnfolding);
  const double expected = 4.0 * std::sqrt(2.0) / 5.0;
  CHECK(std::abs(res.lambda1_plus.real()) < 1e-12);
  CHECK(std::abs(res.lambda1_plus.imag()) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(res.lambda1_minus == std::conj(res.lambda1_plus));
  CHECK(expected == doctest::Approx(1.1314).epsilon(1e-4));
  CHECK(res.predicted_plus().real() == doctest::Approx(dp.lambda_node));
  REQUIRE(res.ray_ratio_plus.has_value());
  CHECK(std::abs(*res.ray_ratio_plus) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  const auto zero = unfold_dp(dp, Perturbation{});
  CHECK(zero.regime == Regime::kMarginal);
  CHECK(zero.lambda1_plus == 0.0);
  CHECK(zero.lambda1_minus == 0.0);
  CHECK_FALSE(zero.ray_ratio_plus.has_value());
  CHECK(std::string(to_string(Regime::kComplexUnfolding)) == "complex_unfolding");
}

TEST_CASE("property: same-type DPs unfold real for any perturbation")
{
  testing::Gen gen(0x5a5a);
  for (int trial = 0; trial < 40; ++trial)
  {
    const int l = gen.integer(0, 2);
    int a = gen.integer(1, 7);
    int b = gen.integer(1, 7);
    if (a == b)
    {
      ++b;
    }
    const int s = gen.coin() ? 1 : -1;
    const auto dp = mesh::make_dp(l, BranchId(s * a), BranchId(s * b));
    const Perturbation phi{gen.spectrum(4, 3.0)};
    const auto res = unfold_dp(dp, phi);
    CHECK(res.regime == Regime::kRealUnfolding);
    CHECK(res.lambda1_plus.imag() == 0.0);
    CHECK(res.lambda1_minus.imag() == 0.0);
    CHECK(classify_intersection(dp, phi) == Classification::kReal);
  }
}

TEST_CASE("property: general unfolding agrees with the l = 0 closed form")
{
  testing::Gen gen(0xbeef);
  for (int trial = 0; trial < 60; ++trial)
  {
    const int n = gen.nonzero(6);
    int j = gen.nonzero(12);
    if (n + j == 0 || j == -2 * n)
    {
      j += (j > 0 ? 1 : -1);
    }
    if (n + j == 0)
    {
      j += (j > 0 ? 1 : -1);
    }
    const auto spec = gen.spectrum(5, 2.0);
    const auto [plus, minus] = l0::first_order_shifts(n, j, spec);
    const auto dp = mesh::make_dp(0, BranchId(n), BranchId(n + j));
    const auto res = unfold_dp(dp, Perturbation(spec));
    INFO("n=" << n << " j=" << j);
    const auto close = [](std::complex<double> x, std::complex<double> y) { return std::abs(x - y) < 1e-8; };
    const bool matched = (close(res.lambda1_plus, plus) && close(res.lambda1_minus, minus)) ||
                         (close(res.lambda1_plus, minus) && close(res.lambda1_minus, plus));
    CHECK(matched);
    CHECK(std::abs((res.lambda1_plus + res.lambda1_minus).imag()) < 1e-12);
    if (res.regime == Regime::kComplexUnfolding)
    {
      CHECK(res.lambda1_minus == std::conj(res.lambda1_plus));
      CHECK(res.lambda1_plus.imag() != 0.0);
    }
    const auto cls = classify_intersection(dp, Perturbation(spec));
    CHECK((cls == Classification::kComplex) == (res.regime == Regime::kComplexUnfolding));
  }
}

TEST_CASE("j = -2n nodes unfold with (pi/2)|n| sqrt(a0^2 - a_n^2)")
{
  for (int n = 1; n <= 4; ++n)
  {
    for (double a0 : {0.0, 0.3, 1.5})
    {
      const double an = 0.8;
      const auto dp = mesh::dp_from_node_l0(n, -2 * n);
      const auto res = unfold_dp(dp, Perturbation(FourierSpectrum{a0, {{n, an, 0.0}}}));
      const std::complex<double> root = 0.5 * pi * n * std::sqrt(std::complex<double>(a0 * a0 - an * an));
      CHECK(std::abs(std::abs(res.lambda1_plus - res.lambda1_minus) - 2.0 * std::abs(root)) < 1e-9);
      CHECK(std::abs(res.lambda1_plus + res.lambda1_minus) < 1e-9);
    }
  }
}

TEST_CASE("critical offset: coalescence of the first-order roots and rays")
{
  const double q = fourier::q_factor(FourierSpectrum{0.0, {{1, 0.0, 1.0}}}, -3);
  const double a0c = l0::critical_offset(1, -3, q);
  CHECK(a0c == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0 * 8.0 / (5.0 * pi)).epsilon(1e-14));
  const auto dp = mesh::dp_from_node_l0(1, -3);
  for (double sign : {1.0, -1.0})
  {
    const auto res = unfold_dp(dp, Perturbation(FourierSpectrum{sign * a0c, {{1, 0.0, 1.0}}}));
    // the square root amplifies roundoff in the vanishing discriminant
    CHECK(std::abs(res.lambda1_plus - res.lambda1_minus) < 1e-6);
    CHECK(res.regime == Regime::kMarginal);
    auto discriminant = [&](double a0) {
      const auto r = unfold_dp(dp, Perturbation(FourierSpectrum{sign * a0, {{1, 0.0, 1.0}}}));
      const double diff = r.element_aa + r.element_bb;
      return diff * diff - 4.0 * r.element_ab * r.element_ab;
    };
    double lo = 0.5 * a0c, hi = 1.5 * a0c;
    REQUIRE(discriminant(lo) < 0.0);
    REQUIRE(discriminant(hi) > 0.0);
    for (int it = 0; it < 100; ++it)
    {
      const double mid = 0.5 * (lo + hi);
      (discriminant(mid) < 0.0 ? lo : hi) = mid;
    }
    CHECK(std::abs(0.5 * (lo + hi) - a0c) < 1e-9);
    REQUIRE(res.ray_ratio_plus.has_value());
    CHECK(std::abs(*res.ray_ratio_plus - *res.ray_ratio_minus) < 1e-6);
    const auto below = unfold_dp(dp, Perturbation(FourierSpectrum{sign * a0c * 0.9, {{1, 0.0, 1.0}}}));
    const auto above = unfold_dp(dp, Perturbation(FourierSpectrum{sign * a0c * 1.1, {{1, 0.0, 1.0}}}));
    CHECK(below.regime == Regime::kComplexUnfolding);
    CHECK(above.regime == Regime::kRealUnfolding);
  }
  CHECK(classify_intersection(dp, kSin1) == Classification::kComplex);
  CHECK(classify_intersection(dp, Perturbation(FourierSpectrum{10.0, {{1, 0.0, 1.0}}})) == Classification::kReal);
  CHECK(classify_intersection(dp, Perturbation(FourierSpectrum{6.0, {}})) == Classification::kReal);
}

TEST_CASE("property: first-order shifts scale linearly")
{
  testing::Gen gen(0x5ca1e);
  for (int trial = 0; trial < 20; ++trial)
  {
    const int l = gen.integer(0, 2);
    const int a = gen.integer(1, 5);
    const int b = -gen.integer(1, 5);
    if (a == -b)
    {
      continue;
    }
    const auto dp = mesh::make_dp(l, BranchId(a), BranchId(b));
    const auto spec = gen.spectrum(3, 2.0);
    const double c = gen.uniform(0.1, 5.0);
    const auto base = unfold_dp(dp, Perturbation(spec));
    const auto scaled = unfold_dp(dp, Perturbation(spec.scaled(c)));
    CHECK(std::abs(scaled.lambda1_plus - c * base.lambda1_plus) < 1e-9 * c * (1 + std::abs(base.lambda1_plus)));
    CHECK(std::abs(scaled.lambda1_minus - c * base.lambda1_minus) < 1e-9 * c * (1 + std::abs(base.lambda1_minus)));
    const auto eps = unfold_dp(dp, Perturbation(spec), c);
    CHECK(std::abs(eps.predicted_plus() - (dp.lambda_node + c * base.lambda1_plus)) < 1e-9 * (1 + std::abs(dp.lambda_node)));
  }
}

TEST_CASE("property: ray ratios solve the reduced 2x2 eigenproblem")
{
  testing::Gen gen(0x2a2a);
  for (int trial = 0; trial < 30; ++trial)
  {
    const int l = gen.integer(0, 3);
    const int a = gen.integer(1, 6);
    int b = gen.nonzero(6);
    if (std::abs(b) == a)
    {
      continue;
    }
    const auto dp = mesh::make_dp(l, BranchId(a), BranchId(b));
    const auto res = unfold_dp(dp, Perturbation(gen.spectrum(3, 2.0)));
    const int ea = dp.branch_a.krein_sign();
    const int eb = dp.branch_b.krein_sign();
    const double ka = specfun::bessel_zero(l, dp.branch_a.index()).sqrt_rho;
    const double kb = specfun::bessel_zero(l, dp.branch_b.index()).sqrt_rho;
    for (auto [lambda, ratio] : {std::pair{res.lambda1_plus, res.ray_ratio_plus},
                                 std::pair{res.lambda1_minus, res.ray_ratio_minus}})
    {
      if (!ratio)
      {
        continue;
      }
      // coordinates in the normalized basis: c_a / c_b = ratio * sqrt(k_a / k_b)
      const std::complex<double> c = *ratio * std::sqrt(ka / kb);
      const std::complex<double> row_a = (ea * res.element_aa - lambda) * c + ea * res.element_ab;
      const std::complex<double> row_b = eb * res.element_ab * c + (eb * res.element_bb - lambda);
      const double scale = 1.0 + std::abs(c) * (std::abs(res.element_aa) + std::abs(res.element_ab) + std::abs(lambda));
      CHECK(std::abs(row_a) < 1e-9 * scale);
      CHECK(std::abs(row_b) < 1e-9 * scale);
    }
  }
}

TEST_CASE("l = 0 closed-form estimates")
{
  const double q3 = 8.0 / (5.0 * pi);
  CHECK(l0::critical_offset(1, -3, -q3) == doctest::Approx(0.480169).epsilon(1e-6));
  // n (n + j) = -1, j^2 = 4: factor 1
  CHECK(l0::critical_offset(1, -2, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(l0::critical_offset(1, -3, 0.0) == 0.0);
  CHECK_THROWS_AS(l0::critical_offset(1, 2, 1.0), DomainError);
  CHECK_THROWS_AS(l0::critical_offset(1, 0, 1.0), DomainError);

  CHECK(l0::ep_offset_estimate(0, 2, 1.0).exact == doctest::Approx(0.5));
  CHECK(l0::ep_offset_estimate(1, 3, q3).exact == doctest::Approx(0.240084).epsilon(1e-6));
  const FourierSpectrum sin1{0.0, {{1, 0.0, 1.0}}};
  const auto est = l0::ep_offset_estimate(1, 9, fourier::q_factor(sin1, 9), &sin1);
  REQUIRE(est.asymptotic.has_value());
  CHECK(*est.asymptotic == doctest::Approx(4.0 / (81.0 * pi)).epsilon(1e-14));
  CHECK(std::abs(*est.asymptotic - est.exact) <= 0.15 * est.exact);
  CHECK_FALSE(l0::ep_offset_estimate(1, 9, 1.0, nullptr).asymptotic.has_value());
  const FourierSpectrum mixed{0.0, {{1, 0.3, 1.0}}};
  CHECK_FALSE(l0::ep_offset_estimate(1, 9, 1.0, &mixed).asymptotic.has_value());
  CHECK_THROWS_AS(l0::ep_offset_estimate(2, 3, 1.0), DomainError);

  CHECK(l0::critical_profile_residual(4, 6, 0.0) == doctest::Approx(-5 * pi * pi));
  for (int j = 2; j <= 12; ++j)
  {
    for (int M = -(j - 2); M <= j - 2; M += 2)
    {
      CHECK(l0::critical_profile_residual(M, j, 0.0) < 0.0);
      if (M > 0)
      {
        const double qc = l0::critical_q(M, j);
        CHECK(std::abs(l0::critical_profile_residual(M, j, qc)) < 1e-10 * pi * pi * j * j);
        CHECK(l0::critical_profile_residual(M, j, 1.01 * qc) > 0.0);
      }
    }
  }
  CHECK_THROWS_AS(l0::critical_q(0, 4), DomainError);
  CHECK_THROWS_AS(l0::critical_profile_residual(3, 4, 1.0), DomainError);
}
