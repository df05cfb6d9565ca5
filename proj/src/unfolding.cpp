// SPDX-License-Identifier: Apache-2.0

#include "alphadyn/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>
#include "alphadyn/error.hpp"
#include "alphadyn/quadrature.hpp"
#include "alphadyn/specfun.hpp"

namespace alphadyn::unfolding
{

namespace
{

constexpr double kPi = std::numbers::pi;

// discriminant tolerance relative to the squared element scale
constexpr double kRegimeTolerance = 1e-10;

double kernel(int l, int sign_product, double km, double kn, double r, double um, double dum,
              double un, double dun)
{
  const double centrifugal = l * (l + 1.0) / (r * r);
  return ((sign_product * km * kn + centrifugal) * um * un + dum * dun) /
         (2.0 * std::sqrt(km * kn));
}

}  // namespace

const char *to_string(Regime regime)
{
  switch (regime)
  {
    case Regime::kRealUnfolding:
      return "real_unfolding";
    case Regime::kComplexUnfolding:
      return "complex_unfolding";
    case Regime::kMarginal:
      return "marginal";
  }
  return "unknown";
}

const char *to_string(Classification c)
{
  switch (c)
  {
    case Classification::kReal:
      return "real";
    case Classification::kComplex:
      return "complex";
    case Classification::kMarginal:
      return "marginal";
  }
  return "unknown";
}

double gradient_g(int l, BranchId m, BranchId n, double r)
{
  if (!(r > 0.0 && r <= 1.0))
  {
    std::ostringstream msg;
    msg << "gradient kernel is evaluated on (0, 1], got r=" << r;
    throw DomainError(msg.str());
  }
  if (n < m)
  {
    std::swap(m, n);
  }
  const specfun::RadialEigenfunction fm(l, m.index());
  const specfun::RadialEigenfunction fn(l, n.index());
  double um, dum, un, dun;
  fm.evaluate(r, um, dum);
  fn.evaluate(r, un, dun);
  return kernel(l, m.krein_sign() * n.krein_sign(), fm.sqrt_rho(), fn.sqrt_rho(), r, um, dum, un,
                dun);
}

PerturbationElement perturb_matrix_element(int l, BranchId m, BranchId n,
                                           const fourier::Perturbation &phi, ElementForm form)
{
  const BranchId m_in = m;
  const BranchId n_in = n;
  if (form == ElementForm::kSymmetric && n < m)
  {
    // same operand order either way, so the element is exactly symmetric
    std::swap(m, n);
  }
  const specfun::RadialEigenfunction fm(l, m.index());
  const specfun::RadialEigenfunction fn(l, n.index());
  const int sign_product = m.krein_sign() * n.krein_sign();
  const double km = fm.sqrt_rho();
  const double kn = fn.sqrt_rho();
  const auto rule =
      quadrature::QuadratureRule::for_modes(m.index() + n.index() + phi.highest_mode());
  const auto &x = rule.nodes();
  std::vector<double> values(x.size());
  for (std::size_t q = 0; q < x.size(); ++q)
  {
    const double r = x[q];
    double um, dum, un, dun;
    fm.evaluate(r, um, dum);
    fn.evaluate(r, un, dun);
    double g = 0.0;
    if (form == ElementForm::kSymmetric)
    {
      g = kernel(l, sign_product, km, kn, r, um, dum, un, dun);
    }
    else
    {
      g = ((km * km + sign_product * km * kn) * um * un + fm.second_derivative(r) * un +
           dum * dun) /
          (2.0 * std::sqrt(km * kn));
    }
    values[q] = phi.evaluate(r) * g;
  }
  return {l, m_in, n_in, quadrature::integrate_values(values, rule)};
}

UnfoldingResult solve_unfolding(const DiabolicalPoint &dp, double element_aa, double element_bb,
                                double element_ab, double epsilon_scale)
{
  UnfoldingResult res;
  res.dp = dp;
  res.epsilon_scale = epsilon_scale;
  res.element_aa = element_aa;
  res.element_bb = element_bb;
  res.element_ab = element_ab;

  const int e = dp.branch_a.krein_sign();
  const int d = dp.branch_b.krein_sign();
  const double scale = element_aa * element_aa + element_bb * element_bb + element_ab * element_ab;
  if (scale == 0.0)
  {
    res.lambda1_plus = res.lambda1_minus = 0.0;
    res.regime = Regime::kMarginal;
    return res;
  }

  const double half_trace = 0.5 * (e * element_aa + d * element_bb);
  const double diff = e * element_aa - d * element_bb;
  const double disc = diff * diff + 4.0 * e * d * element_ab * element_ab;
  std::complex<double> half_root;
  if (disc >= 0.0)
  {
    half_root = 0.5 * std::sqrt(disc);
  }
  else
  {
    half_root = {0.0, 0.5 * std::sqrt(-disc)};
  }
  res.lambda1_plus = half_trace + half_root;
  res.lambda1_minus = half_trace - half_root;

  if (e == d)
  {
    res.regime = Regime::kRealUnfolding;
  }
  else if (std::abs(disc) <= kRegimeTolerance * scale)
  {
    res.regime = Regime::kMarginal;
  }
  else
  {
    res.regime = disc < 0.0 ? Regime::kComplexUnfolding : Regime::kRealUnfolding;
  }

  // Ray ratios in the unnormalized basis u = (1, e sqrt(rho)) u_n, whose Krein norm is
  // 2 e sqrt(rho); matrix elements there carry a factor 2 (rho_x rho_y)^{1/4}.
  const double ka = specfun::bessel_zero(dp.l, dp.branch_a.index()).sqrt_rho;
  const double kb = specfun::bessel_zero(dp.l, dp.branch_b.index()).sqrt_rho;
  const double u_aa = 2.0 * ka * element_aa;
  const double u_bb = 2.0 * kb * element_bb;
  const double u_ab = 2.0 * std::sqrt(ka * kb) * element_ab;
  const double norm_a = 2.0 * e * ka;
  const double norm_b = 2.0 * d * kb;
  const double u_scale = std::abs(u_aa) + std::abs(u_bb) + std::abs(u_ab);
  auto ray = [&](std::complex<double> lambda1) -> std::optional<std::complex<double>> {
    const std::complex<double> den1 = u_aa - norm_a * lambda1;
    const double den2 = u_ab;
    if (std::max(std::abs(den1), std::abs(den2)) <= 1e-12 * u_scale)
    {
      return std::nullopt;
    }
    if (std::abs(den1) >= std::abs(den2))
    {
      return -u_ab / den1;
    }
    return -(u_bb - norm_b * lambda1) / den2;
  };
  res.ray_ratio_plus = ray(res.lambda1_plus);
  res.ray_ratio_minus = ray(res.lambda1_minus);
  return res;
}

UnfoldingResult unfold_dp(const DiabolicalPoint &dp, const fourier::Perturbation &phi,
                          double epsilon_scale)
{
  const double aa = perturb_matrix_element(dp.l, dp.branch_a, dp.branch_a, phi).value;
  const double bb = perturb_matrix_element(dp.l, dp.branch_b, dp.branch_b, phi).value;
  const double ab = perturb_matrix_element(dp.l, dp.branch_a, dp.branch_b, phi).value;
  return solve_unfolding(dp, aa, bb, ab, epsilon_scale);
}

Classification classify_intersection(const DiabolicalPoint &dp, const fourier::Perturbation &phi)
{
  const double aa = perturb_matrix_element(dp.l, dp.branch_a, dp.branch_a, phi).value;
  const double bb = perturb_matrix_element(dp.l, dp.branch_b, dp.branch_b, phi).value;
  const double ab = perturb_matrix_element(dp.l, dp.branch_a, dp.branch_b, phi).value;
  const double scale = aa * aa + bb * bb + ab * ab;
  if (scale == 0.0)
  {
    return Classification::kMarginal;
  }
  if (dp.same_type)
  {
    return Classification::kReal;
  }
  const double offset = 0.5 * (aa + bb);
  // a quarter of the mixed-type discriminant, same relative tolerance as solve_unfolding
  const double margin = offset * offset - ab * ab;
  if (std::abs(margin) <= 0.25 * kRegimeTolerance * scale)
  {
    return Classification::kMarginal;
  }
  return margin < 0.0 ? Classification::kComplex : Classification::kReal;
}

namespace l0
{

namespace
{

void check_lower_half_plane(int M, int j)
{
  if (std::abs(j) < std::abs(M) + 2)
  {
    throw DomainError("estimate needs |j| >= |M| + 2, got M=" + std::to_string(M) +
                      ", j=" + std::to_string(j));
  }
}

}  // namespace

std::pair<std::complex<double>, std::complex<double>> first_order_shifts(
    int n, int j, const fourier::FourierSpectrum &spec)
{
  if (j == 0 || n == 0 || n + j == 0)
  {
    throw DomainError("node (n, n+j) needs nonzero, distinct state numbers");
  }
  const double q = fourier::q_factor(spec, j);
  const double a0 = spec.a0;
  const double jj = static_cast<double>(j) * j;
  const double disc = jj * a0 * a0 + 4.0 * n * (n + static_cast<double>(j)) * q * q;
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
  const double mean = (2.0 * n + j) * a0;
  return {0.25 * kPi * (mean + root), 0.25 * kPi * (mean - root)};
}

double critical_offset(int n, int j, double q_j)
{
  const double nn = n * (n + static_cast<double>(j));
  if (j == 0 || nn >= 0.0)
  {
    throw DomainError("critical offset needs n (n + j) < 0 (opposite Krein types)");
  }
  return std::sqrt(-4.0 * nn / (static_cast<double>(j) * j)) * std::abs(q_j);
}

EpOffsetEstimate ep_offset_estimate(int M, int j, double q_j, const fourier::FourierSpectrum *spec)
{
  check_lower_half_plane(M, j);
  const double ratio = static_cast<double>(M) / j;
  EpOffsetEstimate est;
  est.exact = 0.5 * std::sqrt(1.0 - ratio * ratio) * std::abs(q_j);
  if (spec != nullptr)
  {
    const fourier::Harmonic *sine = nullptr;
    int count = 0;
    for (const auto &h : spec->harmonics)
    {
      if (h.a != 0.0)
      {
        count += 2;
      }
      if (h.b != 0.0)
      {
        sine = &h;
        ++count;
      }
    }
    if (count == 1 && sine != nullptr)
    {
      est.asymptotic = 4.0 * std::abs(sine->b) * sine->k / (kPi * static_cast<double>(j) * j);
    }
  }
  return est;
}

double critical_profile_residual(int M, int j, double q_j)
{
  check_lower_half_plane(M, j);
  const double ratio = static_cast<double>(M) / j;
  return 0.25 * kPi * kPi * (static_cast<double>(M) * M - static_cast<double>(j) * j) +
         0.25 * kPi * M * std::sqrt(1.0 - ratio * ratio) * std::abs(q_j);
}

double critical_q(int M, int j)
{
  check_lower_half_plane(M, j);
  if (M <= 0)
  {
    throw DomainError("residual has a zero only for M > 0");
  }
  const double d = static_cast<double>(j) * j - static_cast<double>(M) * M;
  return kPi * d * std::abs(j) / (M * std::sqrt(d));
}

}  // namespace l0

}  // namespace alphadyn::unfolding
