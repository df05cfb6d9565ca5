// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include "alphadyn/fourier.hpp"
#include "alphadyn/mesh.hpp"

namespace alphadyn::unfolding
{

using mesh::BranchId;
using mesh::DiabolicalPoint;

/// Perturbation-gradient kernel g_mn^l(r) in the normalized Krein basis,
///
///   g = [(e_m e_n sqrt(rho_m rho_n) + l(l+1)/r^2) u_m u_n + u_m' u_n'] / (2 (rho_m rho_n)^{1/4})
///
/// with the canonical-sign eigenfunctions of specfun. Off-diagonal values are sign-gauge
/// dependent; g_nn and all eigenvalue-level quantities are not. r = 0 is rejected.
double gradient_g(int l, BranchId m, BranchId n, double r);

/// Quadrature representation used for a matrix element.
enum class ElementForm
{
  kSymmetric,         // (e e' sqrt(rho rho') + l(l+1)/r^2) u u' + u_m' u_n'
  kSecondDerivative,  // (rho_m + e e' sqrt(rho rho')) u u' + u_m'' u_n + u_m' u_n'
};

struct PerturbationElement
{
  int l = 0;
  BranchId m{1};
  BranchId n{1};
  double value = 0.0;
};

/// [B v_m, v_n] = integral of phi(r) g_mn^l(r) over (0, 1).
PerturbationElement perturb_matrix_element(int l, BranchId m, BranchId n,
                                           const fourier::Perturbation &phi,
                                           ElementForm form = ElementForm::kSymmetric);

enum class Regime
{
  kRealUnfolding,
  kComplexUnfolding,
  kMarginal,
};

const char *to_string(Regime regime);

/// First-order unfolding of a diabolical point. Subscript a refers to dp.branch_a (Krein sign
/// e), b to dp.branch_b (sign d).
struct UnfoldingResult
{
  DiabolicalPoint dp;
  double epsilon_scale = 1.0;
  double element_aa = 0.0;
  double element_bb = 0.0;
  double element_ab = 0.0;
  std::complex<double> lambda1_plus;
  std::complex<double> lambda1_minus;
  /// gamma_1 / gamma_2 of the zeroth-order ray gamma_1 u_a + gamma_2 u_b, with
  /// u = (1, e sqrt(rho))^T u_n unnormalized. Empty when both representations degenerate.
  std::optional<std::complex<double>> ray_ratio_plus;
  std::optional<std::complex<double>> ray_ratio_minus;
  Regime regime = Regime::kMarginal;

  std::complex<double> predicted_plus() const { return dp.lambda_node + epsilon_scale * lambda1_plus; }
  std::complex<double> predicted_minus() const { return dp.lambda_node + epsilon_scale * lambda1_minus; }
};

/// Roots of lambda1^2 - lambda1 (e B_aa + d B_bb) + e d (B_aa B_bb - B_ab^2) = 0 from given
/// normalized-basis matrix elements.
UnfoldingResult solve_unfolding(const DiabolicalPoint &dp, double element_aa, double element_bb,
                                double element_ab, double epsilon_scale = 1.0);

/// Matrix elements by quadrature, then solve_unfolding.
UnfoldingResult unfold_dp(const DiabolicalPoint &dp, const fourier::Perturbation &phi,
                          double epsilon_scale = 1.0);

enum class Classification
{
  kReal,
  kComplex,
  kMarginal,
};

const char *to_string(Classification c);

/// Complex iff the branches have opposite Krein type and
/// (1/2 int (g_aa + g_bb) phi)^2 < (int g_ab phi)^2. Agrees with unfold_dp's regime.
Classification classify_intersection(const DiabolicalPoint &dp, const fourier::Perturbation &phi);

/// Closed forms for the l = 0 sector, node (n, n+j), alpha0 = pi (2n + j).
namespace l0
{

/// lambda1 = (pi/4) [(2n+j) a0 +- sqrt(j^2 a0^2 + 4 n (n+j) Q_j^2)].
std::pair<std::complex<double>, std::complex<double>> first_order_shifts(
    int n, int j, const fourier::FourierSpectrum &spec);

/// |a0(c)| = sqrt(-4 n (n+j) / j^2) |Q_j|; needs n (n+j) < 0.
double critical_offset(int n, int j, double q_j);

struct EpOffsetEstimate
{
  double exact = 0.0;
  /// 4 |b_k| k / (pi j^2), only for spectra with a single sine harmonic.
  std::optional<double> asymptotic;
};

/// |Delta alpha_e| = (1/2) sqrt(1 - M^2/j^2) |Q_j|; needs |j| >= |M| + 2.
EpOffsetEstimate ep_offset_estimate(int M, int j, double q_j,
                                    const fourier::FourierSpectrum *spec = nullptr);

/// (pi^2/4)(M^2 - j^2) + (pi/4) M sqrt(1 - M^2/j^2) |Q_j|; needs |j| >= |M| + 2.
double critical_profile_residual(int M, int j, double q_j);

/// |Q_j| at which the residual vanishes, pi (j^2 - M^2) |j| / (M sqrt(j^2 - M^2)); needs M > 0.
double critical_q(int M, int j);

}  // namespace l0

}  // namespace alphadyn::unfolding
