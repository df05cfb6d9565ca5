// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>
#include "alphadyn/dense.hpp"
#include "alphadyn/fourier.hpp"

namespace alphadyn::galerkin
{

/// Ordered state numbers n_1 > n_2 > ... > n_N (all nonzero) spanning the Krein subspace.
class GalerkinBasis
{
public:
  GalerkinBasis(int l, std::vector<int> indices);

  /// {N/2, ..., 1, -1, ..., -N/2}; N must be even and positive.
  static GalerkinBasis symmetric(int l, int N);

  int l() const { return l_; }
  const std::vector<int> &indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  int n_plus() const;
  int n_minus() const;
  int max_index() const;

  /// Diagonal of the Pontryagin metric, sign(n_i).
  std::vector<int> eta() const;

private:
  int l_;
  std::vector<int> indices_;
};

/// A[alpha] = eta^{-1} Atilde[alpha] on the basis, with Atilde real symmetric.
struct GalerkinMatrix
{
  GalerkinBasis basis;
  std::vector<int> eta;
  DenseMatrix entries;
  double alpha0 = 0.0;
  std::string profile_tag;
};

/// Symmetric matrix S_mn = integral of Delta alpha(r) g_mn^l(r) over (0, 1), with
/// Delta alpha = epsilon_scale * phi. Only the upper triangle is integrated and mirrored.
DenseMatrix perturbation_elements(const GalerkinBasis &basis, const fourier::Perturbation &phi,
                                  double epsilon_scale = 1.0);

/// A_mn = lambda_m(alpha0) delta_mn + sign(m) S_mn for precomputed S.
GalerkinMatrix assemble_from_elements(const GalerkinBasis &basis, double alpha0,
                                      const DenseMatrix &elements, std::string profile_tag = {});

/// A_mn = lambda_m(alpha0) delta_mn + sign(m) integral of Delta alpha g_mn^l.
GalerkinMatrix assemble(const GalerkinBasis &basis, const fourier::AlphaProfile &profile);

/// l = 0 closed form A_mn = lambda_m delta_mn + sign(m) (pi/2) sqrt|mn| Q_{m-n}, Q_0 = a0, where
/// delta_spec is the spectrum of Delta alpha itself.
GalerkinMatrix assemble_l0_closed_form(const GalerkinBasis &basis, double alpha0,
                                       const fourier::FourierSpectrum &delta_spec);

/// sum_i eta_i conj(c_i) d_i.
std::complex<double> krein_product(std::span<const std::complex<double>> c,
                                   std::span<const std::complex<double>> d,
                                   std::span<const int> eta);

/// max |A - eta A^T eta| over all entries.
double pseudo_symmetry_residual(const GalerkinMatrix &m);

}  // namespace alphadyn::galerkin
