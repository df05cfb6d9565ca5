// SPDX-License-Identifier: Apache-2.0

#include "alphadyn/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include "alphadyn/error.hpp"
#include "alphadyn/mesh.hpp"
#include "alphadyn/quadrature.hpp"
#include "alphadyn/specfun.hpp"

namespace alphadyn::galerkin
{

GalerkinBasis::GalerkinBasis(int l, std::vector<int> indices) : l_(l), indices_(std::move(indices))
{
  if (l < 0)
  {
    throw DomainError("spherical degree l must be non-negative");
  }
  if (indices_.empty())
  {
    throw DomainError("Galerkin basis must not be empty");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i)
  {
    if (indices_[i] == 0)
    {
      throw DomainError("Galerkin basis contains state number 0");
    }
    if (i > 0 && !(indices_[i - 1] > indices_[i]))
    {
      throw DomainError("Galerkin basis must be strictly decreasing");
    }
  }
}

GalerkinBasis GalerkinBasis::symmetric(int l, int N)
{
  if (N < 2 || N % 2 != 0)
  {
    throw DomainError("symmetric basis needs an even dimension N >= 2, got " + std::to_string(N));
  }
  std::vector<int> idx;
  idx.reserve(N);
  for (int n = N / 2; n >= 1; --n)
  {
    idx.push_back(n);
  }
  for (int n = 1; n <= N / 2; ++n)
  {
    idx.push_back(-n);
  }
  return GalerkinBasis(l, std::move(idx));
}

int GalerkinBasis::n_plus() const
{
  return static_cast<int>(std::count_if(indices_.begin(), indices_.end(), [](int n) { return n > 0; }));
}

int GalerkinBasis::n_minus() const
{
  return static_cast<int>(indices_.size()) - n_plus();
}

int GalerkinBasis::max_index() const
{
  int m = 0;
  for (int n : indices_)
  {
    m = std::max(m, std::abs(n));
  }
  return m;
}

std::vector<int> GalerkinBasis::eta() const
{
  std::vector<int> e(indices_.size());
  std::transform(indices_.begin(), indices_.end(), e.begin(), [](int n) { return n > 0 ? 1 : -1; });
  return e;
}

DenseMatrix perturbation_elements(const GalerkinBasis &basis, const fourier::Perturbation &phi,
                                  double epsilon_scale)
{
  const int l = basis.l();
  const std::size_t N = basis.size();
  const auto rule = quadrature::QuadratureRule::for_modes(2 * basis.max_index() + phi.highest_mode());
  const auto &x = rule.nodes();
  const auto &w = rule.weights();
  const std::size_t Q = x.size();

  // u, u' tables per distinct |n|
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> tables;
  std::map<int, double> wavenumber;
  for (int n : basis.indices())
  {
    const int k = std::abs(n);
    if (tables.count(k))
    {
      continue;
    }
    const specfun::RadialEigenfunction f(l, k);
    auto &[u, du] = tables[k];
    u.resize(Q);
    du.resize(Q);
    for (std::size_t q = 0; q < Q; ++q)
    {
      f.evaluate(x[q], u[q], du[q]);
    }
    wavenumber[k] = f.sqrt_rho();
  }
  std::vector<double> weighted_phi(Q);
  std::vector<double> centrifugal(Q);
  for (std::size_t q = 0; q < Q; ++q)
  {
    const double v = epsilon_scale * phi.evaluate(x[q]);
    if (!std::isfinite(v))
    {
      throw NumericalError("alpha perturbation is not finite at r=" + std::to_string(x[q]));
    }
    weighted_phi[q] = w[q] * v;
    centrifugal[q] = l * (l + 1.0) / (x[q] * x[q]);
  }

  DenseMatrix s(N, N);
  const auto &idx = basis.indices();
  for (std::size_t i = 0; i < N; ++i)
  {
    const int ki = std::abs(idx[i]);
    const auto &[ui, dui] = tables[ki];
    const double kri = wavenumber[ki];
    for (std::size_t j = i; j < N; ++j)
    {
      const int kj = std::abs(idx[j]);
      const auto &[uj, duj] = tables[kj];
      const double krj = wavenumber[kj];
      const double sign_product = (idx[i] > 0) == (idx[j] > 0) ? 1.0 : -1.0;
      const double kk = sign_product * kri * krj;
      double sum = 0.0;
      for (std::size_t q = 0; q < Q; ++q)
      {
        sum += weighted_phi[q] * ((kk + centrifugal[q]) * ui[q] * uj[q] + dui[q] * duj[q]);
      }
      const double value = sum / (2.0 * std::sqrt(kri * krj));
      s(i, j) = value;
      s(j, i) = value;
    }
  }
  return s;
}

GalerkinMatrix assemble_from_elements(const GalerkinBasis &basis, double alpha0,
                                      const DenseMatrix &elements, std::string profile_tag)
{
  const std::size_t N = basis.size();
  if (elements.rows() != N || elements.cols() != N)
  {
    throw DomainError("perturbation element matrix does not match the basis dimension");
  }
  GalerkinMatrix m{basis, basis.eta(), DenseMatrix(N, N), alpha0, std::move(profile_tag)};
  for (std::size_t i = 0; i < N; ++i)
  {
    const double sign = m.eta[i];
    for (std::size_t j = 0; j < N; ++j)
    {
      m.entries(i, j) = sign * elements(i, j);
    }
    m.entries(i, i) += mesh::branch_eigenvalue(basis.l(), mesh::BranchId(basis.indices()[i]), alpha0);
  }
  return m;
}

GalerkinMatrix assemble(const GalerkinBasis &basis, const fourier::AlphaProfile &profile)
{
  return assemble_from_elements(basis, profile.alpha0,
                                perturbation_elements(basis, profile.phi, profile.epsilon_scale),
                                profile.phi.describe());
}

GalerkinMatrix assemble_l0_closed_form(const GalerkinBasis &basis, double alpha0,
                                       const fourier::FourierSpectrum &delta_spec)
{
  if (basis.l() != 0)
  {
    throw DomainError("closed-form assembly exists for l = 0 only");
  }
  constexpr double pi = std::numbers::pi;
  const std::size_t N = basis.size();
  const auto &idx = basis.indices();
  GalerkinMatrix m{basis, basis.eta(), DenseMatrix(N, N), alpha0, "closed-form"};
  for (std::size_t i = 0; i < N; ++i)
  {
    const double mi = idx[i];
    for (std::size_t j = 0; j < N; ++j)
    {
      const int offset = idx[i] - idx[j];
      const double q = offset == 0 ? delta_spec.a0 : fourier::q_factor(delta_spec, offset);
      m.entries(i, j) = m.eta[i] * 0.5 * pi * std::sqrt(std::abs(mi * idx[j])) * q;
    }
    m.entries(i, i) += -(pi * mi) * (pi * mi) + alpha0 * pi * mi;
  }
  return m;
}

std::complex<double> krein_product(std::span<const std::complex<double>> c,
                                   std::span<const std::complex<double>> d,
                                   std::span<const int> eta)
{
  if (c.size() != d.size() || c.size() != eta.size())
  {
    throw DomainError("Krein product operands have mismatched dimensions");
  }
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
  {
    sum += static_cast<double>(eta[i]) * std::conj(c[i]) * d[i];
  }
  return sum;
}

double pseudo_symmetry_residual(const GalerkinMatrix &m)
{
  const std::size_t N = m.entries.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i)
  {
    for (std::size_t j = 0; j < N; ++j)
    {
      const double mirrored = m.eta[i] * m.entries(j, i) * m.eta[j];
      worst = std::max(worst, std::abs(m.entries(i, j) - mirrored));
    }
  }
  return worst;
}

}  // namespace alphadyn::galerkin
