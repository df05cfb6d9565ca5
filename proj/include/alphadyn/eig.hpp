// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>
#include "alphadyn/dense.hpp"
#include "alphadyn/error.hpp"
#include "alphadyn/fourier.hpp"
#include "alphadyn/galerkin.hpp"

namespace alphadyn::eig
{

struct Spectrum
{
  /// Sorted by descending real part; complex pairs appear as (x + iy, x - iy), y > 0.
  std::vector<std::complex<double>> eigenvalues;
  int iterations = 0;
  /// Deflation threshold scale, N * machine epsilon * ||H||.
  double residual_bound = 0.0;
};

/// QR iteration did not converge within the cap; carries the eigenvalues deflated so far.
class ConvergenceError : public NumericalError
{
public:
  ConvergenceError(const std::string &what, std::vector<std::complex<double>> partial)
    : NumericalError(what), partial_(std::move(partial))
  {
  }

  const std::vector<std::complex<double>> &partial_spectrum() const { return partial_; }

private:
  std::vector<std::complex<double>> partial_;
};

/// All eigenvalues of a real square matrix: balancing, Householder reduction to upper
/// Hessenberg form and Francis implicit double-shift QR, capped at 40 N iterations.
Spectrum eigenvalues(const DenseMatrix &a);

/// Minimum-cost perfect matching on an n x n row-major cost matrix; result[row] = column.
std::vector<int> optimal_assignment(std::span<const double> cost, int n);

struct SweepRow
{
  double alpha0 = 0.0;
  int branch_label = 0;
  double re_lambda = 0.0;
  double im_lambda = 0.0;
};

/// Per grid point, exactly N rows, in basis order of their branch labels.
struct SweepTable
{
  int l = 0;
  std::vector<int> basis;
  std::vector<double> grid;
  std::vector<SweepRow> rows;
  /// Grid points where the step exceeded half the smallest eigenvalue gap.
  std::vector<double> step_warnings;
};

/// Eigenvalues of A[alpha0 + epsilon_scale * phi] on a monotone alpha0 grid.
///
/// Labels start as the state numbers of the nearest unperturbed branches at the first grid
/// point and are carried along by optimal assignment between each spectrum and a linear
/// prediction from the previous points. Eigensolves run on `threads` workers (0: hardware
/// concurrency); the output does not depend on the thread count.
SweepTable sweep(const galerkin::GalerkinBasis &basis, const fourier::Perturbation &phi,
                 double epsilon_scale, std::span<const double> alpha0_grid, unsigned threads = 0);

/// Same, for precomputed perturbation elements.
SweepTable sweep_elements(const galerkin::GalerkinBasis &basis, const DenseMatrix &elements,
                          std::span<const double> alpha0_grid, unsigned threads = 0);

}  // namespace alphadyn::eig
