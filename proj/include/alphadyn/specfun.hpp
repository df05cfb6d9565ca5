// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace alphadyn::specfun
{

/// Spherical-harmonic degree of a radial sector.
struct SectorConfig
{
  int l = 0;
};

/// Spherical Bessel function j_l(x) for x >= 0.
double spherical_bessel_j(int l, double x);

/// Fills out[k] = j_k(x) for k = 0 .. out.size()-1.
///
/// Uses the power series for x <= 1, upward recurrence from the trigonometric seeds when
/// every requested order is at most x, and Miller's downward recurrence otherwise.
void spherical_bessel_sequence(double x, std::span<double> out);

/// Cylinder Bessel function of half-integer order, J_{l+1/2}(x) = sqrt(2x/pi) j_l(x).
double bessel_j_half(int l, double x);

/// n-th positive zero of J_{l+1/2}; sqrt_rho squared is the eigenvalue rho_n of
/// -d^2/dr^2 + l(l+1)/r^2 on (0,1) with Dirichlet conditions.
struct BesselRoot
{
  int l = 0;
  int n = 1;
  double sqrt_rho = 0.0;

  double rho() const { return sqrt_rho * sqrt_rho; }
};

/// Zeros are computed once per degree and cached; the cache is safe for concurrent use.
/// Throws DomainError for l < 0 or n < 1 and NumericalError if the root iteration stalls.
BesselRoot bessel_zero(int l, int n);

/// Normalized Riccati-Bessel eigenfunction
///
///   u_n(r) = N_n sqrt(r) J_{l+1/2}(sqrt(rho_n) r),  N_n = sqrt(2) / |J_{l+3/2}(sqrt(rho_n))|
///
/// with unit L2(0,1) norm. The sign is fixed so that u_n > 0 just right of the origin; this
/// differs from the J_{l+3/2} normalization without absolute value by (-1)^(n+1).
class RadialEigenfunction
{
public:
  RadialEigenfunction(int l, int n);

  int l() const { return l_; }
  int n() const { return n_; }
  double sqrt_rho() const { return k_; }
  double rho() const { return k_ * k_; }
  double normalization() const { return normalization_; }

  double value(double r) const;
  double derivative(double r) const;

  /// Closed-form second derivative from Bessel recurrences (does not use the ODE).
  double second_derivative(double r) const;

  /// Value and first derivative with a single Bessel evaluation.
  void evaluate(double r, double &u, double &du) const;

private:
  int l_;
  int n_;
  double k_;
  double normalization_;
  // u(r) = scale_ * r * j_l(k r)
  double scale_;
};

double eigenfunction_u(int l, int n, double r);
double eigenfunction_du(int l, int n, double r);

}  // namespace alphadyn::specfun
