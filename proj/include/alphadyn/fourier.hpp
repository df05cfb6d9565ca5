// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace alphadyn::fourier
{

struct Harmonic
{
  int k = 1;
  double a = 0.0;  // cos(2 pi k r)
  double b = 0.0;  // sin(2 pi k r)
};

/// phi(r) = a0/2 + sum_k [a_k cos(2 pi k r) + b_k sin(2 pi k r)].
///
/// a0 is twice the mean of phi. Harmonic numbers are distinct and >= 1.
struct FourierSpectrum
{
  double a0 = 0.0;
  std::vector<Harmonic> harmonics;

  /// Throws DomainError on k < 1, duplicate k or non-finite coefficients.
  void validate() const;

  double evaluate(double r) const;
  double cos_coefficient(int k) const;
  double sin_coefficient(int k) const;
  int max_k() const;

  FourierSpectrum scaled(double c) const;
  friend FourierSpectrum operator+(const FourierSpectrum &x, const FourierSpectrum &y);
};

/// a0, a_1..a_K, b_1..b_K by quadrature.
FourierSpectrum fourier_coefficients(const std::function<double(double)> &phi, int K);

/// Resonance factor Q_j for j != 0: a_{|j|/2} for even j, (8/pi) sum_k b_k k / (4k^2 - j^2) for
/// odd j. Equals 2 * integral of phi(r) cos(j pi r) over (0, 1).
double q_factor(const FourierSpectrum &spec, int j);

/// 2 * integral of phi(r) cos(j pi r) by quadrature; matches q_factor for band-limited phi
/// and works for any integrable phi.
double q_factor_quadrature(const std::function<double(double)> &phi, int j, int highest_mode);

/// Natural cubic spline through samples on the uniform grid r_i = i / (size - 1).
class SampledProfile
{
public:
  explicit SampledProfile(std::vector<double> values);

  const std::vector<double> &values() const { return values_; }
  double evaluate(double r) const;

private:
  struct Spline;
  std::vector<double> values_;
  std::shared_ptr<const Spline> spline_;
};

/// The perturbation shape phi(r): either a Fourier spectrum, or a constant offset plus a
/// sampled spline.
class Perturbation
{
public:
  Perturbation() = default;
  Perturbation(FourierSpectrum spec);
  Perturbation(double offset, SampledProfile samples);

  double evaluate(double r) const;

  /// Mode count used to size quadrature rules, in units of pi r.
  int highest_mode() const;

  bool is_fourier() const { return std::holds_alternative<FourierSpectrum>(shape_); }
  const FourierSpectrum *spectrum() const { return std::get_if<FourierSpectrum>(&shape_); }

  /// The Fourier spectrum if known exactly, otherwise coefficients up to K by quadrature.
  FourierSpectrum spectrum_or_project(int K = 64) const;

  bool is_zero() const;
  std::string describe() const;

private:
  struct Sampled
  {
    double offset = 0.0;
    SampledProfile samples;
  };
  std::variant<FourierSpectrum, Sampled> shape_;
};

/// alpha(r) = alpha0 + epsilon_scale * phi(r).
struct AlphaProfile
{
  double alpha0 = 0.0;
  double epsilon_scale = 1.0;
  Perturbation phi;

  double value(double r) const { return alpha0 + delta(r); }
  double delta(double r) const { return epsilon_scale * phi.evaluate(r); }
};

}  // namespace alphadyn::fourier
