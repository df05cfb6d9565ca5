// SPDX-License-Identifier: Apache-2.0

#include "alphadyn/fourier.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include "alphadyn/error.hpp"
#include "alphadyn/quadrature.hpp"

namespace alphadyn::fourier
{

namespace
{

constexpr double kPi = std::numbers::pi;

}  // namespace

void FourierSpectrum::validate() const
{
  if (!std::isfinite(a0))
  {
    throw DomainError("Fourier coefficient a0 is not finite");
  }
  std::set<int> seen;
  for (const auto &h : harmonics)
  {
    if (h.k < 1)
    {
      throw DomainError("harmonic number k must be >= 1, got " + std::to_string(h.k));
    }
    if (!seen.insert(h.k).second)
    {
      throw DomainError("duplicate harmonic number k=" + std::to_string(h.k));
    }
    if (!std::isfinite(h.a) || !std::isfinite(h.b))
    {
      throw DomainError("harmonic k=" + std::to_string(h.k) + " has a non-finite coefficient");
    }
  }
}

double FourierSpectrum::evaluate(double r) const
{
  double sum = 0.5 * a0;
  for (const auto &h : harmonics)
  {
    const double t = 2.0 * kPi * h.k * r;
    sum += h.a * std::cos(t) + h.b * std::sin(t);
  }
  return sum;
}

double FourierSpectrum::cos_coefficient(int k) const
{
  for (const auto &h : harmonics)
  {
    if (h.k == k)
    {
      return h.a;
    }
  }
  return 0.0;
}

double FourierSpectrum::sin_coefficient(int k) const
{
  for (const auto &h : harmonics)
  {
    if (h.k == k)
    {
      return h.b;
    }
  }
  return 0.0;
}

int FourierSpectrum::max_k() const
{
  int k = 0;
  for (const auto &h : harmonics)
  {
    k = std::max(k, h.k);
  }
  return k;
}

FourierSpectrum FourierSpectrum::scaled(double c) const
{
  FourierSpectrum out = *this;
  out.a0 *= c;
  for (auto &h : out.harmonics)
  {
    h.a *= c;
    h.b *= c;
  }
  return out;
}

FourierSpectrum operator+(const FourierSpectrum &x, const FourierSpectrum &y)
{
  FourierSpectrum out = x;
  out.a0 += y.a0;
  for (const auto &h : y.harmonics)
  {
    auto it = std::find_if(out.harmonics.begin(), out.harmonics.end(),
                           [&](const Harmonic &g) { return g.k == h.k; });
    if (it == out.harmonics.end())
    {
      out.harmonics.push_back(h);
    }
    else
    {
      it->a += h.a;
      it->b += h.b;
    }
  }
  std::sort(out.harmonics.begin(), out.harmonics.end(),
            [](const Harmonic &p, const Harmonic &q) { return p.k < q.k; });
  return out;
}

FourierSpectrum fourier_coefficients(const std::function<double(double)> &phi, int K)
{
  if (K < 1 || K > 64)
  {
    throw DomainError("harmonic count K must lie in [1, 64], got " + std::to_string(K));
  }
  const auto rule = quadrature::QuadratureRule::for_modes(2 * K);
  const auto &x = rule.nodes();
  const auto &w = rule.weights();
  std::vector<double> values(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    values[i] = phi(x[i]);
  }
  FourierSpectrum spec;
  spec.a0 = 2.0 * quadrature::integrate_values(values, rule);
  spec.harmonics.reserve(K);
  for (int k = 1; k <= K; ++k)
  {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
      const double t = 2.0 * kPi * k * x[i];
      a += w[i] * values[i] * std::cos(t);
      b += w[i] * values[i] * std::sin(t);
    }
    spec.harmonics.push_back({k, 2.0 * a, 2.0 * b});
  }
  return spec;
}

double q_factor(const FourierSpectrum &spec, int j)
{
  if (j == 0)
  {
    throw DomainError("resonance factor Q_j needs j != 0");
  }
  const int aj = std::abs(j);
  if (aj % 2 == 0)
  {
    return spec.cos_coefficient(aj / 2);
  }
  double sum = 0.0;
  for (const auto &h : spec.harmonics)
  {
    sum += h.b * h.k / (4.0 * h.k * h.k - static_cast<double>(j) * j);
  }
  return 8.0 / kPi * sum;
}

double q_factor_quadrature(const std::function<double(double)> &phi, int j, int highest_mode)
{
  const auto rule = quadrature::QuadratureRule::for_modes(std::max(highest_mode, std::abs(j)));
  return 2.0 * quadrature::integrate([&](double r) { return phi(r) * std::cos(j * kPi * r); },
                                     rule);
}

struct SampledProfile::Spline
{
  gsl_spline *spline = nullptr;

  ~Spline() { gsl_spline_free(spline); }
};

SampledProfile::SampledProfile(std::vector<double> values) : values_(std::move(values))
{
  if (values_.size() < 4)
  {
    throw DomainError("sampled profile needs at least 4 values");
  }
  for (double v : values_)
  {
    if (!std::isfinite(v))
    {
      throw DomainError("sampled profile contains a non-finite value");
    }
  }
  const std::size_t n = values_.size();
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  auto spline = std::make_shared<Spline>();
  spline->spline = gsl_spline_alloc(gsl_interp_cspline, n);
  if (spline->spline == nullptr ||
      gsl_spline_init(spline->spline, grid.data(), values_.data(), n) != GSL_SUCCESS)
  {
    throw NumericalError("natural cubic spline setup failed");
  }
  spline_ = std::move(spline);
}

double SampledProfile::evaluate(double r) const
{
  // no accelerator: evaluation stays reentrant
  return gsl_spline_eval(spline_->spline, std::clamp(r, 0.0, 1.0), nullptr);
}

Perturbation::Perturbation(FourierSpectrum spec) : shape_(std::move(spec))
{
  std::get<FourierSpectrum>(shape_).validate();
}

Perturbation::Perturbation(double offset, SampledProfile samples)
  : shape_(Sampled{offset, std::move(samples)})
{
  if (!std::isfinite(offset))
  {
    throw DomainError("profile offset is not finite");
  }
}

double Perturbation::evaluate(double r) const
{
  if (const auto *spec = std::get_if<FourierSpectrum>(&shape_))
  {
    return spec->evaluate(r);
  }
  const auto &s = std::get<Sampled>(shape_);
  return s.offset + s.samples.evaluate(r);
}

int Perturbation::highest_mode() const
{
  if (const auto *spec = std::get_if<FourierSpectrum>(&shape_))
  {
    return 2 * spec->max_k();
  }
  // a spline with n intervals resolves at most about n/2 oscillations
  return static_cast<int>(std::get<Sampled>(shape_).samples.values().size());
}

FourierSpectrum Perturbation::spectrum_or_project(int K) const
{
  if (const auto *spec = std::get_if<FourierSpectrum>(&shape_))
  {
    return *spec;
  }
  return fourier_coefficients([this](double r) { return evaluate(r); }, K);
}

bool Perturbation::is_zero() const
{
  if (const auto *spec = std::get_if<FourierSpectrum>(&shape_))
  {
    return spec->a0 == 0.0 && std::all_of(spec->harmonics.begin(), spec->harmonics.end(),
                                           [](const Harmonic &h) { return h.a == 0.0 && h.b == 0.0; });
  }
  const auto &s = std::get<Sampled>(shape_);
  return s.offset == 0.0 && std::all_of(s.samples.values().begin(), s.samples.values().end(),
                                        [](double v) { return v == 0.0; });
}

std::string Perturbation::describe() const
{
  std::ostringstream out;
  out.precision(17);
  if (const auto *spec = std::get_if<FourierSpectrum>(&shape_))
  {
    out << "fourier(a0=" << spec->a0;
    for (const auto &h : spec->harmonics)
    {
      out << "; k=" << h.k << " a=" << h.a << " b=" << h.b;
    }
    out << ")";
  }
  else
  {
    const auto &s = std::get<Sampled>(shape_);
    out << "samples(n=" << s.samples.values().size() << ", offset=" << s.offset << ")";
  }
  return out.str();
}

}  // namespace alphadyn::fourier
