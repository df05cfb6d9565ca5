// SPDX-License-Identifier: Apache-2.0

#include "alphadyn/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>
#include <vector>
#include "alphadyn/error.hpp"

namespace alphadyn::specfun
{

namespace
{

void check_degree(int l)
{
  if (l < 0)
  {
    throw DomainError("spherical degree l must be non-negative, got " + std::to_string(l));
  }
}

// Scratch storage for j_0 .. j_lmax; stays on the stack for the degrees used in practice.
class OrderBuffer
{
public:
  explicit OrderBuffer(int count)
  {
    if (count <= static_cast<int>(std::size(inline_)))
    {
      view_ = std::span<double>(inline_, count);
    }
    else
    {
      heap_.resize(count);
      view_ = heap_;
    }
  }

  OrderBuffer(const OrderBuffer &) = delete;
  OrderBuffer &operator=(const OrderBuffer &) = delete;

  std::span<double> span() { return view_; }
  double operator[](int i) const { return view_[i]; }

private:
  double inline_[32];
  std::vector<double> heap_;
  std::span<double> view_;
};

void check_radius(double r)
{
  if (!(r >= 0.0 && r <= 1.0))
  {
    std::ostringstream msg;
    msg << "radius must lie in [0, 1], got " << r;
    throw DomainError(msg.str());
  }
}

double series_j(int l, double x)
{
  double prefactor = 1.0;
  for (int k = 1; k <= l; ++k)
  {
    prefactor *= x / (2.0 * k + 1.0);
  }
  const double q = -0.5 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k)
  {
    term *= q / (k * (2.0 * l + 2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum))
    {
      break;
    }
  }
  return prefactor * sum;
}

void miller_sequence(double x, std::span<double> out)
{
  const int lmax = static_cast<int>(out.size()) - 1;
  const int start = lmax + static_cast<int>(x) + 40 + static_cast<int>(std::sqrt(40.0 * (lmax + 1)));
  double above = 0.0;
  double current = 1e-300;
  for (int k = start; k > 0; --k)
  {
    const double below = (2.0 * k + 1.0) / x * current - above;
    above = current;
    current = below;
    if (k - 1 <= lmax)
    {
      out[k - 1] = current;
    }
    if (k <= lmax)
    {
      out[k] = above;
    }
    if (std::abs(current) > 1e250)
    {
      current *= 1e-250;
      above *= 1e-250;
      for (int i = std::max(k - 1, 0); i <= lmax; ++i)
      {
        out[i] *= 1e-250;
      }
    }
  }
  // out[0] and out[1] now hold unnormalized j0, j1; normalize with whichever is larger.
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  double scale = 0.0;
  if (lmax == 0 || std::abs(j0) >= std::abs(j1))
  {
    scale = j0 / out[0];
  }
  else
  {
    scale = j1 / out[1];
  }
  for (double &v : out)
  {
    v *= scale;
  }
}

}  // namespace

void spherical_bessel_sequence(double x, std::span<double> out)
{
  if (out.empty())
  {
    return;
  }
  if (!(x >= 0.0) || !std::isfinite(x))
  {
    std::ostringstream msg;
    msg << "spherical Bessel argument must be finite and non-negative, got " << x;
    throw DomainError(msg.str());
  }
  const int lmax = static_cast<int>(out.size()) - 1;
  if (x == 0.0)
  {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
    return;
  }
  if (x <= 1.0)
  {
    for (int l = 0; l <= lmax; ++l)
    {
      out[l] = series_j(l, x);
    }
    return;
  }
  if (lmax <= x)
  {
    const double s = std::sin(x);
    const double c = std::cos(x);
    out[0] = s / x;
    if (lmax >= 1)
    {
      out[1] = s / (x * x) - c / x;
    }
    for (int l = 1; l < lmax; ++l)
    {
      out[l + 1] = (2.0 * l + 1.0) / x * out[l] - out[l - 1];
    }
    return;
  }
  miller_sequence(x, out);
}

double spherical_bessel_j(int l, double x)
{
  check_degree(l);
  OrderBuffer js(l + 1);
  spherical_bessel_sequence(x, js.span());
  return js[l];
}

double bessel_j_half(int l, double x)
{
  return std::sqrt(2.0 * x / std::numbers::pi) * spherical_bessel_j(l, x);
}

namespace
{

// McMahon expansion for the n-th zero of J_nu.
double mcmahon_guess(int l, int n)
{
  const double nu = l + 0.5;
  const double mu = 4.0 * nu * nu;
  const double beta = (n + 0.5 * nu - 0.25) * std::numbers::pi;
  const double b8 = 8.0 * beta;
  return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
}

// Safeguarded Newton on j_l inside a sign-change bracket [a, b].
double refine_zero(int l, int n, double a, double b)
{
  double fa = spherical_bessel_j(l, a);
  double x = mcmahon_guess(l, n);
  if (!(x > a && x < b))
  {
    x = 0.5 * (a + b);
  }
  for (int it = 0; it < 200; ++it)
  {
    OrderBuffer js(l + 2);
    spherical_bessel_sequence(x, js.span());
    const double f = js[l];
    if (f == 0.0)
    {
      return x;
    }
    if ((f > 0.0) == (fa > 0.0))
    {
      a = x;
      fa = f;
    }
    else
    {
      b = x;
    }
    const double df = l / x * js[l] - js[l + 1];
    double next = x - f / df;
    if (!(next > a && next < b) || !std::isfinite(next))
    {
      next = 0.5 * (a + b);
    }
    const double step = std::abs(next - x);
    x = next;
    if (step <= 1e-15 * x || (b - a) <= 4e-16 * x)
    {
      return x;
    }
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "root iteration for zero n=" << n << " of J_{" << l << "+1/2} did not converge in bracket ["
      << a << ", " << b << "]";
  throw NumericalError(msg.str());
}

class ZeroCache
{
public:
  double get(int l, int n)
  {
    {
      std::shared_lock lock(mutex_);
      auto it = zeros_.find(l);
      if (it != zeros_.end() && static_cast<int>(it->second.size()) >= n)
      {
        return it->second[n - 1];
      }
    }
    std::unique_lock lock(mutex_);
    auto &zeros = zeros_[l];
    while (static_cast<int>(zeros.size()) < n)
    {
      const int k = static_cast<int>(zeros.size()) + 1;
      // Consecutive zeros of J_nu, nu >= 1/2, are at least pi apart, and the first exceeds nu.
      double a = zeros.empty() ? l + 0.5 : zeros.back() + 1.0;
      double fa = spherical_bessel_j(l, a);
      double b = a;
      int steps = 0;
      for (;;)
      {
        b = a + 0.5;
        const double fb = spherical_bessel_j(l, b);
        if (fb == 0.0 || (fb > 0.0) != (fa > 0.0))
        {
          break;
        }
        a = b;
        fa = fb;
        if (++steps > 100000)
        {
          throw NumericalError("no sign change found while bracketing zero n=" + std::to_string(k) +
                               " of J_{" + std::to_string(l) + "+1/2}");
        }
      }
      zeros.push_back(refine_zero(l, k, a, b));
    }
    return zeros[n - 1];
  }

private:
  std::shared_mutex mutex_;
  std::unordered_map<int, std::vector<double>> zeros_;
};

ZeroCache &zero_cache()
{
  static ZeroCache cache;
  return cache;
}

}  // namespace

BesselRoot bessel_zero(int l, int n)
{
  check_degree(l);
  if (n < 1)
  {
    throw DomainError("Bessel zero ordinal must be positive, got " + std::to_string(n));
  }
  return {l, n, zero_cache().get(l, n)};
}

RadialEigenfunction::RadialEigenfunction(int l, int n)
  : l_(l), n_(n), k_(bessel_zero(l, n).sqrt_rho)
{
  const double jnext = spherical_bessel_j(l + 1, k_);
  scale_ = std::sqrt(2.0) / std::abs(jnext);
  normalization_ = scale_ / std::sqrt(2.0 * k_ / std::numbers::pi);
}

void RadialEigenfunction::evaluate(double r, double &u, double &du) const
{
  check_radius(r);
  OrderBuffer js(l_ + 2);
  const double x = k_ * r;
  spherical_bessel_sequence(x, js.span());
  u = scale_ * r * js[l_];
  du = scale_ * ((l_ + 1) * js[l_] - x * js[l_ + 1]);
}

double RadialEigenfunction::value(double r) const
{
  check_radius(r);
  return scale_ * r * spherical_bessel_j(l_, k_ * r);
}

double RadialEigenfunction::derivative(double r) const
{
  double u, du;
  evaluate(r, u, du);
  return du;
}

double RadialEigenfunction::second_derivative(double r) const
{
  check_radius(r);
  if (r == 0.0)
  {
    return l_ == 1 ? scale_ * 2.0 * k_ / 3.0 : 0.0;
  }
  OrderBuffer js(l_ + 3);
  spherical_bessel_sequence(k_ * r, js.span());
  return scale_ * (l_ * (l_ + 1.0) * js[l_] / r - (2.0 * l_ + 3.0) * k_ * js[l_ + 1] +
                   k_ * k_ * r * js[l_ + 2]);
}

double eigenfunction_u(int l, int n, double r)
{
  return RadialEigenfunction(l, n).value(r);
}

double eigenfunction_du(int l, int n, double r)
{
  return RadialEigenfunction(l, n).derivative(r);
}

}  // namespace alphadyn::specfun
