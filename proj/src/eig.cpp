// SPDX-License-Identifier: Apache-2.0

#include "alphadyn/eig.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>
#include "alphadyn/mesh.hpp"
#include "alphadyn/specfun.hpp"

namespace alphadyn::eig
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 1-based square work array, so the QR sweep reads like the classical formulation.
class Work
{
public:
  explicit Work(const DenseMatrix &a) : n_(static_cast<int>(a.rows())), data_((n_ + 1) * (n_ + 1))
  {
    for (int i = 1; i <= n_; ++i)
    {
      for (int j = 1; j <= n_; ++j)
      {
        (*this)(i, j) = a(i - 1, j - 1);
      }
    }
  }

  int n() const { return n_; }
  double &operator()(int i, int j) { return data_[i * (n_ + 1) + j]; }

private:
  int n_;
  std::vector<double> data_;
};

// Diagonal similarity by powers of two so that row and column norms are comparable.
void balance(Work &a)
{
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const int n = a.n();
  bool done = false;
  while (!done)
  {
    done = true;
    for (int i = 1; i <= n; ++i)
    {
      double r = 0.0;
      double c = 0.0;
      for (int j = 1; j <= n; ++j)
      {
        if (j != i)
        {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c == 0.0 || r == 0.0)
      {
        continue;
      }
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g)
      {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g)
      {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s)
      {
        done = false;
        g = 1.0 / f;
        for (int j = 1; j <= n; ++j)
        {
          a(i, j) *= g;
        }
        for (int j = 1; j <= n; ++j)
        {
          a(j, i) *= f;
        }
      }
    }
  }
}

// Householder reduction to upper Hessenberg form.
void hessenberg(Work &a)
{
  const int n = a.n();
  std::vector<double> ort(n + 1, 0.0);
  for (int m = 2; m <= n - 1; ++m)
  {
    double scale = 0.0;
    for (int i = m; i <= n; ++i)
    {
      scale += std::abs(a(i, m - 1));
    }
    if (scale == 0.0)
    {
      continue;
    }
    double h = 0.0;
    for (int i = n; i >= m; --i)
    {
      ort[i] = a(i, m - 1) / scale;
      h += ort[i] * ort[i];
    }
    const double g = ort[m] > 0.0 ? -std::sqrt(h) : std::sqrt(h);
    h -= ort[m] * g;
    ort[m] -= g;
    for (int j = m; j <= n; ++j)
    {
      double f = 0.0;
      for (int i = n; i >= m; --i)
      {
        f += ort[i] * a(i, j);
      }
      f /= h;
      for (int i = m; i <= n; ++i)
      {
        a(i, j) -= f * ort[i];
      }
    }
    for (int i = 1; i <= n; ++i)
    {
      double f = 0.0;
      for (int j = n; j >= m; --j)
      {
        f += ort[j] * a(i, j);
      }
      f /= h;
      for (int j = m; j <= n; ++j)
      {
        a(i, j) -= f * ort[j];
      }
    }
    a(m, m - 1) = scale * g;
    for (int i = m + 1; i <= n; ++i)
    {
      a(i, m - 1) = 0.0;
    }
  }
}

// Francis implicit double-shift QR on an upper Hessenberg matrix.
Spectrum francis_qr(Work &a)
{
  const int n = a.n();
  std::vector<double> wr(n + 1, 0.0);
  std::vector<double> wi(n + 1, 0.0);
  std::vector<bool> found(n + 1, false);
  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
  {
    for (int j = std::max(i - 1, 1); j <= n; ++j)
    {
      anorm += std::abs(a(i, j));
    }
  }
  const int cap = 40 * n;
  int total = 0;
  int nn = n;
  double t = 0.0;
  auto fail = [&]() {
    std::vector<std::complex<double>> partial;
    for (int i = 1; i <= n; ++i)
    {
      if (found[i])
      {
        partial.emplace_back(wr[i], wi[i]);
      }
    }
    std::ostringstream msg;
    msg << "Francis QR did not converge within " << cap << " iterations (" << partial.size()
        << " of " << n << " eigenvalues deflated)";
    throw ConvergenceError(msg.str(), std::move(partial));
  };

  while (nn >= 1)
  {
    int its = 0;
    int l = 0;
    do
    {
      for (l = nn; l >= 2; --l)
      {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0)
        {
          s = anorm;
        }
        if (std::abs(a(l, l - 1)) <= kEps * s)
        {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn)
      {
        wr[nn] = x + t;
        wi[nn] = 0.0;
        found[nn] = true;
        --nn;
      }
      else
      {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1)
        {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0)
          {
            z = p + (p >= 0.0 ? z : -z);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0)
            {
              wr[nn] = x - w / z;
            }
            wi[nn - 1] = wi[nn] = 0.0;
          }
          else
          {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -z;
            wi[nn] = z;
          }
          found[nn - 1] = found[nn] = true;
          nn -= 2;
        }
        else
        {
          if (total >= cap)
          {
            fail();
          }
          if (its == 10 || its == 20)
          {
            // exceptional shift
            t += x;
            for (int i = 1; i <= nn; ++i)
            {
              a(i, i) -= x;
            }
            const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          ++total;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m)
          {
            z = a(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l)
            {
              break;
            }
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= kEps * v)
            {
              break;
            }
          }
          for (int i = m + 2; i <= nn; ++i)
          {
            a(i, i - 2) = 0.0;
            if (i != m + 2)
            {
              a(i, i - 3) = 0.0;
            }
          }
          for (int k = m; k <= nn - 1; ++k)
          {
            if (k != m)
            {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1)
              {
                r = a(k + 2, k - 1);
              }
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0)
              {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double norm = std::sqrt(p * p + q * q + r * r);
            const double s = p >= 0.0 ? norm : -norm;
            if (s == 0.0)
            {
              continue;
            }
            if (k == m)
            {
              if (l != m)
              {
                a(k, k - 1) = -a(k, k - 1);
              }
            }
            else
            {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j)
            {
              p = a(k, j) + q * a(k + 1, j);
              if (k != nn - 1)
              {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            const int mmin = std::min(nn, k + 3);
            for (int i = l; i <= mmin; ++i)
            {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k != nn - 1)
              {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (l < nn - 1);
  }

  Spectrum spec;
  spec.iterations = total;
  spec.residual_bound = n * kEps * anorm;
  spec.eigenvalues.reserve(n);
  for (int i = 1; i <= n; ++i)
  {
    spec.eigenvalues.emplace_back(wr[i], wi[i]);
  }
  return spec;
}

}  // namespace

Spectrum eigenvalues(const DenseMatrix &a)
{
  if (!a.square() || a.rows() == 0)
  {
    throw DomainError("eigenvalues need a non-empty square matrix");
  }
  for (double v : a.data())
  {
    if (!std::isfinite(v))
    {
      throw DomainError("matrix has non-finite entries");
    }
  }
  Work w(a);
  balance(w);
  hessenberg(w);
  Spectrum spec = francis_qr(w);
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
            [](const std::complex<double> &x, const std::complex<double> &y) {
              if (x.real() != y.real())
              {
                return x.real() > y.real();
              }
              return x.imag() > y.imag();
            });
  return spec;
}

std::vector<int> optimal_assignment(std::span<const double> cost, int n)
{
  if (n < 0 || cost.size() != static_cast<std::size_t>(n) * n)
  {
    throw DomainError("assignment cost matrix must be n x n");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto c = [&](int i, int j) { return cost[(i - 1) * n + (j - 1)]; };
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i)
  {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do
    {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j)
      {
        if (used[j])
        {
          continue;
        }
        const double cur = c(i0, j) - u[i0] - v[j];
        if (cur < minv[j])
        {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta)
        {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j)
      {
        if (used[j])
        {
          u[p[j]] += delta;
          v[j] -= delta;
        }
        else
        {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do
    {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(n, -1);
  for (int j = 1; j <= n; ++j)
  {
    if (p[j] != 0)
    {
      result[p[j] - 1] = j - 1;
    }
  }
  return result;
}

namespace
{

void check_grid(std::span<const double> grid)
{
  for (double g : grid)
  {
    if (!std::isfinite(g))
    {
      throw DomainError("alpha0 grid contains a non-finite value");
    }
  }
  if (grid.size() < 2)
  {
    return;
  }
  const bool increasing = grid[1] > grid[0];
  for (std::size_t k = 1; k < grid.size(); ++k)
  {
    if (increasing ? !(grid[k] > grid[k - 1]) : !(grid[k] < grid[k - 1]))
    {
      throw DomainError("alpha0 grid must be strictly monotone");
    }
  }
}

std::vector<std::vector<std::complex<double>>> solve_grid(const galerkin::GalerkinBasis &basis,
                                                          const DenseMatrix &elements,
                                                          std::span<const double> grid,
                                                          unsigned threads)
{
  const std::size_t count = grid.size();
  std::vector<std::vector<std::complex<double>>> spectra(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < count; k = next++)
    {
      try
      {
        const auto m = galerkin::assemble_from_elements(basis, grid[k], elements);
        spectra[k] = eigenvalues(m.entries).eigenvalues;
      }
      catch (...)
      {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads == 0)
  {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &th : pool)
  {
    th.join();
  }
  for (std::size_t k = 0; k < count; ++k)
  {
    if (errors[k])
    {
      try
      {
        std::rethrow_exception(errors[k]);
      }
      catch (const std::exception &e)
      {
        std::ostringstream msg;
        msg.precision(17);
        msg << "eigensolve failed at alpha0=" << grid[k] << ": " << e.what();
        throw NumericalError(msg.str());
      }
    }
  }
  return spectra;
}

std::vector<std::complex<double>> match(const std::vector<std::complex<double>> &predicted,
                                        const std::vector<std::complex<double>> &values)
{
  const int n = static_cast<int>(values.size());
  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      cost[i * n + j] = std::abs(predicted[i] - values[j]);
    }
  }
  const auto assign = optimal_assignment(cost, n);
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i)
  {
    out[i] = values[assign[i]];
  }
  return out;
}

}  // namespace

SweepTable sweep_elements(const galerkin::GalerkinBasis &basis, const DenseMatrix &elements,
                          std::span<const double> alpha0_grid, unsigned threads)
{
  check_grid(alpha0_grid);
  SweepTable table;
  table.l = basis.l();
  table.basis = basis.indices();
  table.grid.assign(alpha0_grid.begin(), alpha0_grid.end());
  if (alpha0_grid.empty())
  {
    return table;
  }
  const auto spectra = solve_grid(basis, elements, alpha0_grid, threads);
  const std::size_t N = basis.size();
  const auto &idx = basis.indices();

  std::vector<double> slopes(N);
  std::vector<std::complex<double>> predicted(N);
  for (std::size_t i = 0; i < N; ++i)
  {
    const mesh::BranchId b(idx[i]);
    slopes[i] = b.krein_sign() * specfun::bessel_zero(basis.l(), b.index()).sqrt_rho;
    predicted[i] = mesh::branch_eigenvalue(basis.l(), b, alpha0_grid[0]);
  }

  std::vector<std::complex<double>> previous;
  table.rows.reserve(N * alpha0_grid.size());
  for (std::size_t k = 0; k < alpha0_grid.size(); ++k)
  {
    const auto current = match(predicted, spectra[k]);
    if (k > 0)
    {
      double moved = 0.0;
      double scale = 1.0;
      for (std::size_t i = 0; i < N; ++i)
      {
        moved = std::max(moved, std::abs(current[i] - previous[i]));
        scale = std::max(scale, std::abs(previous[i]));
      }
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < N; ++i)
      {
        for (std::size_t j = i + 1; j < N; ++j)
        {
          const double d = std::abs(previous[i] - previous[j]);
          if (d > 1e-9 * scale)
          {
            gap = std::min(gap, d);
          }
        }
      }
      if (moved > 0.5 * gap)
      {
        table.step_warnings.push_back(alpha0_grid[k]);
      }
    }
    for (std::size_t i = 0; i < N; ++i)
    {
      table.rows.push_back({alpha0_grid[k], idx[i], current[i].real(), current[i].imag()});
    }
    if (k + 1 < alpha0_grid.size())
    {
      const double step = alpha0_grid[k + 1] - alpha0_grid[k];
      for (std::size_t i = 0; i < N; ++i)
      {
        if (k == 0)
        {
          predicted[i] = current[i] + slopes[i] * step;
        }
        else
        {
          const double ratio = step / (alpha0_grid[k] - alpha0_grid[k - 1]);
          predicted[i] = current[i] + (current[i] - previous[i]) * ratio;
        }
      }
    }
    previous = current;
  }
  return table;
}

SweepTable sweep(const galerkin::GalerkinBasis &basis, const fourier::Perturbation &phi,
                 double epsilon_scale, std::span<const double> alpha0_grid, unsigned threads)
{
  return sweep_elements(basis, galerkin::perturbation_elements(basis, phi, epsilon_scale),
                        alpha0_grid, threads);
}

}  // namespace alphadyn::eig
