// SPDX-License-Identifier: Apache-2.0

#include "alphadyn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include "alphadyn/error.hpp"
#include "alphadyn/specfun.hpp"

namespace alphadyn::mesh
{

BranchId::BranchId(int n) : n_(n)
{
  if (n == 0)
  {
    throw DomainError("branch state number must be nonzero");
  }
}

double branch_eigenvalue(int l, BranchId branch, double alpha0)
{
  const double k = specfun::bessel_zero(l, branch.index()).sqrt_rho;
  return -k * k + branch.krein_sign() * alpha0 * k;
}

DiabolicalPoint make_dp(int l, BranchId a, BranchId b)
{
  if (a == b)
  {
    throw DomainError("diabolical point needs two distinct branches, got " + std::to_string(a.n()) +
                      " twice");
  }
  if (a < b)
  {
    std::swap(a, b);
  }
  const double ka = specfun::bessel_zero(l, a.index()).sqrt_rho;
  const double kb = specfun::bessel_zero(l, b.index()).sqrt_rho;
  DiabolicalPoint dp;
  dp.l = l;
  dp.branch_a = a;
  dp.branch_b = b;
  dp.alpha0_node = a.krein_sign() * ka + b.krein_sign() * kb;
  dp.lambda_node = a.krein_sign() * b.krein_sign() * ka * kb;
  dp.same_type = a.krein_sign() == b.krein_sign();
  if (l == 0)
  {
    dp.parabola_index = b.n() - a.n();
    dp.line_index = a.n() + b.n();
  }
  return dp;
}

std::vector<DiabolicalPoint> enumerate_dps(int l, int n_max, Interval alpha0_range,
                                           Interval lambda_range)
{
  if (n_max < 2)
  {
    throw DomainError("n_max must be at least 2 for branch crossings");
  }
  std::vector<DiabolicalPoint> out;
  if (alpha0_range.empty() || lambda_range.empty())
  {
    return out;
  }
  // Key: rounded node coordinates plus the unordered branch pair.
  using Key = std::tuple<long long, long long, int, int>;
  std::map<Key, DiabolicalPoint> unique;
  for (int a = -n_max; a <= n_max; ++a)
  {
    for (int b = -n_max; b <= n_max; ++b)
    {
      if (a == 0 || b == 0 || a == b)
      {
        continue;
      }
      DiabolicalPoint dp = make_dp(l, BranchId(a), BranchId(b));
      if (!alpha0_range.contains(dp.alpha0_node) || !lambda_range.contains(dp.lambda_node))
      {
        continue;
      }
      const Key key{std::llround(dp.alpha0_node * 1e8), std::llround(dp.lambda_node * 1e8),
                    dp.branch_a.n(), dp.branch_b.n()};
      unique.emplace(key, dp);
    }
  }
  out.reserve(unique.size());
  for (auto &[key, dp] : unique)
  {
    out.push_back(dp);
  }
  std::sort(out.begin(), out.end(), [](const DiabolicalPoint &x, const DiabolicalPoint &y) {
    return std::tie(x.alpha0_node, x.lambda_node, x.branch_a, x.branch_b) <
           std::tie(y.alpha0_node, y.lambda_node, y.branch_a, y.branch_b);
  });
  return out;
}

std::pair<double, double> dp_parabola_l0(int M, int j)
{
  if ((M - j) % 2 != 0)
  {
    throw DomainError("line index M and parabola index j must have equal parity");
  }
  if (j == 0)
  {
    throw DomainError("parabola index j = 0 makes both branches coincide");
  }
  const int n = (M - j) / 2;
  if (n == 0 || n + j == 0)
  {
    throw DomainError("node (M, j) does not correspond to two nonzero state numbers");
  }
  constexpr double pi = std::numbers::pi;
  return {pi * M, 0.25 * pi * pi * (static_cast<double>(M) * M - static_cast<double>(j) * j)};
}

DiabolicalPoint dp_from_node_l0(int n, int j)
{
  if (n == 0 || n + j == 0 || j == 0)
  {
    throw DomainError("node (n, n+j) needs nonzero, distinct state numbers");
  }
  return make_dp(0, BranchId(n), BranchId(n + j));
}

}  // namespace alphadyn::mesh
