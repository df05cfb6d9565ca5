// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace alphadyn::mesh
{

/// Signed state number n != 0. Positive n labels the positive-type branch
/// lambda_|n|^+ and negative n the negative-type branch lambda_|n|^-.
class BranchId
{
public:
  explicit BranchId(int n);

  int n() const { return n_; }
  int index() const { return n_ > 0 ? n_ : -n_; }
  int krein_sign() const { return n_ > 0 ? 1 : -1; }

  friend bool operator==(BranchId a, BranchId b) { return a.n_ == b.n_; }
  friend auto operator<=>(BranchId a, BranchId b) { return a.n_ <=> b.n_; }

private:
  int n_;
};

struct Interval
{
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool empty() const { return !(lo <= hi); }
};

/// Node of the spectral mesh where two branches of different |n| cross.
///
/// branch_a is the larger signed state number. For l = 0 the node is the (n, n+j) crossing
/// with n = branch_a and j = branch_b - branch_a, and alpha0_node = pi * M, M = 2n + j.
struct DiabolicalPoint
{
  int l = 0;
  BranchId branch_a{1};
  BranchId branch_b{-1};
  double alpha0_node = 0.0;
  double lambda_node = 0.0;
  bool same_type = false;
  std::optional<int> parabola_index;  // j, l = 0 only
  std::optional<int> line_index;      // M, l = 0 only
};

/// lambda = -rho_|n| + sign(n) * alpha0 * sqrt(rho_|n|).
double branch_eigenvalue(int l, BranchId branch, double alpha0);

/// Crossing of two branches; throws DomainError if a == b. The pair (n, -n) meets at alpha0 = 0.
DiabolicalPoint make_dp(int l, BranchId a, BranchId b);

/// All crossings of distinct branches with 1 <= |n|, |m| <= n_max inside the window,
/// deduplicated and sorted by (alpha0_node, lambda_node).
std::vector<DiabolicalPoint> enumerate_dps(int l, int n_max, Interval alpha0_range,
                                           Interval lambda_range);

/// l = 0 node on parabola j and vertical line M: (pi M, pi^2 (M^2 - j^2) / 4).
/// Requires M - j even, j != 0 and both crossing state numbers nonzero.
std::pair<double, double> dp_parabola_l0(int M, int j);

/// l = 0 diabolical point at the (n, n+j) node. The result uses the canonical branch order,
/// so its parabola index may be -j.
DiabolicalPoint dp_from_node_l0(int n, int j);

}  // namespace alphadyn::mesh
