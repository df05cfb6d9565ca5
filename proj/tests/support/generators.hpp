// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>
#include "alphadyn/dense.hpp"
#include "alphadyn/fourier.hpp"

namespace alphadyn::testing
{

// Seeded generators for property checks. Each case draws from its own stream so a failing
// case can be reproduced from the printed seed.
class Gen
{
public:
  explicit Gen(std::uint64_t seed) : rng_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  int nonzero(int max_abs)
  {
    const int v = integer(1, max_abs);
    return coin() ? v : -v;
  }

  fourier::FourierSpectrum spectrum(int max_k, double amplitude)
  {
    fourier::FourierSpectrum s;
    s.a0 = uniform(-amplitude, amplitude);
    const int count = integer(1, max_k);
    std::vector<int> ks;
    for (int k = 1; k <= max_k; ++k)
    {
      ks.push_back(k);
    }
    std::shuffle(ks.begin(), ks.end(), rng_);
    for (int i = 0; i < count; ++i)
    {
      s.harmonics.push_back({ks[i], uniform(-amplitude, amplitude), uniform(-amplitude, amplitude)});
    }
    return s;
  }

  DenseMatrix matrix(std::size_t n, double lo, double hi)
  {
    DenseMatrix m(n, n);
    for (auto &v : m.data())
    {
      v = uniform(lo, hi);
    }
    return m;
  }

  /// Strictly decreasing nonzero indices drawn from [-max_abs, max_abs].
  std::vector<int> basis_indices(int max_abs, int count)
  {
    std::vector<int> pool;
    for (int n = max_abs; n >= -max_abs; --n)
    {
      if (n != 0)
      {
        pool.push_back(n);
      }
    }
    std::shuffle(pool.begin(), pool.end(), rng_);
    pool.resize(std::min<std::size_t>(pool.size(), count));
    std::sort(pool.begin(), pool.end(), std::greater<>());
    return pool;
  }

private:
  std::mt19937_64 rng_;
  std::uint64_t seed_;
};

}  // namespace alphadyn::testing
