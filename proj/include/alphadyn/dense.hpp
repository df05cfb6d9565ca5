// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace alphadyn
{

/// Row-major dense real matrix.
class DenseMatrix
{
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
  {
  }

  static DenseMatrix identity(std::size_t n)
  {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
      m(i, i) = 1.0;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double> &data() const { return data_; }
  std::vector<double> &data() { return data_; }

  DenseMatrix transpose() const
  {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
    {
      for (std::size_t j = 0; j < cols_; ++j)
      {
        t(j, i) = (*this)(i, j);
      }
    }
    return t;
  }

  friend DenseMatrix operator*(const DenseMatrix &a, const DenseMatrix &b)
  {
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
    {
      for (std::size_t k = 0; k < a.cols_; ++k)
      {
        const double aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j)
        {
          c(i, j) += aik * b(k, j);
        }
      }
    }
    return c;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace alphadyn
