// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace alphadyn
{

// Invalid arguments or configuration. The CLI maps this to exit code 2.
class DomainError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Iterations that fail to converge or non-finite intermediate values.
// The CLI maps this to exit code 1.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace alphadyn
