// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include "alphadyn/cli.hpp"

int main(int argc, char **argv)
{
  return alphadyn::cli::run(argc, argv, std::cout, std::cerr);
}
