// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>
#include "alphadyn/fourier.hpp"
#include "json.hpp"

namespace alphadyn::cli
{

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Profile document:
///
///   { "alpha0": 0, "epsilon_scale": 1, "mean": 0,
///     "harmonics": [{"k": 2, "a": 0, "b": 30}],
///     "samples": {"values": [...]} }
///
/// `mean` is the constant part of phi, i.e. a0 / 2. `harmonics` and `samples` are mutually
/// exclusive; with neither, phi is the constant `mean`. Sample values sit on a uniform grid
/// over [0, 1] including both endpoints.
struct ProfileConfig
{
  double alpha0 = 0.0;
  double epsilon_scale = 1.0;
  double mean = 0.0;
  std::vector<fourier::Harmonic> harmonics;
  std::optional<std::vector<double>> samples;

  static ProfileConfig from_json(const json &doc);
  static ProfileConfig load(const std::string &path);
  json to_json() const;
  fourier::Perturbation perturbation() const;
};

struct RunManifest
{
  std::string command;
  json parameters;
  std::string version;
  json quadrature;
  std::vector<std::string> warnings;

  json to_json() const;
  static RunManifest from_json(const json &doc);
};

struct CommandOutput
{
  std::string text;
  RunManifest manifest;
};

/// Shortest decimal that round-trips; negative zero prints as 0.
std::string format_double(double v);

/// Runs a command from fully resolved parameters. Throws DomainError on bad parameters and
/// NumericalError on numerical failure. `threads` only affects sweep wall time.
CommandOutput execute(const std::string &command, const json &parameters, unsigned threads = 0);

/// Command-line entry point; returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

const char *version();

}  // namespace alphadyn::cli
