// SPDX-License-Identifier: Apache-2.0

#include "alphadyn/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include "CLI11.hpp"
#include "alphadyn/eig.hpp"
#include "alphadyn/error.hpp"
#include "alphadyn/galerkin.hpp"
#include "alphadyn/mesh.hpp"
#include "alphadyn/quadrature.hpp"
#include "alphadyn/unfolding.hpp"

#ifndef ALPHADYN_VERSION
#define ALPHADYN_VERSION "0.0.0"
#endif

namespace alphadyn::cli
{

const char *version()
{
  return ALPHADYN_VERSION;
}

std::string format_double(double v)
{
  if (v == 0.0)
  {
    return "0";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace
{

double clean(double v)
{
  return v == 0.0 ? 0.0 : v;
}

json complex_json(std::complex<double> z)
{
  return json{{"re", clean(z.real())}, {"im", clean(z.imag())}};
}

template <typename T>
T require(const json &doc, const char *key)
{
  if (!doc.is_object() || !doc.contains(key))
  {
    throw DomainError(std::string("missing parameter '") + key + "'");
  }
  try
  {
    return doc.at(key).get<T>();
  }
  catch (const json::exception &)
  {
    throw DomainError(std::string("parameter '") + key + "' has the wrong type");
  }
}

double require_number(const json &doc, const char *key)
{
  if (!doc.contains(key) || !doc.at(key).is_number())
  {
    throw DomainError(std::string("parameter '") + key + "' must be a number");
  }
  const double v = doc.at(key).get<double>();
  if (!std::isfinite(v))
  {
    throw DomainError(std::string("parameter '") + key + "' must be finite");
  }
  return v;
}

int require_int(const json &doc, const char *key)
{
  if (!doc.contains(key) || !doc.at(key).is_number_integer())
  {
    throw DomainError(std::string("parameter '") + key + "' must be an integer");
  }
  return doc.at(key).get<int>();
}

std::vector<double> linear_grid(double lo, double hi, int steps)
{
  std::vector<double> grid;
  if (steps <= 0 || lo > hi)
  {
    return grid;
  }
  if (steps == 1)
  {
    grid.push_back(lo);
    return grid;
  }
  grid.reserve(steps);
  for (int i = 0; i < steps; ++i)
  {
    grid.push_back(i + 1 == steps ? hi : lo + (hi - lo) * i / (steps - 1));
  }
  return grid;
}

json rule_json(const quadrature::QuadratureRule &rule)
{
  return json{{"scheme", rule.scheme()}, {"order", rule.order()}, {"panels", rule.panels()}};
}

void check_sector(int l)
{
  if (l < 0)
  {
    throw DomainError("l must be non-negative");
  }
}

CommandOutput run_mesh(const json &p)
{
  const int l = require_int(p, "l");
  const int n_max = require_int(p, "n_max");
  check_sector(l);
  if (n_max < 1)
  {
    throw DomainError("n_max must be at least 1");
  }
  const auto grid = linear_grid(require_number(p, "alpha0_min"), require_number(p, "alpha0_max"),
                                require_int(p, "steps"));
  std::ostringstream os;
  os << "alpha0,branch_n,re_lambda,im_lambda\n";
  for (double a : grid)
  {
    for (int s : {1, -1})
    {
      for (int i = 0; i < n_max; ++i)
      {
        const int n = s > 0 ? n_max - i : -(i + 1);
        os << format_double(a) << ',' << n << ','
           << format_double(mesh::branch_eigenvalue(l, mesh::BranchId(n), a)) << ",0\n";
      }
    }
  }
  return {os.str(), {"mesh", p, version(), nullptr, {}}};
}

CommandOutput run_dps(const json &p)
{
  const int l = require_int(p, "l");
  check_sector(l);
  const mesh::Interval alpha{require_number(p, "alpha0_min"), require_number(p, "alpha0_max")};
  const mesh::Interval lambda{require_number(p, "lambda_min"), require_number(p, "lambda_max")};
  const auto dps = mesh::enumerate_dps(l, require_int(p, "n_max"), alpha, lambda);
  std::ostringstream os;
  os << "alpha0,lambda,n_a,n_b,same_type,j,M\n";
  for (const auto &dp : dps)
  {
    os << format_double(dp.alpha0_node) << ',' << format_double(dp.lambda_node) << ','
       << dp.branch_a.n() << ',' << dp.branch_b.n() << ',' << (dp.same_type ? 1 : 0) << ',';
    if (dp.parabola_index)
    {
      os << *dp.parabola_index;
    }
    os << ',';
    if (dp.line_index)
    {
      os << *dp.line_index;
    }
    os << '\n';
  }
  return {os.str(), {"dps", p, version(), nullptr, {}}};
}

mesh::DiabolicalPoint select_dp(const json &p, int l)
{
  const bool node = p.contains("node");
  const bool branches = p.contains("branches");
  if (node == branches)
  {
    throw DomainError("exactly one of node or branches must be given");
  }
  const auto pair = require<std::vector<int>>(p, node ? "node" : "branches");
  if (pair.size() != 2)
  {
    throw DomainError("DP selector needs two integers");
  }
  if (node)
  {
    if (l != 0)
    {
      throw DomainError("--node applies to l = 0 only; use --branches");
    }
    return mesh::dp_from_node_l0(pair[0], pair[1]);
  }
  return mesh::make_dp(l, mesh::BranchId(pair[0]), mesh::BranchId(pair[1]));
}

CommandOutput run_unfold(const json &p)
{
  const int l = require_int(p, "l");
  check_sector(l);
  const auto profile = ProfileConfig::from_json(require<json>(p, "profile"));
  const auto dp = select_dp(p, l);
  const auto phi = profile.perturbation();
  const auto res = unfolding::unfold_dp(dp, phi, profile.epsilon_scale);
  const auto cls = unfolding::classify_intersection(dp, phi);
  auto optional_complex = [](const std::optional<std::complex<double>> &z) -> json {
    return z ? complex_json(*z) : json(nullptr);
  };
  json dp_json{{"l", dp.l},
               {"n_a", dp.branch_a.n()},
               {"n_b", dp.branch_b.n()},
               {"alpha0", clean(dp.alpha0_node)},
               {"lambda", clean(dp.lambda_node)},
               {"same_type", dp.same_type},
               {"j", dp.parabola_index ? json(*dp.parabola_index) : json(nullptr)},
               {"M", dp.line_index ? json(*dp.line_index) : json(nullptr)}};
  json doc{{"dp", dp_json},
           {"epsilon_scale", clean(res.epsilon_scale)},
           {"element_aa", clean(res.element_aa)},
           {"element_bb", clean(res.element_bb)},
           {"element_ab", clean(res.element_ab)},
           {"lambda1_plus", complex_json(res.lambda1_plus)},
           {"lambda1_minus", complex_json(res.lambda1_minus)},
           {"ray_ratio_plus", optional_complex(res.ray_ratio_plus)},
           {"ray_ratio_minus", optional_complex(res.ray_ratio_minus)},
           {"regime", unfolding::to_string(res.regime)},
           {"classification", unfolding::to_string(cls)},
           {"predicted_plus", complex_json(res.predicted_plus())},
           {"predicted_minus", complex_json(res.predicted_minus())}};
  const int modes = dp.branch_a.index() + dp.branch_b.index() + phi.highest_mode();
  return {doc.dump(2) + "\n",
          {"unfold", p, version(), rule_json(quadrature::QuadratureRule::for_modes(modes)), {}}};
}

CommandOutput run_sweep(const json &p, unsigned threads)
{
  const int l = require_int(p, "l");
  check_sector(l);
  const auto profile = ProfileConfig::from_json(require<json>(p, "profile"));
  const auto basis = galerkin::GalerkinBasis::symmetric(l, require_int(p, "n"));
  const auto grid = linear_grid(require_number(p, "alpha0_min"), require_number(p, "alpha0_max"),
                                require_int(p, "steps"));
  const auto phi = profile.perturbation();
  const auto table = eig::sweep(basis, phi, profile.epsilon_scale, grid, threads);
  std::ostringstream os;
  os << "alpha0,branch_n,re_lambda,im_lambda\n";
  for (const auto &row : table.rows)
  {
    os << format_double(row.alpha0) << ',' << row.branch_label << ',' << format_double(row.re_lambda)
       << ',' << format_double(row.im_lambda) << '\n';
  }
  std::vector<std::string> warnings;
  if (!table.step_warnings.empty())
  {
    warnings.push_back(std::to_string(table.step_warnings.size()) +
                       " grid steps exceed half the minimal eigenvalue gap, first at alpha0=" +
                       format_double(table.step_warnings.front()));
  }
  const auto rule = quadrature::QuadratureRule::for_modes(2 * basis.max_index() + phi.highest_mode());
  return {os.str(), {"sweep", p, version(), rule_json(rule), warnings}};
}

CommandOutput run_critical(const json &p)
{
  const int l = require_int(p, "l");
  if (l != 0)
  {
    throw DomainError("critical profile estimates exist for l = 0 only");
  }
  const auto profile = ProfileConfig::from_json(require<json>(p, "profile"));
  const int j_max = require_int(p, "j_max");
  const int m_max = require_int(p, "m_max");
  if (j_max < 2 || m_max < 0)
  {
    throw DomainError("need j_max >= 2 and m_max >= 0");
  }
  const auto phi = profile.perturbation();
  const auto spec = phi.spectrum_or_project().scaled(profile.epsilon_scale);
  json entries = json::array();
  json crossings = json::array();
  json best = nullptr;
  double best_value = -std::numeric_limits<double>::infinity();
  int positive = 0;
  for (int j = 2; j <= j_max; ++j)
  {
    const double q = fourier::q_factor(spec, j);
    std::optional<std::pair<int, double>> prev;
    for (int M = -(j - 2); M <= j - 2; M += 2)
    {
      if (std::abs(M) > m_max)
      {
        continue;
      }
      const double residual = unfolding::l0::critical_profile_residual(M, j, q);
      json entry{{"j", j},
                 {"M", M},
                 {"q", clean(q)},
                 {"residual", clean(residual)},
                 {"critical_q", M > 0 ? json(unfolding::l0::critical_q(M, j)) : json(nullptr)}};
      entries.push_back(entry);
      if (residual > 0.0)
      {
        ++positive;
      }
      if (residual > best_value)
      {
        best_value = residual;
        best = json{{"j", j}, {"M", M}, {"residual", clean(residual)}};
      }
      if (prev && (prev->second > 0.0) != (residual > 0.0))
      {
        crossings.push_back(json{{"j", j}, {"M_below", prev->first}, {"M_above", M}});
      }
      prev = std::make_pair(M, residual);
    }
  }
  json doc{{"profile", profile.to_json()},
           {"j_max", j_max},
           {"m_max", m_max},
           {"entries", entries},
           {"positive_count", positive},
           {"max_residual", best},
           {"zero_crossings", crossings}};
  json quad = nullptr;
  if (!phi.is_fourier())
  {
    quad = rule_json(quadrature::QuadratureRule::for_modes(128));
  }
  return {doc.dump(2) + "\n", {"critical", p, version(), quad, {}}};
}

}  // namespace

ProfileConfig ProfileConfig::from_json(const json &doc)
{
  if (!doc.is_object())
  {
    throw DomainError("profile must be a JSON object");
  }
  static const std::set<std::string> known{"alpha0", "epsilon_scale", "mean", "harmonics",
                                           "samples"};
  for (const auto &[key, value] : doc.items())
  {
    if (!known.contains(key))
    {
      throw DomainError("unknown profile field '" + key + "'");
    }
  }
  ProfileConfig cfg;
  if (doc.contains("alpha0"))
  {
    cfg.alpha0 = require_number(doc, "alpha0");
  }
  if (doc.contains("epsilon_scale"))
  {
    cfg.epsilon_scale = require_number(doc, "epsilon_scale");
  }
  if (doc.contains("mean"))
  {
    cfg.mean = require_number(doc, "mean");
  }
  if (doc.contains("harmonics"))
  {
    const auto &list = doc.at("harmonics");
    if (!list.is_array())
    {
      throw DomainError("harmonics must be an array");
    }
    for (const auto &h : list)
    {
      if (!h.is_object())
      {
        throw DomainError("each harmonic must be an object {k, a, b}");
      }
      for (const auto &[key, value] : h.items())
      {
        if (key != "k" && key != "a" && key != "b")
        {
          throw DomainError("unknown harmonic field '" + key + "'");
        }
      }
      fourier::Harmonic harmonic;
      harmonic.k = require_int(h, "k");
      harmonic.a = h.contains("a") ? require_number(h, "a") : 0.0;
      harmonic.b = h.contains("b") ? require_number(h, "b") : 0.0;
      cfg.harmonics.push_back(harmonic);
    }
  }
  if (doc.contains("samples"))
  {
    const auto &s = doc.at("samples");
    if (!s.is_object() || !s.contains("values") || !s.at("values").is_array() || s.size() != 1)
    {
      throw DomainError("samples must be an object {values: [...]}");
    }
    std::vector<double> values;
    for (const auto &v : s.at("values"))
    {
      if (!v.is_number())
      {
        throw DomainError("sample values must be numbers");
      }
      values.push_back(v.get<double>());
    }
    cfg.samples = std::move(values);
  }
  if (!cfg.harmonics.empty() && cfg.samples)
  {
    throw DomainError("harmonics and samples are mutually exclusive");
  }
  // validates k and sample counts
  (void)cfg.perturbation();
  return cfg;
}

ProfileConfig ProfileConfig::load(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw DomainError("cannot open profile '" + path + "'");
  }
  json doc;
  try
  {
    doc = json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw DomainError("profile '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

json ProfileConfig::to_json() const
{
  json doc{{"alpha0", clean(alpha0)}, {"epsilon_scale", clean(epsilon_scale)}, {"mean", clean(mean)}};
  json list = json::array();
  for (const auto &h : harmonics)
  {
    list.push_back(json{{"k", h.k}, {"a", clean(h.a)}, {"b", clean(h.b)}});
  }
  doc["harmonics"] = list;
  if (samples)
  {
    doc["samples"] = json{{"values", *samples}};
  }
  return doc;
}

fourier::Perturbation ProfileConfig::perturbation() const
{
  if (samples)
  {
    return fourier::Perturbation(mean, fourier::SampledProfile(*samples));
  }
  fourier::FourierSpectrum spec;
  spec.a0 = 2.0 * mean;
  spec.harmonics = harmonics;
  spec.validate();
  return fourier::Perturbation(std::move(spec));
}

json RunManifest::to_json() const
{
  return json{{"command", command},
              {"version", version},
              {"parameters", parameters},
              {"quadrature", quadrature},
              {"warnings", warnings}};
}

RunManifest RunManifest::from_json(const json &doc)
{
  RunManifest m;
  m.command = require<std::string>(doc, "command");
  m.parameters = require<json>(doc, "parameters");
  m.version = require<std::string>(doc, "version");
  if (doc.contains("quadrature"))
  {
    m.quadrature = doc.at("quadrature");
  }
  if (doc.contains("warnings"))
  {
    m.warnings = require<std::vector<std::string>>(doc, "warnings");
  }
  return m;
}

CommandOutput execute(const std::string &command, const json &parameters, unsigned threads)
{
  if (command == "mesh")
  {
    return run_mesh(parameters);
  }
  if (command == "dps")
  {
    return run_dps(parameters);
  }
  if (command == "unfold")
  {
    return run_unfold(parameters);
  }
  if (command == "sweep")
  {
    return run_sweep(parameters, threads);
  }
  if (command == "critical")
  {
    return run_critical(parameters);
  }
  throw DomainError("unknown command '" + command + "'");
}

namespace
{

void write_file(const std::string &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out)
  {
    throw DomainError("cannot write '" + path + "'");
  }
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Spectral toolkit for the spherical alpha^2-dynamo", "alphadyn"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string output;
  unsigned threads = 0;
  int l = 0;
  int n_max = 0;
  int n_basis = 24;
  int steps = 101;
  double a_lo = 0.0, a_hi = 0.0, lam_lo = 0.0, lam_hi = 0.0;
  std::vector<int> node, branches;
  std::string profile_path, manifest_path;
  int j_max = 12;
  int m_max = -1;

  auto add_output = [&](CLI::App *sub) {
    sub->add_option("-o,--output", output, "Output file; a manifest is written next to it");
  };

  auto *mesh_cmd = app.add_subcommand("mesh", "Unperturbed eigenvalue branches over an alpha0 grid");
  mesh_cmd->add_option("--l", l, "Angular degree")->capture_default_str();
  mesh_cmd->add_option("--n-max", n_max, "Highest state number")->required();
  mesh_cmd->add_option("--alpha0-min", a_lo)->required();
  mesh_cmd->add_option("--alpha0-max", a_hi)->required();
  mesh_cmd->add_option("--steps", steps, "Grid points, endpoints included")->capture_default_str();
  add_output(mesh_cmd);

  auto *dps_cmd = app.add_subcommand("dps", "Diabolical points in a window");
  dps_cmd->add_option("--l", l)->capture_default_str();
  dps_cmd->add_option("--n-max", n_max)->required();
  dps_cmd->add_option("--alpha0-min", a_lo)->required();
  dps_cmd->add_option("--alpha0-max", a_hi)->required();
  dps_cmd->add_option("--lambda-min", lam_lo)->required();
  dps_cmd->add_option("--lambda-max", lam_hi)->required();
  add_output(dps_cmd);

  auto *unfold_cmd = app.add_subcommand("unfold", "First-order unfolding of one diabolical point");
  unfold_cmd->add_option("--l", l)->capture_default_str();
  auto *node_opt = unfold_cmd->add_option("--node", node, "n,j (l = 0)")->delimiter(',')->expected(2);
  auto *br_opt = unfold_cmd->add_option("--branches", branches, "n_a,n_b")->delimiter(',')->expected(2);
  node_opt->excludes(br_opt);
  unfold_cmd->add_option("--profile", profile_path, "Profile JSON")->required();
  add_output(unfold_cmd);

  auto *sweep_cmd = app.add_subcommand("sweep", "Galerkin spectra over an alpha0 grid");
  sweep_cmd->add_option("--l", l)->capture_default_str();
  sweep_cmd->add_option("-N,--basis-size", n_basis, "Basis size (even)")->capture_default_str();
  sweep_cmd->add_option("--profile", profile_path)->required();
  sweep_cmd->add_option("--alpha0-min", a_lo)->required();
  sweep_cmd->add_option("--alpha0-max", a_hi)->required();
  sweep_cmd->add_option("--steps", steps)->capture_default_str();
  sweep_cmd->add_option("--threads", threads, "Worker threads, 0 = all cores")->capture_default_str();
  add_output(sweep_cmd);

  auto *critical_cmd = app.add_subcommand("critical", "Critical-profile residuals for l = 0");
  critical_cmd->add_option("--l", l)->capture_default_str();
  critical_cmd->add_option("--profile", profile_path)->required();
  critical_cmd->add_option("--j-max", j_max)->capture_default_str();
  critical_cmd->add_option("--m-max", m_max, "Largest |M|, default j-max");
  add_output(critical_cmd);

  auto *replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path)->required();
  replay_cmd->add_option("--threads", threads)->capture_default_str();
  add_output(replay_cmd);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    std::string command;
    json params;
    auto profile_doc = [&]() { return ProfileConfig::load(profile_path).to_json(); };
    if (*mesh_cmd)
    {
      command = "mesh";
      params = json{{"l", l}, {"n_max", n_max}, {"alpha0_min", a_lo}, {"alpha0_max", a_hi},
                    {"steps", steps}};
    }
    else if (*dps_cmd)
    {
      command = "dps";
      params = json{{"l", l},           {"n_max", n_max},       {"alpha0_min", a_lo},
                    {"alpha0_max", a_hi}, {"lambda_min", lam_lo}, {"lambda_max", lam_hi}};
    }
    else if (*unfold_cmd)
    {
      command = "unfold";
      params = json{{"l", l}};
      if (!node.empty())
      {
        params["node"] = node;
      }
      if (!branches.empty())
      {
        params["branches"] = branches;
      }
      params["profile"] = profile_doc();
    }
    else if (*sweep_cmd)
    {
      command = "sweep";
      params = json{{"l", l},           {"n", n_basis},   {"alpha0_min", a_lo},
                    {"alpha0_max", a_hi}, {"steps", steps}, {"profile", profile_doc()}};
    }
    else if (*critical_cmd)
    {
      command = "critical";
      params = json{{"l", l},
                    {"j_max", j_max},
                    {"m_max", m_max < 0 ? j_max : m_max},
                    {"profile", profile_doc()}};
    }
    else
    {
      std::ifstream in(manifest_path);
      if (!in)
      {
        throw DomainError("cannot open manifest '" + manifest_path + "'");
      }
      json doc;
      try
      {
        doc = json::parse(in);
      }
      catch (const json::parse_error &e)
      {
        throw DomainError(std::string("manifest is not valid JSON: ") + e.what());
      }
      const auto manifest = RunManifest::from_json(doc);
      if (manifest.version != version())
      {
        err << "warning: manifest written by version " << manifest.version << ", running "
            << version() << "\n";
      }
      command = manifest.command;
      params = manifest.parameters;
    }

    const auto result = execute(command, params, threads);
    for (const auto &w : result.manifest.warnings)
    {
      err << "warning: " << w << "\n";
    }
    if (output.empty())
    {
      out << result.text;
    }
    else
    {
      write_file(output, result.text);
      write_file(output + ".manifest.json", result.manifest.to_json().dump(2) + "\n");
    }
    return kExitOk;
  }
  catch (const DomainError &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const NumericalError &e)
  {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace alphadyn::cli
