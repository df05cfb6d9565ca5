// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <optional>
#include <string>
#include <vector>
#include "alphadyn/cli.hpp"
#include "alphadyn/eig.hpp"
#include "alphadyn/error.hpp"
#include "alphadyn/fourier.hpp"
#include "alphadyn/galerkin.hpp"
#include "alphadyn/mesh.hpp"
#include "alphadyn/specfun.hpp"
#include "alphadyn/unfolding.hpp"

namespace py = pybind11;
using namespace alphadyn;
using namespace pybind11::literals;

namespace
{

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

galerkin::GalerkinBasis make_basis(int l, const py::object &basis)
{
  if (py::isinstance<py::int_>(basis))
  {
    return galerkin::GalerkinBasis::symmetric(l, basis.cast<int>());
  }
  return galerkin::GalerkinBasis(l, basis.cast<std::vector<int>>());
}

py::array_t<double> to_numpy(const DenseMatrix &m)
{
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

DenseMatrix from_numpy(const Array &a)
{
  if (a.ndim() != 2)
  {
    throw DomainError("expected a 2-D array");
  }
  DenseMatrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

py::dict dp_dict(const mesh::DiabolicalPoint &dp)
{
  py::dict d("l"_a = dp.l, "n_a"_a = dp.branch_a.n(), "n_b"_a = dp.branch_b.n(), "alpha0"_a = dp.alpha0_node,
             "lambda"_a = dp.lambda_node, "same_type"_a = dp.same_type);
  d["j"] = dp.parabola_index ? py::cast(*dp.parabola_index) : py::none();
  d["M"] = dp.line_index ? py::cast(*dp.line_index) : py::none();
  return d;
}

py::object optional_complex(const std::optional<std::complex<double>> &z)
{
  return z ? py::cast(*z) : py::none();
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Spectral toolkit for the spherically symmetric alpha^2 dynamo";
  m.attr("__version__") = cli::version();

  auto domain_error = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  (void)domain_error;

  py::class_<fourier::Harmonic>(m, "Harmonic")
      .def(py::init([](int k, double a, double b) { return fourier::Harmonic{k, a, b}; }), "k"_a, "a"_a = 0.0,
           "b"_a = 0.0)
      .def_readwrite("k", &fourier::Harmonic::k)
      .def_readwrite("a", &fourier::Harmonic::a)
      .def_readwrite("b", &fourier::Harmonic::b)
      .def("__repr__", [](const fourier::Harmonic &h) {
        return "Harmonic(k=" + std::to_string(h.k) + ", a=" + cli::format_double(h.a) +
               ", b=" + cli::format_double(h.b) + ")";
      });

  py::class_<fourier::Perturbation>(m, "Perturbation")
      .def(py::init([](double a0, const std::vector<fourier::Harmonic> &harmonics) {
             return fourier::Perturbation(fourier::FourierSpectrum{a0, harmonics});
           }),
           "a0"_a = 0.0, "harmonics"_a = std::vector<fourier::Harmonic>{},
           "phi(r) = a0/2 + sum a_k cos(2 pi k r) + b_k sin(2 pi k r)")
      .def_static(
          "sampled",
          [](const std::vector<double> &values, double offset) {
            return fourier::Perturbation(offset, fourier::SampledProfile(values));
          },
          "values"_a, "offset"_a = 0.0, "Natural cubic spline through values on a uniform grid over [0, 1]")
      .def("__call__", &fourier::Perturbation::evaluate, "r"_a)
      .def("__call__", py::vectorize(&fourier::Perturbation::evaluate), "r"_a)
      .def_property_readonly("highest_mode", &fourier::Perturbation::highest_mode)
      .def_property_readonly("is_fourier", &fourier::Perturbation::is_fourier)
      .def("q_factor", [](const fourier::Perturbation &p, int j) { return fourier::q_factor(p.spectrum_or_project(), j); },
           "j"_a)
      .def("__repr__", &fourier::Perturbation::describe);

  m.def("bessel_zero", [](int l, int n) { return specfun::bessel_zero(l, n).sqrt_rho; }, "l"_a, "n"_a,
        "n-th positive zero of j_l, i.e. sqrt(rho_n)");
  m.def("spherical_bessel_j", py::vectorize(&specfun::spherical_bessel_j), "l"_a, "x"_a);
  m.def(
      "eigenfunction",
      [](int l, int n, const Array &r) {
        const specfun::RadialEigenfunction f(l, n);
        py::array_t<double> u(r.request().shape), du(r.request().shape);
        for (py::ssize_t i = 0; i < r.size(); ++i)
        {
          f.evaluate(r.data()[i], u.mutable_data()[i], du.mutable_data()[i]);
        }
        return py::make_tuple(u, du);
      },
      "l"_a, "n"_a, "r"_a, "Values and derivatives of the radial eigenfunction u_n");
  m.def(
      "branch_eigenvalue", [](int l, int n, double alpha0) { return mesh::branch_eigenvalue(l, mesh::BranchId(n), alpha0); },
      "l"_a, "n"_a, "alpha0"_a);
  m.def(
      "diabolical_points",
      [](int l, int n_max, std::pair<double, double> alpha0_range, std::pair<double, double> lambda_range) {
        py::list out;
        for (const auto &dp : mesh::enumerate_dps(l, n_max, {alpha0_range.first, alpha0_range.second},
                                                  {lambda_range.first, lambda_range.second}))
        {
          out.append(dp_dict(dp));
        }
        return out;
      },
      "l"_a, "n_max"_a, "alpha0_range"_a, "lambda_range"_a);

  m.def(
      "galerkin_matrix",
      [](int l, const py::object &basis, double alpha0, const fourier::Perturbation &phi, double epsilon_scale) {
        const auto g = galerkin::assemble(make_basis(l, basis), fourier::AlphaProfile{alpha0, epsilon_scale, phi});
        return to_numpy(g.entries);
      },
      "l"_a, "basis"_a, "alpha0"_a, "phi"_a, "epsilon_scale"_a = 1.0,
      "Galerkin matrix; basis is an even dimension N or a strictly decreasing list of state numbers");
  m.def(
      "eigenvalues",
      [](const Array &a) {
        const auto s = eig::eigenvalues(from_numpy(a));
        return py::array_t<std::complex<double>>(s.eigenvalues.size(), s.eigenvalues.data());
      },
      "a"_a, "Eigenvalues of a real square matrix, sorted by real part then imaginary part, descending");
  m.def(
      "sweep",
      [](int l, const py::object &basis, const fourier::Perturbation &phi, const std::vector<double> &grid,
         double epsilon_scale, unsigned threads) {
        eig::SweepTable t;
        {
          py::gil_scoped_release release;
          t = eig::sweep(make_basis(l, basis), phi, epsilon_scale, grid, threads);
        }
        const std::size_t n = t.rows.size();
        const std::size_t per = t.basis.size();
        py::array_t<double> alpha0(n), re(n), im(n);
        py::array_t<int> branch(n);
        for (std::size_t i = 0; i < n; ++i)
        {
          alpha0.mutable_data()[i] = t.grid[i / per];
          branch.mutable_data()[i] = t.rows[i].branch_label;
          re.mutable_data()[i] = t.rows[i].re_lambda;
          im.mutable_data()[i] = t.rows[i].im_lambda;
        }
        return py::dict("alpha0"_a = alpha0, "branch"_a = branch, "re"_a = re, "im"_a = im,
                        "step_warnings"_a = t.step_warnings);
      },
      "l"_a, "basis"_a, "phi"_a, "alpha0_grid"_a, "epsilon_scale"_a = 1.0, "threads"_a = 0u,
      "Labelled eigenvalue branches over an alpha0 grid");
  m.def(
      "unfold",
      [](int l, int n_a, int n_b, const fourier::Perturbation &phi, double epsilon_scale) {
        const auto r = unfolding::unfold_dp(mesh::make_dp(l, mesh::BranchId(n_a), mesh::BranchId(n_b)), phi,
                                            epsilon_scale);
        return py::dict("dp"_a = dp_dict(r.dp), "element_aa"_a = r.element_aa, "element_bb"_a = r.element_bb,
                        "element_ab"_a = r.element_ab, "lambda1_plus"_a = r.lambda1_plus,
                        "lambda1_minus"_a = r.lambda1_minus, "ray_ratio_plus"_a = optional_complex(r.ray_ratio_plus),
                        "ray_ratio_minus"_a = optional_complex(r.ray_ratio_minus),
                        "regime"_a = unfolding::to_string(r.regime), "predicted_plus"_a = r.predicted_plus(),
                        "predicted_minus"_a = r.predicted_minus());
      },
      "l"_a, "n_a"_a, "n_b"_a, "phi"_a, "epsilon_scale"_a = 1.0, "First-order unfolding of the crossing of two branches");
  m.def("critical_offset", &unfolding::l0::critical_offset, "n"_a, "j"_a, "q_j"_a,
        "|a0| at which the l = 0 node (n, n + j) switches between real and complex unfolding");

  m.def(
      "run_command",
      [](const std::string &command, const std::string &parameters_json, unsigned threads) {
        const auto out = cli::execute(command, cli::json::parse(parameters_json), threads);
        return py::make_tuple(out.text, out.manifest.to_json().dump(2));
      },
      "command"_a, "parameters_json"_a, "threads"_a = 0u,
      "Runs a CLI command from JSON parameters; returns (output, manifest JSON)");
}
