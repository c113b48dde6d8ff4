#include "sgmeta/cli.hpp"
#include "sgmeta/elliptic.hpp"
#include "sgmeta/errors.hpp"
#include "sgmeta/ldp_path.hpp"
#include "sgmeta/prefactor.hpp"
#include "sgmeta/simulate.hpp"
#include "sgmeta/spectrum.hpp"
#include "sgmeta/stationary.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

namespace py = pybind11;
using namespace sgmeta;

namespace {

py::array_t<double> coeffs_array(const FourierField& u) {
  const auto c = u.coeffs();
  py::array_t<double> a(static_cast<py::ssize_t>(c.size()));
  std::copy(c.begin(), c.end(), a.mutable_data());
  return a;
}

FourierField field_from(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 1 || a.size() % 2 == 0) throw std::invalid_argument("coefficients must be a 1-D array of odd length");
  const int N = static_cast<int>((a.size() - 1) / 2);
  return FourierField(N, std::vector<double>(a.data(), a.data() + a.size()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Metastability of the stochastic sine-Gordon equation on the torus";

  py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<ClassificationError>(m, "ClassificationError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double gamma, double beta, double epsilon, int N, int confining_k) {
             ModelParams p{gamma, beta, epsilon, N, confining_k};
             p.validate();
             return p;
           }),
           py::arg("gamma") = 1.0, py::arg("beta") = 1.0, py::arg("epsilon") = 0.1, py::arg("N") = 16,
           py::arg("confining_k") = 1)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("epsilon", &ModelParams::epsilon)
      .def_readwrite("N", &ModelParams::N)
      .def_readwrite("confining_k", &ModelParams::confining_k)
      .def_property_readonly("gamma_beta", &ModelParams::gamma_beta)
      .def("validate", &ModelParams::validate)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream s;
        s << "ModelParams(gamma=" << p.gamma << ", beta=" << p.beta << ", epsilon=" << p.epsilon << ", N=" << p.N
          << ", confining_k=" << p.confining_k << ")";
        return s.str();
      });

  py::class_<FourierField>(m, "FourierField")
      .def(py::init<int>(), py::arg("N"))
      .def(py::init(&field_from), py::arg("coeffs"), "Coefficients ordered n = -N..N.")
      .def_static("constant", &FourierField::constant, py::arg("N"), py::arg("value"))
      .def_static("mode", &FourierField::mode, py::arg("N"), py::arg("n"), py::arg("amplitude") = 1.0)
      .def_property_readonly("N", &FourierField::truncation)
      .def_property_readonly("coeffs", &coeffs_array)
      .def("at", py::overload_cast<int>(&FourierField::at, py::const_), py::arg("n"))
      .def("values", &evaluate_on_grid, py::arg("M"))
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * double())
      .def(double() * py::self)
      .def("__len__", &FourierField::size);

  m.def("inner", &inner);
  m.def("l2_norm", &l2_norm);
  m.def("derivative", &derivative);
  m.def("resized", &resized, py::arg("u"), py::arg("N"));
  m.def("translate", &translate, py::arg("u"), py::arg("t"));
  m.def("potential", &potential, py::arg("u"), py::arg("params"));
  m.def("gradient", &gradient, py::arg("u"), py::arg("params"));
  m.def("hessian_matrix", &hessian_matrix, py::arg("u"), py::arg("params"));
  m.def("besov_norm", &besov_norm, py::arg("u"), py::arg("s"));

  m.def("complete_K", &complete_K, py::arg("m"));
  m.def("complete_E", &complete_E, py::arg("m"));
  m.def("jacobi_cd", &jacobi_cd, py::arg("x"), py::arg("m"));

  py::class_<SpectrumReport>(m, "SpectrumReport")
      .def_readonly("eigenvalues", &SpectrumReport::eigenvalues)
      .def_readonly("eigenvectors", &SpectrumReport::eigenvectors)
      .def_readonly("mu", &SpectrumReport::mu)
      .def_readonly("zero_vector_overlap", &SpectrumReport::zero_vector_overlap)
      .def_readonly("zero_threshold", &SpectrumReport::zero_threshold)
      .def_property_readonly("neg_count", &SpectrumReport::neg_count)
      .def_property_readonly("zero_count", &SpectrumReport::zero_count);
  m.def("spectrum_at", &spectrum_at, py::arg("u"), py::arg("params"));

  py::enum_<StationaryKind>(m, "StationaryKind")
      .value("minimum", StationaryKind::minimum)
      .value("constant_saddle", StationaryKind::constant_saddle)
      .value("elliptic_saddle", StationaryKind::elliptic_saddle);
  py::class_<StationaryPoint>(m, "StationaryPoint")
      .def_readonly("field", &StationaryPoint::field)
      .def_readonly("modulus", &StationaryPoint::modulus)
      .def_readonly("harmonic", &StationaryPoint::harmonic)
      .def_readonly("energy", &StationaryPoint::energy)
      .def_readonly("kind", &StationaryPoint::kind)
      .def_readonly("neg_count", &StationaryPoint::neg_count)
      .def_readonly("zero_count", &StationaryPoint::zero_count)
      .def_readonly("residual", &StationaryPoint::residual);
  m.def("solve_modulus_for_period", &solve_modulus_for_period, py::arg("gamma_beta"), py::arg("j"));
  m.def("elliptic_formula", &elliptic_formula, py::arg("params"), py::arg("j"), py::arg("N"));
  m.def("elliptic_saddle", &elliptic_saddle, py::arg("params"), py::arg("j") = 1);
  m.def(
      "newton_refine", [](const FourierField& u0, const ModelParams& p) { return newton_refine(u0, p); },
      py::arg("u0"), py::arg("params"));
  m.def("enumerate_saddles", &enumerate_saddles, py::arg("params"));

  py::class_<TransitionTimeEstimate>(m, "TransitionTimeEstimate")
      .def_property_readonly("regime", [](const TransitionTimeEstimate& e) { return to_string(e.regime); })
      .def_property_readonly("method", [](const TransitionTimeEstimate& e) { return to_string(e.method); })
      .def_readonly("prefactor", &TransitionTimeEstimate::prefactor)
      .def_readonly("barrier", &TransitionTimeEstimate::barrier)
      .def_readonly("N_used", &TransitionTimeEstimate::N_used)
      .def("expected_time", &TransitionTimeEstimate::expected_time, py::arg("epsilon"))
      .def("rate", &TransitionTimeEstimate::rate, py::arg("epsilon"));
  py::class_<SubRegimePrefactor>(m, "SubRegimePrefactor")
      .def_readonly("finite_n", &SubRegimePrefactor::finite_n)
      .def_readonly("closed_form", &SubRegimePrefactor::closed_form);
  py::class_<SuperRegimePrefactor>(m, "SuperRegimePrefactor")
      .def_readonly("estimate", &SuperRegimePrefactor::estimate)
      .def_readonly("mu", &SuperRegimePrefactor::mu)
      .def_readonly("manifold_length", &SuperRegimePrefactor::manifold_length)
      .def_readonly("log_determinant_ratio", &SuperRegimePrefactor::log_determinant_ratio)
      .def_readonly("tail_corrected_prefactor", &SuperRegimePrefactor::tail_corrected_prefactor)
      .def_readonly("constant_saddle_barrier", &SuperRegimePrefactor::constant_saddle_barrier);
  py::class_<DeterminantReport>(m, "DeterminantReport")
      .def_readonly("log_ratio", &DeterminantReport::log_ratio)
      .def_readonly("sign", &DeterminantReport::sign)
      .def_readonly("m", &DeterminantReport::m)
      .def_readonly("y1_norm_sq", &DeterminantReport::y1_norm_sq)
      .def_property_readonly("value", &DeterminantReport::value);
  m.def("prefactor_sub", &prefactor_sub, py::arg("params"));
  m.def("prefactor_super", py::overload_cast<const ModelParams&>(&prefactor_super), py::arg("params"));
  m.def("gelfand_yaglom_ratio", &gelfand_yaglom_ratio, py::arg("gamma_beta"));
  m.def("gelfand_yaglom_closed_form", &gelfand_yaglom_closed_form, py::arg("gamma_beta"));
  m.def("mckane_tarlie", &mckane_tarlie, py::arg("params"));
  m.def("finite_n_determinant_ratio", &finite_n_determinant_ratio, py::arg("spectrum"), py::arg("gamma_beta"));

  py::enum_<Scheme>(m, "Scheme").value("semi_implicit", Scheme::semi_implicit).value("exponential", Scheme::exponential);
  py::enum_<ZeroModeMetric>(m, "ZeroModeMetric")
      .value("coefficient", ZeroModeMetric::coefficient)
      .value("white_noise", ZeroModeMetric::white_noise);
  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("scheme", &SimConfig::scheme)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("max_time", &SimConfig::max_time)
      .def_readwrite("check_every", &SimConfig::check_every)
      .def_readwrite("kappa", &SimConfig::kappa)
      .def_readwrite("delta", &SimConfig::delta)
      .def_readwrite("c0", &SimConfig::c0)
      .def_readwrite("zero_mode", &SimConfig::zero_mode)
      .def_readwrite("threads", &SimConfig::threads);

  py::class_<HittingRecord>(m, "HittingRecord")
      .def_readonly("hit_time", &HittingRecord::hit_time)
      .def_property_readonly("exit_side", [](const HittingRecord& r) { return to_string(r.exit_side); })
      .def_readonly("trial_seed", &HittingRecord::trial_seed)
      .def_readonly("censored", &HittingRecord::censored);
  py::class_<McResult>(m, "McResult")
      .def_readonly("mean", &McResult::mean)
      .def_readonly("std_error", &McResult::std_error)
      .def_readonly("completed", &McResult::completed)
      .def_readonly("censored", &McResult::censored)
      .def_readonly("plus", &McResult::plus)
      .def_readonly("minus", &McResult::minus)
      .def_readonly("records", &McResult::records);
  m.def("mc_transition_time", &mc_transition_time, py::arg("params"), py::arg("config"), py::arg("trials"),
        py::call_guard<py::gil_scoped_release>());
  py::class_<RandomWalkResult>(m, "RandomWalkResult")
      .def_readonly("wells", &RandomWalkResult::wells)
      .def_readonly("signs", &RandomWalkResult::signs)
      .def_readonly("jump_times", &RandomWalkResult::jump_times)
      .def_readonly("sojourn_times", &RandomWalkResult::sojourn_times)
      .def_readonly("total_time", &RandomWalkResult::total_time);
  m.def("random_walk_experiment", &random_walk_experiment, py::arg("params"), py::arg("config"),
        py::arg("total_time"), py::arg("max_jumps") = std::nullopt, py::call_guard<py::gil_scoped_release>());
  m.def(
      "simulate_trajectory",
      [](const FourierField& u0, const ModelParams& p, const SimConfig& c, double T, int every,
         std::optional<std::uint64_t> seed) {
        py::list out;
        for (const auto& s : simulate_trajectory(u0, p, c, T, every, seed)) out.append(py::make_tuple(s.t, s.u));
        return out;
      },
      py::arg("u0"), py::arg("params"), py::arg("config"), py::arg("T"), py::arg("snapshot_every"),
      py::arg("noise_seed") = std::nullopt);
  m.def("binomial_two_sided_p", &binomial_two_sided_p, py::arg("k"), py::arg("n"));

  py::class_<StringResult>(m, "StringResult")
      .def_readonly("height", &StringResult::height)
      .def_readonly("argmax_image", &StringResult::argmax_image)
      .def_readonly("argmax_index", &StringResult::argmax_index)
      .def_readonly("iterations", &StringResult::iterations)
      .def_readonly("argmax_residual", &StringResult::argmax_residual)
      .def_readonly("images", &StringResult::images);
  m.def(
      "communication_height",
      [](const FourierField& a, const FourierField& b, const ModelParams& p, int images, int max_iterations) {
        StringOptions opt;
        opt.images = images;
        opt.max_iterations = max_iterations;
        return communication_height(a, b, p, opt);
      },
      py::arg("a"), py::arg("b"), py::arg("params"), py::arg("images") = 64, py::arg("max_iterations") = 10000);
  m.def("distance_modulo_translation", &distance_modulo_translation, py::arg("u"), py::arg("v"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one CLI command; returns (exit code, stdout, stderr).");
  m.attr("__version__") = cli::code_version();
}
