#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "qpcd/amplitudes.hpp"
#include "qpcd/config.hpp"
#include "qpcd/dephasing.hpp"
#include "qpcd/errors.hpp"
#include "qpcd/experiments.hpp"
#include "qpcd/interferometer.hpp"
#include "qpcd/oracle.hpp"
#include "qpcd/output.hpp"
#include "qpcd/qpc_detector.hpp"
#include "qpcd/quantum_dot.hpp"

namespace py = pybind11;
using namespace qpcd;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Which-path dephasing of an AB interferometer by a QPC detector";
  m.attr("__version__") = QPCD_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());

  py::class_<ScatteringPair>(m, "ScatteringPair")
      .def_property_readonly("theta", &ScatteringPair::theta)
      .def_property_readonly("eta", &ScatteringPair::eta)
      .def_property_readonly("t", &ScatteringPair::t)
      .def_property_readonly("r", &ScatteringPair::r)
      .def_property_readonly("transmission", &ScatteringPair::transmission);

  m.def("make_pair", &make_pair, py::arg("theta"), py::arg("eta") = 0.0);
  m.def("pair_from_transmission", &pair_from_transmission, py::arg("transmission"),
        py::arg("eta") = 0.0);
  m.def("sp_overlap",
        py::overload_cast<const ScatteringPair&, const ScatteringPair&>(&sp_overlap),
        py::arg("right"), py::arg("left"));

  m.def(
      "probe_count", [](double v_d_uv, double gamma_uev) {
        return probe_count(DetectorBias{v_d_uv}, gamma_uev);
      },
      py::arg("v_d_uV"), py::arg("gamma_ueV"));
  m.def("shot_noise_sigma", &shot_noise_sigma, py::arg("t_d"), py::arg("n"));
  m.def("dwell_time", [](double gamma_uev) {
    DotModel dot;
    dot.gamma_uev = gamma_uev;
    return dwell_time(dot);
  }, py::arg("gamma_ueV"));

  m.def(
      "n_probe_visibility",
      [](double t_d, double dt_d, double n, double eta_shift) {
        const auto r = n_probe_visibility({t_d, dt_d, n, eta_shift});
        py::dict out;
        out["nu_d_exact"] = r.nu_d_exact;
        out["nu_d_linear"] = r.nu_d_linear ? py::cast(*r.nu_d_linear) : py::none();
        out["phase_shift"] = r.phase_shift;
        out["regime"] = std::string(to_string(r.regime));
        return out;
      },
      py::arg("t_d"), py::arg("dt_d"), py::arg("n"), py::arg("eta_shift") = 0.0);
  m.def("shot_noise_form", &shot_noise_form, py::arg("t_d"), py::arg("dt_d"), py::arg("n"));

  m.def(
      "enumerate_coherence",
      [](int n, const ScatteringPair& left, const ScatteringPair& right, int threads) {
        return enumerate_coherence({n, left, right}, threads);
      },
      py::arg("n"), py::arg("left"), py::arg("right"), py::arg("threads") = 1);
  m.def(
      "binomial_check",
      [](double t_d, int n) {
        const auto b = binomial_check(t_d, n);
        return py::make_tuple(b.mean, b.sigma, b.closed_mean, b.closed_sigma);
      },
      py::arg("t_d"), py::arg("n"));
  m.def(
      "oracle_check",
      [](std::uint64_t seed, int draws, int max_n, double tolerance, int threads) {
        const auto r = run_oracle_check(seed, draws, max_n, tolerance, threads);
        return py::make_tuple(r.max_abs_deviation, r.passed);
      },
      py::arg("seed"), py::arg("draws") = 100, py::arg("max_n") = 10,
      py::arg("tolerance") = 1e-10, py::arg("threads") = 1);

  m.def(
      "extract_visibility",
      [](std::vector<double> b_mt, std::vector<double> i_c, double delta_b_mt) {
        AbTrace trace{b_mt, i_c, i_c};
        const auto fit = extract_visibility(trace, delta_b_mt);
        py::dict out;
        out["visibility"] = fit.visibility;
        out["phase"] = fit.phase;
        out["mean"] = fit.mean;
        out["amplitude"] = fit.amplitude;
        return out;
      },
      py::arg("b_mT"), py::arg("i_c"), py::arg("delta_b_mT"));

  m.def(
      "run_sweep",
      [](const std::string& config_text, const std::vector<std::string>& overrides,
         const std::string& format, int threads) {
        const auto cfg = parse_config(config_text, overrides, "<python>");
        const auto result = run_sweep(cfg, {threads});
        return render(result, parse_output_format(format));
      },
      py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{},
      py::arg("format") = "json", py::arg("threads") = 1,
      "Parse a TOML config, run its sweep and return CSV or JSON text.");
}
