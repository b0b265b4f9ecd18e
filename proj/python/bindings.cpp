#include <optional>
#include <string>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pkco/analysis.hpp"
#include "pkco/clock.hpp"
#include "pkco/control.hpp"
#include "pkco/delay.hpp"
#include "pkco/netsim.hpp"
#include "pkco/scenario_file.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;

namespace {

// Parses scenario text, applies optional overrides and runs it.
pkco::RunResult run_text(const std::string& text, std::optional<std::uint64_t> seed,
                         std::optional<std::uint64_t> cycles) {
  pkco::ScenarioFile file = pkco::ScenarioFile::parse(text, "<python>");
  if (seed) file.set("scenario", "seed", std::to_string(*seed));
  if (cycles) file.set("scenario", "num_cycles", std::to_string(*cycles));
  return pkco::run(file.build());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Packet-coupled oscillator clock synchronisation: clock model, "
            "controllers, cycle simulator and convergence analysis.";

  py::register_exception<pkco::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<pkco::SimulationError>(m, "SimulationError", PyExc_RuntimeError);

  py::enum_<pkco::Representation>(m, "Representation")
      .value("continuous", pkco::Representation::continuous)
      .value("ticks", pkco::Representation::ticks);

  py::class_<pkco::ClockParams>(m, "ClockParams")
      .def(py::init<>())
      .def_static("from_frequency", &pkco::ClockParams::from_frequency,
                  py::arg("nominal_frequency"), py::arg("cycle_ticks"))
      .def_readwrite("nominal_frequency", &pkco::ClockParams::nominal_frequency)
      .def_readwrite("tick_period", &pkco::ClockParams::tick_period)
      .def_readwrite("threshold", &pkco::ClockParams::threshold)
      .def_readwrite("cycle_ticks", &pkco::ClockParams::cycle_ticks)
      .def_readwrite("offset_noise_variance", &pkco::ClockParams::offset_noise_variance)
      .def_readwrite("skew_ppm", &pkco::ClockParams::skew_ppm);

  py::class_<pkco::ClockState>(m, "ClockState")
      .def(py::init<>())
      .def_readwrite("representation", &pkco::ClockState::representation)
      .def_readwrite("phase", &pkco::ClockState::phase)
      .def_readwrite("counter", &pkco::ClockState::counter)
      .def_readwrite("tick_fraction", &pkco::ClockState::tick_fraction)
      .def_readwrite("offset", &pkco::ClockState::offset)
      .def_readwrite("cycle_index", &pkco::ClockState::cycle_index)
      .def(py::self == py::self);

  py::class_<pkco::RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id"))
      .def("uniform", &pkco::RngStream::uniform)
      .def("gaussian", py::overload_cast<double, double>(&pkco::RngStream::gaussian),
           py::arg("mean"), py::arg("variance"));

  py::class_<pkco::DelayModel>(m, "DelayModel")
      .def(py::init([](double mean, double variance, double floor) {
             return pkco::DelayModel{mean, variance, floor};
           }),
           py::arg("mean") = 0.0, py::arg("variance") = 0.0, py::arg("floor") = 0.0)
      .def_readwrite("mean", &pkco::DelayModel::mean)
      .def_readwrite("variance", &pkco::DelayModel::variance)
      .def_readwrite("floor", &pkco::DelayModel::floor);

  py::class_<pkco::ControllerConfig>(m, "ControllerConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &pkco::ControllerConfig::alpha)
      .def_readwrite("slot_reference", &pkco::ControllerConfig::slot_reference)
      .def_readwrite("feedforward", &pkco::ControllerConfig::feedforward)
      .def_readwrite("feedforward_enabled", &pkco::ControllerConfig::feedforward_enabled)
      .def_readwrite("estimator_kappa", &pkco::ControllerConfig::estimator_kappa);

  py::class_<pkco::TheoryPrediction>(m, "TheoryPrediction")
      .def_readonly("eigenvalue", &pkco::TheoryPrediction::eigenvalue)
      .def_readonly("asymptote", &pkco::TheoryPrediction::asymptote)
      .def_readonly("stable", &pkco::TheoryPrediction::stable)
      .def_readonly("dc_gain", &pkco::TheoryPrediction::dc_gain);

  py::class_<pkco::CycleRecord>(m, "CycleRecord")
      .def_readonly("cycle", &pkco::CycleRecord::cycle)
      .def_readonly("node_id", &pkco::CycleRecord::node_id)
      .def_readonly("kappa_sample", &pkco::CycleRecord::kappa_sample)
      .def_readonly("eta_sample", &pkco::CycleRecord::eta_sample)
      .def_readonly("timestamp", &pkco::CycleRecord::timestamp)
      .def_readonly("offset_estimate", &pkco::CycleRecord::offset_estimate)
      .def_readonly("correction", &pkco::CycleRecord::correction)
      .def_readonly("offset_after", &pkco::CycleRecord::offset_after)
      .def_readonly("fire_time_rel", &pkco::CycleRecord::fire_time_rel)
      .def_readonly("delta", &pkco::CycleRecord::delta)
      .def_readonly("collided", &pkco::CycleRecord::collided);

  py::class_<pkco::ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("converged", &pkco::ConvergenceReport::converged)
      .def_readonly("settling_cycle", &pkco::ConvergenceReport::settling_cycle)
      .def_readonly("steady_mean", &pkco::ConvergenceReport::steady_mean)
      .def_readonly("steady_std", &pkco::ConvergenceReport::steady_std)
      .def_readonly("theory_asymptote", &pkco::ConvergenceReport::theory_asymptote)
      .def_readonly("abs_error_vs_theory", &pkco::ConvergenceReport::abs_error_vs_theory)
      .def_readonly("max_abs_delta", &pkco::ConvergenceReport::max_abs_delta)
      .def_readonly("collision_count", &pkco::ConvergenceReport::collision_count);

  py::class_<pkco::NodeAnalysis>(m, "NodeAnalysis")
      .def_readonly("node_id", &pkco::NodeAnalysis::node_id)
      .def_readonly("theory", &pkco::NodeAnalysis::theory)
      .def_readonly("report", &pkco::NodeAnalysis::report);

  m.def("make_state", &pkco::make_state, py::arg("params"), py::arg("representation"),
        py::arg("offset"));
  m.def("advance", &pkco::advance, py::arg("state"), py::arg("params"), py::arg("duration"));
  m.def("apply_offset_noise", &pkco::apply_offset_noise, py::arg("state"), py::arg("params"),
        py::arg("rng"));
  m.def(
      "correct",
      [](const pkco::ClockState& s, const pkco::ClockParams& p, double amount) {
        const pkco::Correction c = pkco::correct(s, p, amount);
        return py::make_tuple(c.state, c.applied, c.residue);
      },
      py::arg("state"), py::arg("params"), py::arg("amount"),
      "Returns (state, applied, residue).");
  m.def("sample", &pkco::sample, py::arg("model"), py::arg("rng"));

  m.def("estimate_offset", &pkco::estimate_offset, py::arg("timestamp"),
        py::arg("threshold"), py::arg("estimator_kappa"));
  m.def("control_input", &pkco::control_input, py::arg("config"),
        py::arg("offset_estimate"), py::arg("eta_actual"));
  m.def("feedforward_term", &pkco::feedforward_term, py::arg("alpha"),
        py::arg("kappa_mean"), py::arg("eta_mean"));
  m.def("predict", &pkco::predict, py::arg("config"), py::arg("kappa_mean"),
        py::arg("eta_mean"));
  m.def("expected_trajectory", &pkco::expected_trajectory, py::arg("config"),
        py::arg("kappa_mean"), py::arg("eta_mean"), py::arg("theta0"), py::arg("k"));
  m.def("delta_metric", &pkco::delta_metric, py::arg("master_fire"), py::arg("slot"),
        py::arg("slave_fire"));

  m.def(
      "run_scenario",
      [](const std::string& text, std::optional<std::uint64_t> seed,
         std::optional<std::uint64_t> cycles) {
        py::gil_scoped_release release;
        return run_text(text, seed, cycles).records;
      },
      py::arg("scenario_text"), py::arg("seed") = py::none(), py::arg("cycles") = py::none(),
      "Runs a scenario given as text and returns its cycle records.");
  m.def(
      "analyze_scenario",
      [](const std::string& text, std::optional<std::uint64_t> seed,
         std::optional<std::uint64_t> cycles) {
        py::gil_scoped_release release;
        pkco::ScenarioFile file = pkco::ScenarioFile::parse(text, "<python>");
        const pkco::AnalysisSettings settings = file.analysis_settings();
        const pkco::RunResult result = run_text(text, seed, cycles);
        return pkco::analyze_records(result.scenario, result.records, settings.tolerance,
                                     settings.window);
      },
      py::arg("scenario_text"), py::arg("seed") = py::none(), py::arg("cycles") = py::none(),
      "Runs a scenario and returns one NodeAnalysis per node.");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
