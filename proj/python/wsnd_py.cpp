#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wsnd/config.hpp"
#include "wsnd/consensus.hpp"
#include "wsnd/errors.hpp"
#include "wsnd/fusion.hpp"
#include "wsnd/montecarlo.hpp"
#include "wsnd/qfunc.hpp"
#include "wsnd/quantize.hpp"
#include "wsnd/solver_central.hpp"
#include "wsnd/solver_dist.hpp"
#include "wsnd/version.hpp"

namespace py = pybind11;
using namespace wsnd;

namespace {

py::dict allocation_dict(const PowerAllocation& a) {
  py::dict d;
  d["p"] = a.p;
  d["lambda0"] = a.lambda0;
  d["total"] = a.total();
  return d;
}

py::dict estimate_dict(const DetectionEstimate& e) {
  py::dict d;
  d["scheme"] = std::string(to_string(e.scheme));
  d["pfa_target"] = e.pfa_target;
  d["pfa_hat"] = e.pfa_hat;
  d["pd_hat"] = e.pd_hat;
  d["pd_analytic"] = e.pd_analytic;
  d["trials"] = e.trials;
  d["sigma_pd"] = e.sigma_pd;
  d["threshold"] = e.threshold;
  return d;
}

ThresholdSource parse_threshold(const std::string& s) {
  if (s == "analytic") return ThresholdSource::kAnalytic;
  if (s == "empirical") return ThresholdSource::kEmpirical;
  throw UsageError("threshold must be 'analytic' or 'empirical'");
}

} // namespace

PYBIND11_MODULE(_wsnd, m) {
  m.doc() = "Power allocation and detection for wireless sensor networks";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<NoSignalError>(m, "NoSignalError", PyExc_RuntimeError);
  py::register_exception<TopologyError>(m, "TopologyError", PyExc_RuntimeError);
  py::register_exception<DegenerateFusionError>(m, "DegenerateFusionError", PyExc_RuntimeError);
  py::register_exception<DistributedConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("q_function", &q_function, py::arg("x"));
  m.def("q_inverse", &q_inverse, py::arg("p"));
  m.def("capacity_bits", &capacity_bits, py::arg("p"), py::arg("h"), py::arg("zeta"));
  m.def("quant_noise_var", &quant_noise_var, py::arg("p"), py::arg("h"), py::arg("zeta"), py::arg("U"));

  py::class_<SensorParams>(m, "SensorParams")
      .def(py::init<double, double, double, std::vector<double>>(), py::arg("sigma2"), py::arg("h"),
           py::arg("zeta"), py::arg("signal"))
      .def_property_readonly("sigma2", &SensorParams::sigma2)
      .def_property_readonly("xi", &SensorParams::xi)
      .def_property_readonly("h", &SensorParams::h)
      .def_property_readonly("zeta", &SensorParams::zeta)
      .def_property_readonly("samples", &SensorParams::samples)
      .def("__repr__", [](const SensorParams& s) {
        return "SensorParams(sigma2=" + std::to_string(s.sigma2()) + ", h=" + std::to_string(s.h()) +
               ", xi=" + std::to_string(s.xi()) + ")";
      });

  py::class_<Graph>(m, "Graph")
      .def(py::init<int, std::vector<Graph::Edge>>(), py::arg("vertices"), py::arg("edges"))
      .def_static("complete", &Graph::complete)
      .def_static("path", &Graph::path)
      .def_property_readonly("vertices", &Graph::vertices)
      .def_property_readonly("edges", &Graph::edges);

  m.def(
      "consensus_average",
      [](const Graph& g, const std::vector<double>& x0, double tol, int max_iter) {
        ConsensusOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        const auto r = consensus_average(g, x0, o);
        return py::make_tuple(r.values, r.iterations);
      },
      py::arg("graph"), py::arg("x0"), py::arg("tol") = 1e-10, py::arg("max_iter") = 1000);

  m.def(
      "power_closed_form",
      [](double lambda0, const SensorParams& s, double U) { return power_closed_form(lambda0, s, U); },
      py::arg("lambda0"), py::arg("sensor"), py::arg("U"));
  m.def(
      "solve_centralized",
      [](const std::vector<SensorParams>& sensors, double U, double Pt) {
        return allocation_dict(solve_centralized(sensors, U, Pt));
      },
      py::arg("sensors"), py::arg("U"), py::arg("Pt"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("name", &ExperimentConfig::name)
      .def_readonly("sensors", &ExperimentConfig::sensors)
      .def_readonly("samples", &ExperimentConfig::samples)
      .def_readonly("U", &ExperimentConfig::U)
      .def_readonly("Pt", &ExperimentConfig::Pt)
      .def_readonly("Pfa", &ExperimentConfig::Pfa)
      .def_readonly("seed", &ExperimentConfig::seed)
      .def("serialize", &serialize_config)
      .def("digest", &config_digest);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "config");
  m.def("load_config", &load_config, py::arg("path"));

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](const ExperimentConfig& cfg, std::optional<int> samples, std::optional<double> pt) {
             return build_scenario(cfg, samples, pt);
           }),
           py::arg("config"), py::arg("samples") = py::none(), py::arg("Pt") = py::none())
      .def_readonly("sensors", &Scenario::sensors)
      .def_readonly("U", &Scenario::U)
      .def_readonly("Pt", &Scenario::Pt)
      .def_readonly("Pfa", &Scenario::Pfa)
      .def_readonly("topology", &Scenario::topology)
      .def_property_readonly("M", &Scenario::M)
      .def_property_readonly("N", &Scenario::N);

  m.def(
      "solve_scenario_centralized", [](const Scenario& sc) { return allocation_dict(solve_centralized(sc)); },
      py::arg("scenario"));
  m.def(
      "solve_distributed",
      [](const Scenario& sc) {
        DistributedResult r;
        {
          py::gil_scoped_release release;
          r = solve_distributed(sc);
        }
        auto d = allocation_dict(r.allocation);
        d["iterations"] = r.trace.rows.size();
        d["consensus_rounds"] = r.trace.total_consensus_rounds();
        d["final_rel_step"] = r.trace.rows.back().rel_step;
        return d;
      },
      py::arg("scenario"));

  m.def("schemes", [] {
    std::vector<std::string> out;
    for (Scheme s : all_schemes()) out.emplace_back(to_string(s));
    return out;
  });
  m.def(
      "detect",
      [](const Scenario& sc, const std::string& scheme, long trials, const std::string& threshold, int workers) {
        TrialOptions opt;
        opt.trials = trials;
        opt.workers = workers;
        opt.threshold = parse_threshold(threshold);
        DetectionEstimate e;
        {
          py::gil_scoped_release release;
          const auto setup = setup_scheme(sc, parse_scheme(scheme), solve_centralized(sc));
          e = run_trials(sc, setup, opt);
        }
        return estimate_dict(e);
      },
      py::arg("scenario"), py::arg("scheme") = "ED_opt_weights_opt_power", py::arg("trials") = 10000,
      py::arg("threshold") = "analytic", py::arg("workers") = 1);
}
