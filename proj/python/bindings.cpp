#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "viscotherm/cli.hpp"
#include "viscotherm/config.hpp"
#include "viscotherm/convergence.hpp"
#include "viscotherm/diagnostics.hpp"
#include "viscotherm/stepper.hpp"
#include "viscotherm/version.hpp"

namespace py = pybind11;
using namespace viscotherm;

namespace {

// Records x nodes, copied out of the trajectory.
py::array_t<double> field(const Trajectory& tr, std::vector<double> State::*member) {
  const auto rows = static_cast<py::ssize_t>(tr.states.size());
  const auto cols = static_cast<py::ssize_t>(tr.grid.n());
  py::array_t<double> out({rows, cols});
  auto m = out.mutable_unchecked<2>();
  for (py::ssize_t k = 0; k < rows; ++k) {
    const std::vector<double>& f = tr.states[static_cast<std::size_t>(k)].*member;
    for (py::ssize_t i = 0; i < cols; ++i) m(k, i) = f[static_cast<std::size_t>(i)];
  }
  return out;
}

Coefficients presets(const py::object& names, const PresetParams& params) {
  if (py::isinstance<py::str>(names)) return coefficient_presets(names.cast<std::string>(), params);
  return coefficient_presets(names.cast<std::vector<std::string>>(), params);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "1D thermoviscoelastic simulator: stepper, diagnostics and convergence studies";
  m.attr("__version__") = kVersion;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def(py::init(&make_grid), py::arg("length"), py::arg("n_nodes"))
      .def_property_readonly("n", &Grid::n)
      .def_property_readonly("length", &Grid::length)
      .def_property_readonly("dx", &Grid::dx)
      .def_property_readonly("x", [](const Grid& g) {
        py::array_t<double> out(static_cast<py::ssize_t>(g.n()));
        std::copy(g.x().begin(), g.x().end(), out.mutable_data());
        return out;
      });

  py::class_<Coefficients>(m, "Coefficients")
      .def_readonly("a", &Coefficients::a)
      .def_readonly("k_gamma", &Coefficients::k_gamma)
      .def_readonly("K_gamma", &Coefficients::K_gamma)
      .def_readonly("K_f", &Coefficients::K_f)
      .def_readonly("alpha", &Coefficients::alpha)
      .def("gamma", [](const Coefficients& c, double xi) { return c.gamma(xi); })
      .def("f", [](const Coefficients& c, double xi) { return c.f(xi); });
  m.def("coefficient_presets", &presets, py::arg("names"), py::arg("params") = PresetParams{},
        "One preset name or a [viscosity, dilation] pair.");

  py::class_<InitialData>(m, "InitialData")
      .def(py::init([](std::vector<double> u0, std::vector<double> u0t, std::vector<double> th) {
             return InitialData{std::move(u0), std::move(u0t), std::move(th)};
           }),
           py::arg("u0"), py::arg("u0t"), py::arg("theta0"))
      .def_readonly("u0", &InitialData::u0)
      .def_readonly("u0t", &InitialData::u0t)
      .def_readonly("theta0", &InitialData::theta0);
  m.def("initial_preset", &initial_preset, py::arg("name"), py::arg("grid"),
        py::arg("params") = InitialParams{}, py::arg("seed") = 0);

  py::class_<StepConfig>(m, "StepConfig")
      .def(py::init([](double dt, double epsilon, double t_end, int record_every, bool theta_clip) {
             StepConfig s;
             s.dt = dt;
             s.epsilon = epsilon;
             s.t_end = t_end;
             s.record_every = record_every;
             s.theta_clip = theta_clip;
             return s;
           }),
           py::arg("dt") = 1e-4, py::arg("epsilon") = 1e-3, py::arg("t_end") = 1.0,
           py::arg("record_every") = 1, py::arg("theta_clip") = false)
      .def_readwrite("dt", &StepConfig::dt)
      .def_readwrite("epsilon", &StepConfig::epsilon)
      .def_readwrite("t_end", &StepConfig::t_end)
      .def_readwrite("record_every", &StepConfig::record_every)
      .def_readwrite("theta_clip", &StepConfig::theta_clip);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("grid", &Trajectory::grid)
      .def_readonly("dt", &Trajectory::dt)
      .def_readonly("epsilon", &Trajectory::epsilon)
      .def_readonly("min_theta", &Trajectory::min_theta)
      .def_readonly("clamped_mass", &Trajectory::clamped_mass)
      .def_readonly("warnings", &Trajectory::warnings)
      .def_property_readonly("t", [](const Trajectory& tr) {
        std::vector<double> t;
        for (const State& s : tr.states) t.push_back(s.t);
        return t;
      })
      .def_property_readonly("v", [](const Trajectory& tr) { return field(tr, &State::v); })
      .def_property_readonly("u", [](const Trajectory& tr) { return field(tr, &State::u); })
      .def_property_readonly("theta", [](const Trajectory& tr) { return field(tr, &State::theta); })
      .def("__len__", &Trajectory::size);
  m.def("run", [](const InitialData& init, const Coefficients& c, const Grid& g, const StepConfig& s) {
          py::gil_scoped_release release;
          return run(init, c, g, s);
        },
        py::arg("initial"), py::arg("coefficients"), py::arg("grid"), py::arg("config"));

  py::class_<EnergyReport>(m, "EnergyReport")
      .def_readonly("t", &EnergyReport::t)
      .def_readonly("kinetic", &EnergyReport::kinetic)
      .def_readonly("elastic", &EnergyReport::elastic)
      .def_readonly("thermal", &EnergyReport::thermal)
      .def_readonly("total", &EnergyReport::total)
      .def_readonly("balance_residual", &EnergyReport::balance_residual)
      .def("max_balance_residual", &EnergyReport::max_balance_residual);
  m.def("energy_ledger", &energy_ledger, py::arg("trajectory"), py::arg("coefficients"));
  m.def("a_priori_ratios", &a_priori_ratios, py::arg("report"));

  py::class_<EstimateReport>(m, "EstimateReport")
      .def_readonly("i5", &EstimateReport::i5)
      .def_readonly("i6", &EstimateReport::i6)
      .def_readonly("i7", &EstimateReport::i7)
      .def_readonly("i8", &EstimateReport::i8)
      .def_readonly("warnings", &EstimateReport::warnings);
  m.def("estimate_integrals", &estimate_integrals, py::arg("trajectory"), py::arg("p") = 0.5,
        py::arg("q") = 2.0, py::arg("r") = 1.2);

  m.def("localized_energy_slack",
        [](const Trajectory& tr, const Coefficients& c, double t0, double t1) {
          return localized_energy_slack(tr, c, CutoffZeta(t0, t1));
        },
        py::arg("trajectory"), py::arg("coefficients"), py::arg("t0") = 0.5, py::arg("t1") = 0.9);

  py::class_<WeakResidual>(m, "WeakResidual")
      .def_readonly("id", &WeakResidual::id)
      .def_readonly("has_momentum", &WeakResidual::has_momentum)
      .def_readonly("wu", &WeakResidual::wu)
      .def_readonly("wu_limit", &WeakResidual::wu_limit)
      .def_readonly("wt", &WeakResidual::wt);
  m.def("weak_residuals",
        [](const Trajectory& tr, const Coefficients& c) {
          return weak_residuals(tr, c, standard_battery(tr.grid.length(), tr.t_end())).rows;
        },
        py::arg("trajectory"), py::arg("coefficients"), "Residuals over the standard battery.");

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("epsilons", &SweepResult::epsilons)
      .def_readonly("d_v", &SweepResult::d_v)
      .def_readonly("d_u", &SweepResult::d_u)
      .def_readonly("d_theta", &SweepResult::d_theta)
      .def_readonly("d_flux", &SweepResult::d_flux)
      .def_readonly("strictly_decreasing", &SweepResult::strictly_decreasing);
  m.def("epsilon_sweep",
        [](const InitialData& init, const Coefficients& c, const Grid& g, const StepConfig& s,
           const std::vector<double>& eps, double q) {
          py::gil_scoped_release release;
          return epsilon_sweep(init, c, g, s, eps, q);
        },
        py::arg("initial"), py::arg("coefficients"), py::arg("grid"), py::arg("config"),
        py::arg("epsilons"), py::arg("q") = 2.0);

  py::class_<RefinementTable>(m, "RefinementTable")
      .def_readonly("spatial_order", &RefinementTable::spatial_order)
      .def_readonly("temporal_order", &RefinementTable::temporal_order)
      .def_property_readonly("errors", [](const RefinementTable& t) {
        std::vector<double> e;
        for (const auto& l : t.levels) e.push_back(l.err_max);
        return e;
      });
  m.def("refinement_study",
        [](const Coefficients& c, double length, int levels, int n0, double dt0, double t_end) {
          ManufacturedSolution mms;
          mms.length = length;
          RefinementConfig rc;
          rc.levels = levels;
          rc.n0 = n0;
          rc.dt0 = dt0;
          rc.t_end = t_end;
          py::gil_scoped_release release;
          return refinement_study(mms, c, rc);
        },
        py::arg("coefficients"), py::arg("length") = 3.141592653589793, py::arg("levels") = 3,
        py::arg("n0") = 21, py::arg("dt0") = 2e-3, py::arg("t_end") = 0.5);

  m.def("check", [] {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& c : invariant_battery()) out.emplace_back(c.name, c.pass, c.detail);
    return out;
  }, "Built-in invariant battery as (name, passed, detail) tuples.");

  m.def("validate_config", [](const std::string& text) { return parse_config_string(text).warnings; },
        py::arg("yaml_text"), "Parses a YAML run configuration; returns its warnings.");
}
