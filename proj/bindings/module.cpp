#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mark0/config.hpp"
#include "mark0/harness.hpp"

namespace py = pybind11;
using namespace mark0;

PYBIND11_MODULE(_mark0, m) {
    m.doc() = "Mark-0 agent-based macroeconomy: deterministic simulator core, "
              "shock scenarios, policies and ensemble sweeps";

    py::class_<EconomyParams>(m, "EconomyParams")
        .def(py::init<>())
        .def_readwrite("n_firms", &EconomyParams::n_firms)
        .def_readwrite("c0", &EconomyParams::c0)
        .def_readwrite("beta", &EconomyParams::beta)
        .def_readwrite("price_adjust", &EconomyParams::price_adjust)
        .def_readwrite("eta0_minus", &EconomyParams::eta0_minus)
        .def_readwrite("hire_fire_ratio", &EconomyParams::hire_fire_ratio)
        .def_readwrite("dividend_share", &EconomyParams::dividend_share)
        .def_readwrite("theta", &EconomyParams::theta)
        .def_readwrite("revival_rate", &EconomyParams::revival_rate)
        .def_readwrite("zeta", &EconomyParams::zeta)
        .def_readwrite("gamma0", &EconomyParams::gamma0)
        .def_readwrite("omega", &EconomyParams::omega)
        .def_readwrite("alpha_c", &EconomyParams::alpha_c)
        .def_readwrite("alpha_gamma", &EconomyParams::alpha_gamma)
        .def_readwrite("tau_r", &EconomyParams::tau_r)
        .def_readwrite("tau_t", &EconomyParams::tau_t)
        .def_readwrite("loss_share", &EconomyParams::loss_share)
        .def_readwrite("wage_indexation", &EconomyParams::wage_indexation)
        .def_readwrite("rho_star", &EconomyParams::rho_star)
        .def_readwrite("phi_pi", &EconomyParams::phi_pi)
        .def_readwrite("pi_star", &EconomyParams::pi_star)
        .def_readwrite("demand_price_normalized", &EconomyParams::demand_price_normalized)
        .def("eta0_plus", &EconomyParams::eta0_plus)
        .def("validate", &EconomyParams::validate);

    py::class_<LockdownWindow>(m, "LockdownWindow")
        .def(py::init<int, int>(), py::arg("start"), py::arg("end"))
        .def_readwrite("start", &LockdownWindow::start)
        .def_readwrite("end", &LockdownWindow::end);

    py::class_<ShockSchedule>(m, "ShockSchedule")
        .def(py::init<>())
        .def_readwrite("windows", &ShockSchedule::windows)
        .def_readwrite("dc_rel", &ShockSchedule::dc_rel)
        .def_readwrite("dzeta_rel", &ShockSchedule::dzeta_rel)
        .def_readwrite("recovery_ramp", &ShockSchedule::recovery_ramp)
        .def("in_lockdown", &ShockSchedule::in_lockdown)
        .def("final_end", &ShockSchedule::final_end);

    py::enum_<CreditPolicy>(m, "CreditPolicy")
        .value("NONE", CreditPolicy::None)
        .value("NAIVE", CreditPolicy::Naive)
        .value("ADAPTIVE", CreditPolicy::Adaptive);

    py::class_<PolicySpec>(m, "PolicySpec")
        .def(py::init<>())
        .def_readwrite("credit", &PolicySpec::credit)
        .def_readwrite("theta_baseline", &PolicySpec::theta_baseline)
        .def_readwrite("theta_offset", &PolicySpec::theta_offset)
        .def_readwrite("helicopter_kappa", &PolicySpec::helicopter_kappa)
        .def_readwrite("helicopter_time", &PolicySpec::helicopter_time);

    py::class_<ScenarioSpec>(m, "ScenarioSpec")
        .def(py::init<>())
        .def_readwrite("shock", &ScenarioSpec::shock)
        .def_readwrite("policy", &ScenarioSpec::policy);

    py::class_<ShapeThresholds>(m, "ShapeThresholds")
        .def(py::init<>())
        .def_readwrite("recovered_level", &ShapeThresholds::recovered_level)
        .def_readwrite("sustain_months", &ShapeThresholds::sustain_months)
        .def_readwrite("v_months", &ShapeThresholds::v_months)
        .def_readwrite("relapse_level", &ShapeThresholds::relapse_level);

    py::class_<RunSpec>(m, "RunSpec")
        .def(py::init<>())
        .def_readwrite("params", &RunSpec::params)
        .def_readwrite("scenario", &RunSpec::scenario)
        .def_readwrite("warmup", &RunSpec::warmup)
        .def_readwrite("horizon", &RunSpec::horizon)
        .def_readwrite("thresholds", &RunSpec::thresholds);

    py::class_<RunSeries>(m, "RunSeries")
        .def_readonly("output", &RunSeries::output)
        .def_readonly("unemployment", &RunSeries::unemployment)
        .def_readonly("pi", &RunSeries::pi)
        .def_readonly("pi_ema", &RunSeries::pi_ema)
        .def_readonly("avg_price", &RunSeries::avg_price)
        .def_readonly("avg_wage", &RunSeries::avg_wage)
        .def_readonly("savings", &RunSeries::savings)
        .def_readonly("avg_fragility", &RunSeries::avg_fragility)
        .def_readonly("bankruptcies", &RunSeries::bankruptcies)
        .def_readonly("loan_rate", &RunSeries::loan_rate)
        .def_readonly("deposit_rate", &RunSeries::deposit_rate)
        .def_readonly("theta", &RunSeries::theta)
        .def_readonly("c_t", &RunSeries::c_t)
        .def_readonly("zeta_t", &RunSeries::zeta_t)
        .def_readonly("money", &RunSeries::money)
        .def_readonly("max_residual_ratio", &RunSeries::max_residual_ratio)
        .def_readonly("degenerate", &RunSeries::degenerate)
        .def("months", &RunSeries::months);

    py::enum_<Shape>(m, "Shape")
        .value("V", Shape::V)
        .value("U", Shape::U)
        .value("W", Shape::W)
        .value("L", Shape::L);

    py::class_<ShapeLabel>(m, "ShapeLabel")
        .def_readonly("shape", &ShapeLabel::shape)
        .def_readonly("time_to_recovery", &ShapeLabel::time_to_recovery)
        .def_readonly("trough", &ShapeLabel::trough)
        .def_readonly("relapses", &ShapeLabel::relapses)
        .def("__repr__", [](const ShapeLabel& l) {
            return "<ShapeLabel " + to_string(l.shape) + ">";
        });

    py::class_<EnsembleResult>(m, "EnsembleResult")
        .def_readonly("labels", &EnsembleResult::labels)
        .def_readonly("peak_u_during", &EnsembleResult::peak_u_during)
        .def_readonly("peak_u_after", &EnsembleResult::peak_u_after)
        .def_readonly("l_fraction", &EnsembleResult::l_fraction)
        .def_readonly("w_fraction", &EnsembleResult::w_fraction)
        .def_readonly("peak_u_during_mean", &EnsembleResult::peak_u_during_mean)
        .def_readonly("peak_u_after_mean", &EnsembleResult::peak_u_after_mean);

    py::class_<SweepGrid>(m, "SweepGrid")
        .def(py::init<>())
        .def_readwrite("params", &SweepGrid::params)
        .def_readwrite("policy", &SweepGrid::policy)
        .def_readwrite("dc_values", &SweepGrid::dc_values)
        .def_readwrite("dzeta_values", &SweepGrid::dzeta_values)
        .def_readwrite("shock_length", &SweepGrid::shock_length)
        .def_readwrite("runs_per_cell", &SweepGrid::runs_per_cell)
        .def_readwrite("base_seed", &SweepGrid::base_seed)
        .def_readwrite("warmup", &SweepGrid::warmup)
        .def_readwrite("horizon", &SweepGrid::horizon)
        .def_readwrite("thresholds", &SweepGrid::thresholds);

    py::class_<PhaseCell>(m, "PhaseCell")
        .def_readonly("dc_rel", &PhaseCell::dc_rel)
        .def_readonly("dzeta_rel", &PhaseCell::dzeta_rel)
        .def_readonly("shock_length", &PhaseCell::shock_length)
        .def_readonly("n_runs", &PhaseCell::n_runs)
        .def_readonly("p_crisis", &PhaseCell::p_crisis)
        .def_readonly("peak_u_during_mean", &PhaseCell::peak_u_during_mean)
        .def_readonly("peak_u_during_max", &PhaseCell::peak_u_during_max)
        .def_readonly("peak_u_after_mean", &PhaseCell::peak_u_after_mean)
        .def_readonly("peak_u_after_max", &PhaseCell::peak_u_after_max);

    py::class_<PhaseDiagram>(m, "PhaseDiagram")
        .def_readonly("cells", &PhaseDiagram::cells);

    m.def("run_one", &run_one, py::arg("spec"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>(),
          "Simulate one seeded run: warm-up, then the recorded horizon.");
    m.def(
        "run_ensemble",
        [](const RunSpec& spec, const std::vector<std::uint64_t>& seeds, int threads,
           bool retain) {
            py::gil_scoped_release release;
            return run_ensemble(spec, seeds, threads, retain);
        },
        py::arg("spec"), py::arg("seeds"), py::arg("threads") = 0,
        py::arg("retain_series") = false);
    m.def(
        "sweep",
        [](const SweepGrid& grid, int threads) {
            py::gil_scoped_release release;
            SweepOptions options;
            options.threads = threads;
            return sweep(grid, options);
        },
        py::arg("grid"), py::arg("threads") = 0);
    m.def(
        "relative_output",
        [](const RunSeries& run, const RunSeries& baseline) {
            return relative_output(run, baseline);
        },
        py::arg("run"), py::arg("baseline"));
    m.def(
        "classify_shape",
        [](const std::vector<double>& rel, int shock_end, int horizon,
           const ShapeThresholds& th) { return classify_shape(rel, shock_end, horizon, th); },
        py::arg("relative"), py::arg("shock_end"), py::arg("horizon"),
        py::arg("thresholds") = ShapeThresholds{});
    m.def("peak_unemployment", &peak_unemployment, py::arg("run"), py::arg("from_month"),
          py::arg("to_month"));
    m.def(
        "crisis_probability",
        [](const std::vector<ShapeLabel>& labels) { return crisis_probability(labels); },
        py::arg("labels"));
    m.def("annualized_inflation", &annualized_inflation, py::arg("run"), py::arg("from_month"),
          py::arg("to_month"));
    m.def("cell_run_seed", &cell_run_seed, py::arg("base_seed"), py::arg("dc_rel"),
          py::arg("dzeta_rel"), py::arg("run_index"));

    m.attr("__version__") = "0.1.0";
}
