// Python bindings for the core operations: homogenized constants,
// subsolutions, path simulation, estimator aggregation and the experiment
// runner. Heavy loops stay in C++; python drives configuration and analysis.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "roughmc/experiment.hpp"
#include "roughmc/periodic_env.hpp"
#include "roughmc/random_env.hpp"
#include "roughmc/rng.hpp"
#include "roughmc/subsolution.hpp"

namespace py = pybind11;
using namespace roughmc;

PYBIND11_MODULE(roughmc, m) {
    m.doc() = "rare-event Monte Carlo for multiscale Langevin diffusions";

    // --- periodic environment ---------------------------------------------
    py::class_<PeriodicModel>(m, "PeriodicModel")
        .def(py::init([](std::function<double(double)> Q, std::function<double(double)> Qprime,
                         std::function<double(double)> V, std::function<double(double)> Vprime,
                         double lambda, double D) {
                 PeriodicModel model;
                 model.Q = std::move(Q);
                 model.Qprime = std::move(Qprime);
                 model.V = std::move(V);
                 model.Vprime = std::move(Vprime);
                 model.lambda = lambda;
                 model.D = D;
                 return model;
             }),
             py::arg("Q"), py::arg("Qprime"), py::arg("V"), py::arg("Vprime"), py::arg("lambda_"),
             py::arg("D"))
        .def_readwrite("lambda_", &PeriodicModel::lambda)
        .def_readwrite("D", &PeriodicModel::D);

    py::class_<EffectiveCoefficients>(m, "EffectiveCoefficients")
        .def_readonly("L", &EffectiveCoefficients::L)
        .def_readonly("Lhat", &EffectiveCoefficients::Lhat)
        .def_readonly("kappa", &EffectiveCoefficients::kappa)
        .def_readonly("q", &EffectiveCoefficients::q);

    m.def("compute_constants", &compute_constants, py::arg("model"), py::arg("n_quad") = 1024);
    m.def("corrector_factor", &corrector_factor, py::arg("model"), py::arg("coeffs"), py::arg("y"));
    m.def("effective_drift", &effective_drift, py::arg("model"), py::arg("coeffs"), py::arg("x"));

    // --- random environment ------------------------------------------------
    py::class_<GaussianFieldSpec>(m, "GaussianFieldSpec")
        .def(py::init<>())
        .def_readwrite("variance", &GaussianFieldSpec::variance)
        .def_readwrite("corr_length_sq", &GaussianFieldSpec::corr_length_sq)
        .def_readwrite("n_modes", &GaussianFieldSpec::n_modes)
        .def_readwrite("seed", &GaussianFieldSpec::seed);

    py::class_<FieldRealization>(m, "FieldRealization")
        .def_readonly("frequencies", &FieldRealization::frequencies)
        .def_readonly("cos_amps", &FieldRealization::cos_amps)
        .def_readonly("sin_amps", &FieldRealization::sin_amps)
        .def_readonly("scale", &FieldRealization::scale)
        .def("value", &FieldRealization::value, py::arg("y"))
        .def("derivative", &FieldRealization::derivative, py::arg("y"));

    py::class_<RandomHomogenized>(m, "RandomHomogenized")
        .def_readonly("K", &RandomHomogenized::K)
        .def_readonly("Khat", &RandomHomogenized::Khat)
        .def_readonly("kappa", &RandomHomogenized::kappa)
        .def_readonly("q", &RandomHomogenized::q);

    m.def("sample_field", py::overload_cast<const GaussianFieldSpec&>(&sample_field),
          py::arg("spec"));
    m.def("homogenized_constants", &homogenized_constants, py::arg("spec"), py::arg("D"));
    m.def("random_corrector_factor", &random_corrector_factor, py::arg("field"), py::arg("consts"),
          py::arg("D"), py::arg("y"));
    m.def("save_field", [](const FieldRealization& field) {
        std::ostringstream os;
        save_field(os, field);
        return os.str();
    });
    m.def(
        "load_field",
        [](const std::string& text, double variance) {
            std::istringstream in(text);
            return load_field(in, variance);
        },
        py::arg("text"), py::arg("variance") = 1.0);

    // --- subsolutions --------------------------------------------------------
    py::class_<Hamiltonian1D>(m, "Hamiltonian1D")
        .def(py::init([](std::function<double(double)> r, double q) {
                 return Hamiltonian1D{std::move(r), q};
             }),
             py::arg("r"), py::arg("q"));
    m.def("hamiltonian", &hamiltonian, py::arg("ham"), py::arg("x"), py::arg("p"));

    py::class_<ZeroSubsolution>(m, "ZeroSubsolution").def(py::init<>());
    py::class_<TerminalQuadraticSubsolution>(m, "TerminalQuadraticSubsolution")
        .def(py::init([](double kappa, double D, double T) {
                 return TerminalQuadraticSubsolution{kappa, D, T};
             }),
             py::arg("kappa"), py::arg("D"), py::arg("T"));
    py::enum_<ExitShape>(m, "ExitShape")
        .value("LinearDrift", ExitShape::LinearDrift)
        .value("RestPoint", ExitShape::RestPoint);
    py::class_<ExitSubsolution>(m, "ExitSubsolution")
        .def(py::init([](double D, double x_plus, double x_minus, ExitShape shape) {
                 return ExitSubsolution{D, x_plus, x_minus, shape};
             }),
             py::arg("D"), py::arg("x_plus"), py::arg("x_minus"), py::arg("shape"));

    py::class_<ValueGradient>(m, "ValueGradient")
        .def_readonly("value", &ValueGradient::value)
        .def_readonly("gradient", &ValueGradient::gradient);

    const auto as_subsolution = [](const py::object& sub) -> Subsolution {
        if (py::isinstance<ZeroSubsolution>(sub)) return sub.cast<ZeroSubsolution>();
        if (py::isinstance<TerminalQuadraticSubsolution>(sub))
            return sub.cast<TerminalQuadraticSubsolution>();
        return sub.cast<ExitSubsolution>();
    };

    m.def(
        "value_and_gradient",
        [as_subsolution](const py::object& sub, double t, double x) {
            return value_and_gradient(as_subsolution(sub), t, x);
        },
        py::arg("subsolution"), py::arg("t"), py::arg("x"));

    py::class_<VerifyGrid>(m, "VerifyGrid")
        .def(py::init<>())
        .def_readwrite("t_lo", &VerifyGrid::t_lo)
        .def_readwrite("t_hi", &VerifyGrid::t_hi)
        .def_readwrite("nt", &VerifyGrid::nt)
        .def_readwrite("x_lo", &VerifyGrid::x_lo)
        .def_readwrite("x_hi", &VerifyGrid::x_hi)
        .def_readwrite("nx", &VerifyGrid::nx)
        .def_readwrite("fd_step", &VerifyGrid::fd_step);
    py::class_<VerifyReport>(m, "VerifyReport")
        .def_readonly("max_violation", &VerifyReport::max_violation)
        .def_readonly("violation_t", &VerifyReport::violation_t)
        .def_readonly("violation_x", &VerifyReport::violation_x)
        .def_readonly("terminal_gap", &VerifyReport::terminal_gap)
        .def_readonly("passed", &VerifyReport::passed);
    m.def(
        "verify_subsolution",
        [as_subsolution](const py::object& sub, const Hamiltonian1D& ham, const VerifyGrid& grid,
                         double tol) { return verify_subsolution(as_subsolution(sub), ham, grid, tol); },
        py::arg("subsolution"), py::arg("ham"), py::arg("grid"), py::arg("tol"));

    // --- simulation ---------------------------------------------------------
    py::enum_<DtRule>(m, "DtRule").value("ScaledTol", DtRule::ScaledTol).value("Fixed", DtRule::Fixed);
    py::enum_<SimMode>(m, "SimMode")
        .value("FiniteHorizon", SimMode::FiniteHorizon)
        .value("ExitFromInterval", SimMode::ExitFromInterval);
    py::enum_<ControlVariant>(m, "ControlVariant")
        .value("NoControl", ControlVariant::NoControl)
        .value("FullMultiscale", ControlVariant::FullMultiscale)
        .value("HomogenizedOnly", ControlVariant::HomogenizedOnly);

    m.def("step_size", &step_size, py::arg("epsilon"), py::arg("delta"), py::arg("tol"));

    py::class_<TrajectoryOutcome>(m, "TrajectoryOutcome")
        .def_readonly("terminal_x", &TrajectoryOutcome::terminal_x)
        .def_readonly("exited_at_plus", &TrajectoryOutcome::exited_at_plus)
        .def_readonly("log_weight", &TrajectoryOutcome::log_weight)
        .def_readonly("n_steps", &TrajectoryOutcome::n_steps)
        .def_readonly("valid", &TrajectoryOutcome::valid)
        .def_readonly("censored", &TrajectoryOutcome::censored);

    py::class_<EstimatorSummary>(m, "EstimatorSummary")
        .def_readonly("n", &EstimatorSummary::n)
        .def_readonly("mean", &EstimatorSummary::mean)
        .def_readonly("second_moment", &EstimatorSummary::second_moment)
        .def_readonly("re_per_sample", &EstimatorSummary::re_per_sample)
        .def_readonly("re_of_mean", &EstimatorSummary::re_of_mean)
        .def_readonly("neg_eps_log_mean", &EstimatorSummary::neg_eps_log_mean)
        .def_readonly("neg_eps_log_m2", &EstimatorSummary::neg_eps_log_m2)
        .def_readonly("censored", &EstimatorSummary::censored)
        .def_readonly("invalid", &EstimatorSummary::invalid);

    m.def(
        "aggregate_values",
        [](const std::vector<double>& gammas, double epsilon) {
            return aggregate_values(gammas, epsilon);
        },
        py::arg("gammas"), py::arg("epsilon"));

    // --- experiments ----------------------------------------------------------
    py::enum_<EstimatorKind>(m, "EstimatorKind")
        .value("Theta0", EstimatorKind::Theta0)
        .value("Theta1", EstimatorKind::Theta1)
        .value("Theta2", EstimatorKind::Theta2);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("experiment_id", &ExperimentSpec::experiment_id)
        .def_readwrite("epsilon", &ExperimentSpec::epsilon)
        .def_readwrite("delta", &ExperimentSpec::delta)
        .def_readwrite("n_paths", &ExperimentSpec::n_paths)
        .def_readwrite("estimators", &ExperimentSpec::estimators)
        .def_readwrite("master_seed", &ExperimentSpec::master_seed)
        .def_readwrite("workers", &ExperimentSpec::workers)
        .def_readwrite("out_path", &ExperimentSpec::out_path)
        .def_readwrite("n_modes", &ExperimentSpec::n_modes)
        .def_readwrite("x0", &ExperimentSpec::x0)
        .def("__eq__", [](const ExperimentSpec& a, const ExperimentSpec& b) { return a == b; });

    py::class_<EstimatorRun>(m, "EstimatorRun")
        .def_readonly("kind", &EstimatorRun::kind)
        .def_readonly("summary", &EstimatorRun::summary)
        .def_readonly("wall_seconds", &EstimatorRun::wall_seconds);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("runs", &ExperimentResult::runs)
        .def_readonly("dt", &ExperimentResult::dt)
        .def_readonly("warnings", &ExperimentResult::warnings)
        .def("render_summary", &ExperimentResult::render_summary)
        .def("csv", [](const ExperimentResult& result) {
            std::ostringstream os;
            write_csv_header(os);
            for (const auto& row : result.rows) write_csv_row(os, row);
            return os.str();
        });

    m.def("preset", &preset, py::arg("table"), py::arg("row"), py::arg("scale_n") = 1.0);
    m.def("parse_config", [](const std::string& text) { return parse_config_string(text).spec; });
    m.def("serialize_config", &serialize_config, py::arg("spec"));
    m.def("run_experiment", &run_experiment, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());

    py::register_exception<BudgetRefused>(m, "BudgetRefused");
}
