#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "t2smc/experiment.hpp"

namespace py = pybind11;
using namespace t2smc;

namespace {

std::vector<FiringInterval> to_firings(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<FiringInterval> out;
    out.reserve(pairs.size());
    for (auto [lo, hi] : pairs) out.push_back({lo, hi});
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interval type-2 fuzzy super-twisting sliding-mode control simulator";

    py::class_<IT2GaussianSet>(m, "IT2GaussianSet")
        .def(py::init<double, double, double>(), py::arg("m1"), py::arg("m2"), py::arg("sigma"))
        .def_readonly("m1", &IT2GaussianSet::m1)
        .def_readonly("m2", &IT2GaussianSet::m2)
        .def_readonly("sigma", &IT2GaussianSet::sigma)
        .def("lower", &IT2GaussianSet::lower)
        .def("upper", &IT2GaussianSet::upper);

    m.def("eval_mf_bounds", &eval_mf_bounds, py::arg("set"), py::arg("x"),
          "(lower, upper) membership of x");

    py::class_<Rulebase>(m, "Rulebase")
        .def_property_readonly("size", &Rulebase::size)
        .def_property_readonly("input_dim", &Rulebase::input_dim);

    m.def("build_grid_rulebase", &build_grid_rulebase, py::arg("sets_per_input"));
    m.def(
        "fire_all",
        [](const Rulebase& rb, const std::vector<double>& x) {
            std::vector<std::pair<double, double>> out;
            for (const FiringInterval& f : fire_all(rb, x)) out.emplace_back(f.lo, f.hi);
            return out;
        },
        py::arg("rulebase"), py::arg("x"), "per-rule (lo, hi) firing intervals");
    m.def(
        "km_type_reduce",
        [](const std::vector<std::pair<double, double>>& firings,
           const std::vector<double>& consequents) {
            const ReducedOutput r = km_type_reduce(to_firings(firings), consequents);
            return std::make_pair(r.y_l, r.y_r);
        },
        py::arg("firings"), py::arg("consequents"), "(y_l, y_r) center-of-sets reduction");
    m.def(
        "defuzzify", [](std::pair<double, double> yl_yr) {
            return defuzzify(ReducedOutput{yl_yr.first, yl_yr.second});
        },
        py::arg("reduced"));
    m.def(
        "basis_vector",
        [](const Rulebase& rb, const std::vector<double>& x) { return basis_vector(rb, x); },
        py::arg("rulebase"), py::arg("x"));

    py::class_<FuzzyApproximator>(m, "FuzzyApproximator")
        .def(py::init<Rulebase>(), py::arg("rulebase"))
        .def("value", [](const FuzzyApproximator& f, const std::vector<double>& x) { return f.value(x); })
        .def("basis", [](const FuzzyApproximator& f, const std::vector<double>& x) { return f.basis(x); })
        .def("km_value", [](const FuzzyApproximator& f, const std::vector<double>& x) { return f.km_value(x); })
        .def_property(
            "theta", [](const FuzzyApproximator& f) { return f.theta(); },
            [](FuzzyApproximator& f, const std::vector<double>& th) {
                if (th.size() != f.theta().size()) throw py::value_error("theta size mismatch");
                f.theta() = th;
            });

    py::class_<SlidingSpec>(m, "SlidingSpec")
        .def(py::init<int, double>(), py::arg("n"), py::arg("lambda_"))
        .def_readonly("n", &SlidingSpec::n)
        .def_readonly("lambda_", &SlidingSpec::lambda);
    m.def("sliding_value", [](const SlidingSpec& sp, const std::vector<double>& e) { return sliding_value(sp, e); });
    m.def("delta_s", [](const SlidingSpec& sp, const std::vector<double>& e) { return delta_s(sp, e); });

    py::class_<SuperTwistingGains>(m, "SuperTwistingGains")
        .def(py::init([](double l1, double l2, double eta, double delta) {
                 return SuperTwistingGains{l1, l2, eta, delta};
             }),
             py::arg("lambda1"), py::arg("lambda2"), py::arg("eta"), py::arg("delta"))
        .def_readwrite("lambda1", &SuperTwistingGains::lambda1)
        .def_readwrite("lambda2", &SuperTwistingGains::lambda2)
        .def_readwrite("eta", &SuperTwistingGains::eta)
        .def_readwrite("delta", &SuperTwistingGains::delta);
    m.def("stc_gain_feasible", &stc_gain_feasible, py::arg("gains"), py::arg("s"), py::arg("t"));
    m.def("project_params", &project_params, py::arg("theta"), py::arg("radius"));

    py::class_<AdaptiveGains>(m, "AdaptiveGains")
        .def(py::init([](double gf, double g1, double g2) {
                 return AdaptiveGains{gf, g1, g2};
             }),
             py::arg("gamma_f") = 15.0, py::arg("gamma1") = 10.0, py::arg("gamma2") = 6.0)
        .def_readwrite("gamma_f", &AdaptiveGains::gamma_f)
        .def_readwrite("gamma1", &AdaptiveGains::gamma1)
        .def_readwrite("gamma2", &AdaptiveGains::gamma2);

    py::class_<ProjectionRadii>(m, "ProjectionRadii")
        .def(py::init([](double mf, double m1, double m2, bool enabled) {
                 return ProjectionRadii{mf, m1, m2, enabled};
             }),
             py::arg("m_f") = 100.0, py::arg("m_1") = 100.0, py::arg("m_2") = 100.0,
             py::arg("enabled") = true)
        .def_readwrite("m_f", &ProjectionRadii::m_f)
        .def_readwrite("m_1", &ProjectionRadii::m_1)
        .def_readwrite("m_2", &ProjectionRadii::m_2)
        .def_readwrite("enabled", &ProjectionRadii::enabled);

    py::class_<AdaptiveController>(m, "AdaptiveController")
        .def(py::init<FuzzyApproximator, FuzzyApproximator, FuzzyApproximator, AdaptiveGains,
                      ProjectionRadii>(),
             py::arg("f_hat"), py::arg("u1_hat"), py::arg("u2_hat"), py::arg("gains"),
             py::arg("radii"))
        .def("control",
             [](const AdaptiveController& c, const SlidingSpec& sp, const std::vector<double>& x,
                const std::vector<double>& e, double s, double ydd, double t) {
                 return c.control(sp, x, e, s, ydd, t);
             })
        .def("adapt",
             [](AdaptiveController& c, double s, const std::vector<double>& x, double t, double h) {
                 c.adapt(s, x, t, h);
             })
        .def("theta_f_norm", &AdaptiveController::theta_f_norm)
        .def("theta_1_norm", &AdaptiveController::theta_1_norm)
        .def("theta_2_norm", &AdaptiveController::theta_2_norm);

    py::class_<PlantModel>(m, "PlantModel")
        .def_readonly("n", &PlantModel::n)
        .def_readonly("name", &PlantModel::name)
        .def("f_nominal", [](const PlantModel& p, const std::vector<double>& x, double t) { return p.f_nominal(x, t); })
        .def("delta_f", [](const PlantModel& p, const std::vector<double>& x, double t) { return p.delta_f(x, t); })
        .def("disturbance", [](const PlantModel& p, double t) { return p.disturbance(t); });
    m.def("duffing_preset", &duffing_preset);
    m.def("plant_derivative",
          [](const PlantModel& p, const std::vector<double>& x, double t, double u) {
              return plant_derivative(p, x, t, u);
          });

    py::class_<ReferenceSignal>(m, "ReferenceSignal")
        .def("y_d", [](const ReferenceSignal& r, double t) { return r.y_d(t); })
        .def("y_d_dot", [](const ReferenceSignal& r, double t) { return r.y_d_dot(t); })
        .def("y_d_ddot", [](const ReferenceSignal& r, double t) { return r.y_d_ddot(t); });
    m.def("reference_preset", &reference_preset);

    py::enum_<ControllerKind>(m, "ControllerKind")
        .value("none", ControllerKind::none)
        .value("adaptive_t2_stc", ControllerKind::adaptive_t2_stc)
        .value("ideal_stc", ControllerKind::ideal_stc)
        .value("first_order_smc", ControllerKind::first_order_smc);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init([](std::optional<double> snr_db, std::uint64_t seed) {
                 return NoiseSpec{snr_db, seed};
             }),
             py::arg("snr_db") = std::nullopt, py::arg("seed") = 0)
        .def_readwrite("snr_db", &NoiseSpec::snr_db)
        .def_readwrite("seed", &NoiseSpec::seed);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("t_end", &SimConfig::t_end)
        .def_readwrite("h", &SimConfig::h)
        .def_readwrite("x0", &SimConfig::x0)
        .def_readwrite("kind", &SimConfig::kind)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("noise", &SimConfig::noise)
        .def_readwrite("decimate", &SimConfig::decimate);

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("rows", &Trajectory::rows)
        .def_readonly("t", &Trajectory::t)
        .def_readonly("x1", &Trajectory::x1)
        .def_readonly("x2", &Trajectory::x2)
        .def_readonly("x1_meas", &Trajectory::x1_meas)
        .def_readonly("x2_meas", &Trajectory::x2_meas)
        .def_readonly("yd", &Trajectory::yd)
        .def_readonly("yd_dot", &Trajectory::yd_dot)
        .def_readonly("e1", &Trajectory::e1)
        .def_readonly("e2", &Trajectory::e2)
        .def_readonly("s", &Trajectory::s)
        .def_readonly("u", &Trajectory::u)
        .def_readonly("norm_thf", &Trajectory::norm_thf)
        .def_readonly("norm_th1", &Trajectory::norm_th1)
        .def_readonly("norm_th2", &Trajectory::norm_th2);

    py::class_<Metrics>(m, "Metrics")
        .def_readonly("rmse_e1", &Metrics::rmse_e1)
        .def_readonly("rmse_e2", &Metrics::rmse_e2)
        .def_readonly("tv_u", &Metrics::tv_u)
        .def_readonly("settle_time", &Metrics::settle_time)
        .def_readonly("s_band_time", &Metrics::s_band_time);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("trajectory", &RunResult::trajectory)
        .def_readonly("metrics", &RunResult::metrics);

    py::class_<MfTable>(m, "MfTable")
        .def(py::init<>())
        .def_readwrite("m1", &MfTable::m1)
        .def_readwrite("m2", &MfTable::m2)
        .def_readwrite("sigma", &MfTable::sigma);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("plant_preset", &ExperimentConfig::plant_preset)
        .def_readwrite("plant_n", &ExperimentConfig::plant_n)
        .def_readwrite("plant_f", &ExperimentConfig::plant_f)
        .def_readwrite("plant_delta_f", &ExperimentConfig::plant_delta_f)
        .def_readwrite("plant_d", &ExperimentConfig::plant_d)
        .def_readwrite("with_uncertainty", &ExperimentConfig::with_uncertainty)
        .def_readwrite("with_disturbance", &ExperimentConfig::with_disturbance)
        .def_readwrite("lambda_", &ExperimentConfig::lambda)
        .def_readwrite("adaptive_gains", &ExperimentConfig::adaptive_gains)
        .def_readwrite("stc_lambda1", &ExperimentConfig::stc_lambda1)
        .def_readwrite("stc_lambda2", &ExperimentConfig::stc_lambda2)
        .def_readwrite("stc_eta", &ExperimentConfig::stc_eta)
        .def_readwrite("k_switch", &ExperimentConfig::k_switch)
        .def_readwrite("radii", &ExperimentConfig::radii)
        .def_readwrite("mf_x", &ExperimentConfig::mf_x)
        .def_readwrite("mf_s", &ExperimentConfig::mf_s)
        .def_readwrite("sim", &ExperimentConfig::sim)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });

    m.def("preset", &preset, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("serialize_config", &serialize_config, py::arg("config"));
    m.def("run_experiment", &run_experiment, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("write_csv", &write_csv, py::arg("trajectory"), py::arg("path"));

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SimulationDiverged>(m, "SimulationDiverged", PyExc_RuntimeError);
}
