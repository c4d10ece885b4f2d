#include "t2smc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace t2smc {

std::string to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::none: return "none";
        case ControllerKind::adaptive_t2_stc: return "adaptive_t2_stc";
        case ControllerKind::ideal_stc: return "ideal_stc";
        case ControllerKind::first_order_smc: return "first_order_smc";
    }
    return "unknown";
}

ControllerKind controller_kind_from_string(const std::string& name) {
    if (name == "none") return ControllerKind::none;
    if (name == "adaptive_t2_stc") return ControllerKind::adaptive_t2_stc;
    if (name == "ideal_stc") return ControllerKind::ideal_stc;
    if (name == "first_order_smc") return ControllerKind::first_order_smc;
    throw std::invalid_argument("unknown controller kind '" + name + "'");
}

void validate(const SimConfig& cfg) {
    if (!(cfg.h > 0.0 && cfg.h <= 0.01)) {
        throw std::invalid_argument("SimConfig: requires 0 < h <= 0.01");
    }
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("SimConfig: requires t_end > 0");
    if (cfg.decimate < 1) throw std::invalid_argument("SimConfig: requires decimate >= 1");
    if (cfg.x0.empty()) throw std::invalid_argument("SimConfig: initial state is empty");
}

SimulationDiverged::SimulationDiverged(std::size_t step_in, double t_in)
    : std::runtime_error("simulation diverged: non-finite state at step " + std::to_string(step_in) +
                         " (t = " + std::to_string(t_in) + " s)"),
      step(step_in),
      time(t_in) {}

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

std::vector<double> axpy(std::span<const double> x, double a, std::span<const double> d) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * d[i];
    return out;
}

} // namespace

std::vector<double> rk4_step(const Derivative& deriv, std::span<const double> x, double t,
                             double h) {
    if (!(h > 0.0)) throw std::invalid_argument("rk4_step: requires h > 0");
    const auto k1 = deriv(x, t);
    const auto k2 = deriv(axpy(x, 0.5 * h, k1), t + 0.5 * h);
    const auto k3 = deriv(axpy(x, 0.5 * h, k2), t + 0.5 * h);
    const auto k4 = deriv(axpy(x, h, k3), t + h);
    if (!all_finite(k1) || !all_finite(k2) || !all_finite(k3) || !all_finite(k4)) {
        throw SimulationDiverged(0, t);
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

RunResult run_closed_loop(const SimConfig& cfg, const PlantModel& plant, ControllerSetup setup,
                          const ReferenceSignal& ref) {
    validate(cfg);
    if (plant.n != 2) {
        throw std::invalid_argument("run_closed_loop: trajectory schema is second-order only");
    }
    if (cfg.x0.size() != static_cast<std::size_t>(plant.n)) {
        throw std::invalid_argument("run_closed_loop: x0 length does not match plant order");
    }
    if (cfg.kind == ControllerKind::adaptive_t2_stc && !setup.adaptive) {
        throw std::invalid_argument("run_closed_loop: adaptive kind needs an AdaptiveController");
    }

    const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.h));

    // Noise channels are calibrated once against the reference RMS over the
    // horizon, so the noise level does not depend on the realised trajectory.
    NoiseSpec noise = cfg.noise;
    noise.seed = cfg.seed;
    std::vector<double> channel_rms(2, 1.0);
    if (noise.snr_db) {
        double acc1 = 0.0, acc2 = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = static_cast<double>(k) * cfg.h;
            const double yd = ref.y_d(t);
            const double ydd = ref.y_d_dot(t);
            acc1 += yd * yd;
            acc2 += ydd * ydd;
        }
        channel_rms[0] = std::sqrt(acc1 / static_cast<double>(steps));
        channel_rms[1] = std::sqrt(acc2 / static_cast<double>(steps));
    }
    NoiseGenerator noise_gen(noise, channel_rms);

    Trajectory traj;
    const std::size_t expected_rows = steps / static_cast<std::size_t>(cfg.decimate) + 1;
    for (auto* col : {&traj.t, &traj.x1, &traj.x2, &traj.x1_meas, &traj.x2_meas, &traj.yd,
                      &traj.yd_dot, &traj.e1, &traj.e2, &traj.s, &traj.u, &traj.norm_thf,
                      &traj.norm_th1, &traj.norm_th2}) {
        col->reserve(expected_rows);
    }

    std::vector<double> x = cfg.x0;
    double u1_state = 0.0; // integral term of the ideal super-twisting law

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.h;
        if (!all_finite(x)) throw SimulationDiverged(k, t);

        const double yd = ref.y_d(t);
        const double yd_dot = ref.y_d_dot(t);
        const double yd_ddot = ref.y_d_ddot(t);

        const std::vector<double> x_meas = noise_gen.apply(x);
        const std::vector<double> e_meas = {x_meas[0] - yd, x_meas[1] - yd_dot};
        const double s_meas = sliding_value(setup.sliding, e_meas);

        double u = 0.0;
        switch (cfg.kind) {
            case ControllerKind::none:
                break;
            case ControllerKind::ideal_stc: {
                const StcCommand cmd = ideal_stc_control(setup.sliding, setup.stc,
                                                         plant.f_nominal(x_meas, t), yd_ddot,
                                                         e_meas, s_meas, u1_state);
                u = cmd.u;
                u1_state += cfg.h * cmd.u1_dot;
                break;
            }
            case ControllerKind::first_order_smc:
                u = first_order_smc_control(setup.sliding, plant.f_nominal(x_meas, t), yd_ddot,
                                            e_meas, s_meas, setup.k_switch);
                break;
            case ControllerKind::adaptive_t2_stc:
                u = setup.adaptive->control(setup.sliding, x_meas, e_meas, s_meas, yd_ddot, t);
                setup.adaptive->adapt(s_meas, x_meas, t, cfg.h);
                break;
        }
        if (!std::isfinite(u)) throw SimulationDiverged(k, t);

        if (k % static_cast<std::size_t>(cfg.decimate) == 0) {
            const std::vector<double> e_true = {x[0] - yd, x[1] - yd_dot};
            traj.t.push_back(t);
            traj.x1.push_back(x[0]);
            traj.x2.push_back(x[1]);
            traj.x1_meas.push_back(x_meas[0]);
            traj.x2_meas.push_back(x_meas[1]);
            traj.yd.push_back(yd);
            traj.yd_dot.push_back(yd_dot);
            traj.e1.push_back(e_true[0]);
            traj.e2.push_back(e_true[1]);
            traj.s.push_back(sliding_value(setup.sliding, e_true));
            traj.u.push_back(u);
            if (setup.adaptive) {
                traj.norm_thf.push_back(setup.adaptive->theta_f_norm());
                traj.norm_th1.push_back(setup.adaptive->theta_1_norm());
                traj.norm_th2.push_back(setup.adaptive->theta_2_norm());
            } else {
                traj.norm_thf.push_back(0.0);
                traj.norm_th1.push_back(0.0);
                traj.norm_th2.push_back(0.0);
            }
        }

        try {
            x = rk4_step([&](std::span<const double> xs, double ts) {
                             return plant_derivative(plant, xs, ts, u);
                         },
                         x, t, cfg.h);
        } catch (const SimulationDiverged&) {
            throw SimulationDiverged(k, t);
        }
    }

    RunResult result;
    result.trajectory = std::move(traj);
    const double t_a = cfg.t_end > 10.0 ? 10.0 : 0.5 * cfg.t_end;
    result.metrics = compute_metrics(result.trajectory, t_a, cfg.t_end, 0.05);
    result.final_controller = std::move(setup.adaptive);
    return result;
}

Metrics compute_metrics(const Trajectory& traj, double t_a, double t_b, double band,
                        double s_band) {
    if (!(t_a < t_b)) throw std::invalid_argument("compute_metrics: requires t_a < t_b");
    Metrics m;
    double acc1 = 0.0, acc2 = 0.0;
    std::size_t count = 0;
    bool have_prev_u = false;
    double prev_u = 0.0;
    for (std::size_t i = 0; i < traj.rows(); ++i) {
        if (traj.t[i] < t_a || traj.t[i] > t_b) continue;
        acc1 += traj.e1[i] * traj.e1[i];
        acc2 += traj.e2[i] * traj.e2[i];
        if (have_prev_u) m.tv_u += std::abs(traj.u[i] - prev_u);
        prev_u = traj.u[i];
        have_prev_u = true;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("compute_metrics: empty window");
    m.rmse_e1 = std::sqrt(acc1 / static_cast<double>(count));
    m.rmse_e2 = std::sqrt(acc2 / static_cast<double>(count));

    // Last excursion outside the band decides the settle time.
    auto entry_time = [&](const std::vector<double>& col, double b) -> std::optional<double> {
        std::size_t last_out = traj.rows(); // sentinel: never out
        for (std::size_t i = traj.rows(); i-- > 0;) {
            if (std::abs(col[i]) > b) {
                last_out = i;
                break;
            }
        }
        if (last_out == traj.rows()) return 0.0;
        if (last_out + 1 >= traj.rows()) return std::nullopt; // still outside at the end
        return traj.t[last_out + 1];
    };
    m.settle_time = entry_time(traj.e1, band);
    m.s_band_time = entry_time(traj.s, s_band);
    return m;
}

double sliding_consistency_check(const Trajectory& traj, const SlidingSpec& spec,
                                 const PlantModel& plant, const ReferenceSignal& ref) {
    const std::size_t n = traj.rows();
    if (n < 3) throw std::invalid_argument("sliding_consistency_check: trajectory too short");
    const double h = traj.t[1] - traj.t[0];
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (std::abs((traj.t[k + 1] - traj.t[k]) - h) > 1e-9) {
            throw std::invalid_argument("sliding_consistency_check: requires uniform sampling");
        }
        const double s_dot_fd = (traj.s[k + 1] - traj.s[k - 1]) / (2.0 * h);
        const std::vector<double> x = {traj.x1[k], traj.x2[k]};
        const double u_held = 0.5 * (traj.u[k - 1] + traj.u[k]);
        const double xn_dot = plant.f_nominal(x, traj.t[k]) + plant.delta_f(x, traj.t[k]) +
                              plant.disturbance(traj.t[k]) + u_held;
        const double e_n = xn_dot - ref.y_d_ddot(traj.t[k]);
        const std::vector<double> e = {traj.e1[k], traj.e2[k]};
        worst = std::max(worst, std::abs(s_dot_fd - (e_n + delta_s(spec, e))));
    }
    return worst;
}

} // namespace t2smc
