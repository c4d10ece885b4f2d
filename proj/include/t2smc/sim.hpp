#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "t2smc/controller.hpp"
#include "t2smc/plant.hpp"

namespace t2smc {

enum class ControllerKind { none, adaptive_t2_stc, ideal_stc, first_order_smc };

std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

/// Fixed-step closed-loop run settings. `seed` drives the measurement-noise
/// stream (noise.seed is overridden by it at run time so one knob controls
/// reproducibility).
struct SimConfig {
    double t_end = 20.0;
    double h = 1e-3;
    std::vector<double> x0;
    ControllerKind kind = ControllerKind::none;
    std::uint64_t seed = 0;
    NoiseSpec noise;
    int decimate = 1;

    bool operator==(const SimConfig&) const = default;
};

void validate(const SimConfig& cfg);

/// Column-oriented record of a run, sampled every `decimate` steps. e1/e2/s
/// are the true tracking errors and true sliding value; the controller acts
/// on their measured counterparts.
struct Trajectory {
    std::vector<double> t;
    std::vector<double> x1, x2;
    std::vector<double> x1_meas, x2_meas;
    std::vector<double> yd, yd_dot;
    std::vector<double> e1, e2, s;
    std::vector<double> u;
    std::vector<double> norm_thf, norm_th1, norm_th2;

    std::size_t rows() const { return t.size(); }
};

struct Metrics {
    double rmse_e1 = 0.0;
    double rmse_e2 = 0.0;
    double tv_u = 0.0; ///< total variation of u over the window
    std::optional<double> settle_time; ///< first time |e1| enters the band for good
    std::optional<double> s_band_time; ///< first time |s| enters its band for good
};

/// Controller selection for a run. The fields matching `kind` are used; the
/// adaptive controller is copied in and its parameter state evolves inside
/// the loop.
struct ControllerSetup {
    SlidingSpec sliding{2, 10.0};
    SuperTwistingGains stc{};
    double k_switch = 2.5;
    std::optional<AdaptiveController> adaptive;
};

struct RunResult {
    Trajectory trajectory;
    Metrics metrics;
    std::optional<AdaptiveController> final_controller; ///< adaptive kind only
};

/// Thrown when the state leaves the finite domain mid-run.
class SimulationDiverged : public std::runtime_error {
public:
    SimulationDiverged(std::size_t step, double t);
    std::size_t step;
    double time;
};

using Derivative = std::function<std::vector<double>(std::span<const double>, double)>;

/// Classical fourth-order Runge-Kutta update with the input held constant
/// inside the step. Throws SimulationDiverged on non-finite derivatives.
std::vector<double> rk4_step(const Derivative& deriv, std::span<const double> x, double t, double h);

/// Closed-loop run: per step, measure (noisy) state, form errors and sliding
/// value, compute u once (zero-order hold), adapt parameters (adaptive kind),
/// then RK4-advance the true plant. Noise channels are calibrated against the
/// RMS of the reference trajectory over the horizon.
RunResult run_closed_loop(const SimConfig& cfg, const PlantModel& plant, ControllerSetup setup,
                          const ReferenceSignal& ref);

/// Window metrics: RMSE of e1/e2 and total variation of u over [t_a, t_b];
/// settle/s-band times over the whole trajectory.
Metrics compute_metrics(const Trajectory& traj, double t_a, double t_b, double band,
                        double s_band = 0.1);

/// Max deviation between the central-difference derivative of s and its
/// reconstruction e^(n) + delta_s from the plant equations. Requires an
/// undecimated, noise-free trajectory; the held control across each sample is
/// taken as the mean of the two adjacent holds, matching the central stencil.
double sliding_consistency_check(const Trajectory& traj, const SlidingSpec& spec,
                                 const PlantModel& plant, const ReferenceSignal& ref);

} // namespace t2smc
