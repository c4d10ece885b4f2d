#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "t2smc/plant.hpp"
#include "t2smc/sim.hpp"

namespace t2smc {

/// Interval-Gaussian membership table for one input: per-set lower/upper
/// means and spreads (all lists the same length).
struct MfTable {
    std::vector<double> m1;
    std::vector<double> m2;
    std::vector<double> sigma;

    bool operator==(const MfTable&) const = default;
};

/// Flat experiment description: everything needed to reproduce a run.
/// Key-value schema is documented in the README (sections plant., controller.,
/// mf., reference., sim., noise., out.).
struct ExperimentConfig {
    // plant
    std::string plant_preset = "duffing"; ///< "duffing" or "custom"
    int plant_n = 2;
    std::string plant_f;       ///< custom term sum
    std::string plant_delta_f; ///< custom term sum
    std::string plant_d;       ///< custom term sum (t only)
    PlantBounds bounds{50.0, 0.0, 0.0};
    bool with_uncertainty = true;
    bool with_disturbance = true;

    // controller (the kind itself lives in sim.kind)
    double lambda = 10.0;
    AdaptiveGains adaptive_gains{};
    double stc_lambda1 = 2.0;
    double stc_lambda2 = 6.0;
    double stc_eta = 0.1;
    double k_switch = 2.5;
    ProjectionRadii radii{100.0, 5.0, 30.0, true};

    // membership tables (mf.x shared by every state input, mf.s for the
    // sliding-value input of the two switching-term approximators)
    MfTable mf_x{{-3.5, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5},
                 {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 3.5},
                 {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}};
    MfTable mf_s{{-0.6, -0.1, 0.4}, {-0.4, 0.1, 0.6}, {0.3, 0.3, 0.3}};

    // reference
    std::string reference_preset = "composite-sine";

    // sim + noise + output
    SimConfig sim;
    std::string out_dir = "out";

    bool operator==(const ExperimentConfig&) const;
};

/// Thrown on malformed config text; message carries the line or field path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on file read/write failures.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse the flat key-value document (one `key = value` per line, '#'
/// comments). Unknown keys, duplicates, missing required keys and invariant
/// violations raise ConfigError with location info.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// Built-in experiment presets: "duffing-track" (full tracking setup with
/// noise) and "duffing-free" (uncontrolled chaotic run).
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Cross-field validation (throws ConfigError naming the field).
void validate(const ExperimentConfig& cfg);

PlantModel build_plant(const ExperimentConfig& cfg);
ReferenceSignal build_reference(const ExperimentConfig& cfg);
std::vector<IT2GaussianSet> make_sets(const MfTable& table);
AdaptiveController build_adaptive_controller(const ExperimentConfig& cfg);
ControllerSetup build_controller_setup(const ExperimentConfig& cfg);

/// Build everything from the config and run the closed loop.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Fixed-schema trajectory export, 17 significant digits per value:
/// t,x1,x2,x1_meas,x2_meas,yd,yd_dot,e1,e2,s,u,norm_thf,norm_th1,norm_th2
void write_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Human-readable metrics summary ("key = value" lines).
void write_metrics(const Metrics& m, const std::filesystem::path& path);
std::string format_metrics(const Metrics& m);

} // namespace t2smc
