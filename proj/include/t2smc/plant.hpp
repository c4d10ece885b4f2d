#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace t2smc {

/// Operating bounds: |f| < f_bound, |delta_f| <= delta_f_bound,
/// |d| <= delta_d_bound. Used by feasibility checks and sanity monitors.
struct PlantBounds {
    double f_bound = 50.0;
    double delta_f_bound = 0.0;
    double delta_d_bound = 0.0;

    bool operator==(const PlantBounds&) const = default;
};

/// Order-n affine plant in integrator-chain form:
///   x_i' = x_{i+1}            for i < n
///   x_n' = f(x,t) + delta_f(x,t) + d(t) + u
struct PlantModel {
    int n = 2;
    std::function<double(std::span<const double>, double)> f_nominal;
    std::function<double(std::span<const double>, double)> delta_f;
    std::function<double(double)> disturbance;
    PlantBounds bounds;
    std::string name;
};

/// Chaotic Duffing oscillator with sinusoidal parameter uncertainty and
/// disturbance:
///   f  = -0.4 x2 - 1.1 x1 - x1^3 - 2.1 cos(1.8 t)
///   df = (pi/6) sin(2 pi x1) sin(3 pi x2),  d = sin(2 t)
PlantModel duffing_preset();

/// Copy of the plant with uncertainty and/or disturbance removed.
PlantModel strip_perturbations(PlantModel m, bool keep_uncertainty, bool keep_disturbance);

/// Right-hand side of the integrator chain at (x, t) under control u.
std::vector<double> plant_derivative(const PlantModel& m, std::span<const double> x, double t,
                                     double u);

/// Reference trajectory with analytic first and second derivatives.
struct ReferenceSignal {
    std::function<double(double)> y_d;
    std::function<double(double)> y_d_dot;
    std::function<double(double)> y_d_ddot;
};

/// y_d = (pi/3)(sin t + 0.3 sin 3t) and its derivatives.
ReferenceSignal reference_preset();

/// Measurement-noise specification: additive white Gaussian noise at the
/// given SNR (per channel, relative to a supplied signal RMS). No value means
/// noise-free.
struct NoiseSpec {
    std::optional<double> snr_db;
    std::uint64_t seed = 0;

    bool operator==(const NoiseSpec&) const = default;
};

/// Seeded per-channel Gaussian noise source. Noise std per channel is
/// rms * 10^(-snr_db/20). Output is reproducible across platforms: draws come
/// from mt19937_64 through a fixed Box-Muller transform.
class NoiseGenerator {
public:
    NoiseGenerator(const NoiseSpec& spec, std::vector<double> channel_rms);

    /// x plus one fresh noise draw per channel (identity when noise-free).
    std::vector<double> apply(std::span<const double> x);

    /// One standard-normal draw.
    double standard_normal();

    bool enabled() const { return !sigma_.empty(); }
    const std::vector<double>& sigma() const { return sigma_; }

private:
    std::vector<double> sigma_; ///< empty when noise-free
    std::mt19937_64 rng_;
};

// --- custom plants from term lists -----------------------------------------
//
// A plant function is a sum of terms, each of the form
//     c [* x<j>[^<p>]]... [* sin(<w>*t) | cos(<w>*t)]...
// e.g.  "-0.4*x2 - 1.1*x1 - x1^3 - 2.1*cos(1.8*t)".

struct PlantTerm {
    double coeff = 1.0;
    std::vector<int> powers;              ///< exponent per state variable
    std::vector<std::pair<bool, double>> trig; ///< (is_sin, omega) factors of t

    double eval(std::span<const double> x, double t) const;
};

/// Parse a term sum over n state variables. Throws std::invalid_argument with
/// the offending fragment on syntax errors.
std::vector<PlantTerm> parse_term_sum(const std::string& text, int n);

std::function<double(std::span<const double>, double)> compile_terms(std::vector<PlantTerm> terms);

/// Custom plant assembled from term-sum strings ("" means identically zero).
PlantModel custom_plant(int n, const std::string& f_terms, const std::string& delta_f_terms,
                        const std::string& d_terms, PlantBounds bounds);

/// Preset lookup ("duffing"), for config-driven selection.
PlantModel plant_by_name(const std::string& name);

} // namespace t2smc
