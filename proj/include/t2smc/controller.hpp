#pragma once

#include <span>
#include <vector>

#include "t2smc/it2fls.hpp"

namespace t2smc {

/// sign with sign(0) = 0.
inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Linear sliding manifold (d/dt + lambda)^(n-1) applied to the tracking
/// error. The error vector is (e, e', ..., e^(n-1)).
struct SlidingSpec {
    int n = 2;
    double lambda = 10.0;

    SlidingSpec(int n, double lambda);
};

/// s = sum_{k=0}^{n-1} C(n-1,k) lambda^k e^(n-1-k).
double sliding_value(const SlidingSpec& spec, std::span<const double> e);

/// delta_s = sum_{k=1}^{n-1} C(n-1,k) lambda^k e^(n-k), so that
/// ds/dt = e^(n) + delta_s identically along any trajectory.
double delta_s(const SlidingSpec& spec, std::span<const double> e);

/// Super-twisting gains plus the reaching-condition constants: eta is the
/// required decay margin, delta the bound on the lumped uncertainty.
struct SuperTwistingGains {
    double lambda1 = 2.0;
    double lambda2 = 6.0;
    double eta = 0.1;
    double delta = 0.0;
};

/// Pointwise feasibility of the reaching condition:
/// lambda1*t + lambda2*sqrt(|s|) >= eta + delta.
bool stc_gain_feasible(const SuperTwistingGains& g, double s, double t);

struct StcCommand {
    double u = 0.0;      ///< control to apply over the step
    double u1_dot = 0.0; ///< derivative of the integral switching term
};

/// Super-twisting control with known nominal dynamics. u1_state is the
/// current value of the integral term (integrate u1_dot externally):
///   u1_dot = -lambda1 sign(s),  u2 = -lambda2 |s|^(1/2) sign(s),
///   u = -f_true + ydd - delta_s + u1_state + u2,
/// which cancels the nominal dynamics so that ds/dt = u1 + u2 + D.
StcCommand ideal_stc_control(const SlidingSpec& spec, const SuperTwistingGains& g, double f_true,
                             double ydd, std::span<const double> e, double s, double u1_state);

/// Classical first-order sliding-mode baseline with a hard switching term:
/// u = -f_known + ydd - delta_s - k_switch sign(s).
double first_order_smc_control(const SlidingSpec& spec, double f_known, double ydd,
                               std::span<const double> e, double s, double k_switch);

/// Radial projection onto the ball of the given radius (identity inside it).
std::vector<double> project_params(std::vector<double> theta, double radius);

struct AdaptiveGains {
    double gamma_f = 15.0;
    double gamma1 = 10.0;
    double gamma2 = 6.0;

    bool operator==(const AdaptiveGains&) const = default;
};

struct ProjectionRadii {
    double m_f = 100.0;
    double m_1 = 100.0;
    double m_2 = 100.0;
    bool enabled = true;

    bool operator==(const ProjectionRadii&) const = default;
};

/// Adaptive type-2 fuzzy super-twisting controller. Three approximators
/// replace the unknown dynamics and the two switching terms:
///   f_hat(x)  = theta_f . xi_f(x)
///   u1_hat(s) = (theta_1 . xi_1(s)) * t
///   u2_hat(s) = |s|^(1/2) (theta_2 . xi_2(s))
/// with t the elapsed controller time (never reset). One writer advances the
/// parameter state via adapt(); everything else is read-only.
class AdaptiveController {
public:
    AdaptiveController(FuzzyApproximator f_hat, FuzzyApproximator u1_hat, FuzzyApproximator u2_hat,
                       AdaptiveGains gains, ProjectionRadii radii);

    /// u = -f_hat(x) + ydd - delta_s + u1_hat(s) + u2_hat(s).
    double control(const SlidingSpec& spec, std::span<const double> x, std::span<const double> e,
                   double s, double ydd, double t) const;

    /// One explicit-Euler step of the adaptation laws followed by projection:
    ///   theta_f += h gamma_f s xi_f(x)
    ///   theta_1 -= h gamma1 s xi_1(s) t
    ///   theta_2 -= h gamma2 s |s|^(1/2) xi_2(s)
    void adapt(double s, std::span<const double> x, double t, double h);

    double f_hat_value(std::span<const double> x) const { return f_hat_.value(x); }
    double u1_hat_value(double s, double t) const;
    double u2_hat_value(double s) const;

    const FuzzyApproximator& f_hat() const { return f_hat_; }
    FuzzyApproximator& f_hat() { return f_hat_; }
    const FuzzyApproximator& u1_hat() const { return u1_hat_; }
    FuzzyApproximator& u1_hat() { return u1_hat_; }
    const FuzzyApproximator& u2_hat() const { return u2_hat_; }
    FuzzyApproximator& u2_hat() { return u2_hat_; }

    const AdaptiveGains& gains() const { return gains_; }
    const ProjectionRadii& radii() const { return radii_; }

    double theta_f_norm() const;
    double theta_1_norm() const;
    double theta_2_norm() const;

private:
    FuzzyApproximator f_hat_;
    FuzzyApproximator u1_hat_;
    FuzzyApproximator u2_hat_;
    AdaptiveGains gains_;
    ProjectionRadii radii_;
};

} // namespace t2smc
