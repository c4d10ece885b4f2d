#include "t2smc/controller.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace t2smc {

namespace {

void check_error_length(const SlidingSpec& spec, std::span<const double> e, const char* who) {
    if (e.size() != static_cast<std::size_t>(spec.n)) {
        throw std::invalid_argument(std::string(who) + ": error vector length " +
                                    std::to_string(e.size()) + " does not match order " +
                                    std::to_string(spec.n));
    }
}

double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

} // namespace

SlidingSpec::SlidingSpec(int n_in, double lambda_in) : n(n_in), lambda(lambda_in) {
    if (n < 2) throw std::invalid_argument("SlidingSpec: requires n >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("SlidingSpec: requires lambda > 0");
}

double sliding_value(const SlidingSpec& spec, std::span<const double> e) {
    check_error_length(spec, e, "sliding_value");
    // Binomial expansion of (d/dt + lambda)^(n-1); e[j] holds e^(j).
    double s = 0.0;
    double coeff = 1.0; // C(n-1, k) lambda^k, built incrementally
    const int p = spec.n - 1;
    for (int k = 0; k <= p; ++k) {
        s += coeff * e[p - k];
        coeff *= spec.lambda * static_cast<double>(p - k) / static_cast<double>(k + 1);
    }
    return s;
}

double delta_s(const SlidingSpec& spec, std::span<const double> e) {
    check_error_length(spec, e, "delta_s");
    double d = 0.0;
    const int p = spec.n - 1;
    double coeff = spec.lambda * static_cast<double>(p); // C(p,1) lambda
    for (int k = 1; k <= p; ++k) {
        d += coeff * e[spec.n - k];
        coeff *= spec.lambda * static_cast<double>(p - k) / static_cast<double>(k + 1);
    }
    return d;
}

bool stc_gain_feasible(const SuperTwistingGains& g, double s, double t) {
    if (t < 0.0) throw std::invalid_argument("stc_gain_feasible: requires t >= 0");
    return g.lambda1 * t + g.lambda2 * std::sqrt(std::abs(s)) >= g.eta + g.delta;
}

StcCommand ideal_stc_control(const SlidingSpec& spec, const SuperTwistingGains& g, double f_true,
                             double ydd, std::span<const double> e, double s, double u1_state) {
    const double u2 = -g.lambda2 * std::sqrt(std::abs(s)) * sgn(s);
    StcCommand cmd;
    cmd.u1_dot = -g.lambda1 * sgn(s);
    cmd.u = -f_true + ydd - delta_s(spec, e) + u1_state + u2;
    return cmd;
}

double first_order_smc_control(const SlidingSpec& spec, double f_known, double ydd,
                               std::span<const double> e, double s, double k_switch) {
    return -f_known + ydd - delta_s(spec, e) - k_switch * sgn(s);
}

std::vector<double> project_params(std::vector<double> theta, double radius) {
    if (radius < 0.0) throw std::invalid_argument("project_params: requires radius >= 0");
    // Rescale until the norm is truly inside the ball: the first scaling can
    // land an ulp above the radius, and vectors already inside must pass
    // through untouched so that projection is exactly idempotent.
    for (double n = norm2(theta); n > radius; n = norm2(theta)) {
        const double scale = radius / n;
        for (double& v : theta) v *= scale;
    }
    return theta;
}

AdaptiveController::AdaptiveController(FuzzyApproximator f_hat, FuzzyApproximator u1_hat,
                                       FuzzyApproximator u2_hat, AdaptiveGains gains,
                                       ProjectionRadii radii)
    : f_hat_(std::move(f_hat)),
      u1_hat_(std::move(u1_hat)),
      u2_hat_(std::move(u2_hat)),
      gains_(gains),
      radii_(radii) {
    if (!(gains_.gamma_f > 0.0 && gains_.gamma1 > 0.0 && gains_.gamma2 > 0.0)) {
        throw std::invalid_argument("AdaptiveController: adaptation gains must be positive");
    }
}

double AdaptiveController::u1_hat_value(double s, double t) const {
    const double sv[1] = {s};
    return u1_hat_.value(sv) * t;
}

double AdaptiveController::u2_hat_value(double s) const {
    const double sv[1] = {s};
    return std::sqrt(std::abs(s)) * u2_hat_.value(sv);
}

double AdaptiveController::control(const SlidingSpec& spec, std::span<const double> x,
                                   std::span<const double> e, double s, double ydd,
                                   double t) const {
    return -f_hat_.value(x) + ydd - delta_s(spec, e) + u1_hat_value(s, t) + u2_hat_value(s);
}

void AdaptiveController::adapt(double s, std::span<const double> x, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("AdaptiveController::adapt: requires h > 0");
    const double sv[1] = {s};

    const auto xi_f = f_hat_.basis(x);
    auto& th_f = f_hat_.theta();
    for (std::size_t i = 0; i < xi_f.size(); ++i) {
        th_f[f_hat_.rulebase().rules[i].consequent_index] += h * gains_.gamma_f * s * xi_f[i];
    }

    const auto xi_1 = u1_hat_.basis(sv);
    auto& th_1 = u1_hat_.theta();
    for (std::size_t i = 0; i < xi_1.size(); ++i) {
        th_1[u1_hat_.rulebase().rules[i].consequent_index] -= h * gains_.gamma1 * s * xi_1[i] * t;
    }

    const auto xi_2 = u2_hat_.basis(sv);
    auto& th_2 = u2_hat_.theta();
    const double s_pow = s * std::sqrt(std::abs(s));
    for (std::size_t i = 0; i < xi_2.size(); ++i) {
        th_2[u2_hat_.rulebase().rules[i].consequent_index] -= h * gains_.gamma2 * s_pow * xi_2[i];
    }

    if (radii_.enabled) {
        th_f = project_params(std::move(th_f), radii_.m_f);
        th_1 = project_params(std::move(th_1), radii_.m_1);
        th_2 = project_params(std::move(th_2), radii_.m_2);
    }
}

double AdaptiveController::theta_f_norm() const { return norm2(f_hat_.theta()); }
double AdaptiveController::theta_1_norm() const { return norm2(u1_hat_.theta()); }
double AdaptiveController::theta_2_norm() const { return norm2(u2_hat_.theta()); }

} // namespace t2smc
