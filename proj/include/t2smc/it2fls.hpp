#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace t2smc {

/// Gaussian interval type-2 fuzzy set: fixed spread `sigma`, mean anywhere in
/// [m1, m2]. The footprint of uncertainty is the band between lower() and
/// upper(); upper() is 1 exactly on [m1, m2].
struct IT2GaussianSet {
    double m1;
    double m2;
    double sigma;

    IT2GaussianSet(double m1, double m2, double sigma);

    /// Upper envelope: Gaussian shoulders around a flat top over [m1, m2].
    double upper(double x) const;
    /// Lower envelope: Gaussian centred on the far end of the mean interval,
    /// switching at the interval midpoint.
    double lower(double x) const;
};

/// Rule activation interval, 0 <= lo <= hi <= 1.
struct FiringInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// One rule: an antecedent set per input dimension plus an index into the
/// consequent/parameter vector.
struct Rule {
    std::vector<IT2GaussianSet> antecedents;
    std::size_t consequent_index = 0;
};

struct Rulebase {
    std::vector<Rule> rules;

    std::size_t size() const { return rules.size(); }
    std::size_t input_dim() const { return rules.empty() ? 0 : rules.front().antecedents.size(); }
    /// Number of consequent parameters the rulebase addresses (max index + 1).
    std::size_t param_count() const;
};

/// Type-reduced interval output, y_l <= y_r.
struct ReducedOutput {
    double y_l = 0.0;
    double y_r = 0.0;
};

/// (lower, upper) membership of x in the set. Rejects non-finite x.
std::pair<double, double> eval_mf_bounds(const IT2GaussianSet& set, double x);

/// Product t-norm over the antecedents' membership bounds.
FiringInterval firing_interval(const Rule& rule, std::span<const double> x);

/// Firing interval of every rule at input x.
std::vector<FiringInterval> fire_all(const Rulebase& rb, std::span<const double> x);

/// Center-of-sets type reduction. y_r maximises and y_l minimises
/// sum(f_i w_i) / sum(f_i) over f_i in [lo_i, hi_i]. The extrema are attained
/// at switch-point assignments over the consequent-sorted rules (lower firing
/// below the switch and upper above it for y_r, mirrored for y_l), so every
/// switch point is scanned with prefix sums and the best one returned.
/// Requires at least one rule with hi > 0.
ReducedOutput km_type_reduce(std::span<const FiringInterval> firings,
                             std::span<const double> consequents);

/// Crisp output: midpoint of the reduced interval.
double defuzzify(const ReducedOutput& r);

/// Normalised basis vector xi, sum(xi) = 1: the average of the
/// lower-normalised and upper-normalised firing strengths. When every lower
/// firing strength is zero the upper-normalised term is used alone.
/// Requires at least one rule with hi > 0.
std::vector<double> basis_vector(const Rulebase& rb, std::span<const double> x);

/// Cartesian-product rulebase over the per-input set lists; rule i gets
/// consequent index i. Input 0 varies slowest.
Rulebase build_grid_rulebase(const std::vector<std::vector<IT2GaussianSet>>& sets_per_input);

/// Rulebase plus an adjustable consequent vector theta; the output is linear
/// in theta: y(x) = theta . xi(x). theta starts at zero.
class FuzzyApproximator {
public:
    explicit FuzzyApproximator(Rulebase rb);

    double value(std::span<const double> x) const;
    std::vector<double> basis(std::span<const double> x) const;
    /// Diagnostic output through full type reduction + defuzzification.
    /// Agrees with value() whenever all consequents coincide.
    double km_value(std::span<const double> x) const;

    std::vector<double>& theta() { return theta_; }
    const std::vector<double>& theta() const { return theta_; }
    const Rulebase& rulebase() const { return rb_; }

private:
    Rulebase rb_;
    std::vector<double> theta_;
};

} // namespace t2smc
