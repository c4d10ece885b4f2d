#include "t2smc/it2fls.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace t2smc {

namespace {

double gauss(double dist, double sigma) {
    return std::exp(-(dist * dist) / (2.0 * sigma * sigma));
}

} // namespace

IT2GaussianSet::IT2GaussianSet(double m1_in, double m2_in, double sigma_in)
    : m1(m1_in), m2(m2_in), sigma(sigma_in) {
    if (!std::isfinite(m1) || !std::isfinite(m2) || !std::isfinite(sigma)) {
        throw std::invalid_argument("IT2GaussianSet: parameters must be finite");
    }
    if (m1 > m2) {
        throw std::invalid_argument("IT2GaussianSet: requires m1 <= m2");
    }
    if (sigma <= 0.0) {
        throw std::invalid_argument("IT2GaussianSet: requires sigma > 0");
    }
}

double IT2GaussianSet::upper(double x) const {
    if (x < m1) return gauss(x - m1, sigma);
    if (x > m2) return gauss(x - m2, sigma);
    return 1.0;
}

double IT2GaussianSet::lower(double x) const {
    // The farther of the two extreme means gives the smaller membership.
    return x <= 0.5 * (m1 + m2) ? gauss(x - m2, sigma) : gauss(x - m1, sigma);
}

std::size_t Rulebase::param_count() const {
    std::size_t n = 0;
    for (const Rule& r : rules) n = std::max(n, r.consequent_index + 1);
    return n;
}

std::pair<double, double> eval_mf_bounds(const IT2GaussianSet& set, double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("eval_mf_bounds: input must be finite");
    }
    return {set.lower(x), set.upper(x)};
}

FiringInterval firing_interval(const Rule& rule, std::span<const double> x) {
    if (x.size() != rule.antecedents.size()) {
        throw std::invalid_argument("firing_interval: input dimension " + std::to_string(x.size()) +
                                    " does not match antecedent count " +
                                    std::to_string(rule.antecedents.size()));
    }
    FiringInterval f{1.0, 1.0};
    for (std::size_t j = 0; j < x.size(); ++j) {
        auto [lo, hi] = eval_mf_bounds(rule.antecedents[j], x[j]);
        f.lo *= lo;
        f.hi *= hi;
    }
    return f;
}

std::vector<FiringInterval> fire_all(const Rulebase& rb, std::span<const double> x) {
    std::vector<FiringInterval> out;
    out.reserve(rb.size());
    for (const Rule& r : rb.rules) out.push_back(firing_interval(r, x));
    return out;
}

ReducedOutput km_type_reduce(std::span<const FiringInterval> firings,
                             std::span<const double> consequents) {
    const std::size_t m = firings.size();
    if (m == 0 || consequents.size() != m) {
        throw std::invalid_argument("km_type_reduce: need one consequent per firing interval");
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return consequents[a] < consequents[b]; });

    // Prefix sums in consequent-sorted order: lo/hi firings and their
    // consequent-weighted counterparts.
    std::vector<double> plo(m + 1, 0.0), phi(m + 1, 0.0), plo_w(m + 1, 0.0), phi_w(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const FiringInterval& f = firings[order[i]];
        const double w = consequents[order[i]];
        plo[i + 1] = plo[i] + f.lo;
        phi[i + 1] = phi[i] + f.hi;
        plo_w[i + 1] = plo_w[i] + f.lo * w;
        phi_w[i + 1] = phi_w[i] + f.hi * w;
    }
    if (phi[m] <= 0.0) {
        throw std::invalid_argument("km_type_reduce: no rule fires (all upper strengths zero)");
    }

    bool have_r = false, have_l = false;
    double y_r = 0.0, y_l = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        // y_r candidate: lower firings on the k smallest consequents, upper on the rest.
        const double den_r = plo[k] + (phi[m] - phi[k]);
        if (den_r > 0.0) {
            const double y = (plo_w[k] + (phi_w[m] - phi_w[k])) / den_r;
            if (!have_r || y > y_r) { y_r = y; have_r = true; }
        }
        // y_l candidate: upper firings on the k smallest consequents, lower on the rest.
        const double den_l = phi[k] + (plo[m] - plo[k]);
        if (den_l > 0.0) {
            const double y = (phi_w[k] + (plo_w[m] - plo_w[k])) / den_l;
            if (!have_l || y < y_l) { y_l = y; have_l = true; }
        }
    }
    return {y_l, y_r};
}

double defuzzify(const ReducedOutput& r) { return 0.5 * (r.y_l + r.y_r); }

std::vector<double> basis_vector(const Rulebase& rb, std::span<const double> x) {
    const auto firings = fire_all(rb, x);
    double sum_lo = 0.0, sum_hi = 0.0;
    for (const FiringInterval& f : firings) {
        sum_lo += f.lo;
        sum_hi += f.hi;
    }
    if (sum_hi <= 0.0) {
        throw std::runtime_error("basis_vector: no rule fires at the given input");
    }
    std::vector<double> xi(firings.size(), 0.0);
    if (sum_lo > 0.0) {
        for (std::size_t i = 0; i < firings.size(); ++i) {
            xi[i] = 0.5 * (firings[i].lo / sum_lo + firings[i].hi / sum_hi);
        }
    } else {
        for (std::size_t i = 0; i < firings.size(); ++i) {
            xi[i] = firings[i].hi / sum_hi;
        }
    }
    return xi;
}

Rulebase build_grid_rulebase(const std::vector<std::vector<IT2GaussianSet>>& sets_per_input) {
    if (sets_per_input.empty()) {
        throw std::invalid_argument("build_grid_rulebase: need at least one input");
    }
    std::size_t m = 1;
    for (const auto& sets : sets_per_input) {
        if (sets.empty()) {
            throw std::invalid_argument("build_grid_rulebase: every input needs at least one set");
        }
        m *= sets.size();
    }
    Rulebase rb;
    rb.rules.reserve(m);
    const std::size_t dim = sets_per_input.size();
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t i = 0; i < m; ++i) {
        Rule r;
        r.antecedents.reserve(dim);
        for (std::size_t j = 0; j < dim; ++j) r.antecedents.push_back(sets_per_input[j][idx[j]]);
        r.consequent_index = i;
        rb.rules.push_back(std::move(r));
        // Mixed-radix increment, last input fastest.
        for (std::size_t j = dim; j-- > 0;) {
            if (++idx[j] < sets_per_input[j].size()) break;
            idx[j] = 0;
        }
    }
    return rb;
}

FuzzyApproximator::FuzzyApproximator(Rulebase rb)
    : rb_(std::move(rb)), theta_(rb_.param_count(), 0.0) {
    if (rb_.size() == 0) {
        throw std::invalid_argument("FuzzyApproximator: empty rulebase");
    }
}

double FuzzyApproximator::value(std::span<const double> x) const {
    const auto xi = basis_vector(rb_, x);
    double y = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) y += theta_[rb_.rules[i].consequent_index] * xi[i];
    return y;
}

std::vector<double> FuzzyApproximator::basis(std::span<const double> x) const {
    return basis_vector(rb_, x);
}

double FuzzyApproximator::km_value(std::span<const double> x) const {
    const auto firings = fire_all(rb_, x);
    std::vector<double> w(rb_.size());
    for (std::size_t i = 0; i < rb_.size(); ++i) w[i] = theta_[rb_.rules[i].consequent_index];
    return defuzzify(km_type_reduce(firings, w));
}

} // namespace t2smc
