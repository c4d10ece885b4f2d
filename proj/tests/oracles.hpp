// Test-only reference implementations, kept independent of the library's
// computation paths.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "t2smc/it2fls.hpp"

namespace oracles {

/// Exhaustive vertex enumeration of the type-reduction extrema: evaluates
/// sum(f w)/sum(f) at every corner f_i in {lo_i, hi_i} of the firing box
/// (2^M combinations, zero-denominator corners skipped) and returns
/// (min, max). Valid because the quotient is monotone in each f_i, so the
/// extrema over the box sit at corners.
inline std::pair<double, double> km_vertex_enumeration(
    std::span<const t2smc::FiringInterval> firings, std::span<const double> consequents) {
    const std::size_t m = firings.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double f = (mask >> i) & 1 ? firings[i].hi : firings[i].lo;
            num += f * consequents[i];
            den += f;
        }
        if (den <= 0.0) continue;
        const double y = num / den;
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    return {lo, hi};
}

/// xorshift-based deterministic generator for property tests (independent of
/// the library's noise machinery).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }

    double uniform(double a, double b) {
        return a + (b - a) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
    std::uint64_t state_;
};

/// Second-order central difference of a sampled signal.
inline double central_diff(double prev, double next, double h) { return (next - prev) / (2.0 * h); }

} // namespace oracles
