#ifndef ORDERFORGE_BOUNDS_HPP
#define ORDERFORGE_BOUNDS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace orderforge {

// Lower-tail bound exp(-2 (np - x)^2 / n) for a binomial(n, p) variable,
// clamped to 1 above the mean where the inequality says nothing.
double hoeffding_bound(std::uint64_t n, double p, double x);

struct TailCheckRow {
    std::uint32_t x = 0;
    double estimate = 0.0;  // Monte Carlo P(X <= x)
    double stderr_ = 0.0;
    double bound = 1.0;
    bool flagged = false;  // estimate exceeds bound beyond 3 standard errors
};

struct TailCheckReport {
    std::uint32_t n = 0;
    double p = 0.0;
    std::uint64_t samples = 0;
    std::vector<TailCheckRow> rows;
    bool any_flagged = false;
};

TailCheckReport binom_tail_check(std::uint32_t n, double p, std::span<const std::uint32_t> xs,
                                 std::uint64_t samples, std::uint64_t seed);

}  // namespace orderforge

#endif
