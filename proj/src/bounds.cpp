#include "orderforge/bounds.hpp"

#include <cmath>

#include "orderforge/errors.hpp"
#include "orderforge/prng.hpp"

namespace orderforge {

double hoeffding_bound(std::uint64_t n, double p, double x) {
    if (n == 0) throw UsageError("hoeffding_bound: n must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("hoeffding_bound: p must lie in [0,1]");
    const double mean = static_cast<double>(n) * p;
    if (x > mean) return 1.0;  // the lower-tail inequality says nothing here
    const double gap = mean - x;
    return std::exp(-2.0 * gap * gap / static_cast<double>(n));
}

TailCheckReport binom_tail_check(std::uint32_t n, double p, std::span<const std::uint32_t> xs,
                                 std::uint64_t samples, std::uint64_t seed) {
    if (n == 0) throw UsageError("binom_tail_check: n must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("binom_tail_check: p must lie in [0,1]");
    if (samples < 10000) throw UsageError("binom_tail_check: need at least 10^4 samples");

    TailCheckReport report;
    report.n = n;
    report.p = p;
    report.samples = samples;

    // One histogram pass, then prefix sums give every P(X <= x).
    std::vector<std::uint64_t> hist(n + 1, 0);
    SplitMix64 rng = sub_stream(seed, kTagBinom, 0);
    const auto threshold = static_cast<std::uint64_t>(
        static_cast<long double>(p) * 18446744073709551615.0L);
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::uint32_t x = 0;
        for (std::uint32_t i = 0; i < n; ++i)
            if (rng.next() <= threshold) ++x;
        ++hist[x];
    }
    std::vector<std::uint64_t> cumulative(n + 1, 0);
    std::uint64_t acc = 0;
    for (std::uint32_t i = 0; i <= n; ++i) {
        acc += hist[i];
        cumulative[i] = acc;
    }

    for (const auto x : xs) {
        TailCheckRow row;
        row.x = x;
        const std::uint64_t hits = cumulative[std::min(x, n)];
        row.estimate = static_cast<double>(hits) / static_cast<double>(samples);
        row.stderr_ = std::sqrt(row.estimate * (1.0 - row.estimate) /
                                static_cast<double>(samples));
        row.bound = hoeffding_bound(n, p, static_cast<double>(x));
        row.flagged = row.estimate - row.bound > 3.0 * row.stderr_;
        report.any_flagged = report.any_flagged || row.flagged;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace orderforge
