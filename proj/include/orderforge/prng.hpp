#ifndef ORDERFORGE_PRNG_HPP
#define ORDERFORGE_PRNG_HPP

#include <cstdint>
#include <numeric>
#include <vector>

// Reference PRNG scheme. Everything here is normative for file-format
// reproducibility: graph files record only (n, d, seed), so regenerating a
// graph requires this exact stream derivation, bounded sampling and shuffle.

namespace orderforge {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 output mix (Steele, Lea, Flood).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

    constexpr std::uint64_t next() {
        state_ += kGolden;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

// Stream for color k of a graph draw: initial state mix64(seed + kGolden*(k+1)).
inline SplitMix64 color_stream(std::uint64_t seed, std::uint32_t color) {
    return SplitMix64(mix64(seed + kGolden * (std::uint64_t{color} + 1)));
}

// Non-format substream tags. Tag 0 is reserved so that sub_stream never
// collides with color_stream derivations.
enum StreamTag : std::uint32_t {
    kTagSurgery = 1,
    kTagPlant = 2,
    kTagTrial = 3,
    kTagShatterOrder = 4,
    kTagTournament = 5,
    kTagGeneric = 6,
    kTagM0 = 7,
    kTagBinom = 8,
};

inline SplitMix64 sub_stream(std::uint64_t seed, std::uint32_t tag, std::uint64_t index) {
    return SplitMix64(mix64(mix64(seed ^ kGolden * tag) + kGolden * (index + 1)));
}

// Rejection-free bounded draw: floor(next() * m / 2^64).
inline std::uint64_t bounded(SplitMix64& g, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(g.next()) * m) >> 64);
}

// Fisher-Yates, high index down, j = bounded(g, i+1).
inline std::vector<std::uint32_t> random_permutation(std::uint32_t n, SplitMix64& g) {
    std::vector<std::uint32_t> v(n);
    std::iota(v.begin(), v.end(), 0u);
    for (std::uint32_t i = n; i-- > 1;) {
        auto j = static_cast<std::uint32_t>(bounded(g, std::uint64_t{i} + 1));
        std::swap(v[i], v[j]);
    }
    return v;
}

template <typename T>
void shuffle_in_place(std::vector<T>& v, SplitMix64& g) {
    for (std::size_t i = v.size(); i-- > 1;) {
        auto j = static_cast<std::size_t>(bounded(g, i + 1));
        std::swap(v[i], v[j]);
    }
}

}  // namespace orderforge

#endif
