#ifndef ORDERFORGE_GRAPH_HPP
#define ORDERFORGE_GRAPH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace orderforge {

struct SurgerySwap {
    std::uint32_t color;
    std::array<std::uint32_t, 2> removed_first;   // {a, b}
    std::array<std::uint32_t, 2> removed_second;  // {a', b'}
    std::array<std::uint32_t, 2> added_first;     // {a, a'}
    std::array<std::uint32_t, 2> added_second;    // {b, b'}
};

struct GraphMeta {
    std::uint32_t c = 0;  // girth budget used by surgery (0 until surgered)
    std::uint64_t seed = 0;
    bool surgered = false;
    bool operator==(const GraphMeta&) const = default;
};

// Colored regular (multi)graph: one perfect matching per color, so each
// vertex lies on exactly one edge of each color. Distinct colors may join
// the same vertex pair; such multi-edges are what 2-cycles are made of.
class ColoredRegularGraph {
public:
    ColoredRegularGraph() = default;

    // Validates the per-color partition invariant and rejects self-pairs.
    static ColoredRegularGraph from_matchings(
        std::uint32_t n, std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> matchings,
        GraphMeta meta = {});

    std::uint32_t vertex_count() const { return n_; }
    std::uint32_t color_count() const { return d_; }
    const GraphMeta& meta() const { return meta_; }
    GraphMeta& meta() { return meta_; }

    // The k-neighbor: unique partner of v in matching `color`.
    std::uint32_t neighbor(std::uint32_t v, std::uint32_t color) const {
        return partner_[color][v];
    }

    // True when some color joins u and v; fills `colors` with all of them.
    bool edge_colors(std::uint32_t u, std::uint32_t v, std::vector<std::uint32_t>& colors) const;
    bool has_edge(std::uint32_t u, std::uint32_t v, std::uint32_t color) const {
        return partner_[color][u] == v;
    }

    // Canonical pair list for one color: a < b, ascending in a.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> matching_pairs(std::uint32_t color) const;

    // Surgery primitive: replace {a,b},{a2,b2} by {a,a2},{b,b2} in `color`.
    // All four vertices must be distinct and the removed edges present.
    void swap_edges(std::uint32_t color, std::uint32_t a, std::uint32_t b, std::uint32_t a2,
                    std::uint32_t b2);

    bool matchings_valid() const;

    bool operator==(const ColoredRegularGraph&) const = default;

private:
    std::uint32_t n_ = 0;
    std::uint32_t d_ = 0;
    std::vector<std::vector<std::uint32_t>> partner_;  // [color][vertex]
    GraphMeta meta_;
};

// Cycle of length r >= 2: distinct vertices, distinct (pair, color) edges,
// edge i joining vertices i and i+1 mod r. Stored in canonical form: the
// lexicographically least (vertex, color, vertex, color, ...) sequence over
// all rotations and reflections that start at the minimum vertex.
struct Cycle {
    std::vector<std::uint32_t> vertices;
    std::vector<std::uint32_t> colors;  // colors[i] joins vertices[i], vertices[i+1 mod r]

    std::uint32_t length() const { return static_cast<std::uint32_t>(vertices.size()); }
    std::vector<std::uint32_t> key() const;  // interleaved canonical sequence
    bool operator==(const Cycle&) const = default;
};

Cycle canonical_cycle(std::vector<std::uint32_t> vertices, std::vector<std::uint32_t> colors);

// d = round(n^(1-alpha)), clamped to >= 1; alpha must satisfy
// 1 - 1/(3c) < alpha < 1.
std::uint32_t param_d(std::uint64_t n, std::uint32_t c, double alpha);

// Draw d independent uniform permutations via the reference PRNG and pair
// sigma_k(2l) with sigma_k(2l+1). Deterministic per (n, d, seed).
ColoredRegularGraph generate(std::uint32_t n, std::uint32_t d, std::uint64_t seed);

// All canonical-form-distinct cycles of length <= c, sorted shortlex by key.
std::vector<Cycle> enumerate_small_cycles(const ColoredRegularGraph& g, std::uint32_t c);

// Shortest path length over all edges of all colors; nullopt if disconnected.
std::optional<std::uint32_t> graph_distance(const ColoredRegularGraph& g, std::uint32_t a,
                                            std::uint32_t b);

struct SurgeryResult {
    ColoredRegularGraph graph;
    std::vector<SurgerySwap> changelog;
};

// Remove every cycle of length <= c by two-edge swaps within a color.
// Partner edges must sit at graph distance >= c+2 and outside small cycles;
// each swap is re-verified locally and rolled back if it created a small
// cycle. Throws ConstructionError("surgery-stuck") when no admissible
// partner exists.
SurgeryResult surgery(const ColoredRegularGraph& g, std::uint32_t c, std::uint64_t seed);

// Text format: `cgraph v1`, header line, then per color `color <k>` and
// n/2 pair lines `<a> <b>` with a < b ascending.
std::string graph_to_text(const ColoredRegularGraph& g);
ColoredRegularGraph graph_from_text(const std::string& text);
void write_graph(const ColoredRegularGraph& g, const std::string& path);
ColoredRegularGraph read_graph(const std::string& path);

}  // namespace orderforge

#endif
