#ifndef ORDERFORGE_TEST_ORACLES_HPP
#define ORDERFORGE_TEST_ORACLES_HPP

// Independent reference implementations used as test oracles. These stay
// deliberately naive and separate from the library code paths they check.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "orderforge/biorder.hpp"
#include "orderforge/graph.hpp"
#include "orderforge/probe.hpp"

namespace oracle {

using orderforge::BiOrder;
using orderforge::ColoredRegularGraph;
using orderforge::VertexOrdering;

// A cycle as its sorted edge set {(a, b, color)}; for simple cycles the
// edge set determines the cycle, so this needs no canonical form.
using EdgeSet = std::vector<std::array<std::uint32_t, 3>>;

inline EdgeSet cycle_edge_set(const orderforge::Cycle& c) {
    EdgeSet edges;
    const std::size_t r = c.vertices.size();
    for (std::size_t i = 0; i < r; ++i) {
        const std::uint32_t a = c.vertices[i];
        const std::uint32_t b = c.vertices[(i + 1) % r];
        edges.push_back({std::min(a, b), std::max(a, b), c.colors[i]});
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

// Brute force: every vertex sequence starting at its minimum, every color
// assignment, keep those whose edges exist and are pairwise distinct.
inline std::set<EdgeSet> naive_small_cycles(const ColoredRegularGraph& g, std::uint32_t c) {
    std::set<EdgeSet> out;
    const std::uint32_t n = g.vertex_count();
    const std::uint32_t d = g.color_count();

    std::vector<std::uint32_t> seq;
    std::vector<std::uint32_t> cols;

    auto emit = [&]() {
        EdgeSet edges;
        const std::size_t r = seq.size();
        for (std::size_t i = 0; i < r; ++i) {
            const std::uint32_t a = seq[i];
            const std::uint32_t b = seq[(i + 1) % r];
            if (!g.has_edge(a, b, cols[i])) return;
            edges.push_back({std::min(a, b), std::max(a, b), cols[i]});
        }
        EdgeSet sorted = edges;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return;
        out.insert(sorted);
    };

    auto colors_rec = [&](auto&& self, std::size_t i) -> void {
        if (i == seq.size()) {
            emit();
            return;
        }
        for (std::uint32_t k = 0; k < d; ++k) {
            cols.push_back(k);
            self(self, i + 1);
            cols.pop_back();
        }
    };

    auto seq_rec = [&](auto&& self, std::uint32_t target_len) -> void {
        if (seq.size() == target_len) {
            cols.clear();
            colors_rec(colors_rec, 0);
            return;
        }
        for (std::uint32_t v = seq[0] + 1; v < n; ++v) {
            if (std::find(seq.begin(), seq.end(), v) != seq.end()) continue;
            seq.push_back(v);
            self(self, target_len);
            seq.pop_back();
        }
    };

    for (std::uint32_t r = 2; r <= c; ++r) {
        for (std::uint32_t start = 0; start < n; ++start) {
            seq.assign(1, start);
            seq_rec(seq_rec, r);
        }
    }
    return out;
}

// Re-evaluates a window against a target through the pairwise comparison
// matrix, with no sorting and no canonicalization.
inline bool naive_window_matches(const ColoredRegularGraph& g, const VertexOrdering& order,
                                 std::uint32_t a, std::uint32_t color, const BiOrder& target) {
    const std::uint32_t N = target.size();
    const auto rank2 = target.rank2_of();
    for (std::uint32_t i = 0; i < N; ++i) {
        for (std::uint32_t j = 0; j < N; ++j) {
            if (i == j) continue;
            const bool lk = orderforge::less_k(g, order, color, order.vertex_at(a + i),
                                               order.vertex_at(a + j));
            if (lk != (rank2[i] < rank2[j])) return false;
        }
    }
    return true;
}

inline std::vector<orderforge::ProbeWitness> naive_scan(const ColoredRegularGraph& g,
                                                        const VertexOrdering& order,
                                                        const BiOrder& target) {
    std::vector<orderforge::ProbeWitness> out;
    const std::uint32_t N = target.size();
    for (std::uint32_t a = 0; a + N <= g.vertex_count(); ++a)
        for (std::uint32_t k = 0; k < g.color_count(); ++k)
            if (naive_window_matches(g, order, a, k, target)) out.push_back({a, k, target});
    return out;
}

// Truth tables by direct enumeration, kept apart from the library's.
inline std::set<std::array<std::uint32_t, 3>> naive_table(std::uint32_t k, bool multiply) {
    std::set<std::array<std::uint32_t, 3>> out;
    for (std::uint32_t r = 0; r < k; ++r)
        for (std::uint32_t s = 0; s < k; ++s) {
            const std::uint64_t t = multiply ? std::uint64_t{r} * s : std::uint64_t{r} + s;
            if (t < k) out.insert({r, s, static_cast<std::uint32_t>(t)});
        }
    return out;
}

}  // namespace oracle

#endif
