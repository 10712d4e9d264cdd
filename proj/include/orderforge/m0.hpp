#ifndef ORDERFORGE_M0_HPP
#define ORDERFORGE_M0_HPP

#include <cstdint>
#include <vector>

#include "orderforge/arith.hpp"
#include "orderforge/graph.hpp"

namespace orderforge {

// One equivalence class of the disjoint-union structure: the class-n graph
// is surgered to girth > n and must interpret the size-10n^2 target
// carrier under a planted order. vertex_base offsets class-local vertex
// ids into a single global id space, keeping classes disjoint.
struct M0Class {
    std::uint32_t class_index = 0;
    std::uint64_t vertex_base = 0;
    ColoredRegularGraph graph;
    ArithCarrier target;
    bool girth_ok = false;
    bool verdict = false;
    std::uint32_t swaps = 0;
};

struct M0Family {
    std::vector<M0Class> classes;
    bool all_ok = false;
};

// Classes 3..max_class, each with an even vertex count >= 40 n^2 and d = 3.
M0Family assemble_m0(std::uint32_t max_class, std::uint64_t seed);

}  // namespace orderforge

#endif
