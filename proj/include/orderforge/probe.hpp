#ifndef ORDERFORGE_PROBE_HPP
#define ORDERFORGE_PROBE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "orderforge/arith.hpp"
#include "orderforge/biorder.hpp"
#include "orderforge/graph.hpp"

namespace orderforge {

// Total order on graph vertices, kept with both lookup directions.
class VertexOrdering {
public:
    VertexOrdering() = default;
    explicit VertexOrdering(std::vector<std::uint32_t> rank_of);  // vertex -> rank, validated

    static VertexOrdering from_ranked_vertices(const std::vector<std::uint32_t>& vertex_at_rank);
    static VertexOrdering random(std::uint32_t n, std::uint64_t seed);  // sub_stream(seed, kTagTrial, 0)

    std::uint32_t size() const { return static_cast<std::uint32_t>(rank_of_.size()); }
    std::uint32_t rank_of(std::uint32_t v) const { return rank_of_[v]; }
    std::uint32_t vertex_at(std::uint32_t rank) const { return vertex_at_[rank]; }
    const std::vector<std::uint32_t>& ranks() const { return rank_of_; }

    bool operator==(const VertexOrdering&) const = default;

private:
    std::vector<std::uint32_t> rank_of_;
    std::vector<std::uint32_t> vertex_at_;
};

struct ProbeWitness {
    std::uint32_t start_rank = 0;  // a
    std::uint32_t color = 0;       // k
    BiOrder induced;               // always the target's canonical form
    bool operator==(const ProbeWitness&) const = default;
};

// x <._k y : the k-neighbor of x sits below the k-neighbor of y.
bool less_k(const ColoredRegularGraph& g, const VertexOrdering& order, std::uint32_t color,
            std::uint32_t x, std::uint32_t y);

// Phi(x,y,u,v): {u,v} is an edge and, for some color it carries, the
// k-neighbor comparison holds. Post-surgery an edge carries one color, so
// the existential reading only matters on multigraphs.
bool eval_phi(const ColoredRegularGraph& g, const VertexOrdering& order, std::uint32_t x,
              std::uint32_t y, std::uint32_t u, std::uint32_t v);

// ([a, a+N-1]; <, <._k) as a canonical bi-order: first order is the rank
// order, second the k-neighbor order (total because neighbors of distinct
// vertices are distinct).
BiOrder induced_biorder(const ColoredRegularGraph& g, const VertexOrdering& order,
                        std::uint32_t a, std::uint32_t N, std::uint32_t color);

// Every (a, k) whose induced bi-order equals the target, a ascending then
// k ascending.
std::vector<ProbeWitness> scan(const ColoredRegularGraph& g, const VertexOrdering& order,
                               const BiOrder& target);

// Deterministic order in which some (a, k) witnesses the target: pick a
// color and N vertices whose k-neighbors avoid the chosen set, give them
// consecutive ranks, give the neighbors ranks realizing the second order.
// Throws ConstructionError("plant-impossible") when no color admits it.
VertexOrdering plant(const ColoredRegularGraph& g, const BiOrder& target, std::uint64_t seed);

struct MonteCarloReport {
    std::uint32_t trials = 0;
    std::uint64_t candidates = 0;              // all (a, k) windows per trial, summed
    std::uint64_t conditioned_candidates = 0;  // windows with k-neighbors disjoint from window
    std::vector<std::uint64_t> witness_per_trial;
    double witness_mean = 0.0;
    double witness_stderr = 0.0;
    std::uint64_t witness_min = 0;
    std::vector<std::uint64_t> type_counts;  // conditioned, indexed by Lehmer code, size N!
    std::uint64_t conditioned_target_hits = 0;
    double conditioned_target_freq = 0.0;
    double conditioned_target_stderr = 0.0;  // clustered by trial
    // per-trial clustered frequency stats for each type
    std::vector<double> type_freq;
    std::vector<double> type_freq_stderr;
};

// Uniform random orderings, one per trial (sub_stream(seed, kTagTrial, t)).
// Type statistics are restricted to conditioned windows. Requires N with
// N! <= 5040 so the type table stays enumerable.
MonteCarloReport montecarlo(const ColoredRegularGraph& g, const BiOrder& target,
                            std::uint32_t trials, std::uint64_t seed);

std::string montecarlo_report_text(const MonteCarloReport& r, const BiOrder& target);

// Lehmer index <-> permutation helpers for type histograms.
std::uint64_t lehmer_index(const std::vector<std::uint32_t>& perm);
std::vector<std::uint32_t> lehmer_permutation(std::uint64_t index, std::uint32_t n);

struct EndToEndResult {
    bool verdict = false;
    std::uint32_t witness_count = 0;
    ProbeWitness used;
    std::array<std::uint32_t, 2> phi_edge{};  // {u, v} handed to Phi
    DecodeResult decoded;
    std::uint32_t k = 0;
};

// plant the carrier's bi-order, scan for it, hand one witness edge to Phi
// and decode; verdict is exact equality with the truncated addition and
// multiplication tables.
EndToEndResult interpret_with_planted_order(const ColoredRegularGraph& g,
                                            const ArithCarrier& carrier, std::uint64_t seed);

// generate + surgery, then the planted interpretation above.
EndToEndResult end_to_end(std::uint32_t k, std::uint32_t n, std::uint32_t d, std::uint32_t c,
                          std::uint64_t seed);

// Order file: one line of n vertex ids in increasing rank order.
std::string ordering_to_text(const VertexOrdering& o);
VertexOrdering ordering_from_text(const std::string& text);
void write_ordering(const VertexOrdering& o, const std::string& path);
VertexOrdering read_ordering(const std::string& path);

}  // namespace orderforge

#endif
