#include "orderforge/probe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "orderforge/errors.hpp"
#include "orderforge/parallel.hpp"
#include "orderforge/prng.hpp"
#include "orderforge/report.hpp"

namespace orderforge {

VertexOrdering::VertexOrdering(std::vector<std::uint32_t> rank_of)
    : rank_of_(std::move(rank_of)) {
    vertex_at_.assign(rank_of_.size(), 0xFFFFFFFFu);
    for (std::uint32_t v = 0; v < rank_of_.size(); ++v) {
        const std::uint32_t r = rank_of_[v];
        if (r >= rank_of_.size() || vertex_at_[r] != 0xFFFFFFFFu)
            throw UsageError("ordering: ranks are not a bijection");
        vertex_at_[r] = v;
    }
}

VertexOrdering VertexOrdering::from_ranked_vertices(
    const std::vector<std::uint32_t>& vertex_at_rank) {
    std::vector<std::uint32_t> rank_of(vertex_at_rank.size(), 0xFFFFFFFFu);
    for (std::uint32_t r = 0; r < vertex_at_rank.size(); ++r) {
        const std::uint32_t v = vertex_at_rank[r];
        if (v >= vertex_at_rank.size() || rank_of[v] != 0xFFFFFFFFu)
            throw UsageError("ordering: vertex list is not a permutation");
        rank_of[v] = r;
    }
    return VertexOrdering(std::move(rank_of));
}

VertexOrdering VertexOrdering::random(std::uint32_t n, std::uint64_t seed) {
    SplitMix64 rng = sub_stream(seed, kTagTrial, 0);
    return from_ranked_vertices(random_permutation(n, rng));
}

bool less_k(const ColoredRegularGraph& g, const VertexOrdering& order, std::uint32_t color,
            std::uint32_t x, std::uint32_t y) {
    return order.rank_of(g.neighbor(x, color)) < order.rank_of(g.neighbor(y, color));
}

bool eval_phi(const ColoredRegularGraph& g, const VertexOrdering& order, std::uint32_t x,
              std::uint32_t y, std::uint32_t u, std::uint32_t v) {
    // On a multigraph the color of {u,v} is read existentially.
    for (std::uint32_t k = 0; k < g.color_count(); ++k) {
        if (g.neighbor(u, k) == v && less_k(g, order, k, x, y)) return true;
    }
    return false;
}

namespace {

// order2 of the window [a, a+N): sort window positions by neighbor rank.
std::vector<std::uint32_t> window_order2(const ColoredRegularGraph& g,
                                         const VertexOrdering& order, std::uint32_t a,
                                         std::uint32_t N, std::uint32_t color) {
    std::vector<std::uint32_t> idx(N);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<std::uint32_t> nbr_rank(N);
    for (std::uint32_t i = 0; i < N; ++i)
        nbr_rank[i] = order.rank_of(g.neighbor(order.vertex_at(a + i), color));
    std::sort(idx.begin(), idx.end(),
              [&](std::uint32_t i, std::uint32_t j) { return nbr_rank[i] < nbr_rank[j]; });
    return idx;
}

}  // namespace

BiOrder induced_biorder(const ColoredRegularGraph& g, const VertexOrdering& order,
                        std::uint32_t a, std::uint32_t N, std::uint32_t color) {
    if (N == 0) throw UsageError("induced_biorder: empty interval");
    if (std::uint64_t{a} + N > order.size()) throw UsageError("induced_biorder: out of range");
    if (color >= g.color_count()) throw UsageError("induced_biorder: bad color");
    return BiOrder(window_order2(g, order, a, N, color));
}

std::vector<ProbeWitness> scan(const ColoredRegularGraph& g, const VertexOrdering& order,
                               const BiOrder& target) {
    const std::uint32_t n = g.vertex_count();
    const std::uint32_t N = target.size();
    if (N == 0 || N > n) throw UsageError("scan: target must be nonempty and fit the graph");

    // parallel over start ranks, merged back in chunk order
    const std::uint64_t starts = n - N + 1;
    const std::uint64_t grain =
        std::max<std::uint64_t>(1, (1u << 15) / std::max<std::uint64_t>(1, g.color_count() * N));
    std::vector<std::vector<ProbeWitness>> by_chunk(
        std::min<std::uint64_t>(worker_count(), starts));
    run_chunks(starts, grain, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
        auto& local = by_chunk[chunk];
        for (std::uint64_t a = begin; a < end; ++a) {
            for (std::uint32_t k = 0; k < g.color_count(); ++k) {
                auto induced = window_order2(g, order, static_cast<std::uint32_t>(a), N, k);
                if (induced == target.order2())
                    local.push_back(
                        {static_cast<std::uint32_t>(a), k, BiOrder(std::move(induced))});
            }
        }
    });
    std::vector<ProbeWitness> out;
    for (auto& chunk : by_chunk)
        for (auto& w : chunk) out.push_back(std::move(w));
    return out;
}

VertexOrdering plant(const ColoredRegularGraph& g, const BiOrder& target, std::uint64_t seed) {
    const std::uint32_t n = g.vertex_count();
    const std::uint32_t N = target.size();
    if (N == 0 || N > n) throw UsageError("plant: bad target size");

    SplitMix64 rng = sub_stream(seed, kTagPlant, 0);

    std::vector<std::uint32_t> colors(g.color_count());
    std::iota(colors.begin(), colors.end(), 0u);
    shuffle_in_place(colors, rng);

    for (const std::uint32_t k : colors) {
        // Greedy selection of N vertices whose k-neighbors avoid the set.
        const auto scan_order = random_permutation(n, rng);
        std::vector<std::uint32_t> chosen;
        std::vector<bool> blocked(n, false);
        for (const std::uint32_t v : scan_order) {
            if (blocked[v]) continue;
            chosen.push_back(v);
            blocked[v] = true;
            blocked[g.neighbor(v, k)] = true;
            if (chosen.size() == N) break;
        }
        if (chosen.size() < N) continue;

        if (n < 2 * N) continue;  // neighbors cannot fit outside the window
        const auto a = static_cast<std::uint32_t>(bounded(rng, n - 2 * N + 1));

        std::vector<std::uint32_t> vertex_at(n, 0xFFFFFFFFu);
        std::vector<bool> placed(n, false);
        for (std::uint32_t i = 0; i < N; ++i) {
            vertex_at[a + i] = chosen[i];
            placed[chosen[i]] = true;
        }
        // Neighbor of the element at second-order position j gets rank
        // a+N+j, realizing the target pattern right after the window.
        const auto& order2 = target.order2();
        for (std::uint32_t j = 0; j < N; ++j) {
            const std::uint32_t w = g.neighbor(chosen[order2[j]], k);
            vertex_at[a + N + j] = w;
            placed[w] = true;
        }
        std::vector<std::uint32_t> rest;
        rest.reserve(n - 2 * N);
        for (std::uint32_t v = 0; v < n; ++v)
            if (!placed[v]) rest.push_back(v);
        shuffle_in_place(rest, rng);
        std::size_t next = 0;
        for (std::uint32_t r = 0; r < n; ++r)
            if (vertex_at[r] == 0xFFFFFFFFu) vertex_at[r] = rest[next++];
        return VertexOrdering::from_ranked_vertices(vertex_at);
    }
    throw ConstructionError("plant-impossible: no color admits " + std::to_string(N) +
                            " vertices with disjoint neighbors");
}

std::uint64_t lehmer_index(const std::vector<std::uint32_t>& perm) {
    const std::size_t n = perm.size();
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (perm[j] < perm[i]) ++smaller;
        index = index * (n - i) + smaller;
    }
    return index;
}

std::vector<std::uint32_t> lehmer_permutation(std::uint64_t index, std::uint32_t n) {
    std::vector<std::uint64_t> digits(n, 0);
    for (std::uint32_t i = n; i-- > 0;) {
        digits[i] = index % (n - i);
        index /= (n - i);
    }
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    std::vector<std::uint32_t> perm(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        perm[i] = pool[digits[i]];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digits[i]));
    }
    return perm;
}

MonteCarloReport montecarlo(const ColoredRegularGraph& g, const BiOrder& target,
                            std::uint32_t trials, std::uint64_t seed) {
    const std::uint32_t n = g.vertex_count();
    const std::uint32_t N = target.size();
    if (N == 0 || N > n) throw UsageError("montecarlo: bad target size");
    std::uint64_t fact = 1;
    for (std::uint32_t i = 2; i <= N; ++i) fact *= i;
    if (fact > 5040) throw UsageError("montecarlo: N! type table too large (N must be <= 7)");
    if (trials == 0) throw UsageError("montecarlo: need at least one trial");

    MonteCarloReport rep;
    rep.trials = trials;
    rep.type_counts.assign(fact, 0);
    const std::uint64_t target_type = lehmer_index(target.order2());

    std::vector<std::vector<std::uint64_t>> per_trial_type(trials,
                                                           std::vector<std::uint64_t>(fact, 0));
    std::vector<std::uint64_t> per_trial_conditioned(trials, 0);
    rep.witness_per_trial.assign(trials, 0);

    // Trials draw their orderings from per-trial substreams and write to
    // disjoint slots, so any schedule produces the same report.
    const std::uint64_t per_trial = std::uint64_t{n - N + 1} * g.color_count() * N;
    const std::uint64_t grain =
        std::max<std::uint64_t>(1, (1u << 18) / std::max<std::uint64_t>(1, per_trial));
    run_chunks(trials, grain, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            SplitMix64 rng = sub_stream(seed, kTagTrial, t);
            const VertexOrdering order =
                VertexOrdering::from_ranked_vertices(random_permutation(n, rng));
            for (std::uint32_t a = 0; a + N <= n; ++a) {
                for (std::uint32_t k = 0; k < g.color_count(); ++k) {
                    bool disjoint = true;
                    for (std::uint32_t i = 0; i < N && disjoint; ++i) {
                        const std::uint32_t nbr_rank =
                            order.rank_of(g.neighbor(order.vertex_at(a + i), k));
                        if (nbr_rank >= a && nbr_rank < a + N) disjoint = false;
                    }
                    const auto type = window_order2(g, order, a, N, k);
                    if (type == target.order2()) ++rep.witness_per_trial[t];
                    if (disjoint) {
                        ++per_trial_conditioned[t];
                        ++per_trial_type[t][lehmer_index(type)];
                    }
                }
            }
        }
    });
    rep.candidates =
        std::uint64_t{trials} * (std::uint64_t{n} - N + 1) * g.color_count();
    for (std::uint32_t t = 0; t < trials; ++t)
        rep.conditioned_candidates += per_trial_conditioned[t];

    for (std::uint32_t t = 0; t < trials; ++t)
        for (std::uint64_t i = 0; i < fact; ++i) rep.type_counts[i] += per_trial_type[t][i];
    rep.conditioned_target_hits = rep.type_counts[target_type];

    auto mean_se = [&](auto&& value_of) {
        double mean = 0.0;
        for (std::uint32_t t = 0; t < trials; ++t) mean += value_of(t);
        mean /= trials;
        double var = 0.0;
        for (std::uint32_t t = 0; t < trials; ++t) {
            const double d = value_of(t) - mean;
            var += d * d;
        }
        var = trials > 1 ? var / (trials - 1) : 0.0;
        return std::make_pair(mean, std::sqrt(var / trials));
    };

    auto [wmean, wse] = mean_se([&](std::uint32_t t) {
        return static_cast<double>(rep.witness_per_trial[t]);
    });
    rep.witness_mean = wmean;
    rep.witness_stderr = wse;
    rep.witness_min = *std::min_element(rep.witness_per_trial.begin(),
                                        rep.witness_per_trial.end());

    // Type frequencies with trial-clustered standard errors: within one
    // ordering the windows overlap, so per-window binomial errors would be
    // too small.
    rep.type_freq.assign(fact, 0.0);
    rep.type_freq_stderr.assign(fact, 0.0);
    for (std::uint64_t i = 0; i < fact; ++i) {
        auto [fmean, fse] = mean_se([&](std::uint32_t t) {
            return per_trial_conditioned[t] == 0
                       ? 0.0
                       : static_cast<double>(per_trial_type[t][i]) / per_trial_conditioned[t];
        });
        rep.type_freq[i] = fmean;
        rep.type_freq_stderr[i] = fse;
    }
    rep.conditioned_target_freq = rep.type_freq[target_type];
    rep.conditioned_target_stderr = rep.type_freq_stderr[target_type];
    return rep;
}

std::string montecarlo_report_text(const MonteCarloReport& r, const BiOrder& target) {
    Report rep;
    rep.kv("trials", std::uint64_t{r.trials});
    rep.kv("target_size", std::uint64_t{target.size()});
    rep.kv("candidates", r.candidates);
    rep.kv("conditioned_candidates", r.conditioned_candidates);
    rep.kv("witness_mean", r.witness_mean);
    rep.kv("witness_stderr", r.witness_stderr);
    rep.kv("witness_min", r.witness_min);
    rep.kv("conditioned_target_hits", r.conditioned_target_hits);
    rep.kv("conditioned_target_freq", r.conditioned_target_freq);
    rep.kv("conditioned_target_stderr", r.conditioned_target_stderr);
    for (std::uint64_t i = 0; i < r.type_counts.size(); ++i) {
        const auto perm = lehmer_permutation(i, target.size());
        std::string label;
        for (std::size_t j = 0; j < perm.size(); ++j) {
            if (j) label.push_back(' ');
            label += std::to_string(perm[j]);
        }
        rep.tsv_row(label + "\t" + std::to_string(r.type_counts[i]));
    }
    return rep.text();
}

EndToEndResult interpret_with_planted_order(const ColoredRegularGraph& g,
                                            const ArithCarrier& carrier, std::uint64_t seed) {
    EndToEndResult result;
    result.k = carrier.k;

    const VertexOrdering order = plant(g, carrier.biorder, seed);
    const auto witnesses = scan(g, order, carrier.biorder);
    if (witnesses.empty()) return result;  // plant postcondition failed; verdict stays false
    result.witness_count = static_cast<std::uint32_t>(witnesses.size());
    result.used = witnesses.front();

    // Any edge of the witness color feeds Phi.
    const std::uint32_t u = 0;
    const std::uint32_t v = g.neighbor(u, result.used.color);
    result.phi_edge = {u, v};

    const std::uint32_t N = carrier.biorder.size();
    std::vector<std::uint32_t> idx(N);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<std::uint32_t> window(N);
    for (std::uint32_t i = 0; i < N; ++i) window[i] = order.vertex_at(result.used.start_rank + i);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t i, std::uint32_t j) {
        return eval_phi(g, order, window[i], window[j], u, v);
    });
    const BiOrder via_phi{std::vector<std::uint32_t>(idx.begin(), idx.end())};

    result.decoded = decode(via_phi, carrier.param_ranks);
    const RoundtripReport cmp = compare_tables(result.decoded, carrier.k);
    result.verdict = cmp.ok;
    return result;
}

EndToEndResult end_to_end(std::uint32_t k, std::uint32_t n, std::uint32_t d, std::uint32_t c,
                          std::uint64_t seed) {
    if (k == 0) throw UsageError("end_to_end: k must be positive");
    const std::uint64_t need = 4ull * 10 * k * k;
    if (n < need)
        throw UsageError("end_to_end: n must be at least 4*10k^2 = " + std::to_string(need));

    const ColoredRegularGraph raw = generate(n, d, seed);
    const SurgeryResult surgered = surgery(raw, c, seed);
    return interpret_with_planted_order(surgered.graph, encode(k), seed);
}

std::string ordering_to_text(const VertexOrdering& o) {
    std::string out;
    for (std::uint32_t r = 0; r < o.size(); ++r) {
        if (r) out.push_back(' ');
        out += std::to_string(o.vertex_at(r));
    }
    out.push_back('\n');
    return out;
}

VertexOrdering ordering_from_text(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::uint32_t> vertex_at;
    std::uint32_t v;
    while (in >> v) vertex_at.push_back(v);
    try {
        return VertexOrdering::from_ranked_vertices(vertex_at);
    } catch (const UsageError& e) {
        throw IoError(std::string("order file: ") + e.what());
    }
}

void write_ordering(const VertexOrdering& o, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << ordering_to_text(o);
    if (!out) throw IoError("write failed: " + path);
}

VertexOrdering read_ordering(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ordering_from_text(ss.str());
}

}  // namespace orderforge
