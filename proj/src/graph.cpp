#include "orderforge/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "orderforge/errors.hpp"
#include "orderforge/prng.hpp"

namespace orderforge {

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (auto x : v) h = mix64(h ^ x);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

ColoredRegularGraph ColoredRegularGraph::from_matchings(
    std::uint32_t n, std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> matchings,
    GraphMeta meta) {
    if (n == 0 || n % 2 != 0) throw UsageError("graph: vertex count must be even and positive");
    ColoredRegularGraph g;
    g.n_ = n;
    g.d_ = static_cast<std::uint32_t>(matchings.size());
    g.meta_ = meta;
    g.partner_.assign(g.d_, std::vector<std::uint32_t>(n, n));
    for (std::uint32_t k = 0; k < g.d_; ++k) {
        if (matchings[k].size() != n / 2)
            throw UsageError("graph: color " + std::to_string(k) + " is not a perfect matching");
        for (auto [a, b] : matchings[k]) {
            if (a >= n || b >= n || a == b) throw UsageError("graph: bad pair");
            if (g.partner_[k][a] != n || g.partner_[k][b] != n)
                throw UsageError("graph: vertex repeated within a color");
            g.partner_[k][a] = b;
            g.partner_[k][b] = a;
        }
    }
    return g;
}

bool ColoredRegularGraph::edge_colors(std::uint32_t u, std::uint32_t v,
                                      std::vector<std::uint32_t>& colors) const {
    colors.clear();
    for (std::uint32_t k = 0; k < d_; ++k)
        if (partner_[k][u] == v) colors.push_back(k);
    return !colors.empty();
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> ColoredRegularGraph::matching_pairs(
    std::uint32_t color) const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(n_ / 2);
    for (std::uint32_t v = 0; v < n_; ++v) {
        const std::uint32_t w = partner_[color][v];
        if (v < w) pairs.emplace_back(v, w);
    }
    return pairs;
}

void ColoredRegularGraph::swap_edges(std::uint32_t color, std::uint32_t a, std::uint32_t b,
                                     std::uint32_t a2, std::uint32_t b2) {
    if (partner_[color][a] != b || partner_[color][a2] != b2)
        throw UsageError("swap_edges: removed edges not present");
    if (a == a2 || a == b2 || b == a2 || b == b2)
        throw UsageError("swap_edges: vertices must be distinct");
    partner_[color][a] = a2;
    partner_[color][a2] = a;
    partner_[color][b] = b2;
    partner_[color][b2] = b;
}

bool ColoredRegularGraph::matchings_valid() const {
    for (std::uint32_t k = 0; k < d_; ++k) {
        for (std::uint32_t v = 0; v < n_; ++v) {
            const std::uint32_t w = partner_[k][v];
            if (w >= n_ || w == v || partner_[k][w] != v) return false;
        }
    }
    return true;
}

std::uint32_t param_d(std::uint64_t n, std::uint32_t c, double alpha) {
    if (c == 0) throw UsageError("param_d: c must be positive");
    const double lo = 1.0 - 1.0 / (3.0 * c);
    if (!(alpha > lo && alpha < 1.0))
        throw UsageError("param_d: alpha must lie strictly in (1 - 1/(3c), 1)");
    if (n < 2) throw UsageError("param_d: n must be at least 2");
    const double d = std::pow(static_cast<double>(n), 1.0 - alpha);
    const auto rounded = static_cast<std::uint64_t>(std::llround(d));
    return static_cast<std::uint32_t>(std::max<std::uint64_t>(rounded, 1));
}

ColoredRegularGraph generate(std::uint32_t n, std::uint32_t d, std::uint64_t seed) {
    if (n == 0 || n % 2 != 0) throw UsageError("generate: n must be even and positive");
    if (d == 0) throw UsageError("generate: d must be positive");
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> matchings(d);
    for (std::uint32_t k = 0; k < d; ++k) {
        SplitMix64 rng = color_stream(seed, k);
        const auto sigma = random_permutation(n, rng);
        matchings[k].reserve(n / 2);
        for (std::uint32_t l = 0; l < n / 2; ++l)
            matchings[k].emplace_back(std::min(sigma[2 * l], sigma[2 * l + 1]),
                                      std::max(sigma[2 * l], sigma[2 * l + 1]));
    }
    GraphMeta meta;
    meta.seed = seed;
    return ColoredRegularGraph::from_matchings(n, std::move(matchings), meta);
}

std::vector<std::uint32_t> Cycle::key() const {
    std::vector<std::uint32_t> k;
    k.reserve(2 * vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        k.push_back(vertices[i]);
        k.push_back(colors[i]);
    }
    return k;
}

Cycle canonical_cycle(std::vector<std::uint32_t> vertices, std::vector<std::uint32_t> colors) {
    const std::size_t r = vertices.size();
    const std::size_t start =
        std::min_element(vertices.begin(), vertices.end()) - vertices.begin();

    // Forward: v[start], c[start], v[start+1], ...
    // Backward: v[start], c[start-1], v[start-1], ...
    std::vector<std::uint32_t> fwd_v(r), fwd_c(r), bwd_v(r), bwd_c(r);
    for (std::size_t i = 0; i < r; ++i) {
        fwd_v[i] = vertices[(start + i) % r];
        fwd_c[i] = colors[(start + i) % r];
        bwd_v[i] = vertices[(start + r - i) % r];
        bwd_c[i] = colors[(start + r - i - 1) % r];
    }
    Cycle fwd{std::move(fwd_v), std::move(fwd_c)};
    Cycle bwd{std::move(bwd_v), std::move(bwd_c)};
    return fwd.key() <= bwd.key() ? fwd : bwd;
}

std::vector<Cycle> enumerate_small_cycles(const ColoredRegularGraph& g, std::uint32_t c) {
    if (c < 2) throw UsageError("enumerate_small_cycles: c must be at least 2");
    std::unordered_set<std::vector<std::uint32_t>, KeyHash> seen;
    std::vector<Cycle> out;

    std::vector<std::uint32_t> path_v, path_c;
    std::vector<bool> on_path(g.vertex_count(), false);

    // Depth-first over simple paths from each start vertex, visiting only
    // larger vertices so the start is the cycle minimum; closing edges back
    // to the start complete a cycle. Each cycle shows up once per
    // direction; the canonical key dedupes.
    auto dfs = [&](auto&& self, std::uint32_t start, std::uint32_t v) -> void {
        for (std::uint32_t k = 0; k < g.color_count(); ++k) {
            const std::uint32_t w = g.neighbor(v, k);
            if (w == start && path_v.size() >= 2) {
                bool reused = false;  // closing edge must differ from the first edge
                if (path_v.size() == 2 && path_c[0] == k) reused = true;
                if (!reused) {
                    auto vs = path_v;
                    auto cs = path_c;
                    cs.push_back(k);
                    Cycle cand = canonical_cycle(std::move(vs), std::move(cs));
                    if (seen.insert(cand.key()).second) out.push_back(std::move(cand));
                }
            }
            if (w > start && !on_path[w] && path_v.size() < c) {
                path_v.push_back(w);
                path_c.push_back(k);
                on_path[w] = true;
                self(self, start, w);
                on_path[w] = false;
                path_v.pop_back();
                path_c.pop_back();
            }
        }
    };

    for (std::uint32_t s = 0; s < g.vertex_count(); ++s) {
        path_v.assign(1, s);
        path_c.clear();
        on_path.assign(g.vertex_count(), false);
        on_path[s] = true;
        dfs(dfs, s, s);
    }

    std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.key() < b.key();
    });
    return out;
}

namespace {

// BFS distance with an optional depth cap and one suppressed edge instance.
std::optional<std::uint32_t> bfs_distance(const ColoredRegularGraph& g, std::uint32_t a,
                                          std::uint32_t b, std::uint32_t max_depth,
                                          std::int64_t skip_u = -1, std::int64_t skip_v = -1,
                                          std::int64_t skip_color = -1) {
    if (a == b) return 0;
    std::vector<std::uint32_t> dist(g.vertex_count(), 0xFFFFFFFFu);
    std::deque<std::uint32_t> queue;
    dist[a] = 0;
    queue.push_back(a);
    while (!queue.empty()) {
        const std::uint32_t v = queue.front();
        queue.pop_front();
        if (dist[v] >= max_depth) continue;
        for (std::uint32_t k = 0; k < g.color_count(); ++k) {
            const std::uint32_t w = g.neighbor(v, k);
            if (skip_color >= 0 && static_cast<std::int64_t>(k) == skip_color &&
                ((v == skip_u && w == skip_v) || (v == skip_v && w == skip_u)))
                continue;
            if (dist[w] != 0xFFFFFFFFu) continue;
            dist[w] = dist[v] + 1;
            if (w == b) return dist[w];
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

// An edge {u,v} of `color` lies on a cycle of length <= c exactly when u
// and v stay within distance c-1 once that edge instance is removed.
bool edge_in_small_cycle(const ColoredRegularGraph& g, std::uint32_t u, std::uint32_t v,
                         std::uint32_t color, std::uint32_t c) {
    return bfs_distance(g, u, v, c - 1, u, v, color).has_value();
}

bool cycle_intact(const ColoredRegularGraph& g, const Cycle& cycle) {
    const std::size_t r = cycle.vertices.size();
    for (std::size_t i = 0; i < r; ++i) {
        if (!g.has_edge(cycle.vertices[i], cycle.vertices[(i + 1) % r], cycle.colors[i]))
            return false;
    }
    return true;
}

}  // namespace

std::optional<std::uint32_t> graph_distance(const ColoredRegularGraph& g, std::uint32_t a,
                                            std::uint32_t b) {
    if (a >= g.vertex_count() || b >= g.vertex_count())
        throw UsageError("graph_distance: vertex out of range");
    return bfs_distance(g, a, b, g.vertex_count());
}

SurgeryResult surgery(const ColoredRegularGraph& g, std::uint32_t c, std::uint64_t seed) {
    if (c < 2) throw UsageError("surgery: c must be at least 2");
    SurgeryResult result;
    result.graph = g;
    ColoredRegularGraph& work = result.graph;

    std::uint64_t cycle_counter = 0;
    for (int round = 0;; ++round) {
        const auto cycles = enumerate_small_cycles(work, c);
        if (cycles.empty()) break;
        if (round > 0)
            throw std::logic_error("surgery: local verification let a small cycle through");

        for (const auto& cycle : cycles) {
            if (!cycle_intact(work, cycle)) continue;  // an earlier swap already broke it

            const std::uint32_t a = cycle.vertices[0];
            const std::uint32_t b = cycle.vertices[1];
            const std::uint32_t color = cycle.colors[0];

            auto candidates = work.matching_pairs(color);
            SplitMix64 rng = sub_stream(seed, kTagSurgery, cycle_counter++);
            shuffle_in_place(candidates, rng);

            bool done = false;
            for (const auto& [x, y] : candidates) {
                if (x == a || x == b || y == a || y == b) continue;
                for (int orient = 0; orient < 2 && !done; ++orient) {
                    const std::uint32_t a2 = orient == 0 ? x : y;
                    const std::uint32_t b2 = orient == 0 ? y : x;
                    // Partner constraints: far from a, and not itself on a
                    // small cycle.
                    if (bfs_distance(work, a, a2, c + 1).has_value()) continue;
                    if (edge_in_small_cycle(work, a2, b2, color, c)) continue;

                    work.swap_edges(color, a, b, a2, b2);
                    // The partner conditions alone do not exclude every new
                    // small cycle at finite n; check locally and roll back.
                    if (edge_in_small_cycle(work, a, a2, color, c) ||
                        edge_in_small_cycle(work, b, b2, color, c)) {
                        work.swap_edges(color, a, a2, b, b2);  // rollback
                        continue;
                    }
                    result.changelog.push_back({color, {a, b}, {a2, b2}, {a, a2}, {b, b2}});
                    done = true;
                }
                if (done) break;
            }
            if (!done)
                throw ConstructionError("surgery-stuck: no admissible partner edge for cycle at " +
                                        std::to_string(a) + "-" + std::to_string(b));
        }
    }

    work.meta().c = c;
    work.meta().surgered = true;
    return result;
}

std::string graph_to_text(const ColoredRegularGraph& g) {
    std::string out = "cgraph v1\n";
    out += "n=" + std::to_string(g.vertex_count()) + " d=" + std::to_string(g.color_count()) +
           " c=" + std::to_string(g.meta().c) + " seed=" + std::to_string(g.meta().seed) +
           " surgered=" + (g.meta().surgered ? "1" : "0") + "\n";
    for (std::uint32_t k = 0; k < g.color_count(); ++k) {
        out += "color " + std::to_string(k) + "\n";
        for (auto [a, b] : g.matching_pairs(k))
            out += std::to_string(a) + " " + std::to_string(b) + "\n";
    }
    return out;
}

ColoredRegularGraph graph_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "cgraph v1") throw IoError("cgraph: missing magic");
    if (!std::getline(in, line)) throw IoError("cgraph: missing header");

    std::uint32_t n = 0, d = 0;
    GraphMeta meta;
    try {
        std::istringstream hdr(line);
        std::string tok;
        int surgered = 0, seen = 0;
        while (hdr >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw IoError("cgraph: malformed header token " + tok);
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            if (key == "n") n = static_cast<std::uint32_t>(std::stoul(val));
            else if (key == "d") d = static_cast<std::uint32_t>(std::stoul(val));
            else if (key == "c") meta.c = static_cast<std::uint32_t>(std::stoul(val));
            else if (key == "seed") meta.seed = std::stoull(val);
            else if (key == "surgered") surgered = std::stoi(val);
            else throw IoError("cgraph: unknown header key " + key);
            ++seen;
        }
        if (seen != 5) throw IoError("cgraph: header must carry n d c seed surgered");
        meta.surgered = surgered != 0;
    } catch (const IoError&) {
        throw;
    } catch (const std::exception&) {
        throw IoError("cgraph: malformed header value");
    }

    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> matchings(d);
    for (std::uint32_t k = 0; k < d; ++k) {
        if (!std::getline(in, line) || line != "color " + std::to_string(k))
            throw IoError("cgraph: expected 'color " + std::to_string(k) + "'");
        matchings[k].reserve(n / 2);
        for (std::uint32_t i = 0; i < n / 2; ++i) {
            if (!std::getline(in, line)) throw IoError("cgraph: truncated matching");
            std::istringstream pair_line(line);
            std::uint32_t a, b;
            if (!(pair_line >> a >> b) || a >= b) throw IoError("cgraph: bad pair line " + line);
            matchings[k].emplace_back(a, b);
        }
    }
    try {
        return ColoredRegularGraph::from_matchings(n, std::move(matchings), meta);
    } catch (const UsageError& e) {
        throw IoError(std::string("cgraph: ") + e.what());
    }
}

void write_graph(const ColoredRegularGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << graph_to_text(g);
    if (!out) throw IoError("write failed: " + path);
}

ColoredRegularGraph read_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return graph_from_text(ss.str());
}

}  // namespace orderforge
