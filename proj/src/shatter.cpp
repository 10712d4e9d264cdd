#include "orderforge/shatter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "orderforge/errors.hpp"
#include "orderforge/parallel.hpp"
#include "orderforge/prng.hpp"

namespace orderforge {

PointSpace::PointSpace(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {
    if (p != 2 && p != 3 && p != 5) throw UsageError("point space: p must be 2, 3 or 5");
    if (n == 0) throw UsageError("point space: n must be positive");
    std::uint64_t count = 1;
    pow_.push_back(1);
    for (std::uint32_t i = 0; i < n; ++i) {
        count *= p;
        if (count > (1u << 20)) throw UsageError("point space: p^n exceeds the enumerable cap");
        pow_.push_back(static_cast<std::uint32_t>(count));
    }
    count_ = static_cast<std::uint32_t>(count);
}

std::uint32_t PointSpace::digit(std::uint32_t point, std::uint32_t coord) const {
    // coord 1 is most significant.
    return point / pow_[n_ - coord] % p_;
}

std::uint32_t PointSpace::add(std::uint32_t x, std::uint32_t y) const {
    if (p_ == 2) return x ^ y;
    std::uint32_t out = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
        const std::uint32_t s = (x / pow_[i] + y / pow_[i]) % p_;
        out += s * pow_[i];
    }
    return out;
}

std::uint32_t PointSpace::sub(std::uint32_t x, std::uint32_t y) const {
    if (p_ == 2) return x ^ y;
    std::uint32_t out = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
        const std::uint32_t s = (x / pow_[i] + p_ - y / pow_[i] % p_) % p_;
        out += s * pow_[i];
    }
    return out;
}

std::uint32_t PointSpace::scale(std::uint32_t t, std::uint32_t x) const {
    t %= p_;
    if (t == 0) return 0;
    if (p_ == 2) return x;
    std::uint32_t out = 0;
    for (std::uint32_t i = 0; i < n_; ++i) out += (x / pow_[i] % p_) * t % p_ * pow_[i];
    return out;
}

std::uint32_t PointSpace::leading_coord(std::uint32_t x) const {
    for (std::uint32_t coord = 1; coord <= n_; ++coord)
        if (digit(x, coord) != 0) return coord;
    throw UsageError("leading_coord: zero vector");
}

PointOrder PointOrder::lex(const PointSpace& space) {
    PointOrder o;
    o.kind_ = Kind::Lex;
    o.count_ = space.point_count();
    return o;
}

PointOrder PointOrder::explicit_ranks(const PointSpace& space,
                                      std::vector<std::uint32_t> rank_of) {
    if (rank_of.size() != space.point_count())
        throw UsageError("point order: rank table size mismatch");
    std::vector<bool> seen(rank_of.size(), false);
    for (auto r : rank_of) {
        if (r >= rank_of.size() || seen[r]) throw UsageError("point order: ranks not a bijection");
        seen[r] = true;
    }
    PointOrder o;
    o.kind_ = Kind::Explicit;
    o.count_ = space.point_count();
    o.rank_of_ = std::move(rank_of);
    return o;
}

PointOrder PointOrder::random(const PointSpace& space, std::uint64_t seed) {
    SplitMix64 rng = sub_stream(seed, kTagShatterOrder, 0);
    auto perm = random_permutation(space.point_count(), rng);
    auto o = explicit_ranks(space, std::move(perm));
    o.kind_ = Kind::Random;
    return o;
}

PointOrder PointOrder::random_tournament(const PointSpace& space, std::uint64_t seed) {
    if (space.p() != 2) throw UsageError("tournament orders exist only for p = 2");
    const std::uint64_t m = space.point_count();
    PointOrder o;
    o.kind_ = Kind::Tournament;
    o.count_ = space.point_count();
    o.bits_.assign((m * (m - 1) / 2 + 7) / 8, 0);
    SplitMix64 rng = sub_stream(seed, kTagTournament, 0);
    for (std::size_t i = 0; i < o.bits_.size(); ++i)
        o.bits_[i] = static_cast<std::uint8_t>(rng.next() & 0xFF);
    return o;
}

std::size_t PointOrder::pair_index(std::uint32_t x, std::uint32_t y) const {
    const auto lo = static_cast<std::uint64_t>(std::min(x, y));
    const auto hi = static_cast<std::uint64_t>(std::max(x, y));
    return static_cast<std::size_t>(hi * (hi - 1) / 2 + lo);
}

bool PointOrder::less(std::uint32_t x, std::uint32_t y) const {
    if (x == y) return false;
    switch (kind_) {
        case Kind::Lex:
            return x < y;
        case Kind::Explicit:
        case Kind::Random:
            return rank_of_[x] < rank_of_[y];
        case Kind::Tournament: {
            const std::size_t idx = pair_index(x, y);
            const bool low_beats_high = (bits_[idx / 8] >> (idx % 8)) & 1;
            return low_beats_high == (x < y);
        }
    }
    return false;
}

LinePermutation color_line(const PointSpace& space, std::uint32_t base, std::uint32_t dir,
                           const PointOrder& order) {
    if (dir == 0) throw UsageError("color_line: degenerate line");
    const std::uint32_t p = space.p();
    std::vector<std::uint32_t> pts(p);
    for (std::uint32_t t = 0; t < p; ++t) pts[t] = space.add(base, space.scale(t, dir));

    std::vector<std::uint32_t> lex_sorted = pts;
    std::sort(lex_sorted.begin(), lex_sorted.end());

    std::vector<std::uint8_t> by_order(p);
    std::iota(by_order.begin(), by_order.end(), std::uint8_t{0});
    std::sort(by_order.begin(), by_order.end(), [&](std::uint8_t i, std::uint8_t j) {
        return order.less(lex_sorted[i], lex_sorted[j]);
    });
    return by_order;  // pi(i) = lex position of the i-th point under `order`
}

namespace {

std::uint32_t pow_u32(std::uint32_t base, std::uint32_t exp) {
    std::uint32_t out = 1;
    for (std::uint32_t i = 0; i < exp; ++i) out *= base;
    return out;
}

double gaussian_binomial(std::uint32_t n, std::uint32_t k, std::uint32_t p) {
    double out = 1.0;
    for (std::uint32_t i = 0; i < k; ++i)
        out *= (std::pow(double(p), double(n - i)) - 1.0) /
               (std::pow(double(p), double(k - i)) - 1.0);
    return out;
}

// Direction classes of a k-dim space: one nonzero coefficient vector per
// scalar class (first nonzero coefficient = 1).
std::vector<std::uint32_t> direction_classes(const PointSpace& space,
                                             const std::vector<std::uint32_t>& dirs) {
    const std::uint32_t p = space.p();
    const std::uint32_t k = static_cast<std::uint32_t>(dirs.size());
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> coeff(k, 0);
    const std::uint64_t total = [&] {
        std::uint64_t t = 1;
        for (std::uint32_t i = 0; i < k; ++i) t *= p;
        return t;
    }();
    for (std::uint64_t code = 1; code < total; ++code) {
        std::uint64_t c = code;
        std::uint32_t first_nonzero = 0;
        for (std::uint32_t i = 0; i < k; ++i) {
            coeff[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
            if (first_nonzero == 0 && coeff[i] != 0) first_nonzero = coeff[i];
        }
        if (first_nonzero != 1) continue;
        std::uint32_t u = 0;
        for (std::uint32_t i = 0; i < k; ++i)
            if (coeff[i]) u = space.add(u, space.scale(coeff[i], dirs[i]));
        out.push_back(u);
    }
    return out;
}

// All points of base + span(dirs), p^k of them, enumeration order fixed.
std::vector<std::uint32_t> flat_points(const PointSpace& space, std::uint32_t base,
                                       const std::vector<std::uint32_t>& dirs) {
    std::vector<std::uint32_t> pts{base};
    for (auto d : dirs) {
        const std::size_t sz = pts.size();
        for (std::uint32_t t = 1; t < space.p(); ++t)
            for (std::size_t i = 0; i < sz; ++i)
                pts.push_back(space.add(pts[i], space.scale(t, d)));
    }
    return pts;
}

// Checks every line of the flat against one color; nullopt on mismatch.
std::optional<LinePermutation> flat_color(const PointSpace& space, std::uint32_t base,
                                          const std::vector<std::uint32_t>& dirs,
                                          const PointOrder& order) {
    const auto classes = direction_classes(space, dirs);
    const auto pts = flat_points(space, base, dirs);
    std::optional<LinePermutation> color;
    for (const auto u : classes) {
        for (const auto a : pts) {
            // count each line once: a must be its minimum point
            bool is_rep = true;
            for (std::uint32_t t = 1; t < space.p() && is_rep; ++t)
                if (space.add(a, space.scale(t, u)) < a) is_rep = false;
            if (!is_rep) continue;
            auto c = color_line(space, a, u, order);
            if (!color) {
                color = std::move(c);
            } else if (c != *color) {
                return std::nullopt;
            }
        }
    }
    return color;
}

}  // namespace

std::optional<MonoSubspace> find_mono_subspace(const PointSpace& space, std::uint32_t k,
                                               const PointOrder& order) {
    const std::uint32_t n = space.n();
    const std::uint32_t p = space.p();
    if (k > n) throw UsageError("find_mono_subspace: k exceeds the dimension");

    if (k == 0) {
        // A point has no lines; identity color by convention.
        LinePermutation id(p);
        std::iota(id.begin(), id.end(), std::uint8_t{0});
        return MonoSubspace{AffineSubspace{0, {}}, std::move(id)};
    }

    const double flats = gaussian_binomial(n, k, p) * std::pow(double(p), double(n - k));
    const double lines_per_flat = (std::pow(double(p), double(k)) - 1.0) / (p - 1.0) *
                                  std::pow(double(p), double(k - 1));
    if (flats * lines_per_flat > 5e10)
        throw UsageError("find_mono_subspace: exhaustive search infeasible at this (p, n, k)");

    // Pivot-profile (reduced echelon) enumeration: each k-dim direction
    // space appears exactly once. Candidates run in code blocks, chunked
    // across workers; merging by chunk index keeps first-hit semantics
    // identical to the sequential enumeration order.
    struct FreeCell {
        std::uint32_t row;
        std::uint32_t coord;
    };

    std::vector<std::uint32_t> comb(k);
    std::iota(comb.begin(), comb.end(), 1u);  // pivot coords, 1-based, ascending

    auto try_direction_space = [&](const std::vector<std::uint32_t>& dirs)
        -> std::optional<MonoSubspace> {
        for (std::uint32_t q = 0; q < space.point_count(); ++q) {
            // canonical coset representative: zero at every pivot coordinate
            bool rep = true;
            for (std::uint32_t i = 0; i < k && rep; ++i)
                if (space.digit(q, comb[i]) != 0) rep = false;
            if (!rep) continue;
            if (auto color = flat_color(space, q, dirs, order))
                return MonoSubspace{AffineSubspace{q, dirs}, std::move(*color)};
        }
        return std::nullopt;
    };

    while (true) {
        std::vector<FreeCell> cells;
        for (std::uint32_t i = 0; i < k; ++i) {
            for (std::uint32_t coord = comb[i] + 1; coord <= n; ++coord) {
                if (std::find(comb.begin(), comb.end(), coord) != comb.end()) continue;
                cells.push_back({i, coord});
            }
        }
        const auto base_rows = [&] {
            std::vector<std::uint32_t> r(k);
            for (std::uint32_t i = 0; i < k; ++i) {
                std::uint32_t v = 0;
                for (std::uint32_t coord = 1; coord <= n; ++coord)
                    v = v * p + (coord == comb[i] ? 1u : 0u);
                r[i] = v;
            }
            return r;
        }();
        auto rows_for_code = [&](std::uint64_t code, std::vector<std::uint32_t>& rows) {
            rows = base_rows;
            for (const auto& cell : cells) {
                const auto v = static_cast<std::uint32_t>(code % p);
                code /= p;
                if (v) {
                    // set digit `cell.coord` of rows[cell.row] to v
                    std::uint32_t unit = 1;
                    for (std::uint32_t i = cell.coord; i < n; ++i) unit *= p;
                    rows[cell.row] += v * unit;
                }
            }
        };

        std::uint64_t combos = 1;
        for (std::size_t i = 0; i < cells.size(); ++i) combos *= p;
        const std::uint64_t block = std::uint64_t{256} * worker_count();
        const std::uint64_t cosets = space.point_count() / std::max(1u, pow_u32(p, k));
        const std::uint64_t grain =
            std::max<std::uint64_t>(1, (1u << 14) / std::max<std::uint64_t>(1, cosets));
        for (std::uint64_t base_code = 0; base_code < combos; base_code += block) {
            const std::uint64_t len = std::min(block, combos - base_code);
            std::vector<std::optional<MonoSubspace>> found(
                std::min<std::uint64_t>(worker_count(), len));
            run_chunks(len, grain, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
                std::vector<std::uint32_t> rows(k);
                for (std::uint64_t off = begin; off < end; ++off) {
                    rows_for_code(base_code + off, rows);
                    if (auto hit = try_direction_space(rows)) {
                        found[chunk] = std::move(hit);
                        return;  // first hit within this chunk's ordered range
                    }
                }
            });
            for (auto& hit : found)
                if (hit) return hit;
        }

        // next pivot combination in lex order
        std::int32_t i = static_cast<std::int32_t>(k) - 1;
        while (i >= 0 && comb[i] == n - (k - 1 - static_cast<std::uint32_t>(i))) --i;
        if (i < 0) break;
        ++comb[i];
        for (auto j = static_cast<std::uint32_t>(i) + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return std::nullopt;
}

BasisData minimal_basis(const PointSpace& space, const AffineSubspace& w) {
    BasisData out;
    const std::uint32_t k = static_cast<std::uint32_t>(w.dirs.size());
    if (k == 0) return out;

    auto vect = flat_points(space, 0, w.dirs);  // the direction space itself
    std::sort(vect.begin(), vect.end());

    // Greedy: next basis vector is the lex-least not yet spanned. Echelon
    // reduction tracks the span.
    std::vector<std::uint32_t> echelon;  // reduced rows, leading coord strictly increasing
    auto reduce = [&](std::uint32_t v) {
        for (const auto row : echelon) {
            const std::uint32_t lead = space.leading_coord(row);
            const std::uint32_t dv = space.digit(v, lead);
            if (dv == 0) continue;
            const std::uint32_t dr = space.digit(row, lead);
            // v -= (dv / dr) * row
            std::uint32_t factor = 0;
            for (std::uint32_t f = 0; f < space.p(); ++f)
                if (f * dr % space.p() == dv) factor = f;
            v = space.sub(v, space.scale(factor, row));
        }
        return v;
    };

    for (const auto v : vect) {
        if (v == 0) continue;
        if (reduce(v) == 0) continue;  // already spanned
        out.b.push_back(v);
        out.omega.push_back(space.leading_coord(v));
        echelon.push_back(reduce(v));
        std::sort(echelon.begin(), echelon.end(), [&](std::uint32_t a, std::uint32_t b) {
            return space.leading_coord(a) < space.leading_coord(b);
        });
        if (out.b.size() == k) break;
    }
    if (out.b.size() != k) throw UsageError("minimal_basis: direction vectors were dependent");
    return out;
}

std::uint32_t d_point(const PointSpace& space, const AffineSubspace& w, const BasisData& basis,
                      const std::vector<std::uint8_t>& s) {
    const std::uint32_t k = static_cast<std::uint32_t>(basis.b.size());
    if (s.size() != k) throw UsageError("d_point: tuple length mismatch");
    // omega is strictly decreasing and b^l has zero digits before omega_l,
    // so the system is triangular: solve from l = k down to 1.
    std::uint32_t point = w.base;
    for (std::uint32_t l = k; l-- > 0;) {
        const std::uint32_t coord = basis.omega[l];
        const std::uint32_t have = space.digit(point, coord);
        const std::uint32_t want = s[l] % space.p();
        const std::uint32_t lead = space.digit(basis.b[l], coord);
        std::uint32_t lambda = 0;
        for (std::uint32_t f = 0; f < space.p(); ++f)
            if ((have + f * lead) % space.p() == want) lambda = f;
        point = space.add(point, space.scale(lambda, basis.b[l]));
    }
    for (std::uint32_t l = 0; l < k; ++l)
        if (space.digit(point, basis.omega[l]) != s[l] % space.p())
            throw std::logic_error("d_point: triangular solve failed");
    return point;
}

bool eval_phi_pi(const PointSpace& space, std::uint32_t x, std::uint32_t y,
                 const LinePermutation& pi, const PointOrder& order) {
    for (std::size_t i = 0; i + 1 < pi.size(); ++i) {
        const std::uint32_t lhs = space.add(x, space.scale(pi[i], y));
        const std::uint32_t rhs = space.add(x, space.scale(pi[i + 1], y));
        if (!order.less(lhs, rhs)) return false;
    }
    return true;
}

ShatterResult build_and_verify_witness(const PointSpace& space, std::uint32_t k,
                                       const PointOrder& order) {
    ShatterResult result;
    auto mono = find_mono_subspace(space, k, order);
    if (!mono) return result;
    result.found = true;
    result.witness.pi = mono->color;
    result.witness.subspace = mono->subspace;
    result.witness.basis = minimal_basis(space, mono->subspace);

    const std::uint32_t subsets = 1u << k;
    result.witness.d_points.resize(subsets);
    std::vector<std::uint8_t> s(k);
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        for (std::uint32_t i = 0; i < k; ++i) s[i] = (mask >> i) & 1 ? 1 : 0;
        result.witness.d_points[mask] = d_point(space, mono->subspace, result.witness.basis, s);
    }

    // phi_pi(d_I, b^l) must hold exactly when l is outside I.
    result.verified = true;
    for (std::uint32_t mask = 0; mask < subsets && result.verified; ++mask) {
        for (std::uint32_t l = 0; l < k && result.verified; ++l) {
            const bool in_i = (mask >> l) & 1;
            const bool holds = eval_phi_pi(space, result.witness.d_points[mask],
                                           result.witness.basis.b[l], result.witness.pi, order);
            if (holds != !in_i) result.verified = false;
        }
    }
    return result;
}

bool recheck_mono(const PointSpace& space, const MonoSubspace& mono, const PointOrder& order) {
    const auto color = flat_color(space, mono.subspace.base, mono.subspace.dirs, order);
    return color.has_value() && *color == mono.color;
}

PointOrder read_point_order(const PointSpace& space, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<std::uint32_t> rank_of(space.point_count());
    std::uint32_t idx;
    std::uint32_t rank = 0;
    while (in >> idx) {
        if (idx >= space.point_count() || rank >= space.point_count())
            throw IoError("order file: bad point index or too many entries");
        rank_of[idx] = rank++;
    }
    if (rank != space.point_count()) throw IoError("order file: too few entries");
    try {
        return PointOrder::explicit_ranks(space, std::move(rank_of));
    } catch (const UsageError& e) {
        throw IoError(std::string("order file: ") + e.what());
    }
}

}  // namespace orderforge
