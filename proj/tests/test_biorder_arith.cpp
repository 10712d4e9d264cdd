#include <doctest.h>

#include <array>
#include <set>

#include "oracle_helpers.hpp"
#include "orderforge/arith.hpp"
#include "orderforge/biorder.hpp"
#include "orderforge/errors.hpp"
#include "orderforge/prng.hpp"

using namespace orderforge;

TEST_CASE("biorder validates and canonicalizes") {
    CHECK_THROWS_AS(BiOrder({0, 0, 1}), UsageError);
    CHECK_THROWS_AS(BiOrder({0, 3, 1}), UsageError);

    const std::vector<std::uint64_t> first{10, 20, 30};
    const std::vector<std::uint64_t> second{30, 10, 20};
    const BiOrder b = BiOrder::from_orders(first, second);
    CHECK(b.order2() == std::vector<std::uint32_t>{2, 0, 1});

    // inverse lookup
    const auto inv = b.rank2_of();
    for (std::uint32_t j = 0; j < b.size(); ++j) CHECK(inv[b.order2()[j]] == j);
}

TEST_CASE("biorder canonical form is relabeling-invariant") {
    SplitMix64 rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(bounded(rng, 9));
        auto perm = random_permutation(n, rng);
        std::vector<std::uint64_t> first(n), second(n);
        // arbitrary ids: trial-dependent affine relabeling
        for (std::uint32_t i = 0; i < n; ++i) first[i] = 1000 * (trial + 1) + 7 * i;
        for (std::uint32_t j = 0; j < n; ++j) second[j] = first[perm[j]];
        const BiOrder a = BiOrder::from_orders(first, second);

        // a different labeling of the same two orders
        std::vector<std::uint64_t> first2(n), second2(n);
        for (std::uint32_t i = 0; i < n; ++i) first2[i] = 5 + 13 * i;
        for (std::uint32_t j = 0; j < n; ++j) second2[j] = first2[perm[j]];
        CHECK(a == BiOrder::from_orders(first2, second2));
        CHECK(a.order2() == std::vector<std::uint32_t>(perm.begin(), perm.end()));
    }
}

TEST_CASE("biorder text format round-trips") {
    const BiOrder b({2, 0, 1});
    const std::string text = biorder_to_text(b);
    CHECK(text == "biorder v1 N=3\n2 0 1\n");
    CHECK(biorder_from_text(text) == b);
    CHECK_THROWS_AS(biorder_from_text("biorder v2 N=1\n0\n"), IoError);
    CHECK_THROWS_AS(biorder_from_text("biorder v1 N=3\n0 1\n"), IoError);
}

TEST_CASE("encode rejects k = 0") { CHECK_THROWS_AS(encode(0), UsageError); }

TEST_CASE("encode k=1: the 10-point carrier") {
    const ArithCarrier c = encode(1);
    CHECK(c.biorder.size() == 10);
    CHECK(c.reprs == std::vector<std::uint32_t>{7});
    CHECK(c.biorder.order2() == std::vector<std::uint32_t>{7, 0, 1, 2, 8, 3, 4, 5, 9, 6});
    CHECK(c.param_ranks == std::array<std::uint32_t, 3>{0, 4, 8});
    CHECK(c.block_log.size() == 2);
}

TEST_CASE("encode k=3: representatives and block counts") {
    const ArithCarrier c = encode(3);
    CHECK(c.biorder.size() == 90);
    CHECK(c.reprs == std::vector<std::uint32_t>{21, 42, 63});
    std::size_t adds = 0, muls = 0;
    for (const auto& b : c.block_log) (b.kind == BlockKind::Add ? adds : muls)++;
    CHECK(adds == 6);   // triples with r+s=t<3
    CHECK(muls == 8);   // triples with r*s=t<3
}

TEST_CASE("carrier invariants hold structurally for k in 1..8") {
    for (std::uint32_t k = 1; k <= 8; ++k) {
        const ArithCarrier c = encode(k);
        const auto& order2 = c.biorder.order2();
        const std::uint32_t n = c.biorder.size();
        REQUIRE(n == 10 * k * k);

        // second-order initial segment is exactly b_0 .. b_{k-1}
        for (std::uint32_t i = 0; i < k; ++i) {
            CHECK(order2[i] == 7 * k * (i + 1));
        }
        CHECK(c.param_ranks[0] == k - 1);

        const std::uint32_t last_repr = c.reprs.back();
        std::set<std::uint32_t> used_points;
        std::uint32_t pos = k;  // second-order cursor
        for (const auto& block : c.block_log) {
            // blocks form consecutive 4-point second-order intervals
            for (int i = 0; i < 4; ++i) {
                CHECK(order2[pos + i] == block.points[i]);
                CHECK(used_points.insert(block.points[i]).second);  // no reuse
            }
            // the closing point is a delimiter, the rest code the triple
            CHECK(block.points[3] > last_repr);
            for (int i = 0; i < 3; ++i) {
                const auto v = code_of(block.points[i], c);
                REQUIRE(v.has_value());
                CHECK(*v == block.triple[i]);
            }
            pos += 4;
            if (block.kind == BlockKind::Add) CHECK(pos - 1 <= c.param_ranks[1]);
            if (block.kind == BlockKind::Mul) {
                CHECK(pos - 1 > c.param_ranks[1]);
                CHECK(pos - 1 <= c.param_ranks[2]);
            }
        }
        CHECK(pos - 1 == c.param_ranks[2]);  // nothing between blocks and a3

        // leftovers sit strictly after a3 and touch no block
        for (std::uint32_t j = c.param_ranks[2] + 1; j < n; ++j)
            CHECK(used_points.count(order2[j]) == 0);
    }
}

TEST_CASE("code_of follows the interval rule") {
    const ArithCarrier c = encode(3);
    CHECK(code_of(10, c) == 0);
    CHECK(code_of(21, c) == std::nullopt);  // representative
    CHECK(code_of(80, c) == std::nullopt);  // delimiter region
    CHECK(code_of(22, c) == 1);
    CHECK(code_of(62, c) == 2);
    CHECK(code_of(63, c) == std::nullopt);
    CHECK_THROWS_AS(code_of(90, c), UsageError);

    // rule check against the raw inequalities, all points
    for (std::uint32_t k : {1u, 4u}) {
        const ArithCarrier cc = encode(k);
        for (std::uint32_t l = 0; l < cc.biorder.size(); ++l) {
            std::optional<std::uint32_t> want;
            for (std::uint32_t r = 0; r < k; ++r) {
                const std::int64_t lo = r == 0 ? -1 : std::int64_t{cc.reprs[r - 1]};
                if (lo < l && l < cc.reprs[r]) want = r;
            }
            CHECK(code_of(l, cc) == want);
        }
    }
}

TEST_CASE("decode recovers the k=2 tables exactly") {
    const ArithCarrier c = encode(2);
    const DecodeResult d = decode(c.biorder, c.param_ranks);
    CHECK(d.domain_size == 2);
    CHECK(d.add_triples == std::vector<Triple>{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}});
    CHECK(d.mul_triples == std::vector<Triple>{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}});
}

TEST_CASE("decode k=1: single element") {
    const ArithCarrier c = encode(1);
    const DecodeResult d = decode(c.biorder, c.param_ranks);
    CHECK(d.domain_size == 1);
    CHECK(d.add_triples == std::vector<Triple>{{0, 0, 0}});
    CHECK(d.mul_triples == std::vector<Triple>{{0, 0, 0}});
}

TEST_CASE("decode with no valid blocks yields empty tables") {
    std::vector<std::uint32_t> identity(10);
    for (std::uint32_t i = 0; i < 10; ++i) identity[i] = i;
    const DecodeResult d = decode(BiOrder(identity), {0, 5, 9});
    CHECK(d.domain_size == 1);
    CHECK(d.add_triples.empty());
    CHECK(d.mul_triples.empty());
}

TEST_CASE("decode rejects malformed params") {
    const BiOrder b = encode(2).biorder;
    CHECK_THROWS_AS(decode(b, {5, 5, 9}), UsageError);
    CHECK_THROWS_AS(decode(b, {3, 2, 9}), UsageError);
    CHECK_THROWS_AS(decode(b, {1, 2, 40}), UsageError);
}

TEST_CASE("round trip holds for k = 1..12 through one code path") {
    for (std::uint32_t k = 1; k <= 12; ++k) {
        const RoundtripReport r = verify_roundtrip(k);
        CHECK(r.ok);
        CHECK(r.decoded_domain == k);
        CHECK(r.discrepancies.empty());
    }
}

TEST_CASE("decoded tables agree with the naive enumeration and stay partial") {
    for (std::uint32_t k : {1u, 3u, 5u, 7u}) {
        const ArithCarrier c = encode(k);
        const DecodeResult d = decode(c.biorder, c.param_ranks);
        std::set<Triple> add(d.add_triples.begin(), d.add_triples.end());
        std::set<Triple> mul(d.mul_triples.begin(), d.mul_triples.end());
        CHECK(add == oracle::naive_table(k, false));
        CHECK(mul == oracle::naive_table(k, true));
        for (const auto& t : d.add_triples)
            for (const auto v : t) CHECK(v < k);
        for (const auto& t : d.mul_triples)
            for (const auto v : t) CHECK(v < k);
    }
}

TEST_CASE("a swapped block pair is caught with a listed discrepancy") {
    ArithCarrier c = encode(3);
    // find the add block encoding 1+1=2 and swap its second and third
    // points, turning it into the false fact 1+2=1
    const ArithBlock* victim = nullptr;
    std::uint32_t block_pos = 3;  // second-order rank of the first block point
    for (const auto& b : c.block_log) {
        if (b.kind == BlockKind::Add && b.triple == Triple{1, 1, 2}) {
            victim = &b;
            break;
        }
        block_pos += 4;
    }
    REQUIRE(victim != nullptr);

    auto order2 = c.biorder.order2();
    std::swap(order2[block_pos + 1], order2[block_pos + 2]);
    const RoundtripReport r = compare_tables(decode(BiOrder(order2), c.param_ranks), 3);
    CHECK_FALSE(r.ok);
    REQUIRE(r.discrepancies.size() == 2);
    bool saw_missing = false, saw_extra = false;
    for (const auto& disc : r.discrepancies) {
        if (disc.missing && disc.triple == Triple{1, 1, 2}) saw_missing = true;
        if (!disc.missing && disc.triple == Triple{1, 2, 1}) saw_extra = true;
    }
    CHECK(saw_missing);
    CHECK(saw_extra);
}

TEST_CASE("decode depends only on the canonical form") {
    const ArithCarrier c = encode(3);
    // relabel elements by an arbitrary bijection preserving both orders:
    // the canonical form, and hence decode, cannot change
    const auto& order2 = c.biorder.order2();
    std::vector<std::uint64_t> by_first(c.biorder.size()), by_second(c.biorder.size());
    for (std::uint32_t i = 0; i < c.biorder.size(); ++i) by_first[i] = 31ull * i + 17;
    for (std::uint32_t j = 0; j < c.biorder.size(); ++j) by_second[j] = by_first[order2[j]];
    const BiOrder relabeled = BiOrder::from_orders(by_first, by_second);
    CHECK(relabeled == c.biorder);

    const DecodeResult a = decode(c.biorder, c.param_ranks);
    const DecodeResult b = decode(relabeled, c.param_ranks);
    CHECK(a.add_triples == b.add_triples);
    CHECK(a.mul_triples == b.mul_triples);
}

namespace {

// Literal first-order evaluation of the decode formulas: quantifiers as
// loops, Repr with its inner universal, no reuse of the decode machinery.
struct LiteralModel {
    std::vector<std::uint32_t> order2;
    std::vector<std::uint32_t> rank2;  // inverse
    std::uint32_t a1, a2, a3;          // elements (first-order ranks)

    explicit LiteralModel(const BiOrder& b, const std::array<std::uint32_t, 3>& params)
        : order2(b.order2()), rank2(b.rank2_of()) {
        a1 = order2[params[0]];
        a2 = order2[params[1]];
        a3 = order2[params[2]];
    }

    bool dom(std::uint32_t x) const { return rank2[x] <= rank2[a1]; }
    bool s2(std::uint32_t u, std::uint32_t v) const { return rank2[v] == rank2[u] + 1; }

    bool repr_is(std::uint32_t c, std::uint32_t x) const {
        if (!dom(x) || c >= x) return false;
        for (std::uint32_t z = 0; z < order2.size(); ++z)
            if (dom(z) && c < z && x > z) return false;
        return true;
    }

    bool block(std::uint32_t u1, std::uint32_t u2, std::uint32_t u3, std::uint32_t u4,
               std::uint32_t lo, std::uint32_t hi) const {
        return s2(u1, u2) && s2(u2, u3) && s2(u3, u4) && rank2[u1] > rank2[lo] &&
               rank2[u4] <= rank2[hi] && u4 > a1;
    }

    // full quartic quantifier sweep; viable only for tiny carriers
    bool phi_quartic(std::uint32_t x, std::uint32_t y, std::uint32_t z, std::uint32_t lo,
                     std::uint32_t hi) const {
        const auto n = static_cast<std::uint32_t>(order2.size());
        for (std::uint32_t u1 = 0; u1 < n; ++u1)
            for (std::uint32_t u2 = 0; u2 < n; ++u2)
                for (std::uint32_t u3 = 0; u3 < n; ++u3)
                    for (std::uint32_t u4 = 0; u4 < n; ++u4)
                        if (block(u1, u2, u3, u4, lo, hi) && repr_is(u1, x) && repr_is(u2, y) &&
                            repr_is(u3, z))
                            return true;
        return false;
    }

    // the successor atoms are functional, so u2..u4 follow from u1
    bool phi_windows(std::uint32_t x, std::uint32_t y, std::uint32_t z, std::uint32_t lo,
                     std::uint32_t hi) const {
        const auto n = static_cast<std::uint32_t>(order2.size());
        for (std::uint32_t j = 0; j + 3 < n; ++j) {
            const std::uint32_t u1 = order2[j], u2 = order2[j + 1], u3 = order2[j + 2],
                                u4 = order2[j + 3];
            if (block(u1, u2, u3, u4, lo, hi) && repr_is(u1, x) && repr_is(u2, y) &&
                repr_is(u3, z))
                return true;
        }
        return false;
    }

    std::vector<Triple> table(bool quartic, std::uint32_t lo, std::uint32_t hi) const {
        std::vector<Triple> out;
        std::vector<std::uint32_t> domain;
        for (std::uint32_t j = 0; j <= rank2[a1]; ++j) domain.push_back(order2[j]);
        for (std::uint32_t xr = 0; xr < domain.size(); ++xr)
            for (std::uint32_t yr = 0; yr < domain.size(); ++yr)
                for (std::uint32_t zr = 0; zr < domain.size(); ++zr) {
                    const bool holds =
                        quartic ? phi_quartic(domain[xr], domain[yr], domain[zr], lo, hi)
                                : phi_windows(domain[xr], domain[yr], domain[zr], lo, hi);
                    if (holds) out.push_back({xr, yr, zr});
                }
        return out;
    }
};

}  // namespace

TEST_CASE("decode agrees with a literal evaluation of the formulas") {
    // k = 1: the full quartic quantifier sweep
    {
        const ArithCarrier c = encode(1);
        const LiteralModel m(c.biorder, c.param_ranks);
        const DecodeResult d = decode(c.biorder, c.param_ranks);
        CHECK(d.add_triples == m.table(true, m.a1, m.a2));
        CHECK(d.mul_triples == m.table(true, m.a2, m.a3));
    }
    // k = 2: windows derived from the functional successor atoms
    {
        const ArithCarrier c = encode(2);
        const LiteralModel m(c.biorder, c.param_ranks);
        const DecodeResult d = decode(c.biorder, c.param_ranks);
        CHECK(d.add_triples == m.table(false, m.a1, m.a2));
        CHECK(d.mul_triples == m.table(false, m.a2, m.a3));
    }
    // and on a mutated carrier the two evaluations still agree
    {
        const ArithCarrier c = encode(2);
        auto order2 = c.biorder.order2();
        std::swap(order2[3], order2[4]);  // scramble inside the first add block
        const BiOrder mutated(order2);
        const LiteralModel m(mutated, c.param_ranks);
        const DecodeResult d = decode(mutated, c.param_ranks);
        CHECK(d.add_triples == m.table(false, m.a1, m.a2));
        CHECK(d.mul_triples == m.table(false, m.a2, m.a3));
    }
}

TEST_CASE("carrier file round-trips with the block log rebuilt") {
    const ArithCarrier c = encode(4);
    const std::string text = carrier_to_text(c);
    const ArithCarrier back = carrier_from_text(text);
    CHECK(back.k == c.k);
    CHECK(back.biorder == c.biorder);
    CHECK(back.param_ranks == c.param_ranks);
    CHECK(back.reprs == c.reprs);
    REQUIRE(back.block_log.size() == c.block_log.size());
    for (std::size_t i = 0; i < c.block_log.size(); ++i) {
        CHECK(back.block_log[i].triple == c.block_log[i].triple);
        CHECK(back.block_log[i].kind == c.block_log[i].kind);
        CHECK(back.block_log[i].points == c.block_log[i].points);
    }
    CHECK(carrier_to_text(back) == text);
}

TEST_CASE("carrier parser rejects structural corruption") {
    const ArithCarrier c = encode(2);
    std::string text = carrier_to_text(c);
    CHECK_THROWS_AS(carrier_from_text(text.substr(0, text.find("params"))), IoError);

    // break the initial segment: swap the first two second-order points
    auto order2 = c.biorder.order2();
    std::swap(order2[0], order2[1]);
    ArithCarrier bad = c;
    bad.biorder = BiOrder(order2);
    CHECK_THROWS_AS(carrier_from_text(carrier_to_text(bad)), IoError);
}
