#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "orderforge/errors.hpp"
#include "orderforge/shatter.hpp"

using namespace orderforge;

namespace {

LinePermutation identity_perm(std::uint32_t p) {
    LinePermutation pi(p);
    std::iota(pi.begin(), pi.end(), std::uint8_t{0});
    return pi;
}

// the shattering pattern re-checked outside build_and_verify_witness
bool witness_pattern_holds(const PointSpace& space, const ShatterWitness& w,
                           const PointOrder& order, std::uint32_t k) {
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask)
        for (std::uint32_t l = 0; l < k; ++l)
            if (eval_phi_pi(space, w.d_points[mask], w.basis.b[l], w.pi, order) !=
                !((mask >> l) & 1))
                return false;
    return true;
}

}  // namespace

TEST_CASE("point space arithmetic over F_2, F_3, F_5") {
    const PointSpace s(3, 2);  // points are 2-digit base-3 strings
    CHECK(s.point_count() == 9);
    CHECK(s.digit(5, 1) == 1);  // 5 = (1,2)
    CHECK(s.digit(5, 2) == 2);
    CHECK(s.add(5, 5) == 7);    // (1,2)+(1,2) = (2,1)
    CHECK(s.sub(0, 5) == 7);    // -(1,2) = (2,1)
    CHECK(s.scale(2, 5) == 7);
    CHECK(s.leading_coord(5) == 1);
    CHECK(s.leading_coord(2) == 2);

    const PointSpace f5(5, 1);
    CHECK(f5.add(3, 4) == 2);
    CHECK(f5.scale(3, 2) == 1);

    CHECK_THROWS_AS(PointSpace(4, 3), UsageError);
    CHECK_THROWS_AS(PointSpace(2, 25), UsageError);
}

TEST_CASE("color_line: lex gives the identity on every line") {
    const PointSpace s(2, 4);
    const PointOrder lex = PointOrder::lex(s);
    for (std::uint32_t base = 0; base < 16; ++base)
        for (std::uint32_t dir = 1; dir < 16; ++dir)
            CHECK(color_line(s, base, dir, lex) == identity_perm(2));

    // reverse lex flips every line
    std::vector<std::uint32_t> reversed(16);
    for (std::uint32_t x = 0; x < 16; ++x) reversed[x] = 15 - x;
    const PointOrder rev = PointOrder::explicit_ranks(s, reversed);
    for (std::uint32_t base = 0; base < 16; ++base)
        for (std::uint32_t dir = 1; dir < 16; ++dir)
            CHECK(color_line(s, base, dir, rev) == LinePermutation{1, 0});

    CHECK_THROWS_AS(color_line(s, 0, 0, lex), UsageError);
}

TEST_CASE("color_line on a hand-built F_3 order") {
    const PointSpace s(3, 1);  // three points 0, 1, 2; the line is everything
    // explicit order 1 < 2 < 0
    const PointOrder o = PointOrder::explicit_ranks(s, {2, 0, 1});
    // lex enumeration d_0=0, d_1=1, d_2=2; sorted by o: 1, 2, 0
    CHECK(color_line(s, 0, 1, o) == LinePermutation{1, 2, 0});
}

TEST_CASE("color is well-defined: any parametrization of a line agrees") {
    const PointSpace s(3, 2);
    const PointOrder o = PointOrder::random(s, 5);
    for (std::uint32_t base = 0; base < 9; ++base) {
        for (std::uint32_t dir = 1; dir < 9; ++dir) {
            const auto reference = color_line(s, base, dir, o);
            for (std::uint32_t t = 0; t < 3; ++t)
                for (std::uint32_t sc = 1; sc < 3; ++sc)
                    CHECK(color_line(s, s.add(base, s.scale(t, dir)), s.scale(sc, dir), o) ==
                          reference);
        }
    }
}

TEST_CASE("find_mono_subspace: lex makes the whole space monochromatic") {
    for (std::uint32_t n : {2u, 5u, 8u}) {
        const PointSpace s(2, n);
        const auto mono = find_mono_subspace(s, n, PointOrder::lex(s));
        REQUIRE(mono.has_value());
        CHECK(mono->subspace.base == 0);
        CHECK(mono->subspace.dirs.size() == n);
        CHECK(mono->color == identity_perm(2));
        CHECK(recheck_mono(s, *mono, PointOrder::lex(s)));
    }
}

TEST_CASE("an order with both colors blocks k = n but not k = 1") {
    const PointSpace s(2, 4);
    // identity ranks except the top two points swap: line {14,15} gets the
    // reversed color while {0,1} keeps the identity
    std::vector<std::uint32_t> ranks(16);
    std::iota(ranks.begin(), ranks.end(), 0u);
    std::swap(ranks[14], ranks[15]);
    const PointOrder o = PointOrder::explicit_ranks(s, ranks);

    CHECK_FALSE(find_mono_subspace(s, 4, o).has_value());
    const auto line = find_mono_subspace(s, 1, o);
    REQUIRE(line.has_value());
    CHECK(recheck_mono(s, *line, o));
}

TEST_CASE("find_mono_subspace rejects infeasible sizes") {
    const PointSpace s(2, 12);
    CHECK_THROWS_AS(find_mono_subspace(s, 3, PointOrder::random(s, 0)), UsageError);
    CHECK_THROWS_AS(find_mono_subspace(s, 13, PointOrder::lex(s)), UsageError);
}

TEST_CASE("minimal_basis: frozen small cases and the omega invariant") {
    {
        const PointSpace s(2, 2);
        // Vect(W) = span{(0,1)}
        const BasisData b = minimal_basis(s, {0, {1}});
        CHECK(b.b == std::vector<std::uint32_t>{1});
        CHECK(b.omega == std::vector<std::uint32_t>{2});
    }
    {
        const PointSpace s(2, 3);
        // span{(0,1,0),(0,1,1)} = {000,010,011,001}
        const BasisData b = minimal_basis(s, {0, {2, 3}});
        CHECK(b.b == std::vector<std::uint32_t>{1, 2});   // (0,0,1), (0,1,0)
        CHECK(b.omega == std::vector<std::uint32_t>{3, 2});
    }
    // omega strictly decreasing on random subspaces
    const PointSpace s(2, 6);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto mono = find_mono_subspace(s, 2, PointOrder::random(s, seed));
        if (!mono) continue;
        const BasisData b = minimal_basis(s, mono->subspace);
        REQUIRE(b.omega.size() == 2);
        CHECK(b.omega[0] > b.omega[1]);
    }
}

TEST_CASE("d_point solves the triangular system") {
    const PointSpace s(2, 5);
    const auto mono = find_mono_subspace(s, 3, PointOrder::lex(s));
    REQUIRE(mono.has_value());
    const BasisData basis = minimal_basis(s, mono->subspace);

    // the base point's own coordinates come back as the base point
    std::vector<std::uint8_t> at_base(3);
    for (std::uint32_t i = 0; i < 3; ++i)
        at_base[i] = static_cast<std::uint8_t>(s.digit(mono->subspace.base, basis.omega[i]));
    CHECK(d_point(s, mono->subspace, basis, at_base) == mono->subspace.base);

    // all 2^k selector points are distinct and carry their coordinates
    std::set<std::uint32_t> seen;
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
        std::vector<std::uint8_t> sel(3);
        for (std::uint32_t i = 0; i < 3; ++i) sel[i] = (mask >> i) & 1;
        const std::uint32_t pt = d_point(s, mono->subspace, basis, sel);
        CHECK(seen.insert(pt).second);
        for (std::uint32_t i = 0; i < 3; ++i) CHECK(s.digit(pt, basis.omega[i]) == sel[i]);
    }
}

TEST_CASE("eval_phi_pi small cases") {
    const PointSpace s(2, 3);
    const PointOrder lex = PointOrder::lex(s);
    // p = 2, pi = id: the single conjunct x < x + y
    CHECK(eval_phi_pi(s, 1, 2, identity_perm(2), lex) == lex.less(1, 3));
    CHECK_FALSE(eval_phi_pi(s, 3, 0, identity_perm(2), lex));  // y = 0

    // p = 3 on one line with an explicit order: evaluate two conjuncts
    const PointSpace f3(3, 1);
    const PointOrder o = PointOrder::explicit_ranks(f3, {2, 0, 1});  // 1 < 2 < 0
    // pi = (1 2 0): need x+1y < x+2y and x+2y < x+0y; take x=0, y=1:
    // 1 < 2 (ranks 0 < 1) and 2 < 0 (ranks 1 < 2) -> true
    CHECK(eval_phi_pi(f3, 0, 1, LinePermutation{1, 2, 0}, o));
    CHECK_FALSE(eval_phi_pi(f3, 0, 1, identity_perm(3), o));
}

TEST_CASE("lex witness at n=5, k=3 has identity color and verifies") {
    const PointSpace s(2, 5);
    const ShatterResult r = build_and_verify_witness(s, 3, PointOrder::lex(s));
    REQUIRE(r.found);
    CHECK(r.verified);
    CHECK(r.witness.pi == identity_perm(2));
    CHECK(r.witness.d_points.size() == 8);
    CHECK(witness_pattern_holds(s, r.witness, PointOrder::lex(s), 3));
}

TEST_CASE("lex self-consistency: full-dimension witnesses verify") {
    for (std::uint32_t n : {2u, 4u, 5u}) {
        const PointSpace s(2, n);
        const ShatterResult r = build_and_verify_witness(s, n, PointOrder::lex(s));
        REQUIRE(r.found);
        CHECK(r.witness.pi == identity_perm(2));
        CHECK(r.verified);
    }
}

TEST_CASE("explicit order files load by rank") {
    const PointSpace s(2, 2);
    const std::string path = "shatter_order_tmp.txt";
    {
        std::ofstream out(path);
        out << "3 2 1 0\n";  // reverse lex
    }
    const PointOrder o = read_point_order(s, path);
    CHECK(o.less(3, 0));
    CHECK_FALSE(o.less(0, 3));
    for (std::uint32_t base = 0; base < 4; ++base)
        for (std::uint32_t dir = 1; dir < 4; ++dir)
            CHECK(color_line(s, base, dir, o) == LinePermutation{1, 0});
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "3 2 1\n";
    }
    CHECK_THROWS_AS(read_point_order(s, path), IoError);
    std::remove(path.c_str());
}

TEST_CASE("k = 0 verifies vacuously") {
    const PointSpace s(2, 3);
    const ShatterResult r = build_and_verify_witness(s, 0, PointOrder::random(s, 2));
    CHECK(r.found);
    CHECK(r.verified);
    CHECK(r.witness.d_points.size() == 1);
}

TEST_CASE("every monochromatic subspace found under random orders verifies") {
    const PointSpace s(2, 6);
    int found = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ShatterResult r = build_and_verify_witness(s, 2, PointOrder::random(s, seed));
        if (r.found) {
            ++found;
            CHECK(r.verified);
        }
    }
    CHECK(found > 0);
}

TEST_CASE("tournament mode: same pipeline, same guarantee") {
    const PointSpace s(2, 6);
    CHECK_THROWS_AS(PointOrder::random_tournament(PointSpace(3, 2), 0), UsageError);

    // antisymmetry
    const PointOrder t = PointOrder::random_tournament(s, 4);
    for (std::uint32_t x = 0; x < 10; ++x)
        for (std::uint32_t y = 0; y < 10; ++y)
            CHECK((x == y ? !t.less(x, y) : t.less(x, y) != t.less(y, x)));

    int found = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ShatterResult r =
            build_and_verify_witness(s, 2, PointOrder::random_tournament(s, seed));
        if (r.found) {
            ++found;
            CHECK(r.verified);
        }
    }
    CHECK(found > 0);
}

TEST_CASE("a corrupted selector point breaks verification") {
    const PointSpace s(2, 5);
    ShatterResult r = build_and_verify_witness(s, 3, PointOrder::lex(s));
    REQUIRE(r.found);
    REQUIRE(r.verified);
    // flip the omega_2 coordinate of d_{1,2}: its epsilon pattern now lies
    const std::uint32_t flip = s.point_count() >> r.witness.basis.omega[1];
    r.witness.d_points[3] ^= flip;
    CHECK_FALSE(witness_pattern_holds(s, r.witness, PointOrder::lex(s), 3));
}

TEST_CASE("p = 3 and p = 5 pipelines work at small sizes") {
    const PointSpace f3(3, 3);
    const ShatterResult r3 = build_and_verify_witness(f3, 1, PointOrder::random(f3, 9));
    CHECK(r3.found);
    CHECK(r3.verified);

    const PointSpace f5(5, 2);
    const ShatterResult r5 = build_and_verify_witness(f5, 1, PointOrder::random(f5, 3));
    CHECK(r5.found);
    CHECK(r5.verified);
}
