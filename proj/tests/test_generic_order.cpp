#include <doctest.h>

#include <algorithm>
#include <set>

#include "orderforge/errors.hpp"
#include "orderforge/generic_order.hpp"
#include "orderforge/prng.hpp"

using namespace orderforge;

namespace {

// a total order pattern over m fresh variables and the given params,
// rendered as a chain of adjacent lt atoms
OrderConstraint chain_pattern(const std::vector<Term>& sequence) {
    Formula f = Formula::truth(true);
    bool first = true;
    for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
        Formula atom = Formula::atom(sequence[i], sequence[i + 1]);
        f = first ? std::move(atom) : Formula::conj(std::move(f), std::move(atom));
        first = false;
    }
    OrderConstraint c;
    c.theta = std::move(f);
    std::uint64_t max_var = 0;
    for (const auto& t : sequence) {
        if (t.kind == Term::Kind::Var)
            max_var = std::max(max_var, t.index);
        else
            c.params.push_back(t.index);
    }
    std::sort(c.params.begin(), c.params.end());
    c.params.erase(std::unique(c.params.begin(), c.params.end()), c.params.end());
    c.var_count = static_cast<std::uint32_t>(max_var);
    return c;
}

Term var(std::uint64_t i) { return {Term::Kind::Var, i}; }
Term param(std::uint64_t id) { return {Term::Kind::Param, id}; }

}  // namespace

TEST_CASE("constraint parsing") {
    const OrderConstraint a = parse_constraint("and lt x1 x2 or lt x2 p3 not lt p3 x1");
    CHECK(a.var_count == 2);
    CHECK(a.params == std::vector<std::uint64_t>{3});

    const OrderConstraint b = parse_constraint("vars 3 true");
    CHECK(b.var_count == 3);
    CHECK(b.params.empty());

    CHECK_THROWS_AS(parse_constraint(""), UsageError);
    CHECK_THROWS_AS(parse_constraint("lt x1"), UsageError);
    CHECK_THROWS_AS(parse_constraint("lt q1 x1"), UsageError);
    CHECK_THROWS_AS(parse_constraint("lt x0 x1"), UsageError);
    CHECK_THROWS_AS(parse_constraint("and lt x1 x2"), UsageError);
    CHECK_THROWS_AS(parse_constraint("vars 1 lt x1 x2"), UsageError);
    CHECK_THROWS_AS(parse_constraint("true extra"), UsageError);

    CHECK(constraint_to_line(a) == "vars 2 and lt x1 x2 or lt x2 p3 not lt p3 x1");
}

TEST_CASE("check_large: order-consistency over a dense order") {
    std::map<std::uint64_t, Rational> f;

    const auto cyc = parse_constraint("and lt x1 x2 lt x2 x1");
    CHECK_FALSE(check_large(cyc.theta, cyc.var_count, cyc.params, f));

    f[7] = Rational::of(3);
    const auto between = parse_constraint("and lt x1 p7 lt p7 x2");
    CHECK(check_large(between.theta, between.var_count, between.params, f));

    const auto trivial = parse_constraint("vars 3 true");
    CHECK(check_large(trivial.theta, trivial.var_count, trivial.params, f));

    // reflexivity under forced distinctness
    const auto refl = parse_constraint("lt x1 x1");
    CHECK_FALSE(check_large(refl.theta, refl.var_count, refl.params, f));
    const auto nrefl = parse_constraint("not lt x1 x1");
    CHECK(check_large(nrefl.theta, nrefl.var_count, nrefl.params, f));

    // negation reads as the reversed comparison
    const auto neg = parse_constraint("and not lt x1 x2 lt x1 x2");
    CHECK_FALSE(check_large(neg.theta, neg.var_count, neg.params, f));

    // parameter facts are fixed by their values
    f[8] = Rational::of(5);
    const auto pp_true = parse_constraint("lt p7 p8");
    CHECK(check_large(pp_true.theta, pp_true.var_count, pp_true.params, f));
    const auto pp_false = parse_constraint("lt p8 p7");
    CHECK_FALSE(check_large(pp_false.theta, pp_false.var_count, pp_false.params, f));

    const auto three_cycle = parse_constraint("and and lt x1 p7 lt p7 x2 lt x2 x1");
    CHECK_FALSE(check_large(three_cycle.theta, three_cycle.var_count, three_cycle.params, f));

    const auto unmapped = parse_constraint("lt x1 p99");
    CHECK_THROWS_AS(check_large(unmapped.theta, unmapped.var_count, unmapped.params, f),
                    UsageError);
}

TEST_CASE("extend_step: realization, skipping, determinism") {
    EmbeddingState empty;
    const auto c = parse_constraint("lt x1 x2");
    const EmbeddingState s1 = extend_step(empty, c, 42);
    REQUIRE(s1.log.size() == 1);
    CHECK(s1.log[0].realized);
    REQUIRE(s1.log[0].witness_ids.size() == 2);
    CHECK(s1.f.at(s1.log[0].witness_ids[0]) < s1.f.at(s1.log[0].witness_ids[1]));

    const EmbeddingState s1b = extend_step(empty, c, 42);
    CHECK(s1.f == s1b.f);

    // an inconsistent constraint changes nothing but the log, though its
    // parameters still get mapped
    const auto bad = parse_constraint("and lt x1 p5 and lt x1 x2 lt x2 x1");
    const EmbeddingState s2 = extend_step(s1, bad, 42);
    REQUIRE(s2.log.size() == 2);
    CHECK_FALSE(s2.log[1].realized);
    CHECK(s2.f.size() == s1.f.size() + 1);  // p5 mapped, no witnesses
    CHECK(s2.f.count(5) == 1);
}

TEST_CASE("run_queue: soundness and injectivity on a random queue") {
    // Pin p0 < p1 < ... < p19 first, then 100 random total order patterns
    // on <=3 fresh variables and <=2 params. Keeping each pattern's params
    // in ascending id order keeps it satisfiable against the pinned chain.
    std::vector<Term> all_params;
    for (std::uint64_t id = 0; id < 20; ++id) all_params.push_back(param(id));
    std::vector<OrderConstraint> queue{chain_pattern(all_params)};

    SplitMix64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const auto m = static_cast<std::uint32_t>(1 + bounded(rng, 3));
        const auto np = static_cast<std::uint32_t>(bounded(rng, 3));
        std::vector<Term> seq;
        for (std::uint32_t v = 1; v <= m; ++v) seq.push_back(var(v));
        std::set<std::uint64_t> used;
        for (std::uint32_t j = 0; j < np; ++j) used.insert(bounded(rng, 20));
        for (const auto id : used) seq.push_back(param(id));
        shuffle_in_place(seq, rng);
        // restore ascending id order on the param slots
        std::vector<std::size_t> param_slots;
        for (std::size_t s = 0; s < seq.size(); ++s)
            if (seq[s].kind == Term::Kind::Param) param_slots.push_back(s);
        std::vector<std::uint64_t> ids;
        for (const auto s : param_slots) ids.push_back(seq[s].index);
        std::sort(ids.begin(), ids.end());
        for (std::size_t s = 0; s < param_slots.size(); ++s)
            seq[param_slots[s]] = param(ids[s]);
        queue.push_back(chain_pattern(seq));
    }

    const RunResult run = run_queue(queue, 7);
    REQUIRE(run.state.log.size() == 101);

    std::set<std::pair<long long, long long>> values;
    for (const auto& [id, val] : run.state.f)
        CHECK(values.emplace(val.num, val.den).second);  // injective

    for (std::size_t i = 0; i < queue.size(); ++i) {
        const auto& entry = run.state.log[i];
        CHECK(entry.realized);
        std::vector<Rational> witness;
        for (const auto id : entry.witness_ids) witness.push_back(run.state.f.at(id));
        CHECK(eval_formula(queue[i].theta, witness, run.state.f));
    }
}

TEST_CASE("run_queue: empty queue, single skip") {
    const RunResult empty = run_queue({}, 1);
    CHECK(empty.structure.elements.empty());

    std::vector<OrderConstraint> q{parse_constraint("lt x1 x2"),
                                   parse_constraint("and lt x1 x2 lt x2 x1"),
                                   parse_constraint("lt x1 x2")};
    const RunResult run = run_queue(q, 1);
    int skipped = 0;
    for (const auto& e : run.state.log) skipped += e.realized ? 0 : 1;
    CHECK(skipped == 1);
    CHECK_FALSE(run.state.log[1].realized);
}

TEST_CASE("genericity probe: every small pattern over two parameters lands") {
    // seed the structure with two parameters, then enqueue every total
    // order pattern on m <= 3 fresh variables relative to p0, p1
    std::vector<OrderConstraint> queue{parse_constraint("lt p0 p1")};

    std::vector<OrderConstraint> patterns;
    for (std::uint32_t m = 1; m <= 3; ++m) {
        std::vector<Term> seq;
        for (std::uint32_t v = 1; v <= m; ++v) seq.push_back(var(v));
        seq.push_back(param(0));
        seq.push_back(param(1));
        std::sort(seq.begin(), seq.end(), [](const Term& a, const Term& b) {
            if (a.kind != b.kind) return a.kind == Term::Kind::Var;
            return a.index < b.index;
        });
        // enumerate permutations of the sequence keeping p0 before p1
        do {
            std::size_t pos0 = 0, pos1 = 0;
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (seq[i].kind == Term::Kind::Param && seq[i].index == 0) pos0 = i;
                if (seq[i].kind == Term::Kind::Param && seq[i].index == 1) pos1 = i;
            }
            if (pos0 < pos1) patterns.push_back(chain_pattern(seq));
        } while (std::next_permutation(
            seq.begin(), seq.end(), [](const Term& a, const Term& b) {
                if (a.kind != b.kind) return a.kind == Term::Kind::Var;
                return a.index < b.index;
            }));
    }
    CHECK(patterns.size() == 3 + 12 + 60);
    queue.insert(queue.end(), patterns.begin(), patterns.end());

    const RunResult run = run_queue(queue, 11);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const auto& entry = run.state.log[i];
        REQUIRE(entry.realized);
        std::vector<Rational> witness;
        for (const auto id : entry.witness_ids) witness.push_back(run.state.f.at(id));
        CHECK(eval_formula(queue[i].theta, witness, run.state.f));
        // witnesses are fresh: distinct from every parameter
        for (const auto id : entry.witness_ids) CHECK(id >= 2);
    }
}

TEST_CASE("structure text is stable and lists the log") {
    std::vector<OrderConstraint> q{parse_constraint("and lt x1 p0 lt p0 x2")};
    const RunResult a = run_queue(q, 5);
    const RunResult b = run_queue(q, 5);
    CHECK(structure_to_text(a) == structure_to_text(b));
    CHECK(structure_to_text(a).find("constraint 0 realized") != std::string::npos);
}
