#ifndef ORDERFORGE_GENERIC_ORDER_HPP
#define ORDERFORGE_GENERIC_ORDER_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace orderforge {

// Exact rational with small denominators; the embedding is renormalized to
// integers after every step, so fractions never deepen.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational of(long long n) { return {n, 1}; }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
};

Rational midpoint(const Rational& a, const Rational& b);

// Quantifier-free order formula over variables x1..xm and parameters
// (element ids). Atoms are strict comparisons between two terms.
struct Term {
    enum class Kind : std::uint8_t { Var, Param };
    Kind kind = Kind::Var;
    std::uint64_t index = 0;  // Var: 1..m; Param: element id
    bool operator==(const Term&) const = default;
};

struct Formula {
    enum class Op : std::uint8_t { Atom, And, Or, Not, True, False };
    Op op = Op::True;
    Term lhs, rhs;                           // Atom only
    std::vector<Formula> children;           // And/Or: 2, Not: 1

    static Formula atom(Term a, Term b);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula neg(Formula a);
    static Formula truth(bool value);
};

struct OrderConstraint {
    std::uint32_t var_count = 0;
    std::vector<std::uint64_t> params;  // element ids referenced by the formula
    Formula theta;
};

// Prefix token grammar, one constraint per line:
//   constraint := ["vars" <m>] formula
//   formula    := "and" formula formula | "or" formula formula
//               | "not" formula | "true" | "false" | "lt" term term
//   term       := x<i> | p<id>
// Without a "vars" prefix, m is the largest variable index mentioned.
OrderConstraint parse_constraint(const std::string& line);
std::vector<OrderConstraint> parse_constraint_file(const std::string& path);
std::string constraint_to_line(const OrderConstraint& c);

struct ConstraintLogEntry {
    std::size_t queue_index = 0;
    bool realized = false;
    std::vector<std::uint64_t> witness_ids;  // fresh elements, x1..xm in order
};

struct EmbeddingState {
    std::map<std::uint64_t, Rational> f;  // element id -> rational, injective
    std::vector<ConstraintLogEntry> log;
    std::uint64_t next_fresh_id = 0;
};

// Largeness of theta with parameters already mapped: satisfiable by
// pairwise-distinct fresh points distinct from every parameter value. DNF;
// a disjunct is feasible iff its strict-order digraph (with forced
// distinctness and the parameters' actual order) is acyclic.
bool check_large(const Formula& theta, std::uint32_t var_count,
                 const std::vector<std::uint64_t>& param_ids,
                 const std::map<std::uint64_t, Rational>& f);

// One induction step: map missing parameters above the current maximum,
// skip non-large constraints, otherwise create fresh elements realizing one
// feasible disjunct (midpoint/endpoint placement, disjunct picked by seed).
EmbeddingState extend_step(EmbeddingState state, const OrderConstraint& constraint,
                           std::uint64_t seed);

struct OrderedStructure {
    std::vector<std::uint64_t> elements;  // ids in increasing realized order
};

struct RunResult {
    EmbeddingState state;
    OrderedStructure structure;
};

RunResult run_queue(const std::vector<OrderConstraint>& constraints, std::uint64_t seed);

// Re-evaluate a constraint against an embedding: do the logged witnesses
// (with the parameters) satisfy theta under the pulled-back order?
bool eval_formula(const Formula& theta, const std::vector<Rational>& var_values,
                  const std::map<std::uint64_t, Rational>& f);

std::string structure_to_text(const RunResult& run);
void write_structure(const RunResult& run, const std::string& path);

}  // namespace orderforge

#endif
