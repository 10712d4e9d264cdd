#include "orderforge/generic_order.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include "orderforge/errors.hpp"
#include "orderforge/prng.hpp"

namespace orderforge {

namespace {

long long gcd_ll(long long a, long long b) {
    while (b) {
        const long long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

}  // namespace

Rational midpoint(const Rational& a, const Rational& b) {
    Rational m{a.num * b.den + b.num * a.den, 2 * a.den * b.den};
    const long long g = gcd_ll(m.num, m.den);
    if (g > 1) {
        m.num /= g;
        m.den /= g;
    }
    return m;
}

Formula Formula::atom(Term a, Term b) {
    Formula f;
    f.op = Op::Atom;
    f.lhs = a;
    f.rhs = b;
    return f;
}

Formula Formula::conj(Formula a, Formula b) {
    Formula f;
    f.op = Op::And;
    f.children.push_back(std::move(a));
    f.children.push_back(std::move(b));
    return f;
}

Formula Formula::disj(Formula a, Formula b) {
    Formula f;
    f.op = Op::Or;
    f.children.push_back(std::move(a));
    f.children.push_back(std::move(b));
    return f;
}

Formula Formula::neg(Formula a) {
    Formula f;
    f.op = Op::Not;
    f.children.push_back(std::move(a));
    return f;
}

Formula Formula::truth(bool value) {
    Formula f;
    f.op = value ? Op::True : Op::False;
    return f;
}

namespace {

Term parse_term(const std::string& tok) {
    if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'p'))
        throw UsageError("constraint: bad term " + tok);
    Term t;
    t.kind = tok[0] == 'x' ? Term::Kind::Var : Term::Kind::Param;
    try {
        t.index = std::stoull(tok.substr(1));
    } catch (const std::exception&) {
        throw UsageError("constraint: bad term " + tok);
    }
    if (t.kind == Term::Kind::Var && t.index == 0)
        throw UsageError("constraint: variables are numbered from x1");
    return t;
}

Formula parse_formula(const std::vector<std::string>& toks, std::size_t& pos) {
    if (pos >= toks.size()) throw UsageError("constraint: truncated formula");
    const std::string& op = toks[pos++];
    if (op == "true") return Formula::truth(true);
    if (op == "false") return Formula::truth(false);
    if (op == "not") return Formula::neg(parse_formula(toks, pos));
    if (op == "and" || op == "or") {
        Formula a = parse_formula(toks, pos);
        Formula b = parse_formula(toks, pos);
        return op == "and" ? Formula::conj(std::move(a), std::move(b))
                           : Formula::disj(std::move(a), std::move(b));
    }
    if (op == "lt") {
        if (pos + 1 >= toks.size()) throw UsageError("constraint: lt needs two terms");
        Term a = parse_term(toks[pos++]);
        Term b = parse_term(toks[pos++]);
        return Formula::atom(a, b);
    }
    throw UsageError("constraint: unknown token " + op);
}

void collect(const Formula& f, std::uint64_t& max_var, std::vector<std::uint64_t>& params) {
    if (f.op == Formula::Op::Atom) {
        for (const Term* t : {&f.lhs, &f.rhs}) {
            if (t->kind == Term::Kind::Var)
                max_var = std::max(max_var, t->index);
            else
                params.push_back(t->index);
        }
    }
    for (const auto& ch : f.children) collect(ch, max_var, params);
}

std::string term_str(const Term& t) {
    return (t.kind == Term::Kind::Var ? "x" : "p") + std::to_string(t.index);
}

std::string formula_str(const Formula& f) {
    switch (f.op) {
        case Formula::Op::True: return "true";
        case Formula::Op::False: return "false";
        case Formula::Op::Atom: return "lt " + term_str(f.lhs) + " " + term_str(f.rhs);
        case Formula::Op::Not: return "not " + formula_str(f.children[0]);
        case Formula::Op::And:
            return "and " + formula_str(f.children[0]) + " " + formula_str(f.children[1]);
        case Formula::Op::Or:
            return "or " + formula_str(f.children[0]) + " " + formula_str(f.children[1]);
    }
    return "";
}

}  // namespace

OrderConstraint parse_constraint(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string tok;
    while (in >> tok) toks.push_back(tok);
    if (toks.empty()) throw UsageError("constraint: empty line");

    OrderConstraint c;
    std::size_t pos = 0;
    std::uint64_t declared = 0;
    if (toks[0] == "vars") {
        if (toks.size() < 2) throw UsageError("constraint: vars needs a count");
        try {
            declared = std::stoull(toks[1]);
        } catch (const std::exception&) {
            throw UsageError("constraint: bad vars count " + toks[1]);
        }
        pos = 2;
    }
    c.theta = parse_formula(toks, pos);
    if (pos != toks.size()) throw UsageError("constraint: trailing tokens");

    std::uint64_t max_var = 0;
    collect(c.theta, max_var, c.params);
    if (declared && max_var > declared)
        throw UsageError("constraint: formula mentions more variables than declared");
    c.var_count = static_cast<std::uint32_t>(std::max(declared, max_var));
    std::sort(c.params.begin(), c.params.end());
    c.params.erase(std::unique(c.params.begin(), c.params.end()), c.params.end());
    return c;
}

std::vector<OrderConstraint> parse_constraint_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<OrderConstraint> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        try {
            out.push_back(parse_constraint(line));
        } catch (const UsageError& e) {
            throw IoError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::string constraint_to_line(const OrderConstraint& c) {
    return "vars " + std::to_string(c.var_count) + " " + formula_str(c.theta);
}

namespace {

struct Literal {
    bool positive;
    Term a, b;
};

using Disjunct = std::vector<Literal>;

constexpr std::size_t kDnfCap = 100000;

std::vector<Disjunct> to_dnf(const Formula& f, bool positive) {
    switch (f.op) {
        case Formula::Op::True:
            return positive ? std::vector<Disjunct>{{}} : std::vector<Disjunct>{};
        case Formula::Op::False:
            return positive ? std::vector<Disjunct>{} : std::vector<Disjunct>{{}};
        case Formula::Op::Atom:
            return {{Literal{positive, f.lhs, f.rhs}}};
        case Formula::Op::Not:
            return to_dnf(f.children[0], !positive);
        case Formula::Op::And:
        case Formula::Op::Or: {
            const bool distribute = (f.op == Formula::Op::And) == positive;
            auto left = to_dnf(f.children[0], positive);
            auto right = to_dnf(f.children[1], positive);
            std::vector<Disjunct> out;
            if (distribute) {
                if (left.size() * right.size() > kDnfCap)
                    throw UsageError("constraint: DNF blow-up, formula too large");
                for (const auto& l : left)
                    for (const auto& r : right) {
                        Disjunct d = l;
                        d.insert(d.end(), r.begin(), r.end());
                        out.push_back(std::move(d));
                    }
            } else {
                out = std::move(left);
                out.insert(out.end(), right.begin(), right.end());
            }
            if (out.size() > kDnfCap) throw UsageError("constraint: DNF blow-up");
            return out;
        }
    }
    return {};
}

// Node ids: vars 1..m map to 0..m-1, params follow in sorted-id order.
struct DisjunctGraph {
    std::uint32_t node_count = 0;
    std::uint32_t var_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::uint32_t> topo;  // filled by feasible()
};

std::optional<DisjunctGraph> feasible_graph(const Disjunct& d, std::uint32_t var_count,
                                            const std::vector<std::uint64_t>& param_ids,
                                            const std::map<std::uint64_t, Rational>& f) {
    DisjunctGraph g;
    g.var_count = var_count;
    g.node_count = var_count + static_cast<std::uint32_t>(param_ids.size());

    auto node_of = [&](const Term& t) -> std::uint32_t {
        if (t.kind == Term::Kind::Var) return static_cast<std::uint32_t>(t.index - 1);
        const auto it = std::lower_bound(param_ids.begin(), param_ids.end(), t.index);
        return var_count + static_cast<std::uint32_t>(it - param_ids.begin());
    };

    // Parameter chain in value order pins the existing total order.
    std::vector<std::uint32_t> by_value(param_ids.size());
    std::iota(by_value.begin(), by_value.end(), 0u);
    std::sort(by_value.begin(), by_value.end(), [&](std::uint32_t i, std::uint32_t j) {
        return f.at(param_ids[i]) < f.at(param_ids[j]);
    });
    for (std::size_t i = 0; i + 1 < by_value.size(); ++i)
        g.edges.emplace_back(var_count + by_value[i], var_count + by_value[i + 1]);

    for (const auto& lit : d) {
        const std::uint32_t u = node_of(lit.a);
        const std::uint32_t v = node_of(lit.b);
        if (u == v) {
            if (lit.positive) return std::nullopt;  // t < t is false
            continue;                               // not (t < t) is true
        }
        // distinctness is forced, so not (s < t) means t < s
        if (lit.positive)
            g.edges.emplace_back(u, v);
        else
            g.edges.emplace_back(v, u);
    }

    // Kahn with a deterministic min-id heap; a full order means acyclic.
    std::vector<std::uint32_t> indeg(g.node_count, 0);
    std::vector<std::vector<std::uint32_t>> adj(g.node_count);
    for (auto [u, v] : g.edges) {
        adj[u].push_back(v);
        ++indeg[v];
    }
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
    for (std::uint32_t v = 0; v < g.node_count; ++v)
        if (indeg[v] == 0) ready.push(v);
    while (!ready.empty()) {
        const std::uint32_t v = ready.top();
        ready.pop();
        g.topo.push_back(v);
        for (const auto w : adj[v])
            if (--indeg[w] == 0) ready.push(w);
    }
    if (g.topo.size() != g.node_count) return std::nullopt;
    return g;
}

}  // namespace

bool check_large(const Formula& theta, std::uint32_t var_count,
                 const std::vector<std::uint64_t>& param_ids,
                 const std::map<std::uint64_t, Rational>& f) {
    for (const auto id : param_ids)
        if (!f.count(id)) throw UsageError("check_large: parameter not mapped");
    for (const auto& d : to_dnf(theta, true))
        if (feasible_graph(d, var_count, param_ids, f)) return true;
    return false;
}

bool eval_formula(const Formula& theta, const std::vector<Rational>& var_values,
                  const std::map<std::uint64_t, Rational>& f) {
    auto value_of = [&](const Term& t) -> Rational {
        if (t.kind == Term::Kind::Var) {
            if (t.index == 0 || t.index > var_values.size())
                throw UsageError("eval: variable out of range");
            return var_values[t.index - 1];
        }
        return f.at(t.index);
    };
    switch (theta.op) {
        case Formula::Op::True: return true;
        case Formula::Op::False: return false;
        case Formula::Op::Atom: return value_of(theta.lhs) < value_of(theta.rhs);
        case Formula::Op::Not: return !eval_formula(theta.children[0], var_values, f);
        case Formula::Op::And:
            return eval_formula(theta.children[0], var_values, f) &&
                   eval_formula(theta.children[1], var_values, f);
        case Formula::Op::Or:
            return eval_formula(theta.children[0], var_values, f) ||
                   eval_formula(theta.children[1], var_values, f);
    }
    return false;
}

namespace {

// Order-preserving renormalization to consecutive integers; only the
// induced order matters, and this keeps denominators from deepening.
void renormalize(EmbeddingState& state) {
    std::vector<std::pair<Rational, std::uint64_t>> items;
    items.reserve(state.f.size());
    for (const auto& [id, val] : state.f) items.emplace_back(val, id);
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        return a.first < b.first;
    });
    long long i = 0;
    for (const auto& [val, id] : items) state.f[id] = Rational::of(i++);
}

Rational pick_value(const std::optional<Rational>& lo, const std::optional<Rational>& hi,
                    std::set<Rational>& taken) {
    Rational v;
    if (!hi) {
        Rational base = lo ? *lo : Rational::of(0);
        if (!taken.empty()) base = std::max(base, *taken.rbegin());
        v = Rational::of(base.num / base.den + 1);
    } else if (!lo) {
        Rational cap = *hi;
        auto it = taken.lower_bound(*hi);
        if (it != taken.begin()) {
            // nothing taken may sit below v, so drop below the least value
            cap = std::min(cap, *taken.begin());
        }
        long long floor_cap = cap.num >= 0 ? cap.num / cap.den : (cap.num - cap.den + 1) / cap.den;
        v = Rational::of(floor_cap - 1);
    } else {
        Rational next = *hi;
        auto it = taken.upper_bound(*lo);
        if (it != taken.end() && *it < next) next = *it;
        v = midpoint(*lo, next);
    }
    taken.insert(v);
    return v;
}

}  // namespace

EmbeddingState extend_step(EmbeddingState state, const OrderConstraint& constraint,
                           std::uint64_t seed) {
    SplitMix64 rng = sub_stream(seed, kTagGeneric, state.log.size());

    // map missing parameters first, above the current maximum
    long long next_above = 0;
    for (const auto& [id, val] : state.f)
        next_above = std::max(next_above, val.num / val.den + 1);
    for (const auto id : constraint.params) {
        if (!state.f.count(id)) {
            state.f[id] = Rational::of(next_above++);
            state.next_fresh_id = std::max(state.next_fresh_id, id + 1);
        }
    }

    ConstraintLogEntry entry;
    entry.queue_index = state.log.size();

    std::vector<DisjunctGraph> feasible;
    for (const auto& d : to_dnf(constraint.theta, true))
        if (auto g = feasible_graph(d, constraint.var_count, constraint.params, state.f))
            feasible.push_back(std::move(*g));

    if (feasible.empty()) {
        entry.realized = false;
        state.log.push_back(std::move(entry));
        return state;
    }

    const auto& graph = feasible[bounded(rng, feasible.size())];

    std::set<Rational> taken;
    for (const auto& [id, val] : state.f) taken.insert(val);

    // Walk the linearization; variables between two pinned values get
    // midpoints, endpoints extend past the extremes.
    std::vector<Rational> var_values(constraint.var_count);
    std::vector<bool> var_placed(constraint.var_count, false);
    std::optional<Rational> lower;
    for (std::size_t pos = 0; pos < graph.topo.size(); ++pos) {
        const std::uint32_t node = graph.topo[pos];
        if (node >= constraint.var_count) {
            lower = state.f.at(constraint.params[node - constraint.var_count]);
            continue;
        }
        // next pinned value at or after pos
        std::optional<Rational> upper;
        for (std::size_t q = pos + 1; q < graph.topo.size(); ++q) {
            const std::uint32_t w = graph.topo[q];
            if (w >= constraint.var_count) {
                upper = state.f.at(constraint.params[w - constraint.var_count]);
                break;
            }
        }
        var_values[node] = pick_value(lower, upper, taken);
        var_placed[node] = true;
        lower = var_values[node];
    }
    for (std::uint32_t i = 0; i < constraint.var_count; ++i) {
        if (!var_placed[i]) var_values[i] = pick_value(std::nullopt, std::nullopt, taken);
    }

    entry.realized = true;
    for (std::uint32_t i = 0; i < constraint.var_count; ++i) {
        const std::uint64_t id = state.next_fresh_id++;
        state.f[id] = var_values[i];
        entry.witness_ids.push_back(id);
    }
    state.log.push_back(std::move(entry));
    renormalize(state);
    return state;
}

RunResult run_queue(const std::vector<OrderConstraint>& constraints, std::uint64_t seed) {
    RunResult run;
    for (const auto& c : constraints) run.state = extend_step(std::move(run.state), c, seed);

    std::vector<std::pair<Rational, std::uint64_t>> items;
    for (const auto& [id, val] : run.state.f) items.emplace_back(val, id);
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [val, id] : items) run.structure.elements.push_back(id);
    return run;
}

std::string structure_to_text(const RunResult& run) {
    std::string out = "generic-order v1\n";
    out += "elements=" + std::to_string(run.structure.elements.size()) + "\n";
    for (std::size_t i = 0; i < run.structure.elements.size(); ++i) {
        if (i) out.push_back(' ');
        out += std::to_string(run.structure.elements[i]);
    }
    if (!run.structure.elements.empty()) out.push_back('\n');
    std::size_t realized = 0;
    for (const auto& e : run.state.log) realized += e.realized ? 1 : 0;
    out += "realized=" + std::to_string(realized) + "\n";
    out += "skipped=" + std::to_string(run.state.log.size() - realized) + "\n";
    for (const auto& e : run.state.log) {
        out += "constraint " + std::to_string(e.queue_index) +
               (e.realized ? " realized" : " skipped");
        if (e.realized) {
            out += " witness=";
            for (std::size_t i = 0; i < e.witness_ids.size(); ++i) {
                if (i) out.push_back(',');
                out += std::to_string(e.witness_ids[i]);
            }
        }
        out.push_back('\n');
    }
    return out;
}

void write_structure(const RunResult& run, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << structure_to_text(run);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace orderforge
