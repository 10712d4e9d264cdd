#include "orderforge/capi.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "orderforge/arith.hpp"
#include "orderforge/biorder.hpp"
#include "orderforge/bounds.hpp"
#include "orderforge/errors.hpp"
#include "orderforge/generic_order.hpp"
#include "orderforge/graph.hpp"
#include "orderforge/m0.hpp"
#include "orderforge/probe.hpp"
#include "orderforge/report.hpp"
#include "orderforge/shatter.hpp"

using namespace orderforge;

struct of_biorder {
    BiOrder value;
};
struct of_carrier {
    ArithCarrier value;
};
struct of_graph {
    ColoredRegularGraph value;
};
struct of_ordering {
    VertexOrdering value;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(::operator new(s.size() + 1, std::nothrow));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
of_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const UsageError& e) {
        g_last_error = e.what();
        return OF_USAGE_ERROR;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return OF_IO_ERROR;
    } catch (const ConstructionError& e) {
        g_last_error = e.what();
        return OF_CONSTRUCTION_ERROR;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return OF_INTERNAL_ERROR;
    } catch (...) {
        g_last_error = "unknown error";
        return OF_INTERNAL_ERROR;
    }
}

of_status require(bool cond, const char* message) {
    if (cond) return OF_OK;
    g_last_error = message;
    return OF_USAGE_ERROR;
}

std::string decode_report_text(const DecodeResult& d) {
    Report rep;
    rep.kv("domain", std::uint64_t{d.domain_size});
    rep.kv("add_entries", std::uint64_t{d.add_triples.size()});
    for (const auto& t : d.add_triples)
        rep.tsv_row(std::to_string(t[0]) + "\t" + std::to_string(t[1]) + "\t" +
                    std::to_string(t[2]));
    rep.kv("mul_entries", std::uint64_t{d.mul_triples.size()});
    for (const auto& t : d.mul_triples)
        rep.tsv_row(std::to_string(t[0]) + "\t" + std::to_string(t[1]) + "\t" +
                    std::to_string(t[2]));
    return rep.text();
}

}  // namespace

extern "C" {

const char* of_last_error(void) { return g_last_error.c_str(); }

void of_biorder_free(of_biorder* b) { delete b; }
void of_carrier_free(of_carrier* c) { delete c; }
void of_graph_free(of_graph* g) { delete g; }
void of_ordering_free(of_ordering* o) { delete o; }
void of_string_free(char* s) { ::operator delete(s); }

of_status of_biorder_create(const uint32_t* order2, uint32_t size, of_biorder** out) {
    if (auto st = require(order2 && out, "null argument")) return st;
    return guarded([&] {
        *out = new of_biorder{BiOrder(std::vector<std::uint32_t>(order2, order2 + size))};
        return OF_OK;
    });
}

of_status of_biorder_read(const char* path, of_biorder** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] {
        *out = new of_biorder{read_biorder(path)};
        return OF_OK;
    });
}

of_status of_biorder_write(const of_biorder* b, const char* path) {
    if (auto st = require(b && path, "null argument")) return st;
    return guarded([&] {
        write_biorder(b->value, path);
        return OF_OK;
    });
}

uint32_t of_biorder_size(const of_biorder* b) { return b ? b->value.size() : 0; }

of_status of_biorder_order2(const of_biorder* b, uint32_t* buffer, uint32_t buffer_len) {
    if (auto st = require(b && buffer, "null argument")) return st;
    if (auto st = require(buffer_len >= b->value.size(), "buffer too small")) return st;
    const auto& o2 = b->value.order2();
    std::memcpy(buffer, o2.data(), o2.size() * sizeof(uint32_t));
    return OF_OK;
}

of_status of_arith_encode(uint32_t k, of_carrier** out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    return guarded([&] {
        *out = new of_carrier{encode(k)};
        return OF_OK;
    });
}

of_status of_carrier_read(const char* path, of_carrier** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] {
        *out = new of_carrier{read_carrier(path)};
        return OF_OK;
    });
}

of_status of_carrier_write(const of_carrier* c, const char* path) {
    if (auto st = require(c && path, "null argument")) return st;
    return guarded([&] {
        write_carrier(c->value, path);
        return OF_OK;
    });
}

uint32_t of_carrier_k(const of_carrier* c) { return c ? c->value.k : 0; }

of_status of_carrier_params(const of_carrier* c, uint32_t params_out[3]) {
    if (auto st = require(c && params_out, "null argument")) return st;
    params_out[0] = c->value.param_ranks[0];
    params_out[1] = c->value.param_ranks[1];
    params_out[2] = c->value.param_ranks[2];
    return OF_OK;
}

of_status of_carrier_biorder(const of_carrier* c, of_biorder** out) {
    if (auto st = require(c && out, "null argument")) return st;
    return guarded([&] {
        *out = new of_biorder{c->value.biorder};
        return OF_OK;
    });
}

of_status of_arith_decode(const of_biorder* b, const uint32_t params[3], char** report_out) {
    if (auto st = require(b && params && report_out, "null argument")) return st;
    return guarded([&] {
        const DecodeResult d = decode(b->value, {params[0], params[1], params[2]});
        *report_out = dup_string(decode_report_text(d));
        return OF_OK;
    });
}

of_status of_arith_verify(uint32_t k, char** report_out, int* verified_out) {
    if (auto st = require(report_out && verified_out, "null argument")) return st;
    return guarded([&] {
        const RoundtripReport rt = verify_roundtrip(k);
        Report rep;
        rep.kv("k", std::uint64_t{k});
        rep.kv("ok", rt.ok);
        rep.kv("expected_domain", std::uint64_t{rt.expected_domain});
        rep.kv("decoded_domain", std::uint64_t{rt.decoded_domain});
        rep.kv("discrepancies", std::uint64_t{rt.discrepancies.size()});
        for (const auto& d : rt.discrepancies) {
            rep.tsv_row(std::string(d.table == BlockKind::Add ? "add" : "mul") + "\t" +
                        std::to_string(d.triple[0]) + "\t" + std::to_string(d.triple[1]) + "\t" +
                        std::to_string(d.triple[2]) + "\t" + (d.missing ? "missing" : "extra"));
        }
        *report_out = dup_string(rep.text());
        *verified_out = rt.ok ? 1 : 0;
        return OF_OK;
    });
}

of_status of_param_d(uint64_t n, uint32_t c, double alpha, uint32_t* d_out) {
    if (auto st = require(d_out != nullptr, "null argument")) return st;
    return guarded([&] {
        *d_out = param_d(n, c, alpha);
        return OF_OK;
    });
}

of_status of_graph_generate(uint32_t n, uint32_t d, uint64_t seed, of_graph** out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    return guarded([&] {
        *out = new of_graph{generate(n, d, seed)};
        return OF_OK;
    });
}

of_status of_graph_read(const char* path, of_graph** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] {
        *out = new of_graph{read_graph(path)};
        return OF_OK;
    });
}

of_status of_graph_write(const of_graph* g, const char* path) {
    if (auto st = require(g && path, "null argument")) return st;
    return guarded([&] {
        write_graph(g->value, path);
        return OF_OK;
    });
}

uint32_t of_graph_vertex_count(const of_graph* g) { return g ? g->value.vertex_count() : 0; }
uint32_t of_graph_color_count(const of_graph* g) { return g ? g->value.color_count() : 0; }

uint32_t of_graph_neighbor(const of_graph* g, uint32_t vertex, uint32_t color) {
    if (!g || vertex >= g->value.vertex_count() || color >= g->value.color_count())
        return 0xFFFFFFFFu;
    return g->value.neighbor(vertex, color);
}

of_status of_graph_surgery(const of_graph* g, uint32_t c, uint64_t seed, of_graph** out,
                           char** changelog_out) {
    if (auto st = require(g && out, "null argument")) return st;
    return guarded([&] {
        SurgeryResult r = surgery(g->value, c, seed);
        if (changelog_out) {
            Report rep;
            rep.kv("swaps", std::uint64_t{r.changelog.size()});
            rep.kv("changed_edges", std::uint64_t{2 * r.changelog.size()});
            for (const auto& s : r.changelog) {
                rep.tsv_row(std::to_string(s.color) + "\t" + std::to_string(s.removed_first[0]) +
                            "\t" + std::to_string(s.removed_first[1]) + "\t" +
                            std::to_string(s.removed_second[0]) + "\t" +
                            std::to_string(s.removed_second[1]) + "\t" +
                            std::to_string(s.added_first[0]) + "\t" +
                            std::to_string(s.added_first[1]) + "\t" +
                            std::to_string(s.added_second[0]) + "\t" +
                            std::to_string(s.added_second[1]));
            }
            *changelog_out = dup_string(rep.text());
        }
        *out = new of_graph{std::move(r.graph)};
        return OF_OK;
    });
}

of_status of_graph_stats(const of_graph* g, uint32_t c, char** report_out) {
    if (auto st = require(g && report_out, "null argument")) return st;
    return guarded([&] {
        const auto cycles = enumerate_small_cycles(g->value, c);
        Report rep;
        rep.kv("n", std::uint64_t{g->value.vertex_count()});
        rep.kv("d", std::uint64_t{g->value.color_count()});
        rep.kv("c", std::uint64_t{c});
        rep.kv("surgered", g->value.meta().surgered);
        rep.kv("matchings_valid", g->value.matchings_valid());
        rep.kv("small_cycles", std::uint64_t{cycles.size()});
        if (cycles.empty())
            rep.kv("girth_exceeds", std::uint64_t{c});
        else
            rep.kv("shortest_cycle", std::uint64_t{cycles.front().length()});
        std::vector<std::uint64_t> by_len(c + 1, 0);
        for (const auto& cy : cycles) ++by_len[cy.length()];
        for (std::uint32_t len = 2; len <= c; ++len)
            rep.tsv_row(std::to_string(len) + "\t" + std::to_string(by_len[len]));
        *report_out = dup_string(rep.text());
        return OF_OK;
    });
}

of_status of_ordering_read(const char* path, of_ordering** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] {
        *out = new of_ordering{read_ordering(path)};
        return OF_OK;
    });
}

of_status of_ordering_write(const of_ordering* o, const char* path) {
    if (auto st = require(o && path, "null argument")) return st;
    return guarded([&] {
        write_ordering(o->value, path);
        return OF_OK;
    });
}

of_status of_ordering_random(uint32_t n, uint64_t seed, of_ordering** out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    return guarded([&] {
        *out = new of_ordering{VertexOrdering::random(n, seed)};
        return OF_OK;
    });
}

of_status of_probe_scan(const of_graph* g, const of_ordering* o, const of_biorder* target,
                        char** report_out, uint64_t* witness_count_out) {
    if (auto st = require(g && o && target, "null argument")) return st;
    return guarded([&] {
        const auto witnesses = scan(g->value, o->value, target->value);
        if (witness_count_out) *witness_count_out = witnesses.size();
        if (report_out) {
            Report rep;
            rep.kv("target_size", std::uint64_t{target->value.size()});
            rep.kv("witnesses", std::uint64_t{witnesses.size()});
            for (const auto& w : witnesses)
                rep.tsv_row(std::to_string(w.start_rank) + "\t" + std::to_string(w.color));
            *report_out = dup_string(rep.text());
        }
        return OF_OK;
    });
}

of_status of_probe_plant(const of_graph* g, const of_biorder* target, uint64_t seed,
                         of_ordering** out) {
    if (auto st = require(g && target && out, "null argument")) return st;
    return guarded([&] {
        *out = new of_ordering{plant(g->value, target->value, seed)};
        return OF_OK;
    });
}

of_status of_probe_montecarlo(const of_graph* g, const of_biorder* target, uint32_t trials,
                              uint64_t seed, char** report_out) {
    if (auto st = require(g && target && report_out, "null argument")) return st;
    return guarded([&] {
        const MonteCarloReport r = montecarlo(g->value, target->value, trials, seed);
        *report_out = dup_string(montecarlo_report_text(r, target->value));
        return OF_OK;
    });
}

of_status of_suite_end2end(uint32_t k, uint32_t n, uint32_t d, uint32_t c, uint64_t seed,
                           char** report_out, int* verdict_out) {
    if (auto st = require(verdict_out != nullptr, "null argument")) return st;
    return guarded([&] {
        const EndToEndResult r = end_to_end(k, n, d, c, seed);
        *verdict_out = r.verdict ? 1 : 0;
        if (report_out) {
            Report rep;
            rep.kv("k", std::uint64_t{k});
            rep.kv("n", std::uint64_t{n});
            rep.kv("d", std::uint64_t{d});
            rep.kv("c", std::uint64_t{c});
            rep.kv("seed", std::uint64_t{seed});
            rep.kv("verdict", r.verdict);
            rep.kv("witnesses", std::uint64_t{r.witness_count});
            rep.kv("witness_rank", std::uint64_t{r.used.start_rank});
            rep.kv("witness_color", std::uint64_t{r.used.color});
            rep.kv("phi_edge_u", std::uint64_t{r.phi_edge[0]});
            rep.kv("phi_edge_v", std::uint64_t{r.phi_edge[1]});
            rep.kv("add_entries", std::uint64_t{r.decoded.add_triples.size()});
            rep.kv("mul_entries", std::uint64_t{r.decoded.mul_triples.size()});
            *report_out = dup_string(rep.text());
        }
        return OF_OK;
    });
}

of_status of_suite_m0(uint32_t max_class, uint64_t seed, char** report_out, int* all_ok_out) {
    if (auto st = require(all_ok_out != nullptr, "null argument")) return st;
    return guarded([&] {
        const M0Family fam = assemble_m0(max_class, seed);
        *all_ok_out = fam.all_ok ? 1 : 0;
        if (report_out) {
            Report rep;
            rep.kv("classes", std::uint64_t{fam.classes.size()});
            rep.kv("all_ok", fam.all_ok);
            for (const auto& cls : fam.classes) {
                rep.tsv_row(std::to_string(cls.class_index) + "\t" +
                            std::to_string(cls.vertex_base) + "\t" +
                            std::to_string(cls.graph.vertex_count()) + "\t" +
                            std::to_string(cls.swaps) + "\t" + (cls.girth_ok ? "1" : "0") + "\t" +
                            (cls.verdict ? "1" : "0"));
            }
            *report_out = dup_string(rep.text());
        }
        return OF_OK;
    });
}

of_status of_shatter_run(uint32_t p, uint32_t n, uint32_t k, int order_kind, uint64_t seed,
                         const char* order_path, char** report_out, int* found_out,
                         int* verified_out) {
    if (auto st = require(found_out && verified_out, "null argument")) return st;
    return guarded([&] {
        const PointSpace space(p, n);
        PointOrder order = PointOrder::lex(space);
        switch (order_kind) {
            case 0: break;
            case 1: order = PointOrder::random(space, seed); break;
            case 2:
                if (!order_path) throw UsageError("shatter: explicit order needs a file");
                order = read_point_order(space, order_path);
                break;
            case 3: order = PointOrder::random_tournament(space, seed); break;
            default: throw UsageError("shatter: unknown order kind");
        }
        const ShatterResult r = build_and_verify_witness(space, k, order);
        *found_out = r.found ? 1 : 0;
        *verified_out = (r.found && r.verified) ? 1 : 0;
        if (report_out) {
            Report rep;
            rep.kv("p", std::uint64_t{p});
            rep.kv("n", std::uint64_t{n});
            rep.kv("k", std::uint64_t{k});
            rep.kv("order_kind", std::int64_t{order_kind});
            rep.kv("found", r.found);
            rep.kv("verified", r.verified);
            if (r.found) {
                std::string pi;
                for (auto v : r.witness.pi) pi += std::to_string(unsigned{v});
                rep.kv("pi", pi);
                rep.kv("base", std::uint64_t{r.witness.subspace.base});
                std::string omega;
                for (std::size_t i = 0; i < r.witness.basis.omega.size(); ++i) {
                    if (i) omega.push_back(' ');
                    omega += std::to_string(r.witness.basis.omega[i]);
                }
                rep.kv("omega", omega);
                for (std::size_t i = 0; i < r.witness.basis.b.size(); ++i)
                    rep.tsv_row("b" + std::to_string(i + 1) + "\t" +
                                std::to_string(r.witness.basis.b[i]));
                rep.kv("d_points", std::uint64_t{r.witness.d_points.size()});
            }
            *report_out = dup_string(rep.text());
        }
        return OF_OK;
    });
}

of_status of_generic_order_run(const char* constraints_path, uint64_t seed, const char* out_path,
                               char** report_out) {
    if (auto st = require(constraints_path != nullptr, "null argument")) return st;
    return guarded([&] {
        const auto constraints = parse_constraint_file(constraints_path);
        const RunResult run = run_queue(constraints, seed);
        if (out_path) write_structure(run, out_path);
        if (report_out) *report_out = dup_string(structure_to_text(run));
        return OF_OK;
    });
}

of_status of_hoeffding_bound(uint64_t n, double p, double x, double* bound_out) {
    if (auto st = require(bound_out != nullptr, "null argument")) return st;
    return guarded([&] {
        *bound_out = hoeffding_bound(n, p, x);
        return OF_OK;
    });
}

of_status of_binom_tail_check(uint32_t n, double p, const uint32_t* xs, uint32_t xs_len,
                              uint64_t samples, uint64_t seed, char** report_out,
                              int* any_flagged_out) {
    if (auto st = require(xs && any_flagged_out, "null argument")) return st;
    return guarded([&] {
        const TailCheckReport r =
            binom_tail_check(n, p, std::span<const std::uint32_t>(xs, xs_len), samples, seed);
        *any_flagged_out = r.any_flagged ? 1 : 0;
        if (report_out) {
            Report rep;
            rep.kv("n", std::uint64_t{r.n});
            rep.kv("p", r.p);
            rep.kv("samples", r.samples);
            rep.kv("any_flagged", r.any_flagged);
            for (const auto& row : r.rows) {
                rep.tsv_row(std::to_string(row.x) + "\t" + Report::format_double(row.estimate) +
                            "\t" + Report::format_double(row.stderr_) + "\t" +
                            Report::format_double(row.bound) + "\t" + (row.flagged ? "1" : "0"));
            }
            *report_out = dup_string(rep.text());
        }
        return OF_OK;
    });
}

}  // extern "C"
