// order-forge: construct bi-order arithmetic carriers, random colored
// regular graphs with girth surgery, order probes, F_p shattering
// witnesses and generic order expansions, and verify their properties.
//
// Talks to the core exclusively through the C API in orderforge/capi.h.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orderforge/capi.h"

namespace {

int exit_code_for(of_status st) {
    switch (st) {
        case OF_OK: return 0;
        case OF_VERIFY_FAILED: return 1;
        case OF_CONSTRUCTION_ERROR: return 3;
        case OF_USAGE_ERROR:
        case OF_IO_ERROR:
        case OF_INTERNAL_ERROR:
        default: return 2;
    }
}

int fail(of_status st) {
    std::fprintf(stderr, "order-forge: %s\n", of_last_error());
    return exit_code_for(st);
}

// Reports go to --report when given, stdout otherwise.
int emit(char* text, const std::string& path) {
    if (!text) return 0;
    int rc = 0;
    if (path.empty()) {
        std::fputs(text, stdout);
    } else {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (!f) {
            std::fprintf(stderr, "order-forge: cannot open %s\n", path.c_str());
            rc = 2;
        } else {
            std::fputs(text, f);
            std::fclose(f);
        }
    }
    of_string_free(text);
    return rc;
}

struct Options {
    std::uint64_t seed = 0;
    std::string out;
    std::string report;

    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::uint32_t d = 0;
    std::uint32_t c = 0;
    std::string in;
    std::string graph;
    std::string order;
    std::string target;
    std::string changelog;
    std::string constraints;
    std::string order_kind = "lex";
    std::string order_file;
    bool tournament = false;
    std::uint32_t p_small = 2;
    double p_real = 0.5;
    double x_real = 0.0;
    std::vector<std::uint32_t> xs;
    std::uint64_t samples = 100000;
    std::uint32_t trials = 0;
    std::uint32_t max_class = 3;
    double alpha = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterexample toolkit: bi-order arithmetic, colored regular graphs, "
                 "order probes, F_p shattering, generic orders"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--seed", opt.seed, "PRNG seed");
    app.add_option("--out", opt.out, "output file");
    app.add_option("--report", opt.report, "report file (default: stdout)");

    std::function<int()> run;

    auto* arith = app.add_subcommand("arith", "bi-order encodings of truncated arithmetic");
    arith->fallthrough();
    arith->require_subcommand(1);
    {
        auto* enc = arith->add_subcommand("encode", "build the carrier P_k");
        enc->fallthrough();
        enc->add_option("--k", opt.k, "modulus")->required();
        enc->callback([&] {
            run = [&]() -> int {
                if (opt.out.empty()) {
                    std::fprintf(stderr, "order-forge: arith encode requires --out\n");
                    return 2;
                }
                of_carrier* c = nullptr;
                if (auto st = of_arith_encode(opt.k, &c)) return fail(st);
                const of_status st = of_carrier_write(c, opt.out.c_str());
                of_carrier_free(c);
                return st ? fail(st) : 0;
            };
        });

        auto* dec = arith->add_subcommand("decode", "decode a carrier file back to tables");
        dec->fallthrough();
        dec->add_option("--in", opt.in, "carrier file")->required();
        dec->callback([&] {
            run = [&]() -> int {
                of_carrier* c = nullptr;
                if (auto st = of_carrier_read(opt.in.c_str(), &c)) return fail(st);
                of_biorder* b = nullptr;
                uint32_t params[3];
                of_carrier_params(c, params);
                of_carrier_biorder(c, &b);
                of_carrier_free(c);
                char* text = nullptr;
                const of_status st = of_arith_decode(b, params, &text);
                of_biorder_free(b);
                if (st) return fail(st);
                return emit(text, opt.report);
            };
        });

        auto* ver = arith->add_subcommand("verify", "round-trip check for one k");
        ver->fallthrough();
        ver->add_option("--k", opt.k, "modulus")->required();
        ver->callback([&] {
            run = [&]() -> int {
                char* text = nullptr;
                int ok = 0;
                if (auto st = of_arith_verify(opt.k, &text, &ok)) return fail(st);
                const int rc = emit(text, opt.report);
                return rc ? rc : (ok ? 0 : 1);
            };
        });
    }

    auto* graph = app.add_subcommand("graph", "random colored regular graphs");
    graph->fallthrough();
    graph->require_subcommand(1);
    {
        auto* gen = graph->add_subcommand("gen", "draw d random perfect matchings");
        gen->fallthrough();
        gen->add_option("--n", opt.n, "vertex count (even)")->required();
        gen->add_option("--d", opt.d, "color count")->required();
        gen->callback([&] {
            run = [&]() -> int {
                if (opt.out.empty()) {
                    std::fprintf(stderr, "order-forge: graph gen requires --out\n");
                    return 2;
                }
                of_graph* g = nullptr;
                if (auto st = of_graph_generate(opt.n, opt.d, opt.seed, &g)) return fail(st);
                const of_status st = of_graph_write(g, opt.out.c_str());
                of_graph_free(g);
                return st ? fail(st) : 0;
            };
        });

        auto* sur = graph->add_subcommand("surgery", "remove all cycles of length <= c");
        sur->fallthrough();
        sur->add_option("--in", opt.in, "graph file")->required();
        sur->add_option("--c", opt.c, "girth budget")->required();
        sur->add_option("--changelog", opt.changelog, "swap log file");
        sur->callback([&] {
            run = [&]() -> int {
                if (opt.out.empty()) {
                    std::fprintf(stderr, "order-forge: graph surgery requires --out\n");
                    return 2;
                }
                of_graph* g = nullptr;
                if (auto st = of_graph_read(opt.in.c_str(), &g)) return fail(st);
                of_graph* g2 = nullptr;
                char* log = nullptr;
                const of_status st =
                    of_graph_surgery(g, opt.c, opt.seed, &g2, opt.changelog.empty() ? nullptr : &log);
                of_graph_free(g);
                if (st) return fail(st);
                const of_status wst = of_graph_write(g2, opt.out.c_str());
                of_graph_free(g2);
                if (wst) {
                    of_string_free(log);
                    return fail(wst);
                }
                if (log) return emit(log, opt.changelog);
                return 0;
            };
        });

        auto* stats = graph->add_subcommand("stats", "cycle census up to c");
        stats->fallthrough();
        stats->add_option("--in", opt.in, "graph file")->required();
        stats->add_option("--c", opt.c, "cycle length cap")->required();
        stats->callback([&] {
            run = [&]() -> int {
                of_graph* g = nullptr;
                if (auto st = of_graph_read(opt.in.c_str(), &g)) return fail(st);
                char* text = nullptr;
                const of_status st = of_graph_stats(g, opt.c, &text);
                of_graph_free(g);
                if (st) return fail(st);
                return emit(text, opt.report);
            };
        });
    }

    auto* probe = app.add_subcommand("probe", "order probes over colored graphs");
    probe->fallthrough();
    probe->require_subcommand(1);
    {
        auto* scan = probe->add_subcommand("scan", "find witnesses of a target bi-order");
        scan->fallthrough();
        scan->add_option("--graph", opt.graph, "graph file")->required();
        scan->add_option("--order", opt.order, "order file")->required();
        scan->add_option("--target", opt.target, "bi-order file")->required();
        scan->callback([&] {
            run = [&]() -> int {
                of_graph* g = nullptr;
                of_ordering* o = nullptr;
                of_biorder* t = nullptr;
                of_status st = of_graph_read(opt.graph.c_str(), &g);
                if (!st) st = of_ordering_read(opt.order.c_str(), &o);
                if (!st) st = of_biorder_read(opt.target.c_str(), &t);
                char* text = nullptr;
                uint64_t count = 0;
                if (!st) st = of_probe_scan(g, o, t, &text, &count);
                of_graph_free(g);
                of_ordering_free(o);
                of_biorder_free(t);
                if (st) return fail(st);
                return emit(text, opt.report);
            };
        });

        auto* plant = probe->add_subcommand("plant", "construct an order witnessing the target");
        plant->fallthrough();
        plant->add_option("--graph", opt.graph, "graph file")->required();
        plant->add_option("--target", opt.target, "bi-order file")->required();
        plant->callback([&] {
            run = [&]() -> int {
                if (opt.out.empty()) {
                    std::fprintf(stderr, "order-forge: probe plant requires --out\n");
                    return 2;
                }
                of_graph* g = nullptr;
                of_biorder* t = nullptr;
                of_status st = of_graph_read(opt.graph.c_str(), &g);
                if (!st) st = of_biorder_read(opt.target.c_str(), &t);
                of_ordering* o = nullptr;
                if (!st) st = of_probe_plant(g, t, opt.seed, &o);
                of_graph_free(g);
                of_biorder_free(t);
                if (st) return fail(st);
                const of_status wst = of_ordering_write(o, opt.out.c_str());
                of_ordering_free(o);
                return wst ? fail(wst) : 0;
            };
        });

        auto* mc = probe->add_subcommand("montecarlo", "bi-order statistics over random orders");
        mc->fallthrough();
        mc->add_option("--graph", opt.graph, "graph file")->required();
        mc->add_option("--target", opt.target, "bi-order file")->required();
        mc->add_option("--trials", opt.trials, "number of random orders")->required();
        mc->callback([&] {
            run = [&]() -> int {
                of_graph* g = nullptr;
                of_biorder* t = nullptr;
                of_status st = of_graph_read(opt.graph.c_str(), &g);
                if (!st) st = of_biorder_read(opt.target.c_str(), &t);
                char* text = nullptr;
                if (!st) st = of_probe_montecarlo(g, t, opt.trials, opt.seed, &text);
                of_graph_free(g);
                of_biorder_free(t);
                if (st) return fail(st);
                return emit(text, opt.report);
            };
        });
    }

    auto* shatter = app.add_subcommand("shatter", "F_p^n shattering witness");
    shatter->fallthrough();
    shatter->add_option("--p", opt.p_small, "field size (2, 3 or 5)")->required();
    shatter->add_option("--n", opt.n, "dimension")->required();
    shatter->add_option("--k", opt.k, "target shattering rank")->required();
    shatter->add_option("--order", opt.order_kind, "lex | random | file");
    shatter->add_option("--order-file", opt.order_file, "explicit order file");
    shatter->add_flag("--tournament", opt.tournament, "random tournament instead of an order");
    shatter->callback([&] {
        run = [&]() -> int {
            int kind = 0;
            if (opt.tournament)
                kind = 3;
            else if (opt.order_kind == "lex")
                kind = 0;
            else if (opt.order_kind == "random")
                kind = 1;
            else if (opt.order_kind == "file")
                kind = 2;
            else {
                std::fprintf(stderr, "order-forge: --order must be lex, random or file\n");
                return 2;
            }
            char* text = nullptr;
            int found = 0, verified = 0;
            if (auto st = of_shatter_run(opt.p_small, opt.n, opt.k, kind, opt.seed,
                                         opt.order_file.empty() ? nullptr : opt.order_file.c_str(),
                                         &text, &found, &verified))
                return fail(st);
            const int rc = emit(text, opt.report);
            return rc ? rc : (verified ? 0 : 1);
        };
    });

    auto* generic = app.add_subcommand("generic-order", "order expansion by constraint queue");
    generic->fallthrough();
    generic->add_option("--constraints", opt.constraints, "constraint file")->required();
    generic->callback([&] {
        run = [&]() -> int {
            char* text = nullptr;
            if (auto st = of_generic_order_run(opt.constraints.c_str(), opt.seed,
                                               opt.out.empty() ? nullptr : opt.out.c_str(), &text))
                return fail(st);
            return emit(text, opt.report);
        };
    });

    auto* bound = app.add_subcommand("bound", "binomial lower-tail bounds");
    bound->fallthrough();
    bound->require_subcommand(1);
    {
        auto* hoeff = bound->add_subcommand("hoeffding", "evaluate the tail bound");
        hoeff->fallthrough();
        hoeff->add_option("--n", opt.n, "trial count")->required();
        hoeff->add_option("--p", opt.p_real, "success probability")->required();
        hoeff->add_option("--x", opt.x_real, "tail point")->required();
        hoeff->callback([&] {
            run = [&]() -> int {
                double b = 0.0;
                if (auto st = of_hoeffding_bound(opt.n, opt.p_real, opt.x_real, &b))
                    return fail(st);
                char buf[96];
                std::snprintf(buf, sizeof buf, "bound=%.17g\n", b);
                if (opt.report.empty()) {
                    std::fputs(buf, stdout);
                    return 0;
                }
                std::FILE* f = std::fopen(opt.report.c_str(), "wb");
                if (!f) {
                    std::fprintf(stderr, "order-forge: cannot open %s\n", opt.report.c_str());
                    return 2;
                }
                std::fputs(buf, f);
                std::fclose(f);
                return 0;
            };
        });

        auto* check = bound->add_subcommand("check", "Monte Carlo check of the bound");
        check->fallthrough();
        check->add_option("--n", opt.n, "trial count")->required();
        check->add_option("--p", opt.p_real, "success probability")->required();
        check->add_option("--x", opt.xs, "tail points")->required();
        check->add_option("--samples", opt.samples, "Monte Carlo samples (>= 10^4)");
        check->callback([&] {
            run = [&]() -> int {
                char* text = nullptr;
                int flagged = 0;
                if (auto st = of_binom_tail_check(opt.n, opt.p_real, opt.xs.data(),
                                                  static_cast<uint32_t>(opt.xs.size()),
                                                  opt.samples, opt.seed, &text, &flagged))
                    return fail(st);
                const int rc = emit(text, opt.report);
                return rc ? rc : (flagged ? 1 : 0);
            };
        });
    }

    auto* suite = app.add_subcommand("suite", "composed verification pipelines");
    suite->fallthrough();
    suite->require_subcommand(1);
    {
        auto* e2e = suite->add_subcommand("end2end", "graph + surgery + plant + decode");
        e2e->fallthrough();
        e2e->add_option("--k", opt.k, "arithmetic modulus")->required();
        e2e->add_option("--n", opt.n, "vertex count")->required();
        e2e->add_option("--d", opt.d, "color count")->required();
        e2e->add_option("--c", opt.c, "girth budget")->required();
        e2e->callback([&] {
            run = [&]() -> int {
                char* text = nullptr;
                int verdict = 0;
                if (auto st = of_suite_end2end(opt.k, opt.n, opt.d, opt.c, opt.seed, &text,
                                               &verdict))
                    return fail(st);
                const int rc = emit(text, opt.report);
                return rc ? rc : (verdict ? 0 : 1);
            };
        });

        auto* m0 = suite->add_subcommand("m0", "disjoint union of verified classes");
        m0->fallthrough();
        m0->add_option("--max-class", opt.max_class, "largest class index")->required();
        m0->callback([&] {
            run = [&]() -> int {
                char* text = nullptr;
                int all_ok = 0;
                if (auto st = of_suite_m0(opt.max_class, opt.seed, &text, &all_ok))
                    return fail(st);
                const int rc = emit(text, opt.report);
                return rc ? rc : (all_ok ? 0 : 1);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // usage problems map to exit code 2
    }
    return run ? run() : 2;
}
