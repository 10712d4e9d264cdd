#ifndef ORDERFORGE_CAPI_H
#define ORDERFORGE_CAPI_H

/* C interface to the order-forge toolkit. All objects are opaque handles
 * owned by the library; every function reports an of_status and leaves a
 * human-readable message in of_last_error() on failure. Returned strings
 * and handles must be released with the matching of_*_free call. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum of_status {
    OF_OK = 0,
    OF_VERIFY_FAILED = 1,
    OF_USAGE_ERROR = 2,
    OF_CONSTRUCTION_ERROR = 3,
    OF_IO_ERROR = 4,
    OF_INTERNAL_ERROR = 5
} of_status;

typedef struct of_biorder of_biorder;
typedef struct of_carrier of_carrier;
typedef struct of_graph of_graph;
typedef struct of_ordering of_ordering;

/* Thread-local message for the most recent failure in this thread. */
const char* of_last_error(void);

void of_biorder_free(of_biorder* b);
void of_carrier_free(of_carrier* c);
void of_graph_free(of_graph* g);
void of_ordering_free(of_ordering* o);
void of_string_free(char* s);

/* ---- bi-orders -------------------------------------------------------- */
of_status of_biorder_create(const uint32_t* order2, uint32_t size, of_biorder** out);
of_status of_biorder_read(const char* path, of_biorder** out);
of_status of_biorder_write(const of_biorder* b, const char* path);
uint32_t of_biorder_size(const of_biorder* b);
of_status of_biorder_order2(const of_biorder* b, uint32_t* buffer, uint32_t buffer_len);

/* ---- arithmetic carriers ---------------------------------------------- */
of_status of_arith_encode(uint32_t k, of_carrier** out);
of_status of_carrier_read(const char* path, of_carrier** out);
of_status of_carrier_write(const of_carrier* c, const char* path);
uint32_t of_carrier_k(const of_carrier* c);
of_status of_carrier_params(const of_carrier* c, uint32_t params_out[3]);
of_status of_carrier_biorder(const of_carrier* c, of_biorder** out);

/* Decode with the fixed formula pair; report lists the domain size and
 * both recovered tables. */
of_status of_arith_decode(const of_biorder* b, const uint32_t params[3], char** report_out);

/* verified_out: 1 when the decoded tables equal truncated (+, x) for k. */
of_status of_arith_verify(uint32_t k, char** report_out, int* verified_out);

/* ---- colored regular graphs ------------------------------------------- */
of_status of_param_d(uint64_t n, uint32_t c, double alpha, uint32_t* d_out);
of_status of_graph_generate(uint32_t n, uint32_t d, uint64_t seed, of_graph** out);
of_status of_graph_read(const char* path, of_graph** out);
of_status of_graph_write(const of_graph* g, const char* path);
uint32_t of_graph_vertex_count(const of_graph* g);
uint32_t of_graph_color_count(const of_graph* g);
uint32_t of_graph_neighbor(const of_graph* g, uint32_t vertex, uint32_t color);

/* Surgery to girth > c; changelog_out (optional) receives a report. */
of_status of_graph_surgery(const of_graph* g, uint32_t c, uint64_t seed, of_graph** out,
                           char** changelog_out);

/* Cycle counts by length up to c, girth flag, matching validity. */
of_status of_graph_stats(const of_graph* g, uint32_t c, char** report_out);

/* ---- order probes ------------------------------------------------------ */
of_status of_ordering_read(const char* path, of_ordering** out);
of_status of_ordering_write(const of_ordering* o, const char* path);
of_status of_ordering_random(uint32_t n, uint64_t seed, of_ordering** out);

of_status of_probe_scan(const of_graph* g, const of_ordering* o, const of_biorder* target,
                        char** report_out, uint64_t* witness_count_out);
of_status of_probe_plant(const of_graph* g, const of_biorder* target, uint64_t seed,
                         of_ordering** out);
of_status of_probe_montecarlo(const of_graph* g, const of_biorder* target, uint32_t trials,
                              uint64_t seed, char** report_out);

of_status of_suite_end2end(uint32_t k, uint32_t n, uint32_t d, uint32_t c, uint64_t seed,
                           char** report_out, int* verdict_out);
of_status of_suite_m0(uint32_t max_class, uint64_t seed, char** report_out, int* all_ok_out);

/* ---- F_p shattering ----------------------------------------------------- */
/* order_kind: 0 lex, 1 random, 2 explicit file (order_path), 3 random
 * tournament (p = 2 only). verified_out: 1 when a monochromatic subspace
 * was found and the witness check passed. */
of_status of_shatter_run(uint32_t p, uint32_t n, uint32_t k, int order_kind, uint64_t seed,
                         const char* order_path, char** report_out, int* found_out,
                         int* verified_out);

/* ---- generic order ------------------------------------------------------ */
of_status of_generic_order_run(const char* constraints_path, uint64_t seed,
                               const char* out_path, char** report_out);

/* ---- binomial tail bounds ----------------------------------------------- */
of_status of_hoeffding_bound(uint64_t n, double p, double x, double* bound_out);
of_status of_binom_tail_check(uint32_t n, double p, const uint32_t* xs, uint32_t xs_len,
                              uint64_t samples, uint64_t seed, char** report_out,
                              int* any_flagged_out);

#ifdef __cplusplus
}
#endif

#endif
