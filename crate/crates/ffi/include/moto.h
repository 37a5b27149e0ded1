#ifndef MOTO_H
#define MOTO_H

/* Generated from the moto-ffi crate by cbindgen; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// The last call on this thread succeeded.
#define MOTO_OK 0

// An argument was outside its documented domain.
#define MOTO_ERR_INVALID_ARGUMENT 1

// Input data was missing, unreadable, or failed validation.
#define MOTO_ERR_DATA 2

// An internal invariant was violated; always a bug.
#define MOTO_ERR_INTERNAL 3

// A required pointer was `NULL` or a string was not valid UTF-8.
#define MOTO_ERR_POINTER 4

// Opaque handle to a loaded collaboration graph.
typedef struct MotoGraph MotoGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Classification of the most recent library call on this thread: `MOTO_OK`
// or one of the `MOTO_ERR_*` constants.
int moto_last_error_code(void);

// Message for the most recent failure on this thread, or `NULL` if the
// last call succeeded. Owned by the library; do not free.
const char *moto_last_error(void);

// Load a graph snapshot (`nodes.tsv` + `edges.tsv`) from a directory.
// Returns `NULL` on failure.
//
// # Safety
// `dir` must be a NUL-terminated string valid for reads.
struct MotoGraph *moto_graph_load(const char *dir);

// Release a graph handle. `NULL` is ignored.
//
// # Safety
// `graph` must be `NULL` or a handle from [`moto_graph_load`] that has not
// been freed already.
void moto_graph_free(struct MotoGraph *graph);

// Number of scholars in the graph, or -1 on failure.
//
// # Safety
// `graph` must be `NULL` or a live handle from [`moto_graph_load`].
int64_t moto_graph_node_count(const struct MotoGraph *graph);

// Number of collaboration edges in the graph, or -1 on failure.
//
// # Safety
// `graph` must be `NULL` or a live handle from [`moto_graph_load`].
int64_t moto_graph_edge_count(const struct MotoGraph *graph);

// Headline statistics of the graph (node, edge, and triangle counts,
// degree and clustering summaries) as a JSON document.
//
// # Safety
// `graph` must be `NULL` or a live handle from [`moto_graph_load`].
char *moto_graph_profile_json(const struct MotoGraph *graph);

// Run density-peak team recognition and return the team list as JSON, in
// the same schema the command-line tool writes to `teams.json`.
//
// # Safety
// `graph` must be a live handle from [`moto_graph_load`]; `config` must be
// `NULL` or a NUL-terminated string valid for reads.
char *moto_recognize_json(const struct MotoGraph *graph, const char *config);

// Run the threshold-based baseline recognizer and return its team list as
// JSON, in the same schema as [`moto_recognize_json`].
//
// # Safety
// Same contract as [`moto_recognize_json`].
char *moto_trac_json(const struct MotoGraph *graph, const char *config);

// Score a team list against the graph. `teams_json` takes the JSON schema
// produced by [`moto_recognize_json`] or [`moto_trac_json`]; the result is
// a JSON object with per-team `metrics` and an aggregate `summary`.
//
// # Safety
// `graph` must be a live handle from [`moto_graph_load`]; `teams_json` must
// be a NUL-terminated string valid for reads; `config` must be `NULL` or
// such a string.
char *moto_evaluate_json(const struct MotoGraph *graph, const char *teams_json, const char *config);

// Test whether the triangle count of the graph is significant against a
// degree-preserving rewired ensemble; returns the parameters and verdict
// as JSON.
//
// # Safety
// Same contract as [`moto_recognize_json`].
char *moto_motif_test_json(const struct MotoGraph *graph, const char *config);

// Release a string returned by this library. `NULL` is ignored.
//
// # Safety
// `text` must be `NULL` or a string returned by this library that has not
// been freed already.
void moto_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOTO_H */
