#ifndef TWOSTRING_H
#define TWOSTRING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_ARGUMENT = 2,
  TS_STATUS_PARSE = 3,
  TS_STATUS_SHAPE = 4,
  TS_STATUS_NON_UNITARY = 5,
  TS_STATUS_NOT_COMPRESSED = 6,
  TS_STATUS_IO = 7,
  TS_STATUS_PANIC = 8,
} TsStatus;

typedef enum TsBackend {
  TS_BACKEND_DENSE = 0,
  TS_BACKEND_SYMBOLIC = 1,
} TsBackend;

typedef enum TsAxis {
  TS_AXIS_X = 0,
  TS_AXIS_Y = 1,
  TS_AXIS_Z = 2,
} TsAxis;

typedef enum TsVerdict {
  TS_VERDICT_COMPRESSED = 0,
  TS_VERDICT_NOT_COMPRESSED = 1,
  TS_VERDICT_INDETERMINATE = 2,
} TsVerdict;

// Opaque diagram handle.
typedef struct TsDiagram TsDiagram;

// Opaque matrix handle.
typedef struct TsOperator TsOperator;

// Summary of a batch of protocol runs.
typedef struct TsMctSummary {
  bool pass;
  size_t runs;
  size_t branches;
  double max_dev;
  size_t resource_states;
  size_t resource_qudits;
  size_t cdits;
} TsMctSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *ts_last_error(void);

// Static description of a status code.
const char *ts_status_str(enum TsStatus status);

// Frees a string returned by this library.
//
// # Safety
// `s` must come from a `ts_*` function returning an owned string, or be NULL.
void ts_string_free(char *s);

// Parses a diagram JSON document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum TsStatus ts_diagram_parse(const char *json, struct TsDiagram **out);

// Builds a named diagram such as `"X"`, `"bell"` or `"max(3)"`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum TsStatus ts_diagram_builtin(const char *name, size_t d, struct TsDiagram **out);

// # Safety
// `diag` must come from this library or be NULL; it must not be used again.
void ts_diagram_free(struct TsDiagram *diag);

// Evaluates a diagram to its matrix.
//
// # Safety
// `diag` must be a live handle and `out` a valid pointer.
enum TsStatus ts_diagram_evaluate(const struct TsDiagram *diag,
                                  enum TsBackend backend,
                                  struct TsOperator **out);

// Parses a matrix JSON document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum TsStatus ts_operator_from_json(const char *json, struct TsOperator **out);

// Serializes a matrix to JSON; free the result with [`ts_string_free`].
//
// # Safety
// `op` must be a live handle and `out` a valid pointer.
enum TsStatus ts_operator_to_json(const struct TsOperator *op, char **out);

// # Safety
// `op` must come from this library or be NULL; it must not be used again.
void ts_operator_free(struct TsOperator *op);

// Local dimension and output/input qudit counts.
//
// # Safety
// `op` must be a live handle; the out pointers must be valid.
enum TsStatus ts_operator_shape(const struct TsOperator *op,
                                size_t *d,
                                size_t *n_out,
                                size_t *n_in);

// Copies the row-major entries into `re` and `im`, each of length `len`,
// which must equal rows·cols.
//
// # Safety
// `re` and `im` must each point to `len` writable doubles.
enum TsStatus ts_operator_entries(const struct TsOperator *op, double *re, double *im, size_t len);

// Commutator test of `op` against a Pauli on qudit `j` (1-based) with the
// relative pass threshold `tol`.
//
// # Safety
// `op` must be a live handle; the out pointers must be valid.
enum TsStatus ts_compression_check(const struct TsOperator *op,
                                   size_t j,
                                   enum TsAxis axis,
                                   double tol,
                                   enum TsVerdict *verdict,
                                   double *norm);

// Checks one planar relation by id in dimension `d`.
//
// # Safety
// `id` must be a NUL-terminated string; the out pointers must be valid.
enum TsStatus ts_relation_check(const char *id, size_t d, double tol, bool *pass, double *max_dev);

// Runs the controlled protocol on `trials` seeded random instances with
// every measurement branch enumerated.
//
// # Safety
// `out` must be a valid pointer.
enum TsStatus ts_mct_random(size_t d,
                            size_t n,
                            size_t trials,
                            uint64_t seed,
                            struct TsMctSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOSTRING_H */
