#ifndef UPAG_H
#define UPAG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UpagStatus {
  UPAG_STATUS_OK = 0,
  UPAG_STATUS_NULL_POINTER = 1,
  UPAG_STATUS_INVALID_ARGUMENT = 2,
  UPAG_STATUS_OUT_OF_RANGE = 3,
  UPAG_STATUS_NOT_PEELABLE = 4,
  UPAG_STATUS_MALFORMED_GRAPH = 5,
  UPAG_STATUS_BAD_MAGIC = 6,
  UPAG_STATUS_VERSION_MISMATCH = 7,
  UPAG_STATUS_TRUNCATED = 8,
  UPAG_STATUS_CHECKSUM_MISMATCH = 9,
  UPAG_STATUS_CORRUPT = 10,
  UPAG_STATUS_IO = 11,
  UPAG_STATUS_BUFFER_TOO_SMALL = 12,
  UPAG_STATUS_PANIC = 13,
} UpagStatus;

/**
 * Opaque handle to an immutable compressed graph.
 */
typedef struct UpagGraph UpagGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds from an adjacency string: `len = n * m` targets, the `m`
 * out-neighbours of vertex 1, then of vertex 2, and so on; every target of
 * vertex `t` must be smaller than `t`. In the unlabelled layout vertices are
 * renamed; see [`upag_relabel`].
 */
enum UpagStatus upag_build(size_t m,
                           const size_t *targets,
                           size_t len,
                           bool labelled,
                           struct UpagGraph **out);

/**
 * Samples a PA(m; n) graph with the given seed and builds it.
 */
enum UpagStatus upag_generate(size_t m,
                              size_t n,
                              uint64_t seed,
                              bool labelled,
                              struct UpagGraph **out);

/**
 * Reads a graph from a `.upag` byte buffer.
 */
enum UpagStatus upag_from_bytes(const uint8_t *data, size_t len, struct UpagGraph **out);

/**
 * Serialises into `buf`. `*written` receives the encoded size; when `cap` is
 * too small nothing is copied and `UPAG_STATUS_BUFFER_TOO_SMALL` is
 * returned, so a call with `cap = 0` queries the size.
 */
enum UpagStatus upag_to_bytes(const struct UpagGraph *g, uint8_t *buf, size_t cap, size_t *written);

enum UpagStatus upag_load(const char *path, struct UpagGraph **out);

enum UpagStatus upag_save(const struct UpagGraph *g, const char *path);

/**
 * Releases a handle. Null is ignored.
 */
void upag_free(struct UpagGraph *g);

/**
 * Writes `M` and `n`; vertices are `0..=n`.
 */
enum UpagStatus upag_shape(const struct UpagGraph *g, size_t *m, size_t *n);

enum UpagStatus upag_is_labelled(const struct UpagGraph *g, bool *out);

/**
 * The `i`-th out-neighbour of `v`, `1 <= i <= M`.
 */
enum UpagStatus upag_out_neighbour(const struct UpagGraph *g, size_t v, size_t i, size_t *out);

/**
 * The `i`-th in-neighbour of `v`, `1 <= i <= degree_in(v)`.
 */
enum UpagStatus upag_in_neighbour(const struct UpagGraph *g, size_t v, size_t i, size_t *out);

enum UpagStatus upag_degree(const struct UpagGraph *g,
                            size_t v,
                            size_t *in_degree,
                            size_t *out_degree);

enum UpagStatus upag_adjacent(const struct UpagGraph *g, size_t u, size_t v, bool *out);

/**
 * Copies the input-to-stored label map (`n + 1` entries) into `buf`. Fails
 * with `UPAG_STATUS_INVALID_ARGUMENT` when the handle carries no map (graphs
 * read from bytes); `*written` receives the required length either way.
 */
enum UpagStatus upag_relabel(const struct UpagGraph *g, size_t *buf, size_t cap, size_t *written);

/**
 * Total bits of the structure (payload, directories and metadata).
 */
enum UpagStatus upag_total_bits(const struct UpagGraph *g, uint64_t *out);

/**
 * Copies the calling thread's last error message, NUL-terminated and
 * truncated to `cap` bytes. Returns the full message length in bytes.
 */
size_t upag_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *upag_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UPAG_H */
