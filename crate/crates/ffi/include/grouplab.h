#ifndef GROUPLAB_H
#define GROUPLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GlStatus {
  GL_STATUS_OK = 0,
  GL_STATUS_NULL_POINTER = 1,
  GL_STATUS_INVALID_UTF8 = 2,
  GL_STATUS_PARSE = 3,
  GL_STATUS_OUT_OF_RANGE = 4,
  GL_STATUS_CAP_EXCEEDED = 5,
  GL_STATUS_INTERNAL = 6,
} GlStatus;

/**
 * Opaque handle to a finite group.
 */
typedef struct GlGroup GlGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gl_version(void);

/**
 * Message for the last failed call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *gl_last_error_message(void);

/**
 * Parses and builds a group from a presentation such as `"Z7 x| Z3 [2]"`.
 * `cap` bounds the group order; 0 means the default.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GlStatus gl_group_parse(const char *spec, size_t cap, struct GlGroup **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from [`gl_group_parse`] and not be freed twice.
 */
void gl_group_free(struct GlGroup *g);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GlStatus gl_group_order(const struct GlGroup *g, size_t *out);

/**
 * Product `a * b` of element indices; index 0 is the identity.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GlStatus gl_group_multiply(const struct GlGroup *g, uint32_t a, uint32_t b, uint32_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GlStatus gl_group_element_order(const struct GlGroup *g, uint32_t x, size_t *out);

/**
 * Taxonomy label such as `"Dihedral(6)"` or `"Other"`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer. Free the result with
 * [`gl_string_free`].
 */
enum GlStatus gl_group_classify(const struct GlGroup *g, char **out);

/**
 * Obstruction scan as a JSON array of `{descriptor, witness}` objects,
 * witnesses given as element labels.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer. Free the result with
 * [`gl_string_free`].
 */
enum GlStatus gl_group_scan_json(const struct GlGroup *g, bool exhaustive, char **out);

/**
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum GlStatus gl_group_is_isomorphic(const struct GlGroup *a, const struct GlGroup *b, bool *out);

/**
 * Size of the automorphism group; groups above order 120 are refused.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GlStatus gl_group_automorphism_count(const struct GlGroup *g, size_t *out);

/**
 * Runs a sweep at its default bounds and returns the JSON report. `sweep`
 * is one of `theorem3`, `theorem4`, `theorem5-6`, `nonsolvable`,
 * `corollary3`.
 *
 * # Safety
 * `sweep` must be a NUL-terminated string and `out` a valid pointer. Free
 * the result with [`gl_string_free`].
 */
enum GlStatus gl_verify_json(const char *sweep, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void gl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROUPLAB_H */
