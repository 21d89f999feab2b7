/* C ABI for the zimin library: Zimin-word containment, pattern
 * classification, and Zimin-avoiding word constructions. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum ZwStatus {
  ZW_OK = 0,
  ZW_ERR_NULL = 1,
  ZW_ERR_INVALID = 2,
  ZW_ERR_LIMIT = 3,
  ZW_ERR_PARSE = 4,
  ZW_ERR_VERIFY = 5,
  ZW_ERR_BUFFER = 6,
  ZW_ERR_PANIC = 7,
} ZwStatus;

/**
 * Three-valued answers: no, yes, or undecided within the node budget.
 */
typedef enum ZwTri {
  ZW_NO = 0,
  ZW_YES = 1,
  ZW_UNDECIDED = 2,
} ZwTri;

/**
 * A pattern over variables (opaque).
 */
typedef struct ZwPattern ZwPattern;

/**
 * An immutable word over an explicit alphabet (opaque).
 */
typedef struct ZwWord ZwWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *zw_last_error(void);

/**
 * The Zimin word of level `n` (1 through 30).
 */
enum ZwStatus zw_zimin(uint32_t n, struct ZwWord **out);

/**
 * Parse a word from `a..z` or space-separated decimal ids, inferring the
 * alphabet from the content.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string.
 */
enum ZwStatus zw_word_parse(const char *text, struct ZwWord **out);

void zw_word_free(struct ZwWord *w);

/**
 * Number of symbols in the word; 0 for null.
 */
uintptr_t zw_word_len(const struct ZwWord *w);

/**
 * Alphabet size of the word; 0 for null.
 */
uint32_t zw_word_alphabet_size(const struct ZwWord *w);

/**
 * Render the word into `buf` (NUL-terminated). `*written` receives the
 * required size including the terminator; when `cap` is too small the
 * status is `ZW_ERR_BUFFER` and nothing is written.
 */
enum ZwStatus zw_word_render(const struct ZwWord *w, char *buf, uintptr_t cap, uintptr_t *written);

/**
 * Does the word contain an image of the level-`n` Zimin word?
 */
enum ZwStatus zw_contains_zimin(const struct ZwWord *w, uint32_t n, bool *out);

/**
 * Least prefix end (inclusive) whose prefix contains the level-`n` Zimin
 * word, or -1 when the word is free of it.
 */
enum ZwStatus zw_scan_free(const struct ZwWord *w, uint32_t n, int64_t *out_end);

/**
 * Parse a pattern, relabeling variables canonically.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string.
 */
enum ZwStatus zw_pattern_parse(const char *text, struct ZwPattern **out);

void zw_pattern_free(struct ZwPattern *p);

/**
 * Number of distinct variables in the pattern; 0 for null.
 */
uint32_t zw_pattern_var_count(const struct ZwPattern *p);

/**
 * Pattern containment with a node budget (0 means the default).
 */
enum ZwStatus zw_contains_pattern(const struct ZwWord *w,
                                  const struct ZwPattern *p,
                                  uint64_t budget,
                                  enum ZwTri *out);

/**
 * Unavoidability of a pattern with at most 12 distinct variables.
 */
enum ZwStatus zw_is_unavoidable(const struct ZwPattern *p, uint64_t budget, enum ZwTri *out);

/**
 * The property-P Eulerian construction (length `2*q! + q - 1`).
 */
enum ZwStatus zw_construct_euler(uint32_t q, struct ZwWord **out);

/**
 * The doubled-symbol Eulerian construction (length `3*2^(q-2)*q! + 2q-4`).
 */
enum ZwStatus zw_construct_euler_improved(uint32_t q, struct ZwWord **out);

/**
 * The periodic-permutation construction over `t` parts of size `s`.
 */
enum ZwStatus zw_construct_crt(uint32_t t, uint32_t s, struct ZwWord **out);

/**
 * The random interval model with default part layout.
 */
enum ZwStatus zw_construct_interval(uint32_t q,
                                    uintptr_t num_intervals,
                                    uint64_t seed,
                                    bool distinguished,
                                    struct ZwWord **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
