#ifndef PERIODIKA_H
#define PERIODIKA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum PkStatus {
  PK_STATUS_OK = 0,
  PK_STATUS_NULL_POINTER = 1,
  PK_STATUS_INVALID_UTF8 = 2,
  PK_STATUS_PARSE = 3,
  PK_STATUS_RESOURCE_CAP = 4,
  PK_STATUS_NOT_SURJECTIVE = 5,
  PK_STATUS_INVALID_ARGUMENT = 6,
  PK_STATUS_PANIC = 7,
} PkStatus;

// Opaque rule handle.
typedef struct PkRule PkRule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. Valid until the next
// call on the same thread; never null.
const char *pk_last_error(void);

// Parses a rule literal such as `additive:m=4;r=1;c=2,1,2` or
// `wolfram:90`. On success `*out` owns a handle for [`pk_rule_free`].
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum PkStatus pk_rule_parse(const char *spec, struct PkRule **out);

// # Safety
// `rule` must come from [`pk_rule_parse`] and not be freed twice.
void pk_rule_free(struct PkRule *rule);

// Alphabet size of the rule, or 0 for a null handle.
//
// # Safety
// `rule` must be null or a live handle.
uintptr_t pk_rule_alphabet(const struct PkRule *rule);

// Classification report as JSON. Additive rules get the full
// algebraic report; table rules the oracle report at `budget`.
//
// # Safety
// `rule` must be a live handle; `out` must be writable.
enum PkStatus pk_classify_json(const struct PkRule *rule, uint32_t budget, char **out);

// Space-time diagram on the inclusive window `[lo, hi]`, one row per line.
//
// # Safety
// `rule` must be a live handle, `config` a NUL-terminated literal and
// `out` writable.
enum PkStatus pk_simulate_ascii(const struct PkRule *rule,
                                const char *config,
                                uintptr_t steps,
                                int64_t lo,
                                int64_t hi,
                                char **out);

// Scan for strictly temporally periodic points, reported as JSON.
//
// # Safety
// `rule` must be a live handle; `out` must be writable.
enum PkStatus pk_scan_json(const struct PkRule *rule,
                           uintptr_t tail_period_max,
                           uintptr_t mid_len_max,
                           uintptr_t t_max,
                           char **out);

// Strictly temporally periodic witness at default search bounds, as
// JSON (`null` when none is found).
//
// # Safety
// `rule` must be a live handle; `out` must be writable.
enum PkStatus pk_witness_json(const struct PkRule *rule, char **out);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void pk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERIODIKA_H */
