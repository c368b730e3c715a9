#ifndef MALLE_H
#define MALLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MalleStatus {
  MALLE_STATUS_OK = 0,
  MALLE_STATUS_NULL_POINTER = 1,
  MALLE_STATUS_INVALID_ARGUMENT = 2,
  MALLE_STATUS_PARSE = 3,
  MALLE_STATUS_VALIDATION = 4,
  MALLE_STATUS_IO = 5,
  MALLE_STATUS_INTERNAL = 6,
} MalleStatus;

// Opaque field dataset.
typedef struct MalleDataset MalleDataset;

// Opaque finite abelian group.
typedef struct MalleGroup MalleGroup;

typedef struct MalleInvariants {
  uint64_t a;
  int64_t exponent_num;
  int64_t exponent_den;
  uint64_t b;
  int64_t a_abelian_num;
  int64_t a_abelian_den;
  uint64_t b_abelian;
} MalleInvariants;

typedef struct MalleCensus {
  uint64_t count;
  uint64_t flagged_wild_pairs;
  uint64_t non_disjoint;
  double fit_constant;
  bool complete;
} MalleCensus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL after a
// successful call. Valid until the next call into this library.
const char *malle_last_error(void);

// Parses a group label such as `C6` or `C2xC4`.
//
// # Safety
// `label` must be a NUL-terminated string; `out` must be writable.
enum MalleStatus malle_group_parse(const char *label, struct MalleGroup **out);

// # Safety
// `g` must come from [`malle_group_parse`] and not be freed twice.
void malle_group_free(struct MalleGroup *g);

// Order of the group, or 0 for NULL.
//
// # Safety
// `g` must be NULL or a live group handle.
uint64_t malle_group_order(const struct MalleGroup *g);

// `ind(g, h)` in the product action, given the cycle lengths of `g` and `h`.
//
// # Safety
// `g` and `h` must point to `g_len` and `h_len` integers; `out` must be writable.
enum MalleStatus malle_pair_index(const uint32_t *g,
                                  size_t g_len,
                                  const uint32_t *h,
                                  size_t h_len,
                                  uint64_t *out);

// `Delta(g, h)` for `g` in `S_d` given by its cycle lengths and `h` given by
// its residues modulo the invariant factors of the group.
//
// # Safety
// Pointers must be valid for the given lengths; `out` must be writable.
enum MalleStatus malle_delta(size_t d,
                             const struct MalleGroup *a,
                             const uint32_t *g,
                             size_t g_len,
                             const uint64_t *h,
                             size_t h_len,
                             uint64_t *out);

// Malle's invariants of `S_d x A` and the abelian constants of `A`.
//
// # Safety
// `a` must be a live group handle; `out` must be writable.
enum MalleStatus malle_invariants(size_t d,
                                  const struct MalleGroup *a,
                                  struct MalleInvariants *out);

// `beta` under the preset exponents for `d` in {3, 4, 5}, as an exact
// fraction in lowest terms.
//
// # Safety
// `a` must be a live group handle; `num` and `den` must be writable.
enum MalleStatus malle_beta(size_t d,
                            const struct MalleGroup *a,
                            int64_t epsilon_num,
                            int64_t epsilon_den,
                            int64_t *num,
                            int64_t *den);

// The discriminant valuation table for `S_d x C_p` as TSV. Release the
// string with [`malle_string_free`].
//
// # Safety
// `a` must be a live group handle; `out` must be writable.
enum MalleStatus malle_delta_table_tsv(size_t d, const struct MalleGroup *a, char **out);

// # Safety
// `s` must come from this library and not be freed twice.
void malle_string_free(char *s);

// Reads a dataset file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum MalleStatus malle_dataset_load(const char *path, struct MalleDataset **out);

// Parses dataset text held in memory.
//
// # Safety
// `contents` must be a NUL-terminated string; `out` must be writable.
enum MalleStatus malle_dataset_parse(const char *contents, struct MalleDataset **out);

// # Safety
// `data` must come from this library and not be freed twice.
void malle_dataset_free(struct MalleDataset *data);

// Number of records, or 0 for NULL.
//
// # Safety
// `data` must be NULL or a live dataset handle.
size_t malle_dataset_len(const struct MalleDataset *data);

// Counts composita with `|Disc| < x`; with `y > 0` the truncated
// discriminant is used instead.
//
// # Safety
// Handles must be live; `out` must be writable.
enum MalleStatus malle_census_count(const struct MalleDataset *data,
                                    size_t d,
                                    const struct MalleGroup *a,
                                    uint64_t x,
                                    uint64_t y,
                                    struct MalleCensus *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MALLE_H */
