#ifndef BILLIARD_H
#define BILLIARD_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BilliardArc {
  BILLIARD_ARC_BOTTOM = 0,
  BILLIARD_ARC_TOP = 1,
  BILLIARD_ARC_LEFT = 2,
  BILLIARD_ARC_RIGHT = 3,
  BILLIARD_ARC_FLAT = 4,
} BilliardArc;

typedef enum BilliardStatus {
  BILLIARD_STATUS_OK = 0,
  BILLIARD_STATUS_NULL_POINTER = 1,
  BILLIARD_STATUS_INVALID_ARGUMENT = 2,
  BILLIARD_STATUS_INVALID_CONFIG = 3,
  BILLIARD_STATUS_GEOMETRY = 4,
  BILLIARD_STATUS_INADMISSIBLE = 5,
  BILLIARD_STATUS_TARGET_UNREACHABLE = 6,
  BILLIARD_STATUS_BISECTION_STALL = 7,
  BILLIARD_STATUS_BUFFER_TOO_SMALL = 8,
  BILLIARD_STATUS_PANIC = 9,
} BilliardStatus;

/**
 * Opaque billiard table.
 */
typedef struct BilliardTable BilliardTable;

/**
 * Collision state: arc, position along it, reflection angle.
 */
typedef struct BilliardPhasePoint {
  enum BilliardArc arc;
  double r;
  double phi;
} BilliardPhasePoint;

/**
 * Entropy lower bound. `root` is 0 and `n` may be negative when nothing is certified.
 */
typedef struct BilliardCertificate {
  double bound_nats;
  double bound_bits;
  double root;
  double ell;
  double eps;
  int64_t n;
  bool certified;
  bool semistadium;
  bool rigorous_geometry;
} BilliardCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *billiard_last_error(void);

/**
 * Classical stadium with rectangle `length` by `width`.
 */
enum BilliardStatus billiard_table_stadium(double length, double width, struct BilliardTable **out);

/**
 * Mushroom with stalk length `stalk` (unit width) and cap radius `radius`.
 */
enum BilliardStatus billiard_table_mushroom(double stalk,
                                            double radius,
                                            struct BilliardTable **out);

/**
 * Table from the text of a TOML run configuration; its `eps`, when given, replaces
 * the table's own.
 *
 * # Safety
 * `config` must be a NUL-terminated string or null.
 */
enum BilliardStatus billiard_table_from_config(const char *config, struct BilliardTable **out);

/**
 * Releases a table; null is ignored.
 *
 * # Safety
 * `table` must come from a constructor above and not be used afterwards.
 */
void billiard_table_free(struct BilliardTable *table);

/**
 * Horizontal cap distance `ell` and the table's `eps`.
 */
enum BilliardStatus billiard_table_parameters(const struct BilliardTable *table,
                                              double *ell,
                                              double *eps);

/**
 * One step of the billiard map.
 *
 * # Safety
 * `input` must be null or point to a valid phase point.
 */
enum BilliardStatus billiard_next_collision(const struct BilliardTable *table,
                                            const struct BilliardPhasePoint *input,
                                            struct BilliardPhasePoint *output);

/**
 * Best available entropy bound for the table.
 */
enum BilliardStatus billiard_certify(const struct BilliardTable *table,
                                     struct BilliardCertificate *out);

/**
 * Generic bound from the cap distance `ell` and free-arc angle `eps`.
 */
enum BilliardStatus billiard_entropy_lower_bound(double ell,
                                                 double eps,
                                                 bool semistadium,
                                                 struct BilliardCertificate *out);

/**
 * Largest root of `x^2 - 2x - 1 = -2 x^-n`.
 */
enum BilliardStatus billiard_largest_root(uint32_t n, double *out);

/**
 * Number of admissible words of length `n` over `-bound..=bound`, as a decimal string.
 *
 * `*needed` receives the string length including the terminating NUL. With a null
 * or short buffer the call returns `BufferTooSmall` and writes nothing else.
 *
 * # Safety
 * `buffer` must be null or valid for `capacity` bytes.
 */
enum BilliardStatus billiard_count_words(uint32_t bound,
                                         size_t n,
                                         char *buffer,
                                         size_t capacity,
                                         size_t *needed);

/**
 * Natural logarithm of the word count, for callers that do not want strings.
 */
enum BilliardStatus billiard_count_words_log(uint32_t bound, size_t n, double *out);

/**
 * Orbit whose code contains the word `symbols[0..len]`, written to `orbit`.
 *
 * `eps <= 0` selects the table's own `eps`. `*written` receives the orbit length;
 * when it exceeds `capacity` the call returns `BufferTooSmall` and writes no points.
 *
 * # Safety
 * `symbols` must be valid for `len` reads and `orbit` for `capacity` writes.
 */
enum BilliardStatus billiard_realize(const struct BilliardTable *table,
                                     const int32_t *symbols,
                                     size_t len,
                                     double eps,
                                     struct BilliardPhasePoint *orbit,
                                     size_t capacity,
                                     size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BILLIARD_H */
