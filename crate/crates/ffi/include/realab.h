#ifndef REALAB_H
#define REALAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RlStatus {
  RL_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  RL_STATUS_NULL_ARGUMENT = 1,
  /*
   Input text is not UTF-8.
   */
  RL_STATUS_UTF8 = 2,
  /*
   Syntax error or invalid lattice data.
   */
  RL_STATUS_PARSE = 3,
  /*
   Input text holds no lattice, or more than one.
   */
  RL_STATUS_DOCUMENT_COUNT = 4,
  /*
   The operation does not apply to this input (wrong genus, field mismatch, missing form).
   */
  RL_STATUS_INVALID = 5,
  /*
   Computation failed unexpectedly.
   */
  RL_STATUS_INTERNAL = 6,
} RlStatus;

typedef enum RlVerdict {
  RL_VERDICT_YES = 0,
  RL_VERDICT_NO = 1,
  RL_VERDICT_UNKNOWN = 2,
} RlVerdict;

/*
 Opaque lattice handle.
 */
typedef struct RlLattice RlLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parse exactly one `lattice` or `descended` block. Descended blocks are
 split into real form.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RlStatus rl_lattice_parse(const char *text, struct RlLattice **out);

/*
 # Safety
 `lattice` must come from this library and not be freed twice. Null is ignored.
 */
void rl_lattice_free(struct RlLattice *lattice);

/*
 # Safety
 `s` must come from this library and not be freed twice. Null is ignored.
 */
void rl_string_free(char *s);

/*
 Message for the most recent failure on this thread, or null. Valid until
 the next library call on this thread.
 */
const char *rl_last_error(void);

/*
 # Safety
 `lattice` must be a live handle; returns 0 for null.
 */
uintptr_t rl_lattice_genus(const struct RlLattice *lattice);

/*
 Text form of the lattice, including any attached forms.

 # Safety
 `lattice` must be a live handle and `out` a valid pointer.
 */
enum RlStatus rl_lattice_emit(const struct RlLattice *lattice, char **out);

/*
 Rank over 𝔽₂ of the component group of the real points.

 # Safety
 `lattice` must be a live handle and `f2_rank` a valid pointer.
 */
enum RlStatus rl_components(const struct RlLattice *lattice, uintptr_t *f2_rank);

/*
 # Safety
 `lattice` must be a live handle and `out` a valid pointer.
 */
enum RlStatus rl_lattice_dual(const struct RlLattice *lattice, struct RlLattice **out);

/*
 Check the `S =` form attached to the lattice. `valid` is set to 1 when it
 is a polarization and 0 otherwise.

 # Safety
 `lattice` must be a live handle and `valid` a valid pointer.
 */
enum RlStatus rl_polarize_verify(const struct RlLattice *lattice, int32_t *valid);

/*
 Search for a polarization. On `Yes` the witness is the S matrix, on `No`
 the certificate Q, on `Unknown` null. `witness` may be null if the caller
 only wants the verdict.

 # Safety
 `lattice` must be a live handle; `verdict` must be valid; `witness` null or valid.
 */
enum RlStatus rl_polarize_find(const struct RlLattice *lattice,
                               uintptr_t iterations,
                               uintptr_t restarts,
                               uint64_t seed,
                               enum RlVerdict *verdict,
                               char **witness);

/*
 Decide whether two lattices are imaginary isogenous. `detail` receives the
 witness matrix U on `Yes` and a short certificate description otherwise.

 # Safety
 `a`, `b` must be live handles; `verdict` valid; `detail` null or valid.
 */
enum RlStatus rl_isogeny_decide(const struct RlLattice *a,
                                const struct RlLattice *b,
                                uint64_t budget,
                                enum RlVerdict *verdict,
                                char **detail);

/*
 Normal form of a one-dimensional lattice, e.g. `rectangular alpha = 2`.

 # Safety
 `lattice` must be a live handle and `out` a valid pointer.
 */
enum RlStatus rl_normal_form_1d(const struct RlLattice *lattice, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REALAB_H */
