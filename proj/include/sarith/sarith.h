/* C interface to the sarith library. Every call returns SARITH_OK or an error code;
   sarith_last_error() holds the message of the most recent failure on this thread. */
#ifndef SARITH_SARITH_H
#define SARITH_SARITH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  SARITH_OK = 0,
  SARITH_E_INVALID_ARGUMENT = 1,
  SARITH_E_ZERO_COMPONENT,
  SARITH_E_INVALID_EXPONENT,
  SARITH_E_NOT_IN_DOMAIN,
  SARITH_E_NOT_IN_I1,
  SARITH_E_ZERO_VECTOR,
  SARITH_E_NOT_PRIMITIVE,
  SARITH_E_WRONG_DIMENSION,
  SARITH_E_DEPENDENT_PAIR,
  SARITH_E_ZERO_DETERMINANT,
  SARITH_E_BAD_MODULUS,
  SARITH_E_BAD_RESIDUE,
  SARITH_E_MALFORMED_REGION,
  SARITH_E_UNBOUNDED_REGION,
  SARITH_E_PRECISION_EXCEEDED,
  SARITH_E_UNSUPPORTED_SHAPE,
  SARITH_E_FACTORIAL_NOT_INVERTIBLE,
  SARITH_E_DIVERGENCE_CHECK_FAILED,
  SARITH_E_CONFIG,
  SARITH_E_NULL_POINTER = 100,
  SARITH_E_BUFFER_TOO_SMALL = 101,
  SARITH_E_INTERNAL = 102
};

typedef struct sarith_context sarith_context;
typedef struct sarith_region sarith_region;
typedef struct sarith_lattice sarith_lattice;
typedef struct sarith_report sarith_report;

const char* sarith_last_error(void);
const char* sarith_error_name(int code);

/* Prime set S (sorted or not, no duplicates); n = 0 gives S = {inf}. */
int sarith_context_new(const uint64_t* primes, size_t n, int precision, sarith_context** out);
void sarith_context_free(sarith_context* ctx);
int sarith_context_l_s(const sarith_context* ctx, uint64_t* out);
int sarith_zeta_s(const sarith_context* ctx, int d, double* out);
/* Phi_S at the diagonal image of num/den. */
int sarith_phi_s_rational(const sarith_context* ctx, int64_t num, int64_t den, double tol, double* out);
int sarith_totient_sum(const sarith_context* ctx, double N, uint64_t m0, int64_t* exact_sum, double* main_term,
                       double* error);
/* v = num[i] / den[i]; *out = 1 when v is primitive in Z_S^d. */
int sarith_is_primitive(const sarith_context* ctx, const int64_t* num, const int64_t* den, size_t d, int* out);

int sarith_region_from_json(const char* json, sarith_region** out);
int sarith_region_to_json(const sarith_region* r, char* buf, size_t cap, size_t* needed);
int sarith_region_volume(const sarith_context* ctx, const sarith_region* r, double* out);
void sarith_region_free(sarith_region* r);

int sarith_lattice_identity(const sarith_context* ctx, int d, sarith_lattice** out);
int sarith_lattice_from_json(const char* json, sarith_lattice** out);
int sarith_lattice_to_json(const sarith_lattice* L, char* buf, size_t cap, size_t* needed);
/* Haar-random unimodular S-lattice in dimension 2, a pure function of (seed, stream). */
int sarith_lattice_sample2(const sarith_context* ctx, uint64_t seed, uint64_t stream, sarith_lattice** out);
int sarith_primitive_count(const sarith_lattice* L, const sarith_region* r, uint64_t* out);
int sarith_all_count(const sarith_lattice* L, const sarith_region* r, uint64_t* out);
int sarith_alpha1(const sarith_lattice* L, uint64_t denominator_bound, double* value, int* certified);
void sarith_lattice_free(sarith_lattice* L);

size_t sarith_experiment_count(void);
const char* sarith_experiment_name(size_t i);
int sarith_run_experiment(const char* name, const char* toml, uint64_t seed, int threads, sarith_report** out);
int sarith_report_pass(const sarith_report* r, int* out);
int sarith_report_csv(const sarith_report* r, char* buf, size_t cap, size_t* needed);
int sarith_report_summary(const sarith_report* r, char* buf, size_t cap, size_t* needed);
void sarith_report_free(sarith_report* r);

#ifdef __cplusplus
}
#endif

#endif
