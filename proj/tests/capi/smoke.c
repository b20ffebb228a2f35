/* C consumer of the shared library. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "sarith/sarith.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  sarith_context* ctx = NULL;
  uint64_t primes[] = {2};
  EXPECT(sarith_context_new(primes, 1, 24, &ctx) == SARITH_OK);

  uint64_t L = 0;
  EXPECT(sarith_context_l_s(ctx, &L) == SARITH_OK && L == 8);
  double z = 0;
  EXPECT(sarith_zeta_s(ctx, 2, &z) == SARITH_OK && fabs(z - 1.2337005501361698) < 1e-10);

  uint64_t dup[] = {2, 2};
  sarith_context* bad = NULL;
  EXPECT(sarith_context_new(dup, 2, 24, &bad) != SARITH_OK && bad == NULL);
  EXPECT(strlen(sarith_last_error()) > 0);
  EXPECT(sarith_context_new(primes, 1, 24, NULL) == SARITH_E_NULL_POINTER);

  sarith_region* r = NULL;
  const char* doc = "{\"d\":2,\"real\":{\"kind\":\"box\",\"lo\":[-2.5,-2.5],\"hi\":[2.5,2.5]},"
                    "\"finite\":{\"2\":{\"kind\":\"ball\",\"k\":1}}}";
  EXPECT(sarith_region_from_json(doc, &r) == SARITH_OK);
  double vol = 0;
  EXPECT(sarith_region_volume(ctx, r, &vol) == SARITH_OK && fabs(vol - 6.25) < 1e-12);

  size_t need = 0;
  char tiny[4];
  EXPECT(sarith_region_to_json(r, tiny, sizeof tiny, &need) == SARITH_E_BUFFER_TOO_SMALL && need > 4);
  char* buf = malloc(need);
  EXPECT(sarith_region_to_json(r, buf, need, &need) == SARITH_OK && strstr(buf, "\"box\"") != NULL);
  free(buf);

  sarith_lattice* id = NULL;
  EXPECT(sarith_lattice_identity(ctx, 2, &id) == SARITH_OK);
  uint64_t n = 0;
  EXPECT(sarith_all_count(id, r, &n) == SARITH_OK && n == 8);
  EXPECT(sarith_primitive_count(id, r, &n) == SARITH_OK && n == 8);
  double a = 0;
  int cert = 0;
  EXPECT(sarith_alpha1(id, 256, &a, &cert) == SARITH_OK && fabs(a - 1.0) < 1e-12);

  sarith_lattice *s1 = NULL, *s2 = NULL;
  EXPECT(sarith_lattice_sample2(ctx, 5, 9, &s1) == SARITH_OK);
  EXPECT(sarith_lattice_sample2(ctx, 5, 9, &s2) == SARITH_OK);
  uint64_t c1 = 0, c2 = 1;
  sarith_primitive_count(s1, r, &c1);
  sarith_primitive_count(s2, r, &c2);
  EXPECT(c1 == c2);

  sarith_region* malformed = NULL;
  int rc = sarith_region_from_json("{\"d\":2}", &malformed);
  EXPECT(rc == SARITH_E_MALFORMED_REGION);
  EXPECT(strcmp(sarith_error_name(rc), "MalformedRegion") == 0);

  EXPECT(sarith_experiment_count() == 6);
  sarith_report* rep = NULL;
  const char* cfg = "samples = 200\n[[regions]]\nname = \"b\"\nprimes = []\nd = 2\n"
                    "real = { kind = \"ball\", radius = 2.0 }\n";
  EXPECT(sarith_run_experiment("mean_value", cfg, 1, 1, &rep) == SARITH_OK);
  int pass = 0;
  EXPECT(sarith_report_pass(rep, &pass) == SARITH_OK);
  EXPECT(sarith_report_csv(rep, NULL, 0, &need) == SARITH_E_BUFFER_TOO_SMALL && need > 0);
  sarith_report_free(rep);
  EXPECT(sarith_run_experiment("nope", cfg, 1, 1, &rep) != SARITH_OK);

  sarith_lattice_free(s1);
  sarith_lattice_free(s2);
  sarith_lattice_free(id);
  sarith_region_free(r);
  sarith_region_free(NULL);
  sarith_context_free(ctx);
  if (failures) return 1;
  printf("capi smoke ok\n");
  return 0;
}
