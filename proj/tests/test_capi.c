/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qwigner/qwigner.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: FAILED %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static const char* kT0 = "{\"d\":1,\"A0\":[[1]],\"B0\":[[0.5]],\"C0\":[[1]],\"D0\":[[-0.5]]}";
static const char* kComb = "{\"comb\":{\"basis\":[[1]],\"box\":{\"lo\":[-2],\"hi\":[2]}}}";

int main(void) {
  qw_matrix* t = NULL;
  qw_measure* mu = NULL;
  qw_chirpsum* w = NULL;
  char* s = NULL;

  EXPECT(qw_matrix_from_json(kT0, &t) == QW_OK);
  EXPECT(qw_matrix_dim(t) == 1);
  EXPECT(qw_measure_from_json(kComb, &mu) == QW_OK);
  EXPECT(qw_measure_size(mu) == 5);

  EXPECT(qw_wigner_exact(t, mu, &w) == QW_OK);
  EXPECT(qw_chirpsum_size(w) == 9); /* half-integers in [-2, 2] */
  EXPECT(qw_chirpsum_support_csv(w, &s) == QW_OK);
  EXPECT(s != NULL && strncmp(s, "x\n-2\n-1.5\n", 10) == 0);
  qw_string_free(s);

  EXPECT(qw_matrix_dual_json(t, &s) == QW_OK);
  EXPECT(strstr(s, "\"dual_of_dual_equals_T\": true") != NULL);
  qw_string_free(s);

  /* error paths */
  qw_matrix* bad = NULL;
  EXPECT(qw_matrix_from_json("{\"d\":1}", &bad) == QW_ERR_VALIDATION);
  EXPECT(bad == NULL);
  EXPECT(strlen(qw_last_error()) > 0);
  EXPECT(qw_matrix_from_json("{\"full\":[[1,1],[1,1]]}", &bad) == QW_OK);
  EXPECT(qw_matrix_dual_json(bad, &s) == QW_ERR_NUMERICAL);
  qw_matrix_free(bad);
  EXPECT(qw_wigner_exact(NULL, mu, &w) == QW_ERR_VALIDATION);
  EXPECT(qw_matrix_dim(NULL) == 0);

  /* grid */
  qw_grid* f = NULL;
  qw_grid* g = NULL;
  EXPECT(qw_signal_sample("{\"type\":\"gaussian\",\"center\":[0],\"box\":{\"lo\":[-6],\"hi\":[6]},\"samples\":[769]}",
                          &f) == QW_OK);
  EXPECT(qw_wigner_grid(t, f, "{\"x\":[0],\"omega\":[{\"lo\":-1,\"hi\":1,\"count\":5}]}", &g) == QW_OK);
  EXPECT(qw_grid_rank(g) == 1);
  EXPECT(qw_grid_size(g) == 5);
  double vals[10];
  EXPECT(qw_grid_values(g, vals) == QW_OK);
  EXPECT(fabs(vals[4] - sqrt(2.0)) < 1e-3);
  EXPECT(qw_duality_check(t, f, 2.0, 33, 32.0, &s) == QW_OK);
  EXPECT(strstr(s, "max_rel") != NULL);
  qw_string_free(s);

  char* report = NULL;
  char* csv = NULL;
  EXPECT(qw_counterexample(0.5, 0.0, 100, &report, &csv) == QW_OK);
  EXPECT(strstr(report, "\"orbit_size\": 2") != NULL);
  qw_string_free(report);
  qw_string_free(csv);
  EXPECT(qw_counterexample(0.5, 0.0, 3, &report, &csv) == QW_ERR_VALIDATION);

  EXPECT(qw_detect(t, mu, 0.0, 0.0, &report, NULL) == QW_OK);
  EXPECT(strstr(report, "\"theorem\": 1") != NULL);
  qw_string_free(report);

  qw_grid_free(g);
  qw_grid_free(f);
  qw_chirpsum_free(w);
  qw_measure_free(mu);
  qw_matrix_free(t);
  qw_matrix_free(NULL);

  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("C API tests passed (version %s)\n", qw_version());
  return 0;
}
