#include <math.h>
#include <stdio.h>
#include <string.h>

#include "twostring.h"

#define CHECK(cond)                                                    \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                        \
    }                                                                  \
  } while (0)

int main(void) {
  TsDiagram *x = NULL;
  CHECK(ts_diagram_builtin("X", 3, &x) == TS_STATUS_OK);

  TsOperator *op = NULL;
  CHECK(ts_diagram_evaluate(x, TS_BACKEND_SYMBOLIC, &op) == TS_STATUS_OK);
  size_t d, n_out, n_in;
  CHECK(ts_operator_shape(op, &d, &n_out, &n_in) == TS_STATUS_OK);
  CHECK(d == 3 && n_out == 1 && n_in == 1);

  double re[9], im[9];
  CHECK(ts_operator_entries(op, re, im, 9) == TS_STATUS_OK);
  /* X|k> = |k+1>: ones below the diagonal, wrapping at the corner */
  CHECK(fabs(re[3] - 1.0) < 1e-12 && fabs(re[7] - 1.0) < 1e-12 && fabs(re[2] - 1.0) < 1e-12);
  CHECK(ts_operator_entries(op, re, im, 4) == TS_STATUS_SHAPE);

  TsVerdict v;
  double norm;
  CHECK(ts_compression_check(op, 1, TS_AXIS_X, 1e-9, &v, &norm) == TS_STATUS_OK);
  CHECK(v == TS_VERDICT_COMPRESSED);
  CHECK(ts_compression_check(op, 1, TS_AXIS_Z, 1e-9, &v, &norm) == TS_STATUS_OK);
  CHECK(v == TS_VERDICT_NOT_COMPRESSED);

  char *json = NULL;
  CHECK(ts_operator_to_json(op, &json) == TS_STATUS_OK);
  CHECK(strstr(json, "\"d\":3") != NULL);
  ts_string_free(json);
  ts_operator_free(op);
  ts_diagram_free(x);

  TsDiagram *bad = NULL;
  CHECK(ts_diagram_parse("{\"d\":2,\"top\":3,\"slices\":[]}", &bad) == TS_STATUS_PARSE);
  CHECK(bad == NULL);
  CHECK(ts_last_error() != NULL);

  bool pass;
  double dev;
  CHECK(ts_relation_check("braid", 3, 1e-9, &pass, &dev) == TS_STATUS_OK && pass);

  TsMctSummary s;
  CHECK(ts_mct_random(2, 2, 3, 7, &s) == TS_STATUS_OK);
  CHECK(s.pass && s.cdits == 4 && s.resource_qudits == 3 && s.resource_states == 1);

  printf("c smoke ok\n");
  return 0;
}
