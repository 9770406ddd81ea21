/* Exercises the C API from plain C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "oscillint/oscillint.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: capi_test <problems dir>\n");
    return 2;
  }
  char path[4096];
  oscillint_problem* p = NULL;
  oscillint_result* r = NULL;
  const char* text = NULL;

  EXPECT(strlen(oscillint_version()) > 0);
  EXPECT(strcmp(oscillint_status_string(OSCILLINT_E_SCHEMA), "schema violation") == 0);

  /* Null arguments are reported, not dereferenced. */
  EXPECT(oscillint_problem_load(NULL, &p) == OSCILLINT_E_INVALID_ARGUMENT);
  EXPECT(oscillint_run(NULL, "certify", &r) == OSCILLINT_E_INVALID_ARGUMENT);
  oscillint_problem_free(NULL);
  oscillint_result_free(NULL);

  snprintf(path, sizeof path, "%s/bad_key.json", argv[1]);
  EXPECT(oscillint_problem_load(path, &p) == OSCILLINT_E_SCHEMA);
  EXPECT(p == NULL);
  EXPECT(strstr(oscillint_last_error(), "/equation/b/frequency") != NULL);

  snprintf(path, sizeof path, "%s/does_not_exist.json", argv[1]);
  EXPECT(oscillint_problem_load(path, &p) == OSCILLINT_E_IO);

  EXPECT(oscillint_problem_parse("{\"equation\": {\"a\": 0, \"b\": 1}}", &p) == OSCILLINT_OK);
  EXPECT(strcmp(oscillint_last_error(), "") == 0);
  EXPECT(oscillint_problem_set_simulate(p, 0.0, 1.0, 10.0, NAN) == OSCILLINT_OK);
  EXPECT(oscillint_problem_set_simulate(p, NAN, NAN, NAN, -1.0) == OSCILLINT_E_INVALID_ARGUMENT);
  EXPECT(oscillint_problem_set_sweep(p, "a", 0.0, 1.0, 3) == OSCILLINT_E_INVALID_ARGUMENT);
  EXPECT(oscillint_run(p, "simulate", &r) == OSCILLINT_OK);
  EXPECT(strncmp(oscillint_result_output(r), "t,x,xdot\n", 9) == 0);
  EXPECT(strstr(oscillint_result_zeros(r), "3.14159265") != NULL);
  EXPECT(oscillint_result_exit_code(r) == 0);
  oscillint_result_free(r);
  r = NULL;
  EXPECT(oscillint_run(p, "nonsense", &r) == OSCILLINT_E_INVALID_ARGUMENT);
  EXPECT(r == NULL);
  EXPECT(oscillint_problem_serialize(p, &text) == OSCILLINT_OK);
  EXPECT(strstr(text, "\"simulate\"") != NULL);
  oscillint_problem_free(p);

  snprintf(path, sizeof path, "%s/damped32.json", argv[1]);
  EXPECT(oscillint_problem_load(path, &p) == OSCILLINT_OK);
  EXPECT(oscillint_run(p, "certify", &r) == OSCILLINT_OK);
  EXPECT(strstr(oscillint_result_output(r), "\"EXP_STABLE\"") != NULL);
  EXPECT(strcmp(oscillint_result_zeros(r), "") == 0);
  oscillint_result_free(r);
  oscillint_problem_free(p);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("c api: all checks passed\n");
  return failures ? 1 : 0;
}
