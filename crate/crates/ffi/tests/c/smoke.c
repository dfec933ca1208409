#include <math.h>
#include <stdio.h>
#include "slowlight.h"

#define CHECK(x)                                                              \
  do {                                                                        \
    SlStatus s_ = (x);                                                        \
    if (s_ != SL_STATUS_OK) {                                                 \
      fprintf(stderr, "%s -> %d: %s\n", #x, (int)s_, sl_last_error());        \
      return 1;                                                               \
    }                                                                         \
  } while (0)

int main(void) {
  SlCell *cell = NULL;
  double nm = 0.0, delay = 0.0;
  SlReport report;

  CHECK(sl_cell_new_rubidium(280.0, 0.07, 3, true, &cell));
  CHECK(sl_cell_gvd_zero_nm(cell, &nm));
  CHECK(sl_cell_group_delay(cell, nm, &delay));
  CHECK(sl_cell_set_temperature(cell, 250.0));
  CHECK(sl_propagate(cell, SL_PULSE_SHAPE_SINC, 650e-15, NAN, &report));
  if (sl_cell_new_rubidium(900.0, 0.07, 1, true, &cell) != SL_STATUS_INVALID_ARGUMENT) {
    return 2;
  }
  sl_cell_free(cell);
  printf("%.4f %.3f %.3f\n", nm, delay * 1e12, report.fractional_delay);
  return 0;
}
