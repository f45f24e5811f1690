/* Small mold for the mock_tiny problem; never compiled by the tests. */
#include <stdio.h>

int main(void) {
  double s = 0.0;
#P0
#P1
#pragma clang loop(i,j) tile sizes(#P2,#P3)
  for (int i = 0; i < 256; i++)
    for (int j = 0; j < 256; j++) s += (double)i * j;
  printf("%f\n", s);
  return 0;
}
