/* lu: in-place LU decomposition without pivoting.
 * Reconstructed mold: packing of A, interchange, tile sizes.
 * Prints the kernel time in seconds as its last line. */
#define _POSIX_C_SOURCE 199309L
#include <stdio.h>
#include <stdlib.h>
#include <time.h>

#ifndef N
#define N 2000
#endif

static double A[N][N];

static void init(void) {
  /* Diagonally dominant, so no pivoting is needed. */
  for (int i = 0; i < N; i++)
    for (int j = 0; j < N; j++) A[i][j] = i == j ? (double)N : (double)((i * j + 1) % N) / N;
}

static void kernel(void) {
  int i, j, k;
#P0
#P1
#pragma clang loop(i,j,k) tile sizes(#P2,#P3,#P4) floor_ids(i1,j1,k1) tile_ids(i2,j2,k2)
#pragma clang loop id(i)
  for (i = 0; i < N; i++) {
    for (j = 0; j < i; j++) {
      for (k = 0; k < j; k++) A[i][j] -= A[i][k] * A[k][j];
      A[i][j] /= A[j][j];
    }
#pragma clang loop id(j)
    for (j = i; j < N; j++) {
#pragma clang loop id(k)
      for (k = 0; k < i; k++) A[i][j] -= A[i][k] * A[k][j];
    }
  }
}

int main(void) {
  struct timespec t0, t1;
  init();
  clock_gettime(CLOCK_MONOTONIC, &t0);
  kernel();
  clock_gettime(CLOCK_MONOTONIC, &t1);
  double sum = 0.0;
  for (int i = 0; i < N; i++) sum += A[i][i];
  fprintf(stderr, "checksum %g\n", sum);
  printf("%.6f\n", (t1.tv_sec - t0.tv_sec) + 1e-9 * (t1.tv_nsec - t0.tv_nsec));
  return 0;
}
