/* floyd-warshall all-pairs shortest paths.
 * Reconstructed mold: packing, interchange, tile sizes. The min-reduction
 * needs the dependence-check override in the polly_noheuristic preset.
 * Prints the kernel time in seconds as its last line. */
#define _POSIX_C_SOURCE 199309L
#include <stdio.h>
#include <stdlib.h>
#include <time.h>

#ifndef N
#define N 2800
#endif

static int path[N][N];

static void init(void) {
  for (int i = 0; i < N; i++)
    for (int j = 0; j < N; j++) {
      path[i][j] = i * j % 7 + 1;
      if ((i + j) % 13 == 0 || (i + j) % 7 == 0 || (i + j) % 11 == 0) path[i][j] = 999;
    }
}

static void kernel(void) {
  int i, j, k;
#P0
#P1
#pragma clang loop(k,i,j) tile sizes(#P2,#P3,#P4) floor_ids(k1,i1,j1) tile_ids(k2,i2,j2)
#pragma clang loop id(k)
  for (k = 0; k < N; k++)
#pragma clang loop id(i)
    for (i = 0; i < N; i++)
#pragma clang loop id(j)
      for (j = 0; j < N; j++)
        path[i][j] = path[i][j] < path[i][k] + path[k][j] ? path[i][j] : path[i][k] + path[k][j];
}

int main(void) {
  struct timespec t0, t1;
  init();
  clock_gettime(CLOCK_MONOTONIC, &t0);
  kernel();
  clock_gettime(CLOCK_MONOTONIC, &t1);
  long sum = 0;
  for (int i = 0; i < N; i++) sum += path[i][(i * 5) % N];
  fprintf(stderr, "checksum %ld\n", sum);
  printf("%.6f\n", (t1.tv_sec - t0.tv_sec) + 1e-9 * (t1.tv_nsec - t0.tv_nsec));
  return 0;
}
