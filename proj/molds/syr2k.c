/* syr2k, lower triangle: C := alpha*A*B^T + alpha*B*A^T + beta*C.
 * Standalone harness: prints the kernel time in seconds as its last line. */
#define _POSIX_C_SOURCE 199309L
#include <stdio.h>
#include <stdlib.h>
#include <time.h>

#ifndef N
#define N 1200
#endif
#ifndef M
#define M 1000
#endif

static double A[N][M];
static double B[N][M];
static double C[N][N];

static void init(double *alpha, double *beta) {
  *alpha = 1.5;
  *beta = 1.2;
  for (int i = 0; i < N; i++)
    for (int j = 0; j < M; j++) {
      A[i][j] = (double)((i * j + 1) % N) / N;
      B[i][j] = (double)((i * j + 2) % M) / M;
    }
  for (int i = 0; i < N; i++)
    for (int j = 0; j < N; j++)
      C[i][j] = (double)((i * j + 3) % N) / M;
}

static void kernel(double alpha, double beta) {
  int i, j, k;
  for (i = 0; i < N; i++)
    for (j = 0; j <= i; j++)
      C[i][j] *= beta;
#P0
#P1
#P2
#pragma clang loop(i,j,k) tile sizes(#P3,#P4,#P5) floor_ids(i1,j1,k1) tile_ids(i2,j2,k2)
#pragma clang loop id(i)
  for (i = 0; i < N; i++) {
#pragma clang loop id(j)
    for (j = 0; j < M; j++) {
#pragma clang loop id(k)
      for (k = 0; k <= i; k++) {
        C[i][k] += A[k][j] * alpha * B[i][j] + B[k][j] * alpha * A[i][j];
      }
    }
  }
}

int main(void) {
  double alpha, beta;
  struct timespec t0, t1;
  init(&alpha, &beta);
  clock_gettime(CLOCK_MONOTONIC, &t0);
  kernel(alpha, beta);
  clock_gettime(CLOCK_MONOTONIC, &t1);
  double sum = 0.0;
  for (int i = 0; i < N; i++) sum += C[i][i / 2];
  fprintf(stderr, "checksum %g\n", sum);
  printf("%.6f\n", (t1.tv_sec - t0.tv_sec) + 1e-9 * (t1.tv_nsec - t0.tv_nsec));
  return 0;
}
