/* 3mm: E := A*B, F := C*D, G := E*F.
 * Reconstructed mold: ten parameters (seven pragma-or-blank choices and one
 * shared tile shape) chosen so the space has 170,368 configurations.
 * Prints the kernel time in seconds as its last line. */
#define _POSIX_C_SOURCE 199309L
#include <stdio.h>
#include <stdlib.h>
#include <time.h>

#ifndef NI
#define NI 800
#endif
#ifndef NJ
#define NJ 900
#endif
#ifndef NK
#define NK 1000
#endif
#ifndef NL
#define NL 1100
#endif
#ifndef NM
#define NM 1200
#endif

static double A[NI][NK], B[NK][NJ], C[NJ][NM], D[NM][NL];
static double E[NI][NJ], F[NJ][NL], G[NI][NL];

static void init(void) {
  for (int i = 0; i < NI; i++)
    for (int j = 0; j < NK; j++) A[i][j] = (double)((i * j + 1) % NI) / (5 * NI);
  for (int i = 0; i < NK; i++)
    for (int j = 0; j < NJ; j++) B[i][j] = (double)((i * (j + 1) + 2) % NJ) / (5 * NJ);
  for (int i = 0; i < NJ; i++)
    for (int j = 0; j < NM; j++) C[i][j] = (double)(i * (j + 3) % NL) / (5 * NL);
  for (int i = 0; i < NM; i++)
    for (int j = 0; j < NL; j++) D[i][j] = (double)((i * (j + 2) + 2) % NK) / (5 * NK);
}

static void kernel(void) {
  int i, j, k;
#P0
#P1
#pragma clang loop(i,j,k) tile sizes(#P4,#P5,#P6) floor_ids(i1,j1,k1) tile_ids(i2,j2,k2)
#pragma clang loop id(i)
  for (i = 0; i < NI; i++)
#pragma clang loop id(j)
    for (j = 0; j < NJ; j++) {
      E[i][j] = 0.0;
#pragma clang loop id(k)
      for (k = 0; k < NK; ++k) E[i][j] += A[i][k] * B[k][j];
    }
#P2
#P3
#pragma clang loop(i,j,k) tile sizes(#P4,#P5,#P6) floor_ids(i1,j1,k1) tile_ids(i2,j2,k2)
#pragma clang loop id(i)
  for (i = 0; i < NJ; i++)
#pragma clang loop id(j)
    for (j = 0; j < NL; j++) {
      F[i][j] = 0.0;
#pragma clang loop id(k)
      for (k = 0; k < NM; ++k) F[i][j] += C[i][k] * D[k][j];
    }
#P7
#P8
#P9
#pragma clang loop(i,j,k) tile sizes(#P4,#P5,#P6) floor_ids(i1,j1,k1) tile_ids(i2,j2,k2)
#pragma clang loop id(i)
  for (i = 0; i < NI; i++)
#pragma clang loop id(j)
    for (j = 0; j < NL; j++) {
      G[i][j] = 0.0;
#pragma clang loop id(k)
      for (k = 0; k < NJ; ++k) G[i][j] += E[i][k] * F[k][j];
    }
}

int main(void) {
  struct timespec t0, t1;
  init();
  clock_gettime(CLOCK_MONOTONIC, &t0);
  kernel();
  clock_gettime(CLOCK_MONOTONIC, &t1);
  double sum = 0.0;
  for (int i = 0; i < NI; i++) sum += G[i][i % NL];
  fprintf(stderr, "checksum %g\n", sum);
  printf("%.6f\n", (t1.tv_sec - t0.tv_sec) + 1e-9 * (t1.tv_nsec - t0.tv_nsec));
  return 0;
}
