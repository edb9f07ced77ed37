#pragma once

// Hot loops of the propagator and ensemble reduction. Complex vectors are split
// into re/im arrays; matrices are column-major n x n (Eigen's default layout).

namespace mk::kern {

struct Ops {
  // z = V^T x
  void (*vt_x)(const double* V, int n, const double* xr, const double* xi, double* zr, double* zi);
  // y = V z
  void (*v_x)(const double* V, int n, const double* zr, const double* zi, double* yr, double* yi);
  // rho += w * psi psi^dagger
  void (*rank1)(int n, const double* pr, const double* pi, double w, double* rho_re, double* rho_im);
  // <a|b> = sum conj(a) b
  void (*cdot)(int n, const double* ar, const double* ai, const double* br, const double* bi, double* out_re,
               double* out_im);
  const char* name;
};

const Ops& scalar();
const Ops& avx2();
bool avx2_available();
// AVX2 when the CPU has it, unless MATRYOSHKA_SIMD=scalar is set.
const Ops& active();

}  // namespace mk::kern
