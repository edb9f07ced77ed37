#include <cstdlib>
#include <cstring>

#include "matryoshka/kernels.hpp"

namespace mk::kern {

namespace {

void vt_x_ref(const double* V, int n, const double* xr, const double* xi, double* zr, double* zi) {
  for (int j = 0; j < n; ++j) {
    const double* c = V + static_cast<long>(j) * n;
    double sr = 0, si = 0;
    for (int i = 0; i < n; ++i) {
      sr += c[i] * xr[i];
      si += c[i] * xi[i];
    }
    zr[j] = sr;
    zi[j] = si;
  }
}

void v_x_ref(const double* V, int n, const double* zr, const double* zi, double* yr, double* yi) {
  for (int i = 0; i < n; ++i) yr[i] = yi[i] = 0;
  for (int j = 0; j < n; ++j) {
    const double* c = V + static_cast<long>(j) * n;
    for (int i = 0; i < n; ++i) {
      yr[i] += c[i] * zr[j];
      yi[i] += c[i] * zi[j];
    }
  }
}

void rank1_ref(int n, const double* pr, const double* pi, double w, double* rho_re, double* rho_im) {
  // rho(i,j) += w psi_i conj(psi_j), column j contiguous
  for (int j = 0; j < n; ++j) {
    double* cr = rho_re + static_cast<long>(j) * n;
    double* ci = rho_im + static_cast<long>(j) * n;
    const double br = w * pr[j], bi = -w * pi[j];
    for (int i = 0; i < n; ++i) {
      cr[i] += pr[i] * br - pi[i] * bi;
      ci[i] += pr[i] * bi + pi[i] * br;
    }
  }
}

void cdot_ref(int n, const double* ar, const double* ai, const double* br, const double* bi, double* out_re,
              double* out_im) {
  double sr = 0, si = 0;
  for (int i = 0; i < n; ++i) {
    sr += ar[i] * br[i] + ai[i] * bi[i];
    si += ar[i] * bi[i] - ai[i] * br[i];
  }
  *out_re = sr;
  *out_im = si;
}

const Ops kScalar{vt_x_ref, v_x_ref, rank1_ref, cdot_ref, "scalar"};

}  // namespace

const Ops& scalar() { return kScalar; }

bool avx2_available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Ops& active() {
  static const Ops* ops = [] {
    const char* env = std::getenv("MATRYOSHKA_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &kScalar;
    return avx2_available() ? &avx2() : &kScalar;
  }();
  return *ops;
}

}  // namespace mk::kern
