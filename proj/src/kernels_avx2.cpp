// Built with -mavx2 -mfma; only reached through kern::active() after a CPU check.
#include <immintrin.h>

#include "matryoshka/kernels.hpp"

namespace mk::kern {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void vt_x_avx2(const double* V, int n, const double* xr, const double* xi, double* zr, double* zi) {
  const int n4 = n & ~3;
  for (int j = 0; j < n; ++j) {
    const double* c = V + static_cast<long>(j) * n;
    __m256d ar = _mm256_setzero_pd(), ai = _mm256_setzero_pd();
    int i = 0;
    for (; i < n4; i += 4) {
      __m256d v = _mm256_loadu_pd(c + i);
      ar = _mm256_fmadd_pd(v, _mm256_loadu_pd(xr + i), ar);
      ai = _mm256_fmadd_pd(v, _mm256_loadu_pd(xi + i), ai);
    }
    double sr = hsum(ar), si = hsum(ai);
    for (; i < n; ++i) {
      sr += c[i] * xr[i];
      si += c[i] * xi[i];
    }
    zr[j] = sr;
    zi[j] = si;
  }
}

void v_x_avx2(const double* V, int n, const double* zr, const double* zi, double* yr, double* yi) {
  const int n4 = n & ~3;
  for (int i = 0; i < n; ++i) yr[i] = yi[i] = 0;
  for (int j = 0; j < n; ++j) {
    const double* c = V + static_cast<long>(j) * n;
    const __m256d br = _mm256_set1_pd(zr[j]), bi = _mm256_set1_pd(zi[j]);
    int i = 0;
    for (; i < n4; i += 4) {
      __m256d v = _mm256_loadu_pd(c + i);
      _mm256_storeu_pd(yr + i, _mm256_fmadd_pd(v, br, _mm256_loadu_pd(yr + i)));
      _mm256_storeu_pd(yi + i, _mm256_fmadd_pd(v, bi, _mm256_loadu_pd(yi + i)));
    }
    for (; i < n; ++i) {
      yr[i] += c[i] * zr[j];
      yi[i] += c[i] * zi[j];
    }
  }
}

void rank1_avx2(int n, const double* pr, const double* pi, double w, double* rho_re, double* rho_im) {
  const int n4 = n & ~3;
  for (int j = 0; j < n; ++j) {
    double* cr = rho_re + static_cast<long>(j) * n;
    double* ci = rho_im + static_cast<long>(j) * n;
    const double sbr = w * pr[j], sbi = -w * pi[j];
    const __m256d br = _mm256_set1_pd(sbr), bi = _mm256_set1_pd(sbi);
    int i = 0;
    for (; i < n4; i += 4) {
      __m256d xr = _mm256_loadu_pd(pr + i), xi = _mm256_loadu_pd(pi + i);
      __m256d r = _mm256_fnmadd_pd(xi, bi, _mm256_fmadd_pd(xr, br, _mm256_loadu_pd(cr + i)));
      __m256d m = _mm256_fmadd_pd(xi, br, _mm256_fmadd_pd(xr, bi, _mm256_loadu_pd(ci + i)));
      _mm256_storeu_pd(cr + i, r);
      _mm256_storeu_pd(ci + i, m);
    }
    for (; i < n; ++i) {
      cr[i] += pr[i] * sbr - pi[i] * sbi;
      ci[i] += pr[i] * sbi + pi[i] * sbr;
    }
  }
}

void cdot_avx2(int n, const double* ar, const double* ai, const double* br, const double* bi, double* out_re,
               double* out_im) {
  const int n4 = n & ~3;
  __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
  int i = 0;
  for (; i < n4; i += 4) {
    __m256d xr = _mm256_loadu_pd(ar + i), xi = _mm256_loadu_pd(ai + i);
    __m256d yr = _mm256_loadu_pd(br + i), yi = _mm256_loadu_pd(bi + i);
    sr = _mm256_fmadd_pd(xr, yr, _mm256_fmadd_pd(xi, yi, sr));
    si = _mm256_fmadd_pd(xr, yi, _mm256_fnmadd_pd(xi, yr, si));
  }
  double r = hsum(sr), m = hsum(si);
  for (; i < n; ++i) {
    r += ar[i] * br[i] + ai[i] * bi[i];
    m += ar[i] * bi[i] - ai[i] * br[i];
  }
  *out_re = r;
  *out_im = m;
}

const Ops kAvx2{vt_x_avx2, v_x_avx2, rank1_avx2, cdot_avx2, "avx2"};

}  // namespace

const Ops& avx2() { return kAvx2; }

}  // namespace mk::kern
