#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <random>
#include <vector>

#include "matryoshka/kernels.hpp"

using namespace mk;

namespace {
struct Data {
  int n;
  std::vector<double> V, xr, xi;
};

Data make(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Data d{n, std::vector<double>(n * n), std::vector<double>(n), std::vector<double>(n)};
  for (auto& v : d.V) v = u(rng);
  for (int i = 0; i < n; ++i) {
    d.xr[i] = u(rng);
    d.xi[i] = u(rng);
  }
  return d;
}

// plain loops, independent of both kernel tables
void ref_vt_x(const Data& d, std::vector<double>& zr, std::vector<double>& zi) {
  for (int j = 0; j < d.n; ++j) {
    zr[j] = zi[j] = 0;
    for (int i = 0; i < d.n; ++i) {
      zr[j] += d.V[j * d.n + i] * d.xr[i];
      zi[j] += d.V[j * d.n + i] * d.xi[i];
    }
  }
}
}  // namespace

// active() caches its choice on first use, so this runs first
TEST_CASE("environment override selects the scalar table") {
  setenv("MATRYOSHKA_SIMD", "scalar", 1);
  CHECK(std::string(kern::active().name) == kern::scalar().name);
  unsetenv("MATRYOSHKA_SIMD");
}

TEST_CASE("scalar kernels match plain loops") {
  for (int n = 1; n <= 9; ++n) {
    auto d = make(n, n);
    std::vector<double> zr(n), zi(n), wr(n), wi(n);
    kern::scalar().vt_x(d.V.data(), n, d.xr.data(), d.xi.data(), zr.data(), zi.data());
    ref_vt_x(d, wr, wi);
    for (int i = 0; i < n; ++i) {
      CHECK(zr[i] == doctest::Approx(wr[i]).epsilon(1e-14));
      CHECK(zi[i] == doctest::Approx(wi[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("avx2 kernels agree with scalar for sizes 1..37") {
  if (!kern::avx2_available()) {
    MESSAGE("CPU lacks AVX2; equivalence test skipped");
    return;
  }
  const auto& S = kern::scalar();
  const auto& A = kern::avx2();
  for (int n = 1; n <= 37; ++n) {
    auto d = make(n, 100 + n);
    std::vector<double> sr(n), si(n), ar(n), ai(n);

    S.vt_x(d.V.data(), n, d.xr.data(), d.xi.data(), sr.data(), si.data());
    A.vt_x(d.V.data(), n, d.xr.data(), d.xi.data(), ar.data(), ai.data());
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(sr[i] - ar[i]) <= 1e-13);
      CHECK(std::abs(si[i] - ai[i]) <= 1e-13);
    }

    S.v_x(d.V.data(), n, d.xr.data(), d.xi.data(), sr.data(), si.data());
    A.v_x(d.V.data(), n, d.xr.data(), d.xi.data(), ar.data(), ai.data());
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(sr[i] - ar[i]) <= 1e-13);
      CHECK(std::abs(si[i] - ai[i]) <= 1e-13);
    }

    std::vector<double> r1(n * n, 0.5), i1(n * n, -0.25), r2 = r1, i2 = i1;
    S.rank1(n, d.xr.data(), d.xi.data(), 0.3, r1.data(), i1.data());
    A.rank1(n, d.xr.data(), d.xi.data(), 0.3, r2.data(), i2.data());
    for (int k = 0; k < n * n; ++k) {
      CHECK(std::abs(r1[k] - r2[k]) <= 1e-14);
      CHECK(std::abs(i1[k] - i2[k]) <= 1e-14);
    }

    double s_re, s_im, a_re, a_im;
    S.cdot(n, d.xr.data(), d.xi.data(), sr.data(), si.data(), &s_re, &s_im);
    A.cdot(n, d.xr.data(), d.xi.data(), sr.data(), si.data(), &a_re, &a_im);
    CHECK(std::abs(s_re - a_re) <= 1e-12);
    CHECK(std::abs(s_im - a_im) <= 1e-12);
  }
}

TEST_CASE("rank-1 update is hermitian") {
  const int n = 5;
  auto d = make(n, 3);
  std::vector<double> re(n * n, 0), im(n * n, 0);
  kern::scalar().rank1(n, d.xr.data(), d.xi.data(), 1.0, re.data(), im.data());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(re[i + j * n] == doctest::Approx(re[j + i * n]));
      CHECK(im[i + j * n] == doctest::Approx(-im[j + i * n]));
    }
}
