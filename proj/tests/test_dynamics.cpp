#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "matryoshka/dynamics.hpp"
#include "matryoshka/errors.hpp"
#include "matryoshka/protocols.hpp"

using namespace mk;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {
CMat basis(int n, int i) {
  CMat v = CMat::Zero(n, 1);
  v(i, 0) = 1;
  return v;
}

HamiltonianFn static_dimer(double u) {
  return [u](double, Mat& H) {
    H = Mat::Zero(2, 2);
    H(0, 1) = H(1, 0) = u;
  };
}

// driven dimer with a detuning so the commutator [H(t), H(t')] is nonzero
HamiltonianFn driven_dimer() {
  return [](double t, Mat& H) {
    H = Mat::Zero(2, 2);
    H(0, 1) = H(1, 0) = 1 + 0.5 * std::sin(t);
    H(0, 0) = 0.3 * std::cos(t);
    H(1, 1) = -0.3 * std::cos(t);
  };
}
}  // namespace

TEST_CASE("static dimer Rabi oscillation") {
  const double u = 0.7, T = 5;
  EvolveOptions opt;
  opt.sample_every = 50;
  auto tr = evolve(static_dimer(u), T, T / 1000, basis(2, 0), opt);
  for (size_t s = 0; s < tr.times.size(); ++s) {
    const double p = std::norm(tr.states[s](1, 0));
    CHECK(std::abs(p - std::pow(std::sin(u * tr.times[s]), 2)) < 1e-12);
  }
  CHECK(tr.times.back() == doctest::Approx(T));
}

TEST_CASE("zero Hamiltonian leaves the state unchanged") {
  CMat psi(3, 1);
  psi << cd(0.6, 0), cd(0, 0.8), 0;
  auto tr = evolve([](double, Mat& H) { H = Mat::Zero(3, 3); }, 10, 0.1, psi);
  CHECK((tr.states.back() - psi).norm() < 1e-14);
}

TEST_CASE("norm drift stays below 1e-9 over 1e4 steps") {
  auto tr = evolve(driven_dimer(), 100, 0.01, basis(2, 0));
  CHECK(tr.max_norm_drift <= 1e-9);
}

TEST_CASE("second-order convergence") {
  const double T = 10;
  auto ref = evolve(driven_dimer(), T, T / 64000, basis(2, 0)).states.back();
  std::vector<double> err;
  for (int n : {250, 500, 1000}) err.push_back((evolve(driven_dimer(), T, T / n, basis(2, 0)).states.back() - ref).norm());
  CHECK(err[0] / err[1] == doctest::Approx(4).epsilon(0.1));
  CHECK(err[1] / err[2] == doctest::Approx(4).epsilon(0.1));
}

TEST_CASE("dt is snapped to divide the duration") {
  Schedule s;
  s.duration = 1;
  s.dt = 0.3;
  CHECK(s.steps() == 3);
  CHECK(s.step() == doctest::Approx(1.0 / 3));
  s.dt = 2;
  bool thrown = false;
  try {
    s.validate();
  } catch (const Error& e) {
    thrown = e.kind() == ErrorKind::config;
  }
  CHECK(thrown);
}

TEST_CASE("fidelity and overlap") {
  CVec a = CVec::Zero(2), b = CVec::Zero(2);
  a(0) = 1;
  b(1) = 1;
  CHECK(fidelity(a, a) == doctest::Approx(1));
  CHECK(fidelity(a, b) == doctest::Approx(0));
  CVec c(2);
  c << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  CHECK(fidelity(c, a) == doctest::Approx(0.5));
  CVec d = cd(0, 1) * a;
  auto o = overlap(a, d);
  CHECK(std::abs(o - cd(0, 1)) < 1e-15);
}

TEST_CASE("ensemble entropy examples") {
  std::vector<CVec> same(5, CVec::Unit(4, 1));
  CHECK(std::abs(ensemble_entropy(same)) < 1e-12);

  std::vector<CVec> seven;
  for (int i = 0; i < 7; ++i) seven.push_back(CVec::Unit(7, i));
  CHECK(ensemble_entropy(seven) == doctest::Approx(std::log(7.0)).epsilon(1e-12));

  std::vector<CVec> two{CVec::Unit(3, 0), CVec::Unit(3, 2)};
  CHECK(ensemble_entropy(two) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // rotated orthonormal pair still gives ln 2
  CVec p(2), m(2);
  p << cd(1, 0), cd(0, 1);
  m << cd(1, 0), cd(0, -1);
  CHECK(ensemble_entropy({p / std::sqrt(2.0), m / std::sqrt(2.0)}) == doctest::Approx(std::log(2.0)));
  CMat rho = average_density({p / std::sqrt(2.0)});
  CHECK(std::abs(rho.trace() - 1.0) < 1e-14);
  CHECK(std::abs(rho(0, 1) - cd(0, -0.5)) < 1e-14);
}

TEST_CASE("D-matrix vanishes for static Hamiltonians") {
  auto c = nonadiabatic_coupling(static_dimer(0.4), 1.0, 1e-4);
  CHECK(c.D.cwiseAbs().maxCoeff() < 1e-12);
  CHECK_FALSE(c.degenerate);
}

TEST_CASE("D-matrix is antisymmetric and small along the transfer sweep") {
  TransferProtocol p;
  auto m = transfer_model(p);
  auto H = m.fn();
  double worst_ratio = 0;
  for (double t : {20.0, 60.0, 100.0, 140.0, 180.0}) {
    auto c = nonadiabatic_coupling(H, t, 1e-5);
    if (c.degenerate) continue;
    const double dn = c.D.norm();
    CHECK((c.D + c.D.transpose()).norm() <= 1e-3 * dn + 1e-9);
    for (int i = 0; i < c.D.rows(); ++i)
      for (int j = 0; j < c.D.cols(); ++j)
        if (i != j) {
          const double gap = std::abs(c.energies[i] - c.energies[j]);
          if (gap > 1e-6) worst_ratio = std::max(worst_ratio, std::abs(c.D(i, j)) / gap);
        }
  }
  CHECK(worst_ratio < 0.1);
}

TEST_CASE("static dimer gap is 2u") {
  auto g = min_gap(static_dimer(0.35), 3, 30);
  REQUIRE(g.gaps.size() == 1);
  CHECK(g.gaps[0] == doctest::Approx(0.7));
}

TEST_CASE("energy tracking along the adiabatic sweep") {
  TransferProtocol p;
  auto m = transfer_model(p);
  auto chans = transfer_channels(p);
  CMat psi0(7, 1);
  psi0.col(0) = chans[0].psi0;
  EvolveOptions opt;
  opt.sample_every = 200;
  auto tr = evolve(m, psi0, opt);
  double worst = 0;
  Mat H;
  for (size_t s = 0; s < tr.times.size(); ++s) {
    m.hamiltonian(tr.times[s], H);
    CVec v = tr.states[s].col(0);
    const double e = (v.adjoint() * H.cast<cd>() * v)(0, 0).real();
    worst = std::max(worst, std::abs(e - chans[0].energy));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("Bloch precession about z") {
  auto b = bloch_evolve([](double) { return Vec3(0, 0, 1); }, Vec3(1, 0, 0), 3, 0.01, 10);
  for (size_t i = 0; i < b.times.size(); ++i) {
    const double t = b.times[i];
    CHECK((b.r[i] - Vec3(std::cos(t), std::sin(t), 0)).norm() < 1e-12);
  }
  auto z = bloch_evolve([](double) { return Vec3::Zero(); }, Vec3(0, 1, 0), 2, 0.1);
  CHECK((z.r.back() - Vec3(0, 1, 0)).norm() == 0);
}

TEST_CASE("Bloch vector agrees with the Schroedinger evolution") {
  // n sweeps through zero halfway; H = n.sigma / 2
  auto n = [](double t) { return Vec3(0.3, 0.2 * std::sin(t), 1.5 - 0.3 * t); };
  HermitianFn H = [&](double t, CMat& h) {
    const Vec3 v = n(t);
    h.resize(2, 2);
    h << cd(v.z(), 0), cd(v.x(), -v.y()), cd(v.x(), v.y()), cd(-v.z(), 0);
    h *= 0.5;
  };
  CMat psi0(2, 1);
  psi0 << cd(std::cos(0.3), 0), cd(std::sin(0.3) * std::cos(0.4), std::sin(0.3) * std::sin(0.4));
  const double T = 10, dt = 1e-3;
  EvolveOptions opt;
  opt.sample_every = 100;
  auto tr = evolve_hermitian(H, T, dt, psi0, opt);
  auto bt = bloch_evolve(n, bloch_vector(psi0.col(0)), T, dt, 100);
  REQUIRE(bt.r.size() == tr.states.size());
  double worst = 0, norm_dev = 0;
  for (size_t i = 0; i < bt.r.size(); ++i) {
    worst = std::max(worst, (bt.r[i] - bloch_vector(tr.states[i].col(0))).norm());
    norm_dev = std::max(norm_dev, std::abs(bt.r[i].norm() - 1));
  }
  CHECK(worst <= 1e-6);
  CHECK(norm_dev <= 1e-9);
}

TEST_CASE("two-level gap equals |n|") {
  const Vec3 v(0.4, -0.7, 0.2);
  auto g = gaps_at(
      [&](double, Mat& H) {
        // real two-level Hamiltonian with n = (nx, 0, nz) rotated so |n| is preserved
        const double nx = std::hypot(v.x(), v.y());
        H.resize(2, 2);
        H << v.z(), nx, nx, -v.z();
        H *= 0.5;
      },
      0);
  CHECK(g[0] == doctest::Approx(v.norm()));
}
