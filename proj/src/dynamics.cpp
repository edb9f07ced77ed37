#include "matryoshka/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <sstream>

#include "matryoshka/errors.hpp"
#include "matryoshka/kernels.hpp"
#include "matryoshka/spectral.hpp"

namespace mk {

int Schedule::steps() const { return std::max(1, static_cast<int>(std::lround(duration / dt))); }

std::vector<double> Schedule::values(double t) const {
  std::vector<double> v(curves.size());
  for (size_t i = 0; i < curves.size(); ++i) v[i] = curves[i](t);
  return v;
}

void Schedule::validate() const {
  if (!(duration > 0)) fail(ErrorKind::config, "schedule duration must be positive");
  if (!(dt > 0) || dt > duration) fail(ErrorKind::config, "schedule dt must lie in (0, T]");
  if (names.size() != curves.size()) fail(ErrorKind::config, "schedule names and curves differ in count");
}

void ScheduledModel::hamiltonian(double t, Mat& H) const {
  if (H.rows() != dim || H.cols() != dim) H.resize(dim, dim);
  assemble(schedule.values(t), H);
}

HamiltonianFn ScheduledModel::fn() const {
  return [this](double t, Mat& H) { hamiltonian(t, H); };
}

namespace {

void check_norms(const CMat& psi, const CMat& psi0, double tol, double& worst, double t) {
  for (int c = 0; c < psi.cols(); ++c) {
    double d = std::abs(psi.col(c).norm() - psi0.col(c).norm());
    worst = std::max(worst, d);
    if (d > tol) {
      std::ostringstream os;
      os << "norm drift " << d << " at t=" << t << " exceeds " << tol << "; use a smaller dt";
      fail(ErrorKind::integrator, os.str());
    }
  }
}

void validate_start(const CMat& psi0, int dim) {
  if (psi0.rows() != dim) fail(ErrorKind::config, "initial state dimension does not match the Hamiltonian");
  for (int c = 0; c < psi0.cols(); ++c)
    if (std::abs(psi0.col(c).norm() - 1.0) > 1e-9) fail(ErrorKind::config, "initial state is not normalized");
}

}  // namespace

Trajectory evolve(const HamiltonianFn& Hfn, double T, double dt, const CMat& psi0, const EvolveOptions& opt) {
  if (!(T >= 0) || !(dt > 0)) fail(ErrorKind::config, "evolve needs T >= 0 and dt > 0");
  const int n = static_cast<int>(psi0.rows()), m = static_cast<int>(psi0.cols());
  const int steps = T == 0 ? 0 : std::max(1, static_cast<int>(std::lround(T / dt)));
  const double h = steps ? T / steps : 0.0;
  Mat H(n, n);
  if (steps) {
    Hfn(0.5 * h, H);
    validate_start(psi0, static_cast<int>(H.rows()));
  }

  const auto& K = kern::active();
  std::vector<double> re(static_cast<size_t>(n) * m), im(re.size()), zr(n), zi(n), cr(n), ci(n);
  for (int c = 0; c < m; ++c)
    for (int i = 0; i < n; ++i) {
      re[c * n + i] = psi0(i, c).real();
      im[c * n + i] = psi0(i, c).imag();
    }
  auto snapshot = [&] {
    CMat s(n, m);
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < n; ++i) s(i, c) = {re[c * n + i], im[c * n + i]};
    return s;
  };

  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(psi0);
  Eigen::SelfAdjointEigenSolver<Mat> es(n);
  Mat V(n, n);
  for (int k = 0; k < steps; ++k) {
    const double tm = (k + 0.5) * h;
    Hfn(tm, H);
    es.compute(H);
    if (es.info() != Eigen::Success) fail(ErrorKind::numeric, "eigensolver failed during evolution");
    V = es.eigenvectors();
    const auto& E = es.eigenvalues();
    for (int c = 0; c < m; ++c) {
      double* pr = re.data() + c * n;
      double* pi = im.data() + c * n;
      K.vt_x(V.data(), n, pr, pi, zr.data(), zi.data());
      for (int j = 0; j < n; ++j) {
        const double ph = -E[j] * h, cs = std::cos(ph), sn = std::sin(ph);
        const double a = zr[j], b = zi[j];
        zr[j] = a * cs - b * sn;
        zi[j] = a * sn + b * cs;
      }
      K.v_x(V.data(), n, zr.data(), zi.data(), pr, pi);
    }
    const bool last = k + 1 == steps;
    if (last || (opt.sample_every > 0 && (k + 1) % opt.sample_every == 0)) {
      CMat s = snapshot();
      check_norms(s, psi0, opt.norm_tol, tr.max_norm_drift, (k + 1) * h);
      tr.times.push_back((k + 1) * h);
      tr.states.push_back(std::move(s));
    }
  }
  return tr;
}

Trajectory evolve(const ScheduledModel& m, const CMat& psi0, const EvolveOptions& opt) {
  m.schedule.validate();
  return evolve(m.fn(), m.schedule.duration, m.schedule.dt, psi0, opt);
}

Trajectory evolve_hermitian(const HermitianFn& Hfn, double T, double dt, const CMat& psi0,
                            const EvolveOptions& opt) {
  const int n = static_cast<int>(psi0.rows());
  const int steps = T == 0 ? 0 : std::max(1, static_cast<int>(std::lround(T / dt)));
  const double h = steps ? T / steps : 0.0;
  validate_start(psi0, n);
  CMat H(n, n), psi = psi0;
  Eigen::SelfAdjointEigenSolver<CMat> es(n);
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(psi0);
  for (int k = 0; k < steps; ++k) {
    Hfn((k + 0.5) * h, H);
    es.compute(H);
    CVec ph = (std::complex<double>(0, -h) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
    psi = es.eigenvectors() * (ph.asDiagonal() * (es.eigenvectors().adjoint() * psi));
    const bool last = k + 1 == steps;
    if (last || (opt.sample_every > 0 && (k + 1) % opt.sample_every == 0)) {
      check_norms(psi, psi0, opt.norm_tol, tr.max_norm_drift, (k + 1) * h);
      tr.times.push_back((k + 1) * h);
      tr.states.push_back(psi);
    }
  }
  return tr;
}

std::complex<double> overlap(const CVec& a, const CVec& b) {
  double r, i;
  const Eigen::VectorXd ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  kern::active().cdot(static_cast<int>(a.size()), ar.data(), ai.data(), br.data(), bi.data(), &r, &i);
  return {r, i};
}

double fidelity(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) fail(ErrorKind::config, "fidelity of states with different dimensions");
  return std::min(1.0, std::norm(overlap(a, b)));
}

CMat average_density(const std::vector<CVec>& states) {
  if (states.empty()) fail(ErrorKind::config, "no states to average");
  const int n = static_cast<int>(states.front().size());
  std::vector<double> rr(static_cast<size_t>(n) * n, 0.0), ri(rr.size(), 0.0);
  const double w = 1.0 / states.size();
  const auto& K = kern::active();
  for (const auto& s : states) {
    if (s.size() != n) fail(ErrorKind::config, "states differ in dimension");
    const Eigen::VectorXd pr = s.real(), pi = s.imag();
    K.rank1(n, pr.data(), pi.data(), w, rr.data(), ri.data());
  }
  CMat rho(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) rho(i, j) = {rr[j * n + i], ri[j * n + i]};
  return rho;
}

double von_neumann_entropy(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
  double S = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double p = std::max(0.0, es.eigenvalues()[i]);
    if (p > 0) S -= p * std::log(p);
  }
  return S;
}

double ensemble_entropy(const std::vector<CVec>& states) { return von_neumann_entropy(average_density(states)); }

Coupling nonadiabatic_coupling(const HamiltonianFn& Hfn, double t, double dt) {
  Mat H0, H1;
  Hfn(t, H0);
  Hfn(t + dt, H1);
  Spectrum s0 = diagonalize(H0), s1 = diagonalize(H1);
  const int n = static_cast<int>(s0.energies.size());
  for (int j = 0; j < n; ++j)
    if (s0.states.col(j).dot(s1.states.col(j)) < 0) s1.states.col(j) *= -1.0;
  Coupling c;
  c.energies = s0.energies;
  c.D = s0.states.transpose() * (s1.states - s0.states) / dt;
  for (int j = 0; j + 1 < n; ++j)
    if (s0.energies[j + 1] - s0.energies[j] < 1e-10) c.degenerate = true;
  return c;
}

Eigen::VectorXd gaps_at(const HamiltonianFn& Hfn, double t) {
  Mat H;
  Hfn(t, H);
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  const auto& e = es.eigenvalues();
  return e.tail(e.size() - 1) - e.head(e.size() - 1);
}

MinGap min_gap(const HamiltonianFn& Hfn, double T, int samples) {
  MinGap out;
  for (int s = 0; s <= samples; ++s) {
    const double t = T * s / samples;
    Eigen::VectorXd g = gaps_at(Hfn, t);
    if (out.gaps.empty()) {
      out.gaps.assign(g.data(), g.data() + g.size());
      out.at.assign(g.size(), t);
    }
    for (int i = 0; i < g.size(); ++i)
      if (g[i] < out.gaps[i]) {
        out.gaps[i] = g[i];
        out.at[i] = t;
      }
  }
  return out;
}

BlochTrajectory bloch_evolve(const std::function<Vec3(double)>& nfn, const Vec3& r0, double T, double dt,
                             int sample_every) {
  if (std::abs(r0.norm() - 1.0) > 1e-9) fail(ErrorKind::config, "bloch_evolve needs a unit initial vector");
  const int steps = std::max(1, static_cast<int>(std::lround(T / dt)));
  const double h = T / steps;
  BlochTrajectory tr;
  tr.times.push_back(0);
  tr.r.push_back(r0);
  Vec3 r = r0;
  for (int k = 0; k < steps; ++k) {
    Vec3 n = nfn((k + 0.5) * h);
    const double w = n.norm();
    if (w > 0) {
      Vec3 a = n / w;
      const double phi = w * h;
      r = r * std::cos(phi) + a.cross(r) * std::sin(phi) + a * a.dot(r) * (1 - std::cos(phi));
    }
    if (k + 1 == steps || (sample_every > 0 && (k + 1) % sample_every == 0)) {
      tr.times.push_back((k + 1) * h);
      tr.r.push_back(r);
    }
  }
  return tr;
}

Vec3 bloch_vector(const CVec& psi) {
  const std::complex<double> c = std::conj(psi[0]) * psi[1];
  return {2 * c.real(), 2 * c.imag(), std::norm(psi[0]) - std::norm(psi[1])};
}

}  // namespace mk
