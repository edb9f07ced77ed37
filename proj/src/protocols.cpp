#include "matryoshka/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "matryoshka/errors.hpp"

namespace mk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2;

CVec unit(int n, std::initializer_list<std::pair<int, double>> amps) {
  CVec v = CVec::Zero(n);
  for (auto [i, a] : amps) v[i] = a;
  return v / v.norm();
}
}  // namespace

double ramp(Ramp r, double x) {
  x = std::clamp(x, 0.0, 1.0);
  if (r == Ramp::linear) return x;
  return x * x * x * (10 - 15 * x + 6 * x * x);
}

Ramp parse_ramp(const std::string& s) {
  if (s == "linear") return Ramp::linear;
  if (s == "smooth" || s == "smootherstep") return Ramp::smooth;
  fail(ErrorKind::config, "unknown ramp '" + s + "' (linear or smooth)");
}

// ---------------------------------------------------------------- transfer

void TransferProtocol::validate() const {
  if (order != 0 && order != 1) fail(ErrorKind::config, "transfer order must be 0 (parent) or 1 (square root)");
  if (!(lambda > 0 && lambda < kHalfPi)) fail(ErrorKind::config, "lambda must lie strictly inside (0, pi/2)");
  if (std::abs(gamma) > 1e-12 && std::abs(gamma - kPi) > 1e-12) fail(ErrorKind::config, "gamma must be 0 or pi");
  if (!(T > 0)) fail(ErrorKind::config, "transfer duration must be positive");
  if (dt < 0 || dt > T) fail(ErrorKind::config, "transfer dt must lie in (0, T]");
}

std::array<double, 3> transfer_angles(const TransferProtocol& p, double t) {
  const double x = p.from_left ? t / p.T : 1.0 - t / p.T;
  const double s = ramp(p.ramp, x);
  return {kHalfPi - p.lambda * s, kHalfPi * s, p.lambda + (p.gamma - p.lambda) * s};
}

ScheduledModel transfer_model(const TransferProtocol& p) {
  p.validate();
  ScheduledModel m;
  m.schedule.duration = p.T;
  m.schedule.dt = p.step();
  m.schedule.names = {"theta1", "theta2", "theta3"};
  for (int j = 0; j < 3; ++j) m.schedule.curves.push_back([p, j](double t) { return transfer_angles(p, t)[j]; });
  m.angle_channels = {0, 1, 2};
  if (p.order == 1) {
    m.dim = 7;
    for (int i = 0; i < 6; ++i) m.edges.emplace_back(i, i + 1);
    m.assemble = [](const std::vector<double>& th, Mat& H) {
      H.setZero();
      for (int b = 0; b < 6; ++b) {
        const double a = th[b / 2];
        H(b, b + 1) = H(b + 1, b) = b % 2 ? std::cos(a) : std::sin(a);
      }
    };
  } else {
    m.dim = 3;
    m.edges = {{0, 1}, {1, 2}};
    m.assemble = [](const std::vector<double>& th, Mat& H) {
      H.setZero();
      H(0, 1) = H(1, 0) = std::cos(th[0]) * std::sin(th[1]);
      H(1, 2) = H(2, 1) = std::cos(th[1]) * std::sin(th[2]);
    };
  }
  return m;
}

std::vector<TransferChannel> transfer_channels(const TransferProtocol& p) {
  p.validate();
  std::vector<TransferChannel> ch;
  const double cg = std::cos(p.gamma);
  const bool g0 = std::abs(p.gamma) < 1e-12;
  if (p.order == 0) {
    TransferChannel c{"eps=0", 0.0, unit(3, {{0, 1}}), unit(3, {{2, 1}}), p.from_left ? -1.0 : 0.0};
    if (!p.from_left) std::swap(c.psi0, c.expected);
    ch.push_back(c);
    return ch;
  }
  const CVec lp = unit(7, {{0, 1}, {1, 1}}), lm = unit(7, {{0, 1}, {1, -1}}), l0 = unit(7, {{2, 1}});
  const CVec rp = unit(7, {{5, 1}, {6, cg}}), rm = unit(7, {{5, 1}, {6, -cg}}), r0 = unit(7, {{4, 1}});
  if (p.from_left) {
    ch.push_back({"eps=+1", 1.0, lp, rp, g0 ? -1.0 : 0.0});
    ch.push_back({"eps=-1", -1.0, lm, rm, g0 ? 1.0 : 0.0});
    ch.push_back({"eps=0", 0.0, l0, r0, g0 ? -1.0 : 0.0});
  } else {
    ch.push_back({"eps=+1", 1.0, rp, lp, 0.0});
    ch.push_back({"eps=-1", -1.0, rm, lm, 0.0});
    ch.push_back({"eps=0", 0.0, r0, l0, 0.0});
  }
  return ch;
}

TransferResult run_transfer(const TransferProtocol& p, const TransferOptions& opt) {
  const ScheduledModel m = transfer_model(p);
  const auto chans = transfer_channels(p);
  CMat psi0(m.dim, static_cast<int>(chans.size()));
  for (size_t c = 0; c < chans.size(); ++c) psi0.col(c) = chans[c].psi0;

  HamiltonianFn H = opt.noise ? disordered(m, *opt.noise) : m.fn();
  TransferResult r;
  EvolveOptions eo;
  eo.sample_every = opt.sample_every;
  r.trajectory = evolve(H, p.T, p.step(), psi0, eo);
  const CMat& fin = r.trajectory.states.back();
  const double T = r.trajectory.times.back();
  for (size_t c = 0; c < chans.size(); ++c) {
    ChannelResult cr;
    cr.channel = chans[c];
    cr.final_state = fin.col(c);
    cr.overlap = overlap(chans[c].expected, cr.final_state);
    cr.fidelity = std::norm(cr.overlap);
    cr.sign = cr.overlap * std::polar(1.0, chans[c].energy * T);
    r.channels.push_back(cr);
  }
  r.gaps = min_gap(H, p.T, opt.gap_samples);
  const double g = *std::min_element(r.gaps.gaps.begin(), r.gaps.gaps.end());
  r.adiabatic_warning = g * p.T < opt.adiabatic_threshold;
  return r;
}

// ---------------------------------------------------------------- braiding

void BraidProtocol::validate() const {
  if (!(lambda > 0 && lambda < kHalfPi)) fail(ErrorKind::config, "lambda must lie strictly inside (0, pi/2)");
  if (!(T_leg > 0)) fail(ErrorKind::config, "T_leg must be positive");
  if (moves < 1 || moves > 3) fail(ErrorKind::config, "braid moves must be 1, 2 or 3");
  if (dt < 0 || dt > T_leg) fail(ErrorKind::config, "braid dt must lie in (0, T_leg]");
}

namespace {

// beta0..2, phi, move index
std::array<double, 5> braid_params(const BraidProtocol& p, double t) {
  if (p.frozen) t = 0;
  int k = std::clamp(static_cast<int>(std::floor(t / p.T_leg)), 0, p.moves - 1);
  const double s = ramp(p.ramp, (t - k * p.T_leg) / p.T_leg);
  const int src = kBraidMoves[k][0], dst = kBraidMoves[k][1], fr = 3 - src - dst;
  std::array<double, 5> q{};
  const double th1 = kHalfPi - p.lambda * s, th2 = kHalfPi * s, th3 = p.lambda * (1 - s);
  q[src] = th1;
  q[dst] = kHalfPi - th3;
  q[fr] = kHalfPi;
  q[3] = th2;
  q[4] = k;
  return q;
}

// site of leg l at distance d: a=1, Bx=2, e=3
inline int ysite(int l, int d) { return 3 * l + d; }

std::array<double, 3> leg_couplings(const std::vector<double>& q) {
  const int k = static_cast<int>(q[4]);
  const int src = kBraidMoves[k][0], dst = kBraidMoves[k][1];
  std::array<double, 3> c{0, 0, 0};
  c[src] = std::sin(q[3]);
  c[dst] = std::cos(q[3]);
  return c;
}

}  // namespace

YJunctionSpec braid_junction(const BraidProtocol& p, double t) {
  auto a = braid_params(p, t);
  std::vector<double> q(a.begin(), a.end());
  auto c = leg_couplings(q);
  YJunctionSpec y;
  for (int l = 0; l < 3; ++l) y.legs[l] = {c[l], std::cos(q[l]), std::sin(q[l])};
  y.defect_legs = {0, 1};
  y.center = Sub::B;
  return y;
}

ScheduledModel braid_model(const BraidProtocol& p) {
  p.validate();
  ScheduledModel m;
  m.dim = 10;
  m.schedule.duration = p.duration();
  m.schedule.dt = p.step();
  m.schedule.names = {"beta0", "beta1", "beta2", "phi", "move"};
  for (int j = 0; j < 5; ++j) m.schedule.curves.push_back([p, j](double t) { return braid_params(p, t)[j]; });
  m.angle_channels = {0, 1, 2, 3};
  for (int l = 0; l < 3; ++l) {
    m.edges.emplace_back(0, ysite(l, 1));
    m.edges.emplace_back(ysite(l, 1), ysite(l, 2));
    m.edges.emplace_back(ysite(l, 2), ysite(l, 3));
  }
  m.assemble = [](const std::vector<double>& q, Mat& H) {
    H.setZero();
    auto c = leg_couplings(q);
    for (int l = 0; l < 3; ++l) {
      const int a = ysite(l, 1), b = ysite(l, 2), e = ysite(l, 3);
      H(0, a) = H(a, 0) = c[l];
      H(a, b) = H(b, a) = std::cos(q[l]);
      H(b, e) = H(e, b) = std::sin(q[l]);
    }
  };
  return m;
}

DefectBasis braid_basis() {
  DefectBasis B;
  B.labels = {"eps=+1,L", "eps=+1,R", "eps=-1,L", "eps=-1,R", "eps=0,L", "eps=0,R"};
  const int e0 = ysite(0, 3), x0 = ysite(0, 2), a0 = ysite(0, 1);
  const int e1 = ysite(1, 3), x1 = ysite(1, 2), a1 = ysite(1, 1);
  B.states.resize(10, 6);
  B.states.col(0) = unit(10, {{e0, 1}, {x0, 1}});
  B.states.col(1) = unit(10, {{e1, 1}, {x1, 1}});
  B.states.col(2) = unit(10, {{e0, 1}, {x0, -1}});
  B.states.col(3) = unit(10, {{x1, 1}, {e1, -1}});
  B.states.col(4) = unit(10, {{a0, 1}});
  B.states.col(5) = unit(10, {{a1, 1}});
  return B;
}

namespace {

void fit_template(const Eigen::Matrix2cd& B, const Eigen::Matrix2d& M, double& phase, double& err) {
  std::complex<double> tr = (M.transpose().cast<std::complex<double>>() * B).trace();
  phase = std::arg(tr);
  err = (B - std::polar(1.0, phase) * M.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
}

}  // namespace

GateReport extract_gate(const CMat& finals, const DefectBasis& basis) {
  if (finals.rows() != basis.states.rows() || finals.cols() != 6)
    fail(ErrorKind::config, "gate extraction needs six final states over the basis sites");
  GateReport g;
  g.G = basis.states.adjoint() * finals;
  for (int j = 0; j < 6; ++j) {
    g.leakage.push_back(std::max(0.0, 1.0 - g.G.col(j).squaredNorm()));
    g.max_leakage = std::max(g.max_leakage, g.leakage.back());
  }
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i / 2 != j / 2) g.off_block = std::max(g.off_block, std::abs(g.G(i, j)));
  Eigen::Matrix2d Y, X;
  Y << 0, -1, 1, 0;
  X << 0, 1, 1, 0;
  const char* names[3] = {"eps=+1", "eps=-1", "eps=0"};
  for (int s = 0; s < 3; ++s) {
    SectorFit& f = g.sectors[s];
    f.name = names[s];
    f.block = g.G.block<2, 2>(2 * s, 2 * s);
    fit_template(f.block, Y, f.phase_y, f.err_y);
    fit_template(f.block, X, f.phase_x, f.err_x);
    f.tag = f.err_y < 1e-3 ? "Y" : f.err_x < 1e-3 ? "X" : "other";
  }
  return g;
}

GateReport run_braiding(const BraidProtocol& p, const NoiseSet* noise) {
  const ScheduledModel m = braid_model(p);
  const DefectBasis B = braid_basis();
  HamiltonianFn H = noise ? disordered(m, *noise) : m.fn();
  Trajectory tr = evolve(H, m.schedule.duration, p.step(), B.states);
  return extract_gate(tr.states.back(), B);
}

// ---------------------------------------------------------------- memory

double calibrate_tau(const Spectrum& on, int port, double u) {
  const int n = static_cast<int>(on.energies.size());
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = on.states(port, i) * on.states(port, i);
  auto pop = [&](double t) {
    std::complex<double> s = 0;
    for (int i = 0; i < n; ++i) s += w[i] * std::polar(1.0, -on.energies[i] * t);
    return std::norm(s);
  };
  const double t_end = 3 * kHalfPi / u;
  const int N = 6000;
  const double h = t_end / N;
  bool below = false;
  for (int i = 1; i < N; ++i) {
    const double t = i * h, pv = pop(t);
    if (pv < 0.5) below = true;
    if (below && pv <= pop(t - h) && pv <= pop(t + h)) {
      double a = t - h, b = t + h;  // golden-section refine
      const double gr = (std::sqrt(5.0) - 1) / 2;
      double c = b - gr * (b - a), d = a + gr * (b - a);
      for (int it = 0; it < 100; ++it) {
        if (pop(c) < pop(d)) b = d; else a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
      }
      return 0.5 * (a + b);
    }
  }
  fail(ErrorKind::protocol, "no Rabi minimum of the qubit population found; coupling too strong or off resonance");
}

MemoryRun::MemoryRun(const MemoryProtocol& p) {
  if (p.spec.qubits.empty()) fail(ErrorKind::config, "memory protocol needs a qubit");
  const QubitSpec& q = p.spec.qubits.front();
  const Lattice chain = build_chain(p.spec.chain);
  const Lattice on = attach_qubits(chain, {q});
  QubitSpec q_off = q;
  q_off.u = 0;
  const Lattice off = attach_qubits(chain, {q_off});
  port_ = chain.size();

  const Spectrum cs = diagonalize(chain);
  std::vector<double> d;
  for (int i = 0; i < cs.energies.size(); ++i) d.push_back(std::abs(cs.energies[i] - q.target_energy));
  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() >= 2) {
    std::vector<double> near;
    for (int i = 0; i < cs.energies.size(); ++i)
      if (d[i] <= sorted[1]) near.push_back(cs.energies[i]);
    split_ = near.size() >= 2 ? std::abs(near[1] - near[0]) : 0.0;
  }
  if (p.require_edge) {
    auto rep = detect_edge_states(cs, chain);
    bool found = false;
    for (const auto& s : rep.states)
      if (std::abs(s.energy - q.target_energy) < p.edge_tol) found = true;
    if (!found) {
      std::ostringstream os;
      os << "no edge state within " << p.edge_tol << " of target energy " << q.target_energy;
      fail(ErrorKind::missing_edge_state, os.str());
    }
  }

  const Spectrum son = diagonalize(on);
  off_ = diagonalize(off);
  tau_two_level_ = q.u > 0 ? kHalfPi / q.u : 0.0;
  tau_ = p.tau > 0 ? p.tau : (q.u > 0 ? calibrate_tau(son, port_, q.u) : 0.0);

  const int n = on.size();
  CVec fwd(n), bwd(n);
  for (int i = 0; i < n; ++i) {
    fwd[i] = son.states(port_, i) * std::polar(1.0, -son.energies[i] * tau_);
    bwd[i] = son.states(port_, i) * std::polar(1.0, son.energies[i] * tau_);
  }
  const CVec ucq = son.states.cast<std::complex<double>>() * fwd;   // U_c |q0>
  const CVec udq = son.states.cast<std::complex<double>>() * bwd;   // U_c^dag |q0>
  stored_ = std::norm(ucq[port_]);
  a_ = off_.states.transpose().cast<std::complex<double>>() * ucq;
  b_ = off_.states.transpose().cast<std::complex<double>>() * udq;
}

double MemoryRun::fidelity(double t) const {
  std::complex<double> s = 0;
  for (int i = 0; i < a_.size(); ++i) s += std::conj(b_[i]) * std::polar(1.0, -off_.energies[i] * t) * a_[i];
  return std::norm(s);
}

double MemoryRun::norm_defect(double t) const {
  CVec w(a_.size());
  for (int i = 0; i < a_.size(); ++i) w[i] = std::polar(1.0, -off_.energies[i] * t) * a_[i];
  return std::abs(w.norm() - 1.0);
}

MemoryResult run_memory(const MemoryProtocol& p) {
  for (double t : p.t_wait)
    if (t < 0) fail(ErrorKind::config, "t_wait must be non-negative");
  if (p.tau < 0) fail(ErrorKind::config, "tau must be positive (or 0 to calibrate)");
  MemoryRun run(p);
  MemoryResult r;
  r.tau = run.tau();
  r.tau_two_level = run.tau_two_level();
  r.stored_population = run.stored_population();
  r.split = run.split();
  r.t_wait = p.t_wait;
  for (double t : p.t_wait) {
    r.fidelity.push_back(run.fidelity(t));
    r.norm_defect = std::max(r.norm_defect, run.norm_defect(t));
  }
  return r;
}

Dip first_dip(const std::function<double(double)>& F, double t_max, int samples) {
  Dip d;
  bool in = false;
  for (int i = 0; i <= samples; ++i) {
    const double t = t_max * i / samples, f = F(t);
    if (f < 0.5) {
      in = true;
      d.found = true;
      if (f < d.f) {
        d.f = f;
        d.t = t;
      }
    } else if (in) {
      break;
    }
  }
  return d;
}

// ---------------------------------------------------------------- qudit memory

ChainSpec qudit_chain(const QuditMemorySpec& s) {
  ChainSpec c;
  c.order = 2;
  c.angles = s.angles;
  c.cells = (s.sites + 7) / 8;
  c.sites = s.sites;
  c.boundary = Boundary::open;
  return c;
}

std::vector<std::pair<int, double>> left_zero_mode_weights(bool printed) {
  const double a = std::tan(kPi / 6), b = std::tan(kPi / 4);
  return {{0, 1.0}, {2, -a}, {4, printed ? -a * b : a * b}, {6, -a * a * b}};
}

void check_defect_eigenstate(const Mat& H, const std::vector<std::pair<int, double>>& weights, double energy,
                             double tol) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(H.rows());
  for (auto [i, x] : weights) {
    if (i < 0 || i >= H.rows()) fail(ErrorKind::config, "attachment weight on a nonexistent site");
    w[i] = x;
  }
  if (w.norm() == 0) fail(ErrorKind::config, "attachment weights are all zero");
  w /= w.norm();
  const double r = (H * w - energy * w).norm();
  if (r > tol) {
    std::ostringstream os;
    os << "attachment weights are not an eigenstate of the defect block at energy " << energy << " (residual " << r
       << ")";
    fail(ErrorKind::config, os.str());
  }
}

std::vector<QuditChannel> qudit_channels(const QuditMemorySpec& s) {
  const Lattice chain = build_chain(qudit_chain(s));
  const Spectrum sp = diagonalize(chain);
  const auto rep = detect_edge_states(sp, chain);
  std::vector<QuditChannel> out;
  for (const auto& e : rep.states) {
    QuditChannel c;
    c.energy = e.energy;
    c.side = e.side;
    std::ostringstream os;
    os << (e.side == EdgeSide::left ? "L" : e.side == EdgeSide::right ? "R" : "H") << ":" << e.energy;
    c.label = os.str();
    for (int i = 0; i < chain.size(); ++i)
      if (std::abs(sp.states(i, e.index)) > 1e-12) c.weights.emplace_back(i, sp.states(i, e.index));
    out.push_back(c);
  }
  return out;
}

QuditChannel run_qudit_channel(const QuditMemorySpec& s, QuditChannel ch) {
  const ChainSpec cs = qudit_chain(s);
  check_defect_eigenstate(build_chain(cs).hamiltonian, ch.weights, ch.energy);
  MemoryProtocol p;
  p.spec.chain = cs;
  p.spec.qubits = {QubitSpec{s.k, s.u, ch.energy, ch.weights}};
  p.t_wait = s.t_wait;
  p.edge_tol = 1e-6;
  auto r = run_memory(p);
  ch.tau = r.tau;
  ch.fidelity = r.fidelity;
  return ch;
}

}  // namespace mk
