// Acceptance suite: one PASS/FAIL line per criterion, oracles computed here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "matryoshka/disorder.hpp"
#include "matryoshka/dynamics.hpp"
#include "matryoshka/lattice.hpp"
#include "matryoshka/protocols.hpp"
#include "matryoshka/spectral.hpp"

using namespace mk;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

const double kPhi = std::asin(0.588);
const double kT0 = 0.9 / std::sqrt(2.0), kT1 = 0.8 / std::sqrt(2.0);

int failures = 0;

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

void report(int id, const std::string& name, bool ok, double secs, double budget, const std::string& detail) {
  const bool in_time = secs <= budget;
  if (!ok || !in_time) ++failures;
  std::printf("%s  C%-2d %s  [%.2f s / %.0f s budget]\n      %s\n", ok && in_time ? "PASS" : "FAIL", id, name.c_str(),
              secs, budget, detail.c_str());
  if (!in_time) std::printf("      over runtime budget\n");
  std::fflush(stdout);
}

void note(const std::string& s) {
  std::printf("      info: %s\n", s.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// sin/cos chain oracle: bond b carries scale * (sin, cos)(angles[b/2 mod M])
double bond(const std::vector<double>& angles, double scale, int b) {
  const double a = angles[(b / 2) % angles.size()];
  return scale * (b % 2 ? std::cos(a) : std::sin(a));
}

Mat chain_oracle(const std::vector<double>& angles, double scale, int n, bool ring) {
  Mat H = Mat::Zero(n, n);
  for (int b = 0; b + 1 < n || (ring && b < n); ++b) {
    H(b, (b + 1) % n) += bond(angles, scale, b);
    H((b + 1) % n, b) += bond(angles, scale, b);
  }
  return H;
}

// all 2^(P+1) nested radicals at momentum k
std::vector<double> radicals(double phi, const std::vector<double>& scales, double k) {
  const double e0 = std::sqrt(1 + std::sin(2 * phi) * std::cos(k));
  std::vector<double> e{-e0, e0};
  for (double t : scales) {
    std::vector<double> nx;
    for (double x : e) {
      nx.push_back(std::sqrt(1 + t * x));
      nx.push_back(-std::sqrt(1 + t * x));
    }
    e = nx;
  }
  std::sort(e.begin(), e.end());
  return e;
}

// best e^{ia} M fit to a 2x2 block: returns max-entry error
double template_error(const Eigen::Matrix2cd& B, const Eigen::Matrix2d& M) {
  cd s = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += M(i, j) * B(i, j);
  const cd ph = std::polar(1.0, std::arg(s));
  double e = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(B(i, j) - ph * M(i, j)));
  return e;
}

CVec unitv(int n, std::initializer_list<std::pair<int, double>> a) {
  CVec v = CVec::Zero(n);
  for (auto [i, x] : a) v[i] = x;
  return v / v.norm();
}

// ---------------------------------------------------------------------------

void c1() {
  Clock c;
  auto l1 = lift_angles({kPhi}, kT0);
  auto l2 = lift_angles(l1.angles, kT1);
  struct Level {
    int order;
    std::vector<double> child, parent;
    double t;
  };
  double cross = 0, parent_err = 0;
  const int N = 8;
  for (const Level& L : {Level{1, l1.angles, {kPhi}, kT0}, Level{2, l2.angles, l1.angles, kT1}}) {
    const int M = static_cast<int>(L.child.size()), np = M * N;
    for (bool ring : {false, true}) {
      ChainSpec s{L.order, L.child, N, 1.0, ring ? Boundary::periodic : Boundary::open};
      if (!ring) s.sites = 2 * M * N + 1;
      auto sq = square_hamiltonian(build_chain(s));
      cross = std::max(cross, sq.cross_norm);
      const Mat parent = chain_oracle(L.parent, L.t, np, ring);
      parent_err = std::max(parent_err, (sq.HB - Mat::Identity(np, np) - parent).cwiseAbs().maxCoeff());
    }
  }
  report(1, "square-root structure (P=1, P=2 tower parameters)", cross <= 1e-12 && parent_err <= 1e-10,
         c.seconds(), 1,
         fmt("max off-block |H^2| = %.2e (tol 1e-12), max |H_B - I - H_parent| = %.2e (tol 1e-10)", cross,
             parent_err));
}

void c2() {
  Clock c;
  const std::vector<std::vector<double>> scales{{}, {kT0}, {kT0, kT1}};
  const auto ks = uniform_k_grid(64);
  double worst = 0;
  bool counts = true;
  std::string cnt;
  for (int P = 0; P <= 2; ++P) {
    auto tw = build_tower(kPhi, scales[P], 1);
    auto bands = bloch_bands(tw.levels.back(), ks);
    counts = counts && bands.size() == 64;
    for (const auto& b : bands) {
      auto want = radicals(kPhi, scales[P], b.k);
      counts = counts && b.energies.size() == static_cast<int>(want.size()) && want.size() == (2u << P);
      for (size_t i = 0; i < want.size() && i < static_cast<size_t>(b.energies.size()); ++i)
        worst = std::max(worst, std::abs(b.energies[i] - want[i]));
    }
    cnt += (P ? ", " : "") + std::to_string(bands.front().energies.size());
  }
  report(2, "Bloch dispersion vs nested radicals, P = 0, 1, 2", worst <= 1e-8 && counts, c.seconds(), 1,
         fmt("max |E_num - E_closed| over 64 k = %.2e (tol 1e-8); band counts %s (want 2, 4, 8)", worst,
             cnt.c_str()));
}

void c3() {
  Clock c;
  // the dimerized parent (pi/2, 0) lifted once with scale t^(0)
  auto lr = lift_angles({pi / 2, 0.0}, kT0);
  ChainSpec s{2, lr.angles, 40};
  auto lat = build_chain(s);
  auto sp = diagonalize(lat);
  const double r = std::sqrt(1 + kT0), q = std::sqrt(1 - kT0);
  const std::vector<double> want{-r, -1, -q, q, 1, r};
  double worst = 0;
  for (double w : want) {
    double best = 1e9;
    for (int i = 0; i < sp.energies.size(); ++i) best = std::min(best, std::abs(sp.energies[i] - w));
    worst = std::max(worst, best);
  }
  auto rep = detect_edge_states(sp, lat);
  // +-sqrt(1 +- t0) must be detected in-gap edge states
  int in_gap = 0;
  for (const auto& e : rep.states)
    for (double w : {-r, -q, q, r}) in_gap += std::abs(e.energy - w) < 1e-3;
  // zero bonds of the exact lift leave isolated unit dimers: a flat bulk level at +-1
  int at_one = 0;
  for (int i = 0; i < sp.energies.size(); ++i) at_one += std::abs(sp.energies[i] - 1) < 1e-9;
  report(3, "OBC edge energies {+-1, +-sqrt(1 +- t0)} on a 40-cell lifted dimerized chain",
         worst <= 1e-3 && in_gap == 4, c.seconds(), 1,
         fmt("max distance to nearest eigenvalue = %.2e (tol 1e-3); +-sqrt(1 +- t0) detected as edge states: %d/4 "
             "(lifted angles %.6f %.6f %.6f %.6f)",
             worst, in_gap, lr.angles[0], lr.angles[1], lr.angles[2], lr.angles[3]));
  note(fmt("E = +1 has multiplicity %d: it coincides with the flat isolated-dimer band, so it is present but not "
           "separated by a gap; %d edge states detected in total",
           at_one, rep.count()));
}

void c4() {
  Clock c;
  TransferProtocol p;  // gamma 0, lambda pi/3, T 200, dt T/4000
  auto r = run_transfer(p);
  const double T = p.T;
  // oracle states, 0-based sites of the 7-site chain
  const CVec fin_p = unitv(7, {{5, 1}, {6, 1}}), fin_m = unitv(7, {{5, 1}, {6, -1}}), fin_0 = unitv(7, {{4, 1}});
  const cd ov_p = fin_p.dot(r.channels[0].final_state) * std::polar(1.0, T);
  const cd ov_m = fin_m.dot(r.channels[1].final_state) * std::polar(1.0, -T);
  const cd ov_0 = fin_0.dot(r.channels[2].final_state);
  const double f_p = std::norm(ov_p), f_m = std::norm(ov_m), f_0 = std::norm(ov_0);
  // sign pattern: eps=+1 -> -, eps=-1 -> +, eps=0 -> -
  const bool signs = ov_p.real() < -0.99 && ov_m.real() > 0.99 && ov_0.real() < -0.99;
  const bool fid = f_p >= 0.999 && f_m >= 0.999 && f_0 >= 0.999;

  std::vector<double> g = r.gaps.gaps;
  // distinct pair minima, sorted descending, compared with the three reference values
  std::vector<double> distinct;
  for (double x : g)
    if (std::none_of(distinct.begin(), distinct.end(), [&](double d) { return std::abs(d - x) < 1e-6; }))
      distinct.push_back(x);
  std::sort(distinct.rbegin(), distinct.rend());
  const double ref_gaps[3] = {0.786, 0.214, 0.176};
  double gap_err = distinct.size() == 3 ? 0 : 1;
  for (size_t i = 0; i < 3 && i < distinct.size(); ++i) gap_err = std::max(gap_err, std::abs(distinct[i] - ref_gaps[i]));
  std::string gs;
  for (double x : g) gs += fmt("%.4f ", x);
  report(4, "adiabatic transfer: fidelity, sign pattern and minimum gaps", fid && signs && gap_err <= 2e-3,
         c.seconds(), 10,
         fmt("phase-adjusted F (+1, -1, 0) = %.6f %.6f %.6f (tol 0.999); signs %+.4f %+.4f %+.4f (want -, +, -); "
             "pair min gaps = %s(reference 0.786 0.214 0.176, max dev %.3f, tol 2e-3)",
             f_p, f_m, f_0, ov_p.real(), ov_m.real(), ov_0.real(), gs.c_str(), gap_err));

  TransferProtocol q;
  q.lambda = pi / 4;
  auto m = transfer_model(q);
  auto mg = min_gap(m.fn(), q.T, 2000);
  auto mid = gaps_at(m.fn(), q.T / 2);
  std::string a, b;
  for (double x : mg.gaps) a += fmt("%.4f ", x);
  for (int i = 0; i < mid.size(); ++i) b += fmt("%.4f ", mid[i]);
  note("lambda = pi/4: pair minima " + a + "| gaps at T/2 " + b);
}

void c5() {
  Clock c;
  BraidProtocol p;  // T_leg 200
  auto g = run_braiding(p);
  Eigen::Matrix2d Y, X;
  Y << 0, -1, 1, 0;
  X << 0, 1, 1, 0;
  auto blk = [&](int s) { return Eigen::Matrix2cd(g.G.block<2, 2>(2 * s, 2 * s)); };
  const double ey_p = template_error(blk(0), Y), ex_m = template_error(blk(1), X), ey_m = template_error(blk(1), Y);
  double off = 0, leak = 0;
  for (int i = 0; i < 6; ++i) {
    double col = 0;
    for (int j = 0; j < 6; ++j) {
      if (i / 2 != j / 2) off = std::max(off, std::abs(g.G(i, j)));
      col += std::norm(g.G(j, i));
    }
    leak = std::max(leak, 1 - col);
  }
  report(5, "braiding gate: Y in eps=+1, X in eps=-1, leakage", ey_p <= 1e-3 && ex_m <= 1e-3 && off <= 1e-3,
         c.seconds(), 60,
         fmt("eps=+1 Y-fit err %.2e, eps=-1 X-fit err %.2e (Y-fit err %.2e), tol 1e-3; off-block %.2e, column "
             "leakage %.2e (tol 1e-3)",
             ey_p, ex_m, ey_m, off, leak));
  const auto b0 = blk(2);
  note(fmt("eps=0 block [[%.4f%+.4fi, %.4f%+.4fi], [%.4f%+.4fi, %.4f%+.4fi]], Y-fit err %.2e, X-fit err %.2e "
           "(printed (0 -1; 1 1) is not unitary)",
           b0(0, 0).real(), b0(0, 0).imag(), b0(0, 1).real(), b0(0, 1).imag(), b0(1, 0).real(), b0(1, 0).imag(),
           b0(1, 1).real(), b0(1, 1).imag(), template_error(b0, Y), template_error(b0, X)));
  for (double TL : {400.0, 800.0}) {
    BraidProtocol q;
    q.T_leg = TL;
    auto h = run_braiding(q);
    note(fmt("T_leg = %.0f: eps=+1 Y-fit err %.2e, eps=-1 X-fit err %.2e, off-block %.2e", TL, h.sectors[0].err_y,
             h.sectors[1].err_x, h.off_block));
  }
}

void c6_c7() {
  const int threads = std::max(1u, std::thread::hardware_concurrency());
  Clock c;
  BraidProtocol bp;
  auto B = braid_basis();
  const CVec psi0 = (B.states.col(0) + B.states.col(1)) / std::sqrt(2.0);
  const CVec expected = (B.states.col(1) - B.states.col(0)) / std::sqrt(2.0);
  EnsembleProblem prob{braid_model(bp), psi0, expected, 100};
  DisorderSpec d;
  d.sigma = 0.1;
  d.realizations = 200;
  d.seed = 20240611;
  std::vector<EnsembleStats> st;
  for (auto k : {DisorderKind::onsite, DisorderKind::hopping, DisorderKind::correlated_angle}) {
    d.kind = k;
    st.push_back(run_ensemble(prob, d, threads));
  }
  const auto &on = st[0], &hop = st[1], &cor = st[2];
  auto beats = [](const EnsembleStats& a, const EnsembleStats& b) {
    return a.final_fidelity - b.final_fidelity > -2 * std::hypot(a.final_stderr, b.final_stderr);
  };
  const bool order = beats(cor, on) && beats(cor, hop);
  const bool fastest = hop.decay > on.decay && hop.decay > cor.decay;
  const bool floor = cor.final_fidelity >= 0.9 - 2 * cor.final_stderr;
  std::string detail;
  for (const auto& s : st)
    detail += fmt("%s F=%.4f+-%.4f decay=%.4f n=%d; ", kind_name(s.kind), s.final_fidelity, s.final_stderr, s.decay,
                  s.n_effective);
  report(6, "disorder ordering on the braid, sigma=0.1, N=200 per kind", order && fastest && floor, c.seconds(), 600,
         detail + "want F(corr) > F(onsite), F(hop) and F(corr) >= 0.9 within 2 SE, hopping largest decay");

  Clock c7;
  TransferProtocol tp;
  auto ch = transfer_channels(tp).front();
  EnsembleProblem tprob{transfer_model(tp), ch.psi0, ch.expected, 40};
  DisorderSpec e;
  e.kind = DisorderKind::onsite;
  e.realizations = 200;
  e.seed = 7;
  auto late = [](const EnsembleStats& s) {
    const size_t n = s.entropy.size(), from = n - std::max<size_t>(1, n / 10);
    double a = 0;
    for (size_t i = from; i < n; ++i) a += s.entropy[i];
    return a / (n - from);
  };
  e.sigma = 0.5;
  auto s05 = run_ensemble(tprob, e, threads);
  const double S = late(s05), ln7 = std::log(7.0);
  const double secs7 = c7.seconds();
  e.sigma = 1.0;
  auto s10 = run_ensemble(tprob, e, threads);
  report(7, "entropy ceiling ln 7, on-site sigma=0.5, 7-site transfer, N=200", std::abs(S - ln7) <= 0.05 * ln7,
         secs7, 600,
         fmt("late-time S = %.4f, final S = %.4f vs ln 7 = %.4f (5%% band: >= %.4f)", S, s05.entropy.back(), ln7,
             0.95 * ln7));
  note(fmt("sigma = 1.0: late-time S = %.4f (%.1f%% of ln 7)", late(s10), 100 * late(s10) / ln7));
}

void c8() {
  Clock c;
  const double th = 5 * pi / 12;
  ChainSpec hyb{1, {th, pi / 2 - th}, 6};
  hyb.sites = 21;
  // splitting of the two levels nearest +1
  auto e = diagonalize(build_chain(hyb)).energies;
  std::vector<double> d(e.data(), e.data() + e.size());
  std::sort(d.begin(), d.end(), [](double a, double b) { return std::abs(a - 1) < std::abs(b - 1); });
  const double split = std::abs(d[1] - d[0]);
  const bool split_ok = std::abs(split - 1.77e-6) <= 0.2 * 1.77e-6;

  MemoryProtocol dim;
  dim.spec.chain = ChainSpec{1, {pi / 2, 0.0}, 6};
  dim.spec.chain.sites = 21;
  dim.spec.qubits = {QubitSpec{0.0, 0.05, 1.0, {{0, 1.0}, {1, 1.0}}}};
  dim.t_wait = {0, 1e2, 1e4, 1e6};
  auto rd = run_memory(dim);
  const double fmin = *std::min_element(rd.fidelity.begin(), rd.fidelity.end());

  MemoryProtocol h = dim;
  h.spec.chain = hyb;
  MemoryRun run(h);
  const double want = pi / (2 * split);
  auto dip = first_dip([&](double t) { return run.fidelity(t); }, 4 * want, 40000);
  const bool half_ok = dip.found && std::abs(dip.t - want) <= 0.1 * want;
  // small fast oscillation on top of the slow beat
  double fast_min = 1;
  for (int i = 0; i <= 4000; ++i) fast_min = std::min(fast_min, run.fidelity(i * 0.25));
  report(8, "memory: splitting, dimerized retrieval, hybridized half-period", split_ok && fmin >= 0.999 && half_ok,
         c.seconds(), 60,
         fmt("split = %.4e (reference 1.77e-6, tol 20%%); dimerized min F over t_wait {0,1e2,1e4,1e6} = %.6f (tol "
             "0.999); first dip at %.4e vs pi/(2 split) = %.4e (ratio %.3f, tol 10%%)",
             split, fmin, dip.t, want, dip.t / want));
  note(fmt("calibrated tau = %.4f (two-level pi/(2u) = %.4f); pi/split = %.4e; fast-oscillation min F over t<1000 = "
           "%.5f; max norm defect %.1e",
           run.tau(), run.tau_two_level(), pi / split, fast_min, rd.norm_defect));
}

void c9() {
  Clock c;
  QuditMemorySpec s;
  s.sites = 80;
  const int n80 = static_cast<int>(qudit_channels(s).size());
  QuditChannel left0;
  left0.energy = 0;
  left0.weights = left_zero_mode_weights();
  auto r = run_qudit_channel(s, left0);
  const double fmin = *std::min_element(r.fidelity.begin(), r.fidelity.end());
  report(9, "qudit memory: 14 edge states on the 80-site chain, eps=0 left channel F >= 0.99",
         n80 == 14 && fmin >= 0.99, c.seconds(), 120,
         fmt("80 sites: %d edge states (want 14); eps=0 left channel u=0.01 tau=%.3f min F over t_wait {0,50,500} "
             "= %.6f (tol 0.99)",
             n80, r.tau, fmin));
  s.sites = 78;
  const int n78 = static_cast<int>(qudit_channels(s).size());
  auto r78 = run_qudit_channel(s, left0);
  note(fmt("78 sites (7 + 8*8 + 7): %d edge states; eps=0 left channel min F = %.6f", n78,
           *std::min_element(r78.fidelity.begin(), r78.fidelity.end())));
}

void c10() {
  Clock c;
  HamiltonianFn drive = [](double t, Mat& H) {
    H = Mat::Zero(2, 2);
    H(0, 1) = H(1, 0) = 1 + 0.5 * std::sin(t);
    H(0, 0) = 0.3 * std::cos(t);
    H(1, 1) = -0.3 * std::cos(t);
  };
  CMat psi0 = CMat::Zero(2, 1);
  psi0(0, 0) = 1;
  const double T = 10;
  auto ref = evolve(drive, T, T / 64000, psi0).states.back();
  const double e1 = (evolve(drive, T, T / 500, psi0).states.back() - ref).norm();
  const double e2 = (evolve(drive, T, T / 1000, psi0).states.back() - ref).norm();
  const double ratio = e1 / e2;

  auto n = [](double t) { return Vec3(0.3, 0.2 * std::sin(t), 1.5 - 0.3 * t); };
  HermitianFn Hc = [&](double t, CMat& h) {
    const Vec3 v = n(t);
    h.resize(2, 2);
    h << cd(v.z(), 0), cd(v.x(), -v.y()), cd(v.x(), v.y()), cd(-v.z(), 0);
    h *= 0.5;
  };
  CMat q0(2, 1);
  q0 << cd(std::cos(0.3), 0), cd(std::sin(0.3) * std::cos(0.4), std::sin(0.3) * std::sin(0.4));
  EvolveOptions o;
  o.sample_every = 100;
  auto tr = evolve_hermitian(Hc, T, 1e-3, q0, o);
  // Bloch vector oracle from amplitudes: <sigma_x>, <sigma_y>, <sigma_z>
  auto rvec = [](const CVec& v) {
    const cd x = std::conj(v[0]) * v[1];
    return Vec3(2 * x.real(), 2 * x.imag(), std::norm(v[0]) - std::norm(v[1]));
  };
  auto bt = bloch_evolve(n, rvec(q0.col(0)), T, 1e-3, 100);
  double bloch = 0;
  for (size_t i = 0; i < bt.r.size() && i < tr.states.size(); ++i)
    bloch = std::max(bloch, (bt.r[i] - rvec(tr.states[i].col(0))).norm());
  const bool aligned = bt.r.size() == tr.states.size();

  auto long_run = evolve(drive, 100, 0.01, psi0);  // 1e4 steps
  CVec fin = long_run.states.back().col(0);
  const double drift = std::max(long_run.max_norm_drift, std::abs(fin.norm() - 1));

  auto Dm = nonadiabatic_coupling([](double, Mat& H) { H = chain_oracle({0.4, 1.1}, 1.0, 7, false); }, 3.0, 1e-4);
  const double dmax = Dm.D.cwiseAbs().maxCoeff();

  report(10, "dynamics: order, Bloch equivalence, unitarity, static D",
         std::abs(ratio - 4) <= 0.4 && aligned && bloch <= 1e-6 && drift <= 1e-9 && dmax == 0, c.seconds(), 10,
         fmt("error ratio dt -> dt/2 = %.3f (want 4 +- 10%%); Bloch vs Schroedinger max |dr| = %.2e (tol 1e-6); norm "
             "drift over 1e4 steps = %.2e (tol 1e-9); static max |D| = %.1e (want 0)",
             ratio, bloch, drift, dmax));
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  const std::vector<std::function<void()>> all{c1, c2, c3, c4, c5, c6_c7, c8, c9, c10};
  for (const auto& f : all) {
    try {
      f();
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL  exception: %s\n", e.what());
    }
  }
  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
