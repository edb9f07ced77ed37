#include "matryoshka/disorder.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "matryoshka/errors.hpp"

namespace mk {

const char* kind_name(DisorderKind k) {
  switch (k) {
    case DisorderKind::onsite: return "onsite";
    case DisorderKind::hopping: return "hopping";
    case DisorderKind::correlated_angle: return "correlated_angle";
  }
  return "?";
}

DisorderKind parse_kind(const std::string& s) {
  if (s == "onsite") return DisorderKind::onsite;
  if (s == "hopping") return DisorderKind::hopping;
  if (s == "correlated_angle" || s == "angle") return DisorderKind::correlated_angle;
  fail(ErrorKind::config, "unknown disorder kind '" + s + "'");
}

void DisorderSpec::validate() const {
  if (!(sigma >= 0)) fail(ErrorKind::config, "disorder sigma must be >= 0");
  if (knots < 2) fail(ErrorKind::config, "disorder needs at least 2 knots");
  if (realizations < 1) fail(ErrorKind::config, "disorder needs at least one realization");
}

struct NoiseCurve::Impl {
  gsl_spline* spline = nullptr;
  ~Impl() {
    if (spline) gsl_spline_free(spline);
  }
};

NoiseCurve::NoiseCurve(double T, std::vector<double> values) : y_(std::move(values)), impl_(new Impl) {
  const int k = static_cast<int>(y_.size());
  if (k < 2 || !(T > 0)) fail(ErrorKind::config, "noise curve needs >= 2 knots on a positive interval");
  x_.resize(k);
  for (int i = 0; i < k; ++i) x_[i] = T * i / (k - 1);
  if (k >= 3) {
    impl_->spline = gsl_spline_alloc(gsl_interp_cspline, k);  // natural end conditions
    gsl_spline_init(impl_->spline, x_.data(), y_.data(), k);
  }
}

NoiseCurve::~NoiseCurve() = default;
NoiseCurve::NoiseCurve(NoiseCurve&&) noexcept = default;
NoiseCurve& NoiseCurve::operator=(NoiseCurve&&) noexcept = default;

double NoiseCurve::operator()(double t) const {
  t = std::clamp(t, x_.front(), x_.back());
  if (!impl_->spline) return y_[0] + (y_[1] - y_[0]) * (t - x_[0]) / (x_[1] - x_[0]);
  return gsl_spline_eval(impl_->spline, t, nullptr);
}

double NoiseCurve::derivative(double t) const {
  t = std::clamp(t, x_.front(), x_.back());
  if (!impl_->spline) return (y_[1] - y_[0]) / (x_[1] - x_[0]);
  return gsl_spline_eval_deriv(impl_->spline, t, nullptr);
}

std::uint64_t realization_seed(std::uint64_t master, std::uint64_t r) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ (r + 1) * 0xd1b54a32d192ed03ULL);
}

NoiseSet sample_noise(const DisorderSpec& spec, double T, int count, std::uint64_t stream_seed) {
  spec.validate();
  NoiseSet ns;
  ns.kind = spec.kind;
  std::mt19937_64 rng(stream_seed);
  std::normal_distribution<double> nd(0.0, spec.sigma > 0 ? spec.sigma : 1.0);
  for (int c = 0; c < count; ++c) {
    std::vector<double> v(spec.knots, 0.0);
    if (spec.sigma > 0)
      for (auto& x : v) x = nd(rng);
    ns.curves.emplace_back(T, std::move(v));
  }
  return ns;
}

int noise_channels(const ScheduledModel& m, DisorderKind kind) {
  switch (kind) {
    case DisorderKind::onsite: return m.dim;
    case DisorderKind::hopping: return static_cast<int>(m.edges.size());
    case DisorderKind::correlated_angle: return static_cast<int>(m.angle_channels.size());
  }
  return 0;
}

NoiseSet sample_noise(const DisorderSpec& spec, const ScheduledModel& m, std::uint64_t stream_seed) {
  return sample_noise(spec, m.schedule.duration, noise_channels(m, spec.kind), stream_seed);
}

void apply_disorder(const ScheduledModel& m, const NoiseSet& noise, double t, Mat& H) {
  if (static_cast<int>(noise.curves.size()) != noise_channels(m, noise.kind))
    fail(ErrorKind::config, std::string("curve count does not match the parameters of kind ") + kind_name(noise.kind));
  if (H.rows() != m.dim) H.resize(m.dim, m.dim);
  auto p = m.schedule.values(t);
  if (noise.kind == DisorderKind::correlated_angle)
    for (size_t c = 0; c < m.angle_channels.size(); ++c) p[m.angle_channels[c]] += noise.curves[c](t);
  m.assemble(p, H);
  if (noise.kind == DisorderKind::onsite)
    for (int i = 0; i < m.dim; ++i) H(i, i) += noise.curves[i](t);
  if (noise.kind == DisorderKind::hopping)
    for (size_t e = 0; e < m.edges.size(); ++e) {
      auto [i, j] = m.edges[e];
      const double d = noise.curves[e](t);
      H(i, j) += d;
      H(j, i) += d;
    }
}

HamiltonianFn disordered(const ScheduledModel& m, const NoiseSet& noise) {
  return [&m, &noise](double t, Mat& H) { apply_disorder(m, noise, t, H); };
}

EnsembleStats run_ensemble(const EnsembleProblem& p, const DisorderSpec& d, int threads) {
  d.validate();
  p.model.schedule.validate();
  EvolveOptions eo;
  eo.sample_every = p.sample_every;
  const CMat psi0 = p.psi0;
  const Trajectory ref = evolve(p.model, psi0, eo);
  const int S = static_cast<int>(ref.times.size());
  const int N = d.realizations;

  struct Result {
    bool ok = false;
    std::vector<CVec> states;
    std::vector<double> fid;
    double final_fid = 0;
  };
  std::vector<Result> res(N);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r; (r = next.fetch_add(1)) < N;) {
      NoiseSet ns = sample_noise(d, p.model, realization_seed(d.seed, r));
      try {
        Trajectory tr = evolve(disordered(p.model, ns), p.model.schedule.duration, p.model.schedule.dt, psi0, eo);
        Result& out = res[r];
        for (int s = 0; s < S; ++s) {
          CVec v = tr.states[s].col(0);
          out.fid.push_back(fidelity(ref.states[s].col(0), v));
          out.states.push_back(std::move(v));
        }
        out.final_fid = fidelity(p.expected, out.states.back());
        out.ok = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::integrator) throw;
      }
    }
  };
  const int nt = std::max(1, std::min(threads, N));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // order-fixed reduction
  EnsembleStats st;
  st.kind = d.kind;
  st.sigma = d.sigma;
  st.times = ref.times;
  std::vector<int> good;
  for (int r = 0; r < N; ++r)
    if (res[r].ok) good.push_back(r);
  st.n_effective = static_cast<int>(good.size());
  st.excluded = N - st.n_effective;
  if (good.empty()) fail(ErrorKind::integrator, "every realization failed the norm check");
  const double ng = static_cast<double>(good.size());
  for (int s = 0; s < S; ++s) {
    double sum = 0, sq = 0;
    std::vector<CVec> states;
    for (int r : good) {
      sum += res[r].fid[s];
      sq += res[r].fid[s] * res[r].fid[s];
      states.push_back(res[r].states[s]);
    }
    const double mean = sum / ng;
    const double var = ng > 1 ? std::max(0.0, (sq - ng * mean * mean) / (ng - 1)) : 0.0;
    st.mean_fidelity.push_back(mean);
    st.fidelity_stderr.push_back(std::sqrt(var / ng));
    st.entropy.push_back(ensemble_entropy(states));
  }
  double sum = 0, sq = 0;
  for (int r : good) {
    sum += res[r].final_fid;
    sq += res[r].final_fid * res[r].final_fid;
  }
  st.final_fidelity = sum / ng;
  st.final_stderr = ng > 1 ? std::sqrt(std::max(0.0, (sq - ng * st.final_fidelity * st.final_fidelity) / (ng - 1)) / ng) : 0;
  double dec = 0;
  for (double f : st.mean_fidelity) dec += 1.0 - f;
  st.decay = dec / S;
  return st;
}

}  // namespace mk
