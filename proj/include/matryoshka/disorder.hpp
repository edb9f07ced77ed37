#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "matryoshka/dynamics.hpp"

namespace mk {

enum class DisorderKind { onsite, hopping, correlated_angle };
const char* kind_name(DisorderKind k);
DisorderKind parse_kind(const std::string& s);

struct DisorderSpec {
  DisorderKind kind = DisorderKind::onsite;
  double sigma = 0.0;
  int knots = 20;
  std::uint64_t seed = 1;
  int realizations = 1;
  void validate() const;
};

// Natural cubic spline through uniformly spaced knots on [0, T].
class NoiseCurve {
 public:
  NoiseCurve(double T, std::vector<double> values);
  ~NoiseCurve();
  NoiseCurve(NoiseCurve&&) noexcept;
  NoiseCurve& operator=(NoiseCurve&&) noexcept;
  NoiseCurve(const NoiseCurve&) = delete;
  NoiseCurve& operator=(const NoiseCurve&) = delete;

  double operator()(double t) const;
  double derivative(double t) const;
  const std::vector<double>& knot_times() const { return x_; }
  const std::vector<double>& knot_values() const { return y_; }

 private:
  struct Impl;
  std::vector<double> x_, y_;
  std::unique_ptr<Impl> impl_;
};

struct NoiseSet {
  DisorderKind kind = DisorderKind::onsite;
  std::vector<NoiseCurve> curves;
};

// Seed of realization r: counter-based, independent of execution order.
std::uint64_t realization_seed(std::uint64_t master, std::uint64_t r);

// count curves, knot offsets ~ N(0, sigma^2)
NoiseSet sample_noise(const DisorderSpec& spec, double T, int count, std::uint64_t stream_seed);
// number of curves the kind needs on this model
int noise_channels(const ScheduledModel& m, DisorderKind kind);
NoiseSet sample_noise(const DisorderSpec& spec, const ScheduledModel& m, std::uint64_t stream_seed);

// H(t) with the overlay; correlated-angle offsets enter before assembly.
void apply_disorder(const ScheduledModel& m, const NoiseSet& noise, double t, Mat& H);
HamiltonianFn disordered(const ScheduledModel& m, const NoiseSet& noise);

struct EnsembleProblem {
  ScheduledModel model;
  CVec psi0;
  CVec expected;  // ideal final state
  int sample_every = 100;
};

struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_fidelity;  // vs the disorder-free trajectory at each time
  std::vector<double> fidelity_stderr;
  std::vector<double> entropy;  // of the disorder-averaged density matrix
  double final_fidelity = 0;    // vs the ideal expected state
  double final_stderr = 0;
  double decay = 0;  // time average of 1 - mean_fidelity
  int n_effective = 0;
  int excluded = 0;
  DisorderKind kind = DisorderKind::onsite;
  double sigma = 0;
};

EnsembleStats run_ensemble(const EnsembleProblem& p, const DisorderSpec& d, int threads = 1);

}  // namespace mk
