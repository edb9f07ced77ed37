#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "matryoshka/lattice.hpp"

namespace mk {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using HamiltonianFn = std::function<void(double t, Mat& H)>;

struct Schedule {
  double duration = 0;
  double dt = 0;
  std::vector<std::string> names;
  std::vector<std::function<double(double)>> curves;

  int steps() const;
  double step() const { return duration / steps(); }  // dt snapped to divide T
  std::vector<double> values(double t) const;
  void validate() const;
};

// A schedule plus the recipe that turns its parameter values into H(t).
struct ScheduledModel {
  int dim = 0;
  Schedule schedule;
  std::vector<std::pair<int, int>> edges;  // structural graph edges, including momentarily zero ones
  std::vector<int> angle_channels;         // schedule curves that are angles
  std::function<void(const std::vector<double>& params, Mat& H)> assemble;

  void hamiltonian(double t, Mat& H) const;
  HamiltonianFn fn() const;
};

struct EvolveOptions {
  int sample_every = 0;  // steps between samples; 0 keeps only t=0 and t=T
  double norm_tol = 1e-6;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CMat> states;  // one column per evolved state
  double max_norm_drift = 0;
};

// Exponential midpoint: psi <- V exp(-i E dt) V^T psi with (E, V) from H(t + dt/2).
Trajectory evolve(const HamiltonianFn& H, double T, double dt, const CMat& psi0, const EvolveOptions& opt = {});
Trajectory evolve(const ScheduledModel& m, const CMat& psi0, const EvolveOptions& opt = {});

using HermitianFn = std::function<void(double t, CMat& H)>;
Trajectory evolve_hermitian(const HermitianFn& H, double T, double dt, const CMat& psi0,
                            const EvolveOptions& opt = {});

double fidelity(const CVec& a, const CVec& b);
// fidelity and the phase that carries b onto a: <a|b> = sqrt(F) e^{i phase}
std::complex<double> overlap(const CVec& a, const CVec& b);

CMat average_density(const std::vector<CVec>& states);
double von_neumann_entropy(const CMat& rho);
double ensemble_entropy(const std::vector<CVec>& states);

struct Coupling {
  Mat D;
  Eigen::VectorXd energies;
  bool degenerate = false;  // some adjacent gap below 1e-10: gauge ambiguous
};
Coupling nonadiabatic_coupling(const HamiltonianFn& H, double t, double dt);

Eigen::VectorXd gaps_at(const HamiltonianFn& H, double t);
struct MinGap {
  std::vector<double> gaps;  // per adjacent pair
  std::vector<double> at;    // time of each minimum
};
MinGap min_gap(const HamiltonianFn& H, double T, int samples);

using Vec3 = Eigen::Vector3d;
struct BlochTrajectory {
  std::vector<double> times;
  std::vector<Vec3> r;
};
// dr/dt = n(t) x r, stepped by exact rotations about n at the midpoint.
BlochTrajectory bloch_evolve(const std::function<Vec3(double)>& n, const Vec3& r0, double T, double dt,
                             int sample_every = 1);
Vec3 bloch_vector(const CVec& psi);  // <sigma> of a two-component state

}  // namespace mk
