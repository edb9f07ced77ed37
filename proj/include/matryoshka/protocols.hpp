#pragma once

#include <array>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "matryoshka/disorder.hpp"
#include "matryoshka/dynamics.hpp"
#include "matryoshka/lattice.hpp"
#include "matryoshka/spectral.hpp"

namespace mk {

enum class Ramp { linear, smooth };
double ramp(Ramp r, double x);  // x clamped to [0,1]; smooth is the quintic smootherstep
Ramp parse_ramp(const std::string& s);

// ---------------------------------------------------------------- transfer

struct TransferProtocol {
  int order = 1;  // 1: seven-site square-root chain, 0: three-site parent
  double lambda = std::numbers::pi / 3;
  double gamma = 0.0;  // 0 or pi
  double T = 200.0;
  double dt = 0.0;  // 0 means T/4000
  Ramp ramp = Ramp::linear;
  bool from_left = true;
  void validate() const;
  double step() const { return dt > 0 ? dt : T / 4000; }
};

// angles (th1, th2, th3) at time t
std::array<double, 3> transfer_angles(const TransferProtocol& p, double t);
ScheduledModel transfer_model(const TransferProtocol& p);

struct TransferChannel {
  std::string name;
  double energy = 0;
  CVec psi0, expected;
  double expected_sign = 0;  // predicted <expected|psi(T)> e^{i energy T}; 0 when not predicted
};
std::vector<TransferChannel> transfer_channels(const TransferProtocol& p);

struct ChannelResult {
  TransferChannel channel;
  CVec final_state;
  double fidelity = 0;
  std::complex<double> overlap;  // <expected|psi(T)>
  std::complex<double> sign;     // overlap with the dynamical phase e^{-i energy T} removed
};

struct TransferResult {
  std::vector<ChannelResult> channels;
  MinGap gaps;
  bool adiabatic_warning = false;
  Trajectory trajectory;  // all channels as columns
};

struct TransferOptions {
  const NoiseSet* noise = nullptr;
  int sample_every = 0;
  int gap_samples = 2000;
  double adiabatic_threshold = 10.0;  // min_gap * T below this flags a warning
};
TransferResult run_transfer(const TransferProtocol& p, const TransferOptions& opt = {});

// ---------------------------------------------------------------- braiding

struct BraidProtocol {
  double lambda = std::numbers::pi / 3;
  double T_leg = 200.0;
  double dt = 0.0;  // 0 means T_leg/4000
  Ramp ramp = Ramp::smooth;
  int moves = 3;
  bool frozen = false;  // hold the initial Hamiltonian for the whole run
  void validate() const;
  double step() const { return dt > 0 ? dt : T_leg / 4000; }
  double duration() const { return T_leg * moves; }
};

// (source leg, destination leg) of each move
constexpr std::array<std::array<int, 2>, 3> kBraidMoves{{{0, 2}, {1, 0}, {2, 1}}};

YJunctionSpec braid_junction(const BraidProtocol& p, double t);
ScheduledModel braid_model(const BraidProtocol& p);

struct DefectBasis {
  std::vector<std::string> labels;
  CMat states;  // sites x 6: eps=+1 L,R; eps=-1 L,R; eps=0 L,R
};
DefectBasis braid_basis();

struct SectorFit {
  std::string name;
  Eigen::Matrix2cd block;
  double phase_y = 0, err_y = 0;  // best e^{i a} (0 -1; 1 0)
  double phase_x = 0, err_x = 0;  // best e^{i a} (0 1; 1 0)
  std::string tag;                // "Y", "X" or "other" at 1e-3
};

struct GateReport {
  CMat G;  // <i|U|j>
  std::vector<double> leakage;
  double max_leakage = 0;
  double off_block = 0;  // largest |G_ij| across different sectors
  std::array<SectorFit, 3> sectors;
};
GateReport extract_gate(const CMat& finals, const DefectBasis& basis);
GateReport run_braiding(const BraidProtocol& p, const NoiseSet* noise = nullptr);

// ---------------------------------------------------------------- memory

struct MemoryProtocol {
  MemorySpec spec;    // first qubit is used
  double tau = 0.0;   // 0: calibrate
  std::vector<double> t_wait{0.0};
  double edge_tol = 1e-3;
  bool require_edge = true;
};

// Store, wait, retrieve with square coupling pulses, all via exact static propagators.
class MemoryRun {
 public:
  explicit MemoryRun(const MemoryProtocol& p);
  double fidelity(double t_wait) const;
  double tau() const { return tau_; }
  double tau_two_level() const { return tau_two_level_; }
  double stored_population() const { return stored_; }  // port population after the store pulse
  double split() const { return split_; }               // chain level splitting nearest the target
  double norm_defect(double t_wait) const;

 private:
  int port_ = 0;
  double tau_ = 0, tau_two_level_ = 0, stored_ = 0, split_ = 0;
  Spectrum off_;  // decoupled system
  CVec a_, b_;    // U_c|q0> and U_c^dag|q0> in the decoupled eigenbasis
};

struct MemoryResult {
  double tau = 0, tau_two_level = 0, stored_population = 0, split = 0, norm_defect = 0;
  std::vector<double> t_wait, fidelity;
};
MemoryResult run_memory(const MemoryProtocol& p);

// First time the fidelity dips below 0.5 and the location of that dip's minimum.
struct Dip {
  double t = 0, f = 1;
  bool found = false;
};
Dip first_dip(const std::function<double(double)>& F, double t_max, int samples);

double calibrate_tau(const Spectrum& on, int port, double u);

// ---------------------------------------------------------------- qudit memory

struct QuditMemorySpec {
  std::vector<double> angles{std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 6, 0.0};
  int sites = 78;
  double u = 0.01;
  double k = 0.0;
  std::vector<double> t_wait{0.0, 50.0, 500.0};
};

struct QuditChannel {
  std::string label;
  double energy = 0;
  EdgeSide side = EdgeSide::left;
  std::vector<std::pair<int, double>> weights;
  double tau = 0;
  std::vector<double> fidelity;
};

ChainSpec qudit_chain(const QuditMemorySpec& s);
// Zero mode of the seven-site left defect; printed=true gives the variant with the flipped fifth entry.
std::vector<std::pair<int, double>> left_zero_mode_weights(bool printed = false);
// Throws a configuration error unless the weights are an eigenvector of the isolated defect block.
void check_defect_eigenstate(const Mat& H, const std::vector<std::pair<int, double>>& weights, double energy,
                             double tol = 1e-8);
std::vector<QuditChannel> qudit_channels(const QuditMemorySpec& s);
QuditChannel run_qudit_channel(const QuditMemorySpec& s, QuditChannel ch);

}  // namespace mk
