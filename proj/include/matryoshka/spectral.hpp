#pragma once

#include <Eigen/Dense>
#include <vector>

#include "matryoshka/lattice.hpp"

namespace mk {

struct Spectrum {
  Eigen::VectorXd energies;  // ascending
  Mat states;                // column i <-> energies[i]
};

// Gauge: degenerate clusters (|dE| < 1e-8) are rotated to diagonalise site position,
// then each vector is signed so its largest component is positive.
Spectrum diagonalize(const Mat& H);
Spectrum diagonalize(const Lattice& lat);

// Residual max_i |H v_i - E_i v_i| and orthonormality defect of a spectrum.
double spectrum_residual(const Mat& H, const Spectrum& s);
double orthonormality_defect(const Spectrum& s);

struct BandPoint {
  double k = 0;
  Eigen::VectorXd energies;  // ascending, 2^(P+1) values
};
Eigen::MatrixXcd bloch_matrix(const ChainSpec& spec, double k);
std::vector<BandPoint> bloch_bands(const ChainSpec& spec, const std::vector<double>& ks);
std::vector<double> uniform_k_grid(int n);  // n points on [-pi, pi)

// Nested radicals E^(p) = +-sqrt(1 + t^(p-1) E^(p-1)) on top of the base dimer dispersion.
Eigen::VectorXd closed_form_bands(const Tower& tower, double k);

// Edge levels of order P = scales.size() + 1, scales = t^(1..P-1).
std::vector<double> edge_energies(const std::vector<double>& scales);

// Closed intervals occupied by the bulk bands of a chain.
std::vector<std::pair<double, double>> bulk_band_intervals(const ChainSpec& spec, int nk = 512);

enum class EdgeSide { left, right, hybridized };

struct EdgeState {
  int index = 0;  // into the spectrum
  double energy = 0;
  double left_weight = 0, right_weight = 0;
  double localization = 0;  // mean distance from the nearer end, in sites
  EdgeSide side = EdgeSide::left;
  int gap = -1;  // gap index between bulk bands, -1 without bulk info
};

struct EdgeOptions {
  double tail_fraction = 0.15;
  double threshold = 0.5;
  double band_tol = 1e-6;
};

struct EdgeStateReport {
  std::vector<EdgeState> states;
  std::vector<double> left_weight, right_weight;  // for every eigenstate
  std::vector<bool> is_edge;
  int count() const { return static_cast<int>(states.size()); }
};

EdgeStateReport detect_edge_states(const Spectrum& spec, const Lattice& lat, const EdgeOptions& opt = {});

}  // namespace mk
