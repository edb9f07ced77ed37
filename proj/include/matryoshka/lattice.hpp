#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mk {

using Mat = Eigen::MatrixXd;

enum class Boundary { open, periodic };
enum class Sub { A, B };

struct ChainSpec {
  int order = 0;               // P
  std::vector<double> angles;  // 2^P entries
  int cells = 1;
  double scale = 1.0;
  Boundary boundary = Boundary::open;
  int sites = 0;  // open chains only; 0 means full cells

  int angles_expected() const { return 1 << order; }
  int cell_size() const { return 2 << order; }
  int site_count() const;
  void validate() const;
};

struct SiteLabel {
  int cell = 0;
  Sub sub = Sub::A;
  int j = 1;  // A_j / B_j, 1-based within the cell
  std::string str() const;
};

struct Lattice {
  std::vector<SiteLabel> sites;
  Mat hamiltonian;
  std::vector<Sub> sublattice;
  std::optional<ChainSpec> origin;  // set for chains built from a ChainSpec

  int size() const { return static_cast<int>(hamiltonian.rows()); }
  // upper-triangle pairs with |H_ij| > tol
  std::vector<std::pair<int, int>> bonds(double tol = 0.0) const;
  Eigen::VectorXd chirality() const;  // +1 on A, -1 on B
};

// Bond amplitudes sin th_1, cos th_1, sin th_2, ... cycling through the angles.
std::vector<double> sincos_bonds(const std::vector<double>& angles, int count, double scale = 1.0);

// Open path with the given nearest-neighbour amplitudes; sites alternate A,B.
Lattice path_lattice(const std::vector<double>& hoppings);

Lattice build_chain(const ChainSpec& spec);

struct SquaredBlocks {
  Mat HA, HB;
  std::vector<int> a_sites, b_sites;  // original indices, in order
  double cross_norm = 0.0;            // max |entry| of the A-B blocks of H^2
};
SquaredBlocks square_hamiltonian(const Lattice& lat);

struct LiftResult {
  std::vector<double> angles;
  double scale = 1.0;
  double residual = 0.0;  // max over both relation families
};
// Child angles whose B-sublattice square reproduces the parent:
//   t sin(phi_j) = cos(th_{2j-1}) sin(th_{2j}),  t cos(phi_j) = cos(th_{2j}) sin(th_{2j+1})  (cyclic)
LiftResult lift_angles(const std::vector<double>& parent_angles, double parent_scale);

// Base angle and scales t^(0..P-1) -> chain specs for orders 0..P.
struct Tower {
  std::vector<ChainSpec> levels;
  std::vector<double> scales;
};
Tower build_tower(double base_angle, const std::vector<double>& scales, int cells,
                  Boundary boundary = Boundary::periodic);

// Star graph: each leg is a list of hoppings read from the center outward.
struct YJunctionSpec {
  std::array<std::vector<double>, 3> legs;
  std::array<int, 2> defect_legs{0, 1};
  Sub center = Sub::B;
  void validate() const;
};
Lattice build_y_junction(const YJunctionSpec& spec);
// index of the site at distance d (1-based) along leg l for equal-length legs
int y_site(const YJunctionSpec& spec, int leg, int d);

struct QubitSpec {
  double k = 0.0;  // q0-q1 hopping
  double u = 0.05;
  double target_energy = 1.0;
  std::vector<std::pair<int, double>> attachments;  // chain site, raw weight
};
struct MemorySpec {
  ChainSpec chain;
  std::vector<QubitSpec> qubits;
};
// Qubit i occupies sites n + 2i (port) and n + 2i + 1.
Lattice build_memory_system(const MemorySpec& spec);
Lattice attach_qubits(const Lattice& chain, const std::vector<QubitSpec>& qubits);

}  // namespace mk
