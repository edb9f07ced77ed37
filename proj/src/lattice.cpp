#include "matryoshka/lattice.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "matryoshka/errors.hpp"

namespace mk {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
}

int ChainSpec::site_count() const {
  if (sites > 0 && boundary == Boundary::open) return sites;
  return cell_size() * cells;
}

void ChainSpec::validate() const {
  if (order < 0 || order > 12) fail(ErrorKind::config, "chain order must lie in [0, 12]");
  if (static_cast<int>(angles.size()) != angles_expected()) {
    std::ostringstream os;
    os << "order " << order << " needs " << angles_expected() << " angles, got " << angles.size();
    fail(ErrorKind::config, os.str());
  }
  if (cells < 1) fail(ErrorKind::config, "cells must be positive");
  if (!(scale > 0)) fail(ErrorKind::config, "scale must be positive");
  if (sites < 0) fail(ErrorKind::config, "sites must be non-negative");
  if (boundary == Boundary::periodic && sites > 0 && sites != cell_size() * cells)
    fail(ErrorKind::config, "periodic chains cannot be truncated");
  for (double a : angles)
    if (!std::isfinite(a)) fail(ErrorKind::config, "angles must be finite");
}

std::string SiteLabel::str() const {
  std::ostringstream os;
  os << (sub == Sub::A ? 'A' : 'B') << j << '@' << cell;
  return os.str();
}

std::vector<std::pair<int, int>> Lattice::bonds(double tol) const {
  std::vector<std::pair<int, int>> out;
  const int n = size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(hamiltonian(i, j)) > tol) out.emplace_back(i, j);
  return out;
}

Eigen::VectorXd Lattice::chirality() const {
  Eigen::VectorXd g(size());
  for (int i = 0; i < size(); ++i) g[i] = sublattice[i] == Sub::A ? 1.0 : -1.0;
  return g;
}

std::vector<double> sincos_bonds(const std::vector<double>& angles, int count, double scale) {
  std::vector<double> h(std::max(count, 0));
  const int m = static_cast<int>(angles.size());
  for (int b = 0; b < count; ++b) {
    double th = angles[(b / 2) % m];
    h[b] = scale * (b % 2 == 0 ? std::sin(th) : std::cos(th));
  }
  return h;
}

Lattice path_lattice(const std::vector<double>& hoppings) {
  const int n = static_cast<int>(hoppings.size()) + 1;
  Lattice lat;
  lat.hamiltonian = Mat::Zero(n, n);
  for (int b = 0; b + 1 < n; ++b) {
    lat.hamiltonian(b, b + 1) = hoppings[b];
    lat.hamiltonian(b + 1, b) = hoppings[b];
  }
  for (int i = 0; i < n; ++i) {
    Sub s = i % 2 == 0 ? Sub::A : Sub::B;
    lat.sublattice.push_back(s);
    lat.sites.push_back({0, s, i / 2 + 1});
  }
  return lat;
}

Lattice build_chain(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.site_count();
  const int cs = spec.cell_size();
  Lattice lat;
  if (spec.boundary == Boundary::open) {
    lat = path_lattice(sincos_bonds(spec.angles, n - 1, spec.scale));
  } else {
    auto h = sincos_bonds(spec.angles, n, spec.scale);
    lat.hamiltonian = Mat::Zero(n, n);
    for (int b = 0; b < n; ++b) {
      int i = b, j = (b + 1) % n;
      lat.hamiltonian(i, j) += h[b];
      if (i != j) lat.hamiltonian(j, i) += h[b];
    }
    lat.sublattice.resize(n);
    lat.sites.resize(n);
  }
  for (int p = 0; p < n; ++p) {
    int q = p % cs;
    Sub s = q % 2 == 0 ? Sub::A : Sub::B;
    lat.sublattice[p] = s;
    lat.sites[p] = {p / cs, s, q / 2 + 1};
  }
  lat.origin = spec;
  return lat;
}

SquaredBlocks square_hamiltonian(const Lattice& lat) {
  const int n = lat.size();
  if (static_cast<int>(lat.sublattice.size()) != n)
    fail(ErrorKind::structure, "sublattice mask does not match the Hamiltonian");
  SquaredBlocks out;
  for (int i = 0; i < n; ++i) {
    (lat.sublattice[i] == Sub::A ? out.a_sites : out.b_sites).push_back(i);
    for (int j = i + 1; j < n; ++j)
      if (lat.hamiltonian(i, j) != 0.0 && lat.sublattice[i] == lat.sublattice[j]) {
        std::ostringstream os;
        os << "hopping between sites " << i << " and " << j << " on the same sublattice";
        fail(ErrorKind::structure, os.str());
      }
  }
  Mat H2 = lat.hamiltonian * lat.hamiltonian;
  auto block = [&](const std::vector<int>& r, const std::vector<int>& c) {
    Mat b(r.size(), c.size());
    for (size_t i = 0; i < r.size(); ++i)
      for (size_t j = 0; j < c.size(); ++j) b(i, j) = H2(r[i], c[j]);
    return b;
  };
  out.HA = block(out.a_sites, out.a_sites);
  out.HB = block(out.b_sites, out.b_sites);
  if (!out.a_sites.empty() && !out.b_sites.empty())
    out.cross_norm = block(out.a_sites, out.b_sites).cwiseAbs().maxCoeff();
  return out;
}

namespace {

// c_k targets of the lift relations, k = 1..2m
std::vector<double> lift_targets(const std::vector<double>& phi, double t) {
  std::vector<double> c;
  for (double p : phi) {
    c.push_back(t * std::sin(p));
    c.push_back(t * std::cos(p));
  }
  return c;
}

// Propagate sin th_{k+1} = c_k / cos th_k from th_1; empty on infeasibility.
bool propagate(double th1, const std::vector<double>& c, std::vector<double>& th) {
  const size_t M = c.size();
  th.assign(1, th1);
  for (size_t k = 0; k + 1 < M; ++k) {
    double ck = std::cos(th.back());
    if (std::abs(ck) < 1e-14) {
      if (std::abs(c[k]) < 1e-14) {
        th.push_back(0.0);  // relation holds for any value
        continue;
      }
      return false;
    }
    double x = c[k] / ck;
    if (x > 1.0 + 1e-12 || x < -1e-12) return false;
    th.push_back(std::asin(std::clamp(x, 0.0, 1.0)));
  }
  return true;
}

double closure(double th1, const std::vector<double>& c, std::vector<double>& th) {
  if (!propagate(th1, c, th)) return std::numeric_limits<double>::quiet_NaN();
  return std::cos(th.back()) * std::sin(th1) - c.back();
}

double lift_residual(const std::vector<double>& th, const std::vector<double>& c) {
  const size_t M = th.size();
  double r = 0;
  for (size_t k = 0; k < M; ++k)
    r = std::max(r, std::abs(std::cos(th[k]) * std::sin(th[(k + 1) % M]) - c[k]));
  return r;
}

}  // namespace

LiftResult lift_angles(const std::vector<double>& parent_angles, double parent_scale) {
  if (parent_angles.empty()) fail(ErrorKind::config, "lift_angles needs at least one parent angle");
  if (!(parent_scale > 0)) fail(ErrorKind::config, "parent scale must be positive");
  for (double p : parent_angles)
    if (p < -1e-12 || p > kHalfPi + 1e-12) fail(ErrorKind::config, "parent angles must lie in [0, pi/2]");

  auto c = lift_targets(parent_angles, parent_scale);
  for (size_t k = 0; k < c.size(); ++k)
    if (c[k] > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "relation " << k + 1 << " needs cos*sin = " << c[k] << " > 1; parent scale too large";
      fail(ErrorKind::infeasible, os.str());
    }

  std::vector<double> th;
  auto accept = [&](double th1) -> bool {
    double r = closure(th1, c, th);
    return std::isfinite(r) && lift_residual(th, c) <= 1e-10;
  };

  constexpr int grid = 4096;
  std::vector<double> xs(grid + 1), rs(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    xs[i] = kHalfPi * i / grid;
    rs[i] = closure(xs[i], c, th);
  }
  for (int i = 0; i <= grid; ++i) {
    if (std::isfinite(rs[i]) && std::abs(rs[i]) <= 1e-12 && accept(xs[i])) goto done;
    if (i == grid) break;
    bool f0 = std::isfinite(rs[i]), f1 = std::isfinite(rs[i + 1]);
    if (f0 && f1 && rs[i] * rs[i + 1] < 0) {
      double a = xs[i], b = xs[i + 1], ra = rs[i];
      bool ok = true;
      for (int it = 0; it < 200 && b - a > 1e-17; ++it) {
        double mid = 0.5 * (a + b), rm = closure(mid, c, th);
        if (!std::isfinite(rm)) { ok = false; break; }
        if (ra * rm <= 0) b = mid; else { a = mid; ra = rm; }
      }
      if (ok && accept(0.5 * (a + b))) goto done;
    } else if (f0 != f1) {
      // root may sit on the edge of the feasible set
      double a = xs[i], b = xs[i + 1];
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        if (std::isfinite(closure(mid, c, th)) == f0) a = mid; else b = mid;
      }
      if (accept(f0 ? a : b)) goto done;
    }
  }
  fail(ErrorKind::infeasible,
       "closure relation t cos(phi_m) = cos(th_2m) sin(th_1) has no solution with angles in [0, pi/2]");
done:
  LiftResult out;
  out.angles = th;
  out.scale = 1.0;
  out.residual = lift_residual(th, c);
  return out;
}

Tower build_tower(double base_angle, const std::vector<double>& scales, int cells, Boundary boundary) {
  Tower t;
  t.scales = scales;
  const int P = static_cast<int>(scales.size());
  ChainSpec base;
  base.order = 0;
  base.angles = {base_angle};
  base.cells = cells;
  base.boundary = boundary;
  base.scale = P > 0 ? scales[0] : 1.0;
  t.levels.push_back(base);
  for (int p = 1; p <= P; ++p) {
    auto lr = lift_angles(t.levels.back().angles, scales[p - 1]);
    ChainSpec s;
    s.order = p;
    s.angles = lr.angles;
    s.cells = cells;
    s.boundary = boundary;
    s.scale = p < P ? scales[p] : 1.0;
    t.levels.push_back(s);
  }
  return t;
}

void YJunctionSpec::validate() const {
  for (const auto& l : legs)
    if (l.empty()) fail(ErrorKind::structure, "every Y-junction leg needs at least one bond");
  int parity = legs[0].size() % 2;
  for (const auto& l : legs)
    if (static_cast<int>(l.size() % 2) != parity)
      fail(ErrorKind::structure, "leg tips must share a sublattice (leg lengths differ in parity)");
  if (defect_legs[0] == defect_legs[1] || defect_legs[0] < 0 || defect_legs[0] > 2 || defect_legs[1] < 0 ||
      defect_legs[1] > 2)
    fail(ErrorKind::structure, "defects must sit on two distinct legs in {0,1,2}");
}

int y_site(const YJunctionSpec& spec, int leg, int d) {
  int off = 1;
  for (int l = 0; l < leg; ++l) off += static_cast<int>(spec.legs[l].size());
  return off + d - 1;
}

Lattice build_y_junction(const YJunctionSpec& spec) {
  spec.validate();
  int n = 1;
  for (const auto& l : spec.legs) n += static_cast<int>(l.size());
  Lattice lat;
  lat.hamiltonian = Mat::Zero(n, n);
  lat.sites.resize(n);
  lat.sublattice.resize(n);
  Sub other = spec.center == Sub::A ? Sub::B : Sub::A;
  lat.sites[0] = {-1, spec.center, 0};
  lat.sublattice[0] = spec.center;
  for (int l = 0; l < 3; ++l) {
    int prev = 0;
    for (int d = 1; d <= static_cast<int>(spec.legs[l].size()); ++d) {
      int s = y_site(spec, l, d);
      double h = spec.legs[l][d - 1];
      lat.hamiltonian(prev, s) = h;
      lat.hamiltonian(s, prev) = h;
      Sub sub = d % 2 ? other : spec.center;
      lat.sites[s] = {l, sub, d};
      lat.sublattice[s] = sub;
      prev = s;
    }
  }
  return lat;
}

Lattice attach_qubits(const Lattice& chain, const std::vector<QubitSpec>& qubits) {
  const int n = chain.size();
  const int total = n + 2 * static_cast<int>(qubits.size());
  Lattice lat;
  lat.hamiltonian = Mat::Zero(total, total);
  lat.hamiltonian.topLeftCorner(n, n) = chain.hamiltonian;
  lat.sites = chain.sites;
  lat.sublattice = chain.sublattice;
  lat.origin = chain.origin;
  for (size_t q = 0; q < qubits.size(); ++q) {
    const auto& Q = qubits[q];
    const int p = n + 2 * static_cast<int>(q);
    if (Q.attachments.empty()) fail(ErrorKind::config, "qubit has no attachment sites");
    double norm2 = 0;
    for (auto [site, w] : Q.attachments) {
      if (site < 0 || site >= n) {
        std::ostringstream os;
        os << "attachment to nonexistent site " << site << " (chain has " << n << ")";
        fail(ErrorKind::config, os.str());
      }
      norm2 += w * w;
    }
    if (!(norm2 > 0)) fail(ErrorKind::config, "attachment weights are all zero");
    const double f = Q.u / std::sqrt(norm2);
    for (auto [site, w] : Q.attachments) {
      lat.hamiltonian(p, site) += f * w;
      lat.hamiltonian(site, p) += f * w;
    }
    lat.hamiltonian(p, p) = Q.target_energy;
    lat.hamiltonian(p + 1, p + 1) = Q.target_energy;
    lat.hamiltonian(p, p + 1) = lat.hamiltonian(p + 1, p) = Q.k;
    lat.sites.push_back({-1 - static_cast<int>(q), Sub::B, 0});
    lat.sites.push_back({-1 - static_cast<int>(q), Sub::A, 1});
    lat.sublattice.push_back(Sub::B);
    lat.sublattice.push_back(Sub::A);
  }
  return lat;
}

Lattice build_memory_system(const MemorySpec& spec) { return attach_qubits(build_chain(spec.chain), spec.qubits); }

}  // namespace mk
