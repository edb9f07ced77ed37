#include "matryoshka/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "matryoshka/errors.hpp"

namespace mk {

namespace {

void fix_signs(Mat& V) {
  for (int c = 0; c < V.cols(); ++c) {
    double best = V.col(c).cwiseAbs().maxCoeff();
    for (int r = 0; r < V.rows(); ++r)
      if (std::abs(V(r, c)) >= best - 1e-12) {
        if (V(r, c) < 0) V.col(c) *= -1.0;
        break;
      }
  }
}

}  // namespace

Spectrum diagonalize(const Mat& H) {
  if (H.rows() != H.cols()) fail(ErrorKind::numeric, "Hamiltonian is not square");
  if (!H.allFinite()) fail(ErrorKind::numeric, "Hamiltonian has non-finite entries");
  const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff()))
    fail(ErrorKind::numeric, "Hamiltonian is not symmetric");

  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) fail(ErrorKind::numeric, "eigensolver did not converge");
  Spectrum s{es.eigenvalues(), es.eigenvectors()};

  // localise degenerate clusters so left/right states are reproducible
  const int n = static_cast<int>(s.energies.size());
  for (int a = 0; a < n;) {
    int b = a + 1;
    while (b < n && s.energies[b] - s.energies[b - 1] < 1e-8) ++b;
    if (b - a > 1) {
      Mat Vc = s.states.middleCols(a, b - a);
      Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(n, 0.0, n - 1.0);
      Mat Q = Vc.transpose() * x.asDiagonal() * Vc;
      Eigen::SelfAdjointEigenSolver<Mat> qs(Q);
      s.states.middleCols(a, b - a) = Vc * qs.eigenvectors();
    }
    a = b;
  }
  fix_signs(s.states);
  return s;
}

Spectrum diagonalize(const Lattice& lat) { return diagonalize(lat.hamiltonian); }

double spectrum_residual(const Mat& H, const Spectrum& s) {
  Mat R = H * s.states - s.states * s.energies.asDiagonal();
  return R.colwise().norm().maxCoeff();
}

double orthonormality_defect(const Spectrum& s) {
  const int n = static_cast<int>(s.states.cols());
  return (s.states.transpose() * s.states - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd bloch_matrix(const ChainSpec& spec, double k) {
  spec.validate();
  const int cs = spec.cell_size();
  auto h = sincos_bonds(spec.angles, cs, spec.scale);
  Eigen::MatrixXcd Hk = Eigen::MatrixXcd::Zero(cs, cs);
  for (int b = 0; b + 1 < cs; ++b) {
    Hk(b, b + 1) += h[b];
    Hk(b + 1, b) += h[b];
  }
  const std::complex<double> ph = std::polar(1.0, k);
  Hk(cs - 1, 0) += h[cs - 1] * ph;
  Hk(0, cs - 1) += h[cs - 1] * std::conj(ph);
  return Hk;
}

std::vector<BandPoint> bloch_bands(const ChainSpec& spec, const std::vector<double>& ks) {
  std::vector<BandPoint> out;
  out.reserve(ks.size());
  for (double k : ks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(bloch_matrix(spec, k), Eigen::EigenvaluesOnly);
    out.push_back({k, es.eigenvalues()});
  }
  return out;
}

std::vector<double> uniform_k_grid(int n) {
  std::vector<double> ks(n);
  for (int i = 0; i < n; ++i) ks[i] = -std::numbers::pi + 2 * std::numbers::pi * i / n;
  return ks;
}

Eigen::VectorXd closed_form_bands(const Tower& tower, double k) {
  const double th = tower.levels.front().angles.front();
  const double e0 = std::sqrt(std::max(0.0, 1.0 + std::sin(2 * th) * std::cos(k)));
  std::vector<double> e{-e0, e0};
  for (double t : tower.scales) {
    std::vector<double> next;
    for (double x : e) {
      double r = std::sqrt(std::max(0.0, 1.0 + t * x));
      next.push_back(-r);
      next.push_back(r);
    }
    e.swap(next);
  }
  std::sort(e.begin(), e.end());
  return Eigen::Map<Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(e.size()));
}

std::vector<double> edge_energies(const std::vector<double>& scales) {
  std::vector<double> levels{1.0, -1.0};
  for (double t : scales) {
    if (!(t > 0) || t > 1) fail(ErrorKind::domain, "edge-energy scales must lie in (0, 1]");
    std::vector<double> next{1.0, -1.0};
    for (double e : levels) {
      double arg = 1.0 + t * e;
      if (arg < 0) fail(ErrorKind::domain, "negative radical in edge-energy recursion");
      next.push_back(std::sqrt(arg));
      next.push_back(-std::sqrt(arg));
    }
    levels.swap(next);
  }
  std::sort(levels.begin(), levels.end());
  return levels;  // duplicates kept on purpose
}

std::vector<std::pair<double, double>> bulk_band_intervals(const ChainSpec& spec, int nk) {
  ChainSpec per = spec;
  per.boundary = Boundary::periodic;
  per.sites = 0;
  std::vector<double> ks(nk + 1);
  for (int i = 0; i <= nk; ++i) ks[i] = std::numbers::pi * i / nk;  // bands are even in k
  auto bands = bloch_bands(per, ks);
  const int nb = static_cast<int>(bands.front().energies.size());
  std::vector<std::pair<double, double>> iv(nb, {1e300, -1e300});
  for (const auto& bp : bands)
    for (int b = 0; b < nb; ++b) {
      iv[b].first = std::min(iv[b].first, bp.energies[b]);
      iv[b].second = std::max(iv[b].second, bp.energies[b]);
    }
  return iv;
}

EdgeStateReport detect_edge_states(const Spectrum& spec, const Lattice& lat, const EdgeOptions& opt) {
  const int n = static_cast<int>(spec.states.rows());
  const int m = static_cast<int>(spec.states.cols());
  EdgeStateReport rep;
  rep.left_weight.assign(m, 0.0);
  rep.right_weight.assign(m, 0.0);
  rep.is_edge.assign(m, false);
  const int tail = std::max(1, static_cast<int>(std::lround(opt.tail_fraction * n)));
  for (int c = 0; c < m; ++c)
    for (int i = 0; i < tail && i < n; ++i) {
      rep.left_weight[c] += spec.states(i, c) * spec.states(i, c);
      rep.right_weight[c] += spec.states(n - 1 - i, c) * spec.states(n - 1 - i, c);
    }
  if (lat.origin && lat.origin->boundary == Boundary::periodic) return rep;

  std::vector<std::pair<double, double>> bands;
  if (lat.origin) bands = bulk_band_intervals(*lat.origin);
  for (int c = 0; c < m; ++c) {
    const double lw = rep.left_weight[c], rw = rep.right_weight[c], e = spec.energies[c];
    if (lw + rw <= opt.threshold) continue;
    bool in_band = false;
    int below = 0;
    for (auto [lo, hi] : bands) {
      if (e >= lo - opt.band_tol && e <= hi + opt.band_tol) in_band = true;
      if (hi < e) ++below;
    }
    if (in_band) continue;
    EdgeState s;
    s.index = c;
    s.energy = e;
    s.left_weight = lw;
    s.right_weight = rw;
    s.side = lw > 0.8 * (lw + rw) ? EdgeSide::left : rw > 0.8 * (lw + rw) ? EdgeSide::right : EdgeSide::hybridized;
    double loc = 0;
    for (int i = 0; i < n; ++i) {
      double d = s.side == EdgeSide::right ? n - 1 - i : s.side == EdgeSide::left ? i : std::min(i, n - 1 - i);
      loc += d * spec.states(i, c) * spec.states(i, c);
    }
    s.localization = loc;
    s.gap = bands.empty() ? -1 : below;
    rep.states.push_back(s);
    rep.is_edge[c] = true;
  }
  return rep;
}

}  // namespace mk
