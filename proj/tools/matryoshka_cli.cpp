// Command-line front end: config in, CSV + manifest.json out.
#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "matryoshka/config.hpp"
#include "matryoshka/disorder.hpp"
#include "matryoshka/errors.hpp"
#include "matryoshka/io.hpp"
#include "matryoshka/kernels.hpp"
#include "matryoshka/protocols.hpp"
#include "matryoshka/spectral.hpp"

using namespace mk;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Run {
  std::string command;
  Config cfg;
  fs::path out;
  std::string prefix;
  int threads = 1;
  json derived = json::object();
  std::vector<std::string> outputs;

  std::string path(const std::string& name) {
    outputs.push_back(prefix + name);
    return (out / (prefix + name)).string();
  }
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

const char* side_name(EdgeSide s) {
  return s == EdgeSide::left ? "left" : s == EdgeSide::right ? "right" : "hybridized";
}

// [chain] either lists angles directly or builds a tower from base_angle + scales.
ChainSpec chain_spec(const Config& c) {
  if (!c.has("chain.base_angle")) return chain_from(c);
  std::vector<double> scales = c.has("chain.scales") ? c.list("chain.scales") : std::vector<double>{};
  const std::string b = c.str("chain.boundary", "periodic");
  auto tw = build_tower(c.num("chain.base_angle"), scales, c.integer("chain.cells", 1),
                        b == "open" ? Boundary::open : Boundary::periodic);
  ChainSpec s = tw.levels.back();
  s.sites = c.integer("chain.sites", 0);
  s.validate();
  return s;
}

void write_bands(Run& r, const ChainSpec& spec, int nk) {
  ChainSpec per = spec;
  per.boundary = Boundary::periodic;
  per.sites = 0;
  auto bands = bloch_bands(per, uniform_k_grid(nk));
  std::vector<std::string> hdr{"k"};
  for (int i = 0; i < per.cell_size(); ++i) hdr.push_back("band_" + std::to_string(i));
  CsvWriter w(r.path("bands.csv"), hdr);
  for (const auto& b : bands) {
    w.cell(b.k);
    for (int i = 0; i < b.energies.size(); ++i) w.cell(b.energies[i]);
    w.end_row();
  }
  r.derived["band_count"] = per.cell_size();
}

// ---------------------------------------------------------------- commands

void cmd_spectrum(Run& r) {
  const ChainSpec spec = chain_spec(r.cfg);
  const Lattice lat = build_chain(spec);
  const Spectrum sp = diagonalize(lat);
  EdgeOptions eo;
  eo.tail_fraction = r.cfg.num("protocol.tail_fraction", eo.tail_fraction);
  eo.threshold = r.cfg.num("protocol.threshold", eo.threshold);
  const auto rep = detect_edge_states(sp, lat, eo);
  CsvWriter w(r.path("spectrum.csv"), {"index", "energy", "left_weight", "right_weight", "is_edge"});
  for (int i = 0; i < sp.energies.size(); ++i)
    w.cell(static_cast<long long>(i))
        .cell(sp.energies[i])
        .cell(rep.left_weight[i])
        .cell(rep.right_weight[i])
        .cell(static_cast<long long>(rep.is_edge[i]))
        .end_row();
  std::ofstream(r.path("lattice.json")) << lattice_to_json(lat).dump(1) << "\n";
  write_bands(r, spec, r.cfg.integer("protocol.nk", 128));
  json edges = json::array();
  for (const auto& e : rep.states)
    edges.push_back({{"index", e.index}, {"energy", e.energy}, {"side", side_name(e.side)}, {"gap", e.gap}});
  r.derived["sites"] = lat.size();
  r.derived["edge_count"] = rep.count();
  r.derived["edge_states"] = edges;
  r.derived["residual"] = spectrum_residual(lat.hamiltonian, sp);
  std::cout << lat.size() << " sites, " << rep.count() << " edge states\n";
}

void cmd_bands(Run& r) {
  const int nk = r.cfg.integer("protocol.nk", 128);
  if (!r.cfg.has("chain.base_angle")) {
    write_bands(r, chain_from(r.cfg), nk);
    return;
  }
  std::vector<double> scales = r.cfg.has("chain.scales") ? r.cfg.list("chain.scales") : std::vector<double>{};
  auto tw = build_tower(r.cfg.num("chain.base_angle"), scales, 1);
  const ChainSpec& top = tw.levels.back();
  write_bands(r, top, nk);
  std::vector<std::string> hdr{"k"};
  for (int i = 0; i < top.cell_size(); ++i) hdr.push_back("closed_" + std::to_string(i));
  CsvWriter w(r.path("bands_closed_form.csv"), hdr);
  double dev = 0;
  for (const auto& b : bloch_bands(top, uniform_k_grid(nk))) {
    auto cf = closed_form_bands(tw, b.k);
    w.cell(b.k);
    for (int i = 0; i < cf.size(); ++i) {
      w.cell(cf[i]);
      dev = std::max(dev, std::abs(cf[i] - b.energies[i]));
    }
    w.end_row();
  }
  r.derived["closed_form_max_deviation"] = dev;
  r.derived["edge_energies"] = edge_energies(std::vector<double>(scales.begin() + std::min<size_t>(1, scales.size()),
                                                                 scales.end()));
  std::cout << "max |numeric - closed form| = " << dev << "\n";
}

void cmd_sqrt_check(Run& r) {
  CsvWriter w(r.path("sqrt_check.csv"), {"level", "cross_norm", "parent_deviation"});
  json levels = json::array();
  auto check = [&](int level, const ChainSpec& child, const std::optional<ChainSpec>& parent) {
    auto sq = square_hamiltonian(build_chain(child));
    double dev = std::nan("");
    if (parent) {
      // one child cell holds one parent cell on its B sublattice
      ChainSpec p = *parent;
      p.cells = child.cells;
      p.boundary = child.boundary;
      p.sites = child.boundary == Boundary::open ? static_cast<int>(sq.b_sites.size()) : 0;
      const Mat hp = build_chain(p).hamiltonian;
      if (hp.rows() == sq.HB.rows())
        dev = (sq.HB - Mat::Identity(hp.rows(), hp.cols()) - hp).cwiseAbs().maxCoeff();
    }
    w.cell(static_cast<long long>(level)).cell(sq.cross_norm).cell(dev).end_row();
    levels.push_back({{"level", level}, {"cross_norm", sq.cross_norm}, {"parent_deviation", dev}});
  };
  if (r.cfg.has("chain.base_angle")) {
    std::vector<double> scales = r.cfg.has("chain.scales") ? r.cfg.list("chain.scales") : std::vector<double>{};
    const std::string b = r.cfg.str("chain.boundary", "periodic");
    const Boundary bd = b == "open" ? Boundary::open : Boundary::periodic;
    auto tw = build_tower(r.cfg.num("chain.base_angle"), scales, r.cfg.integer("chain.cells", 4), bd);
    for (size_t p = 1; p < tw.levels.size(); ++p) {
      ChainSpec child = tw.levels[p];
      child.scale = 1.0;
      // an open chain needs the trailing A site to close the last parent neighbourhood
      if (bd == Boundary::open) child.sites = child.cell_size() * child.cells + 1;
      check(static_cast<int>(p), child, tw.levels[p - 1]);
      r.derived["angles_level_" + std::to_string(p)] = tw.levels[p].angles;
    }
  } else {
    check(chain_from(r.cfg).order, chain_from(r.cfg), std::nullopt);
  }
  r.derived["levels"] = levels;
  std::cout << levels.dump() << "\n";
}

void cmd_transfer(Run& r) {
  const TransferProtocol p = transfer_from(r.cfg);
  const int every = r.cfg.integer("protocol.samples", 40);
  TransferOptions opt;
  opt.sample_every = std::max(1, every);
  opt.adiabatic_threshold = r.cfg.num("protocol.threshold", opt.adiabatic_threshold);
  std::optional<NoiseSet> noise;
  if (r.cfg.has("disorder.sigma")) {
    auto d = disorder_from(r.cfg);
    noise = sample_noise(d, transfer_model(p), realization_seed(d.seed, 0));
    opt.noise = &*noise;
  }
  auto res = run_transfer(p, opt);
  CsvWriter ch(r.path("channels.csv"),
               {"channel", "energy", "fidelity", "overlap_re", "overlap_im", "sign_re", "sign_im", "expected_sign"});
  for (size_t c = 0; c < res.channels.size(); ++c) {
    const auto& cr = res.channels[c];
    ch.cell(cr.channel.name)
        .cell(cr.channel.energy)
        .cell(cr.fidelity)
        .cell(cr.overlap.real())
        .cell(cr.overlap.imag())
        .cell(cr.sign.real())
        .cell(cr.sign.imag())
        .cell(cr.channel.expected_sign)
        .end_row();
    const std::string tag = std::to_string(c);
    std::vector<std::string> hdr{"t"};
    const int n = static_cast<int>(cr.final_state.size());
    for (int i = 0; i < n; ++i) {
      hdr.push_back("site_" + std::to_string(i) + "_re");
      hdr.push_back("site_" + std::to_string(i) + "_im");
    }
    CsvWriter tr(r.path("trajectory_" + tag + ".csv"), hdr);
    CsvWriter ob(r.path("observables_" + tag + ".csv"), {"t", "fidelity_initial", "fidelity_expected", "entropy"});
    for (size_t s = 0; s < res.trajectory.times.size(); ++s) {
      const CVec v = res.trajectory.states[s].col(c);
      tr.cell(res.trajectory.times[s]);
      for (int i = 0; i < n; ++i) tr.cell(v[i].real()).cell(v[i].imag());
      tr.end_row();
      ob.cell(res.trajectory.times[s])
          .cell(fidelity(cr.channel.psi0, v))
          .cell(fidelity(cr.channel.expected, v))
          .cell(ensemble_entropy({v}))
          .end_row();
    }
    r.derived["fidelity_" + cr.channel.name] = cr.fidelity;
    r.derived["sign_" + cr.channel.name] = {cr.sign.real(), cr.sign.imag()};
  }
  r.derived["min_gaps"] = res.gaps.gaps;
  r.derived["min_gap_times"] = res.gaps.at;
  r.derived["adiabatic_warning"] = res.adiabatic_warning;
  r.derived["max_norm_drift"] = res.trajectory.max_norm_drift;
  if (res.adiabatic_warning) std::cerr << "warning: min_gap * T below threshold; sweep may be nonadiabatic\n";
  for (const auto& cr : res.channels) std::cout << cr.channel.name << " F = " << fmt17(cr.fidelity) << "\n";
}

void cmd_braid(Run& r) {
  const BraidProtocol p = braid_from(r.cfg);
  std::optional<NoiseSet> noise;
  if (r.cfg.has("disorder.sigma")) {
    auto d = disorder_from(r.cfg);
    noise = sample_noise(d, braid_model(p), realization_seed(d.seed, 0));
  }
  auto g = run_braiding(p, noise ? &*noise : nullptr);
  const auto B = braid_basis();
  CsvWriter w(r.path("gate.csv"), {"row", "col", "row_label", "col_label", "re", "im"});
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      w.cell(static_cast<long long>(i))
          .cell(static_cast<long long>(j))
          .cell(B.labels[i])
          .cell(B.labels[j])
          .cell(g.G(i, j).real())
          .cell(g.G(i, j).imag())
          .end_row();
  CsvWriter s(r.path("sectors.csv"), {"sector", "phase_y", "err_y", "phase_x", "err_x", "tag"});
  json sec = json::array();
  for (const auto& f : g.sectors) {
    s.cell(f.name).cell(f.phase_y).cell(f.err_y).cell(f.phase_x).cell(f.err_x).cell(f.tag).end_row();
    sec.push_back({{"sector", f.name}, {"tag", f.tag}, {"err_y", f.err_y}, {"err_x", f.err_x}});
    std::cout << f.name << ": " << f.tag << " (Y err " << f.err_y << ", X err " << f.err_x << ")\n";
  }
  r.derived["sectors"] = sec;
  r.derived["leakage"] = g.leakage;
  r.derived["max_leakage"] = g.max_leakage;
  r.derived["off_block"] = g.off_block;
}

void cmd_memory(Run& r) {
  MemoryProtocol p = memory_from(r.cfg);
  auto res = run_memory(p);
  CsvWriter w(r.path("memory.csv"), {"t_wait", "fidelity"});
  for (size_t i = 0; i < res.t_wait.size(); ++i) w.cell(res.t_wait[i]).cell(res.fidelity[i]).end_row();
  r.derived["tau"] = res.tau;
  r.derived["tau_two_level"] = res.tau_two_level;
  r.derived["split"] = res.split;
  r.derived["stored_population"] = res.stored_population;
  r.derived["norm_defect"] = res.norm_defect;
  if (r.cfg.has("protocol.t_max")) {
    MemoryRun run(p);
    const double t_max = r.cfg.num("protocol.t_max");
    const int n = r.cfg.integer("protocol.samples", 2000);
    CsvWriter c(r.path("memory_curve.csv"), {"t_wait", "fidelity"});
    for (int i = 0; i <= n; ++i) c.cell(t_max * i / n).cell(run.fidelity(t_max * i / n)).end_row();
    auto dip = first_dip([&](double t) { return run.fidelity(t); }, t_max, std::max(n, 20000));
    if (dip.found) {
      r.derived["first_dip_time"] = dip.t;
      r.derived["first_dip_fidelity"] = dip.f;
    }
  }
  std::cout << "tau = " << fmt17(res.tau) << ", split = " << fmt17(res.split) << "\n";
}

void cmd_qudit(Run& r) {
  const QuditMemorySpec s = qudit_from(r.cfg);
  auto chans = qudit_channels(s);
  QuditChannel left0;
  left0.label = "L:0 closed form";
  left0.energy = 0;
  left0.weights = left_zero_mode_weights();
  const std::string which = r.cfg.str("protocol.channels", "all");
  if (which != "all" && which != "left0") fail(ErrorKind::config, "protocol.channels must be all or left0");
  std::vector<QuditChannel> run;
  if (which == "all") run = chans;
  run.push_back(left0);
  std::vector<std::string> hdr{"label", "energy", "side", "tau"};
  for (double t : s.t_wait) hdr.push_back("F_t" + fmt17(t));
  CsvWriter w(r.path("qudit.csv"), hdr);
  json out = json::array();
  for (auto& c : run) {
    auto res = run_qudit_channel(s, c);
    w.cell(res.label).cell(res.energy).cell(side_name(res.side)).cell(res.tau);
    for (double f : res.fidelity) w.cell(f);
    w.end_row();
    out.push_back({{"label", res.label}, {"tau", res.tau}, {"fidelity", res.fidelity}});
  }
  r.derived["edge_count"] = chans.size();
  r.derived["channels"] = out;
  std::cout << chans.size() << " edge channels\n";
}

void cmd_disorder_sweep(Run& r) {
  const std::string kind = r.cfg.str("protocol.kind", "transfer");
  EnsembleProblem prob;
  if (kind == "transfer") {
    const auto p = transfer_from(r.cfg);
    auto ch = transfer_channels(p).front();
    prob = {transfer_model(p), ch.psi0, ch.expected, 100};
  } else if (kind == "braid") {
    const auto p = braid_from(r.cfg);
    auto B = braid_basis();
    prob = {braid_model(p), (B.states.col(0) + B.states.col(1)) / std::sqrt(2.0),
            (B.states.col(1) - B.states.col(0)) / std::sqrt(2.0), 100};
  } else {
    fail(ErrorKind::config, "protocol.kind must be transfer or braid for disorder-sweep");
  }
  prob.sample_every = r.cfg.integer("disorder.sample_every", prob.sample_every);
  Config base = r.cfg;
  const auto kinds = r.cfg.words("disorder.kind");
  const auto sigmas = r.cfg.list("disorder.sigma");
  json summary = json::array();
  for (const auto& k : kinds) {
    base.set("disorder.kind", k);
    CsvWriter w(r.path("ensemble_" + k + ".csv"),
                {"t", "kind", "sigma", "mean_fidelity", "fidelity_stderr", "entropy", "n_effective"});
    for (double sg : sigmas) {
      base.set("disorder.sigma", fmt17(sg));
      const DisorderSpec d = disorder_from(base);
      auto st = run_ensemble(prob, d, r.threads);
      for (size_t i = 0; i < st.times.size(); ++i)
        w.cell(st.times[i])
            .cell(kind_name(st.kind))
            .cell(st.sigma)
            .cell(st.mean_fidelity[i])
            .cell(st.fidelity_stderr[i])
            .cell(st.entropy[i])
            .cell(static_cast<long long>(st.n_effective))
            .end_row();
      summary.push_back({{"kind", kind_name(st.kind)},
                         {"sigma", sg},
                         {"final_fidelity", st.final_fidelity},
                         {"final_stderr", st.final_stderr},
                         {"decay", st.decay},
                         {"final_entropy", st.entropy.back()},
                         {"n_effective", st.n_effective},
                         {"excluded", st.excluded}});
      std::cout << kind_name(st.kind) << " sigma=" << sg << ": F = " << fmt17(st.final_fidelity) << " +- "
                << fmt17(st.final_stderr) << "\n";
    }
  }
  r.derived["ensembles"] = summary;
}

void cmd_bloch(Run& r) {
  const double T = r.cfg.num("schedule.T", 10.0), dt = r.cfg.num("schedule.dt", 1e-3);
  auto v3 = [&](const std::string& key, Vec3 def) {
    if (!r.cfg.has(key)) return def;
    auto l = r.cfg.list(key);
    if (l.size() != 3) fail(ErrorKind::config, key + " needs three components");
    return Vec3(l[0], l[1], l[2]);
  };
  const Vec3 n0 = v3("protocol.n0", Vec3(0, 0, 1)), n1 = v3("protocol.n1", n0), r0 = v3("protocol.r0", Vec3(1, 0, 0));
  const int every = std::max(1, r.cfg.integer("protocol.samples", 10));
  auto n = [&](double t) -> Vec3 { return n0 + (n1 - n0) * (t / T); };
  auto bt = bloch_evolve(n, r0, T, dt, every);
  // the same precession as a two-level Schroedinger problem, H = n.sigma / 2
  const double th = std::acos(std::clamp(r0.z(), -1.0, 1.0)), ph = std::atan2(r0.y(), r0.x());
  CMat psi0(2, 1);
  psi0 << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
  HermitianFn H = [&](double t, CMat& h) {
    const Vec3 v = n(t);
    h.resize(2, 2);
    h << v.z(), std::complex<double>(v.x(), -v.y()), std::complex<double>(v.x(), v.y()), -v.z();
    h *= 0.5;
  };
  EvolveOptions o;
  o.sample_every = every;
  auto tr = evolve_hermitian(H, T, dt, psi0, o);
  CsvWriter w(r.path("bloch.csv"), {"t", "x", "y", "z", "nx", "ny", "nz", "gap", "angle_to_n", "x_schr", "y_schr",
                                    "z_schr"});
  double dev = 0;
  for (size_t i = 0; i < bt.times.size(); ++i) {
    const Vec3 nv = n(bt.times[i]), s = bloch_vector(tr.states[i].col(0));
    const double ang = nv.norm() > 0 ? std::acos(std::clamp(bt.r[i].dot(nv) / nv.norm(), -1.0, 1.0)) : 0.0;
    dev = std::max(dev, (s - bt.r[i]).norm());
    w.cell(bt.times[i]).cell(bt.r[i].x()).cell(bt.r[i].y()).cell(bt.r[i].z());
    w.cell(nv.x()).cell(nv.y()).cell(nv.z()).cell(nv.norm()).cell(ang);
    w.cell(s.x()).cell(s.y()).cell(s.z()).end_row();
  }
  r.derived["bloch_vs_schroedinger"] = dev;
  std::cout << "max |r_bloch - r_schroedinger| = " << dev << "\n";
}

void write_manifest(const Run& r, std::uint64_t seed, const std::string& started) {
  json m;
  m["command"] = r.command;
  m["config"] = r.cfg.to_json();
  m["seed"] = seed;
  m["threads"] = r.threads;
  m["started"] = started;
  m["finished"] = utc_now();
  m["versions"] = {{"matryoshka", kVersion},
                   {"compiler", __VERSION__},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"kernels", kern::active().name}};
  m["derived"] = r.derived;
  m["outputs"] = r.outputs;
  std::ofstream f(r.out / (r.prefix + "manifest.json"));
  if (!f) fail(ErrorKind::io, "cannot write manifest in " + r.out.string());
  f << m.dump(2) << "\n";
}

int emit_error(const std::string& kind, int code, const std::string& msg) {
  json e{{"error", kind}, {"exit_code", code}, {"message", msg}};
  std::cerr << e.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested square-root chain simulator"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 0;
  bool seed_set = false;

  const std::vector<std::pair<std::string, std::string>> cmds{
      {"spectrum", "OBC spectrum, edge states and bands of a chain"},
      {"bands", "Bloch bands, with the closed form for towers"},
      {"sqrt-check", "verify that squaring recovers the parent chain"},
      {"transfer", "adiabatic defect transfer on the seven-site chain"},
      {"braid", "Y-junction braid and gate extraction"},
      {"memory", "qubit storage on an edge state"},
      {"qudit-memory", "per-channel storage on the two-defect chain"},
      {"disorder-sweep", "disorder ensembles over kinds and strengths"},
      {"bloch", "two-level precession and its Schroedinger counterpart"}};
  for (const auto& [name, help] : cmds) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("-c,--config", config_path, "INI config or a previous manifest.json")->required();
    sc->add_option("-o,--out", out_dir, "output directory (default: [output] dir, $MATRYOSHKA_OUT, ./out)");
    sc->add_option("-s,--set", overrides, "override a value, section.key=value")->take_all();
    sc->add_option("-t,--threads", threads, "worker threads for ensembles")->check(CLI::PositiveNumber);
    sc->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { seed = v, seed_set = true; }, "master seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("usage", static_cast<int>(ErrorKind::config), e.what());
  }

  Run r;
  r.command = app.get_subcommands().front()->get_name();
  try {
    const std::string started = utc_now();
    r.cfg = Config::load(config_path);
    for (const auto& o : overrides) r.cfg.override_with(o);
    if (r.cfg.empty()) fail(ErrorKind::config, "usage: config '" + config_path + "' is empty");
    if (seed_set) r.cfg.set("disorder.seed", std::to_string(seed));
    r.cfg.check_known();
    seed = r.cfg.u64("disorder.seed", 1);
    r.threads = threads;
    const char* env = std::getenv("MATRYOSHKA_OUT");
    r.out = !out_dir.empty() ? out_dir : r.cfg.has("output.dir") ? r.cfg.str("output.dir") : env ? env : "out";
    r.prefix = r.cfg.str("output.prefix", "");
    std::error_code ec;
    fs::create_directories(r.out, ec);
    if (ec) fail(ErrorKind::io, "cannot create output directory " + r.out.string() + ": " + ec.message());

    if (r.command == "spectrum") cmd_spectrum(r);
    else if (r.command == "bands") cmd_bands(r);
    else if (r.command == "sqrt-check") cmd_sqrt_check(r);
    else if (r.command == "transfer") cmd_transfer(r);
    else if (r.command == "braid") cmd_braid(r);
    else if (r.command == "memory") cmd_memory(r);
    else if (r.command == "qudit-memory") cmd_qudit(r);
    else if (r.command == "disorder-sweep") cmd_disorder_sweep(r);
    else if (r.command == "bloch") cmd_bloch(r);
    write_manifest(r, seed, started);
  } catch (const Error& e) {
    return emit_error(error_kind_name(e.kind()), static_cast<int>(e.kind()), e.what());
  } catch (const std::exception& e) {
    return emit_error("internal", 1, e.what());
  }
  return 0;
}
