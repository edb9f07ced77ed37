#include "matryoshka/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "matryoshka/errors.hpp"

namespace mk {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char ch) { return std::isspace(ch); };
  while (!s.empty() && ws(s.back())) s.pop_back();
  size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double factor(const std::string& f, const std::string& whole) {
  if (f == "pi") return std::numbers::pi;
  if (f == "sqrt2") return std::numbers::sqrt2;
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(f, &used);
  } catch (...) {
    used = 0;
  }
  if (used != f.size() || f.empty()) fail(ErrorKind::config, "cannot read number '" + whole + "'");
  return v;
}

std::pair<std::string, std::string> split_key(const std::string& key) {
  auto dot = key.find('.');
  if (dot == std::string::npos) fail(ErrorKind::config, "config key '" + key + "' needs the form section.key");
  return {key.substr(0, dot), key.substr(dot + 1)};
}

}  // namespace

double eval_number(const std::string& raw) {
  std::string s = trim(raw);
  double sign = 1;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    if (s[0] == '-') sign = -1;
    s = trim(s.substr(1));
  }
  if (s.empty()) fail(ErrorKind::config, "empty number");
  double v = 1;
  char op = '*';
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] != '*' && s[i] != '/') continue;
    const double f = factor(trim(s.substr(start, i - start)), raw);
    v = op == '*' ? v * f : v / f;
    if (i < s.size()) op = s[i];
    start = i + 1;
  }
  if (!std::isfinite(v)) fail(ErrorKind::config, "number '" + raw + "' is not finite");
  return sign * v;
}

Config Config::parse_ini(const std::string& text, const std::string& origin) {
  boost::property_tree::ptree pt;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    std::ostringstream os;
    os << origin << ":" << e.line() << ": " << e.message();
    fail(ErrorKind::config, os.str());
  }
  Config c;
  for (const auto& [sec, body] : pt) {
    if (body.empty() && !body.data().empty())
      fail(ErrorKind::config, origin + ": key '" + sec + "' appears outside a [section]");
    for (const auto& [k, v] : body) c.data_[sec][k] = trim(v.data());
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::io, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      fail(ErrorKind::config, path + ": " + e.what());
    }
    return from_json(j.contains("config") ? j["config"] : j);
  }
  return parse_ini(text, path);
}

Config Config::from_json(const nlohmann::json& j) {
  Config c;
  if (!j.is_object()) fail(ErrorKind::config, "JSON config must be an object of sections");
  for (const auto& [sec, body] : j.items()) {
    if (!body.is_object()) fail(ErrorKind::config, "JSON config section '" + sec + "' must be an object");
    for (const auto& [k, v] : body.items()) c.data_[sec][k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  return c;
}

nlohmann::json Config::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [sec, body] : data_)
    for (const auto& [k, v] : body) j[sec][k] = v;
  return j;
}

void Config::set(const std::string& key, const std::string& value) {
  auto [s, k] = split_key(key);
  data_[s][k] = trim(value);
}

void Config::override_with(const std::string& a) {
  auto eq = a.find('=');
  if (eq == std::string::npos) fail(ErrorKind::config, "override '" + a + "' needs section.key=value");
  set(trim(a.substr(0, eq)), a.substr(eq + 1));
}

bool Config::has(const std::string& key) const {
  auto [s, k] = split_key(key);
  auto it = data_.find(s);
  return it != data_.end() && it->second.count(k);
}

std::string Config::str(const std::string& key) const {
  if (!has(key)) fail(ErrorKind::config, "missing config key '" + key + "'");
  auto [s, k] = split_key(key);
  return data_.at(s).at(k);
}

std::string Config::str(const std::string& key, const std::string& def) const { return has(key) ? str(key) : def; }

double Config::num(const std::string& key) const {
  try {
    return eval_number(str(key));
  } catch (const Error& e) {
    fail(ErrorKind::config, key + ": " + e.what());
  }
}

double Config::num(const std::string& key, double def) const { return has(key) ? num(key) : def; }

int Config::integer(const std::string& key, int def) const {
  if (!has(key)) return def;
  double v = num(key);
  if (v != std::floor(v) || std::abs(v) > 2e9) fail(ErrorKind::config, key + " must be an integer");
  return static_cast<int>(v);
}

std::uint64_t Config::u64(const std::string& key, std::uint64_t def) const {
  if (!has(key)) return def;
  const std::string v = str(key);
  try {
    size_t used = 0;
    auto x = std::stoull(v, &used);
    if (used == v.size()) return x;
  } catch (...) {
  }
  fail(ErrorKind::config, key + " must be an unsigned integer");
}

bool Config::flag(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorKind::config, key + " must be true or false");
}

std::vector<double> Config::list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : split(str(key), ',')) {
    try {
      out.push_back(eval_number(w));
    } catch (const Error& e) {
      fail(ErrorKind::config, key + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> Config::words(const std::string& key) const { return split(str(key), ','); }

void Config::check_known() const {
  static const std::map<std::string, std::set<std::string>> known{
      {"chain", {"order", "angles", "cells", "scale", "boundary", "sites", "base_angle", "scales"}},
      {"schedule", {"T", "dt", "lambda", "gamma", "ramp", "T_leg", "direction", "moves", "frozen"}},
      {"disorder", {"kind", "sigma", "knots", "seed", "realizations", "sample_every"}},
      {"protocol",
       {"kind", "order", "u", "k", "target_energy", "attachments", "tau", "t_wait", "t_max", "samples",
        "tail_fraction", "threshold", "nk", "n0", "n1", "r0", "channels"}},
      {"output", {"dir", "prefix"}},
  };
  std::vector<std::string> bad;
  for (const auto& [s, body] : data_) {
    auto it = known.find(s);
    for (const auto& [k, v] : body)
      if (it == known.end() || !it->second.count(k)) bad.push_back(s + "." + k);
  }
  if (!bad.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& b : bad) msg += " " + b;
    fail(ErrorKind::config, msg);
  }
}

ChainSpec chain_from(const Config& c) {
  ChainSpec s;
  s.order = c.integer("chain.order", 0);
  s.angles = c.list("chain.angles");
  s.cells = c.integer("chain.cells", 1);
  s.scale = c.num("chain.scale", 1.0);
  const std::string b = c.str("chain.boundary", "open");
  if (b != "open" && b != "periodic") fail(ErrorKind::config, "chain.boundary must be open or periodic");
  s.boundary = b == "open" ? Boundary::open : Boundary::periodic;
  s.sites = c.integer("chain.sites", 0);
  s.validate();
  return s;
}

TransferProtocol transfer_from(const Config& c) {
  TransferProtocol p;
  p.order = c.integer("protocol.order", 1);
  p.lambda = c.num("schedule.lambda", p.lambda);
  p.gamma = c.num("schedule.gamma", 0.0);
  p.T = c.num("schedule.T", p.T);
  p.dt = c.num("schedule.dt", 0.0);
  p.ramp = parse_ramp(c.str("schedule.ramp", "linear"));
  const std::string d = c.str("schedule.direction", "left_to_right");
  if (d != "left_to_right" && d != "right_to_left")
    fail(ErrorKind::config, "schedule.direction must be left_to_right or right_to_left");
  p.from_left = d == "left_to_right";
  p.validate();
  return p;
}

BraidProtocol braid_from(const Config& c) {
  BraidProtocol p;
  p.lambda = c.num("schedule.lambda", p.lambda);
  p.T_leg = c.num("schedule.T_leg", p.T_leg);
  p.dt = c.num("schedule.dt", 0.0);
  p.ramp = parse_ramp(c.str("schedule.ramp", "smooth"));
  p.moves = c.integer("schedule.moves", 3);
  p.frozen = c.flag("schedule.frozen", false);
  p.validate();
  return p;
}

DisorderSpec disorder_from(const Config& c) {
  DisorderSpec d;
  d.kind = parse_kind(c.str("disorder.kind", "onsite"));
  d.sigma = c.num("disorder.sigma", 0.0);
  d.knots = c.integer("disorder.knots", 20);
  d.seed = c.u64("disorder.seed", 1);
  d.realizations = c.integer("disorder.realizations", 1);
  d.validate();
  return d;
}

MemoryProtocol memory_from(const Config& c) {
  MemoryProtocol p;
  p.spec.chain = chain_from(c);
  QubitSpec q;
  q.k = c.num("protocol.k", 0.0);
  q.u = c.num("protocol.u", 0.05);
  q.target_energy = c.num("protocol.target_energy", 1.0);
  for (const auto& w : c.words("protocol.attachments")) {
    auto colon = w.find(':');
    if (colon == std::string::npos) fail(ErrorKind::config, "protocol.attachments entries look like site:weight");
    double site = eval_number(w.substr(0, colon));
    if (site != std::floor(site)) fail(ErrorKind::config, "attachment site must be an integer");
    q.attachments.emplace_back(static_cast<int>(site), eval_number(w.substr(colon + 1)));
  }
  if (q.u < 0) fail(ErrorKind::config, "protocol.u must be >= 0");
  p.spec.qubits = {q};
  p.tau = c.num("protocol.tau", 0.0);
  if (c.has("protocol.t_wait")) p.t_wait = c.list("protocol.t_wait");
  return p;
}

QuditMemorySpec qudit_from(const Config& c) {
  QuditMemorySpec s;
  if (c.has("chain.angles")) s.angles = c.list("chain.angles");
  s.sites = c.integer("chain.sites", s.sites);
  s.u = c.num("protocol.u", s.u);
  s.k = c.num("protocol.k", s.k);
  if (c.has("protocol.t_wait")) s.t_wait = c.list("protocol.t_wait");
  if (s.angles.size() != 4) fail(ErrorKind::config, "qudit chain needs four angles");
  if (s.sites < 8) fail(ErrorKind::config, "qudit chain needs at least 8 sites");
  return s;
}

}  // namespace mk
