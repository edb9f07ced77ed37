#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "matryoshka/disorder.hpp"
#include "matryoshka/lattice.hpp"
#include "matryoshka/protocols.hpp"

namespace mk {

// "0.25", "-pi/3", "5*pi/12", "0.8/sqrt2"
double eval_number(const std::string& s);

// [section] key = value; keys are addressed as "section.key".
class Config {
 public:
  static Config load(const std::string& path);  // INI, or a run manifest (.json)
  static Config parse_ini(const std::string& text, const std::string& origin = "<string>");
  static Config from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  void set(const std::string& key, const std::string& value);
  void override_with(const std::string& assignment);  // "section.key=value"
  bool has(const std::string& key) const;
  bool empty() const { return data_.empty(); }

  std::string str(const std::string& key, const std::string& def) const;
  std::string str(const std::string& key) const;
  double num(const std::string& key, double def) const;
  double num(const std::string& key) const;
  int integer(const std::string& key, int def) const;
  std::uint64_t u64(const std::string& key, std::uint64_t def) const;
  bool flag(const std::string& key, bool def) const;
  std::vector<double> list(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  // Configuration error naming every key outside the known set.
  void check_known() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

ChainSpec chain_from(const Config& c);
TransferProtocol transfer_from(const Config& c);
BraidProtocol braid_from(const Config& c);
DisorderSpec disorder_from(const Config& c);
MemoryProtocol memory_from(const Config& c);
QuditMemorySpec qudit_from(const Config& c);

}  // namespace mk
