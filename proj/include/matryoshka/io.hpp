#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "matryoshka/lattice.hpp"

namespace mk {

// Round-trippable decimal: 17 significant digits.
std::string fmt17(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  CsvWriter& cell(double x);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(long long x);
  void end_row();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  bool first_ = true;
};

// Sites in lattice order (cell-major, A_j before B_j for chains), upper-triangle triplets.
nlohmann::json lattice_to_json(const Lattice& lat);

}  // namespace mk
