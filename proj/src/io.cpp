#include "matryoshka/io.hpp"

#include <cstdio>

#include "matryoshka/errors.hpp"

namespace mk {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) : path_(path), out_(path) {
  if (!out_) fail(ErrorKind::io, "cannot write '" + path + "'");
  for (const auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(double x) { return cell(fmt17(x)); }
CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (!first_) out_ << ',';
  out_ << s;
  first_ = false;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
  if (!out_) fail(ErrorKind::io, "write failed on '" + path_ + "'");
}

nlohmann::json lattice_to_json(const Lattice& lat) {
  nlohmann::json j;
  j["sites"] = nlohmann::json::array();
  j["sublattice"] = nlohmann::json::array();
  for (int i = 0; i < lat.size(); ++i) {
    j["sites"].push_back(lat.sites[i].str());
    j["sublattice"].push_back(lat.sublattice[i] == Sub::A ? "A" : "B");
  }
  j["triplets"] = nlohmann::json::array();
  for (int i = 0; i < lat.size(); ++i)
    for (int k = i; k < lat.size(); ++k)
      if (lat.hamiltonian(i, k) != 0.0) j["triplets"].push_back({i, k, lat.hamiltonian(i, k)});
  return j;
}

}  // namespace mk
