#pragma once
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlm/dynamics.hpp"
#include "qlm/lattice.hpp"
#include "qlm/vortex.hpp"

namespace qlm {

// shortest round-trip text for a double
std::string fmt(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(const std::string& s);
  void end_row();

 private:
  std::ostream& os_;
  size_t cols_, col_ = 0;
};

// J_over_m,t_m,re_G,im_G,L,lambda; x-major rows
void write_loschmidt_csv(std::ostream& os, const ScanGrid& g, int n_sites);
// k,t_m,re_g,im_g,phase_g
void write_order_csv(std::ostream& os, const ScanGrid& g);
// first two columns are the axes, then real and imaginary parts
ScanGrid read_grid_csv(std::istream& is);

void write_vortex_csv(std::ostream& os, const ScanGrid& g, const VortexScan& v);
nlohmann::json vortex_summary(const ScanGrid& g, const VortexScan& v);

nlohmann::json basis_json(const GaugeBasis& b);

// flat key=value file; '#' starts a comment
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig parse(std::istream& is);
  static KeyValueConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& def) const;
  double get(const std::string& key, double def) const;
  int get(const std::string& key, int def) const;
  // throws ConfigError naming every key outside allowed
  void reject_unknown(const std::set<std::string>& allowed) const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace qlm
