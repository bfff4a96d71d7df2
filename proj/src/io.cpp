#include "qlm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qlm {

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), cols_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << "\n";
}

CsvWriter& CsvWriter::operator<<(double v) { return *this << fmt(v); }

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  if (col_ >= cols_) throw std::logic_error("csv row longer than header");
  os_ << (col_++ ? "," : "") << s;
  return *this;
}

void CsvWriter::end_row() {
  if (col_ != cols_) throw std::logic_error("csv row shorter than header");
  os_ << "\n";
  col_ = 0;
}

void write_loschmidt_csv(std::ostream& os, const ScanGrid& g, int n) {
  CsvWriter w(os, {"J_over_m", "t_m", "re_G", "im_G", "L", "lambda"});
  for (size_t i = 0; i < g.x.values.size(); ++i)
    for (size_t j = 0; j < g.y.values.size(); ++j) {
      const cplx z = g.samples(i, j);
      const double L = std::norm(z);
      w << g.x.values[i] << g.y.values[j] << z.real() << z.imag() << L << (L > 0 ? -std::log(L) / n : INFINITY);
      w.end_row();
    }
}

void write_order_csv(std::ostream& os, const ScanGrid& g) {
  CsvWriter w(os, {"k", "t_m", "re_g", "im_g", "phase_g"});
  for (size_t i = 0; i < g.x.values.size(); ++i)
    for (size_t j = 0; j < g.y.values.size(); ++j) {
      const cplx z = g.samples(i, j);
      w << g.x.values[i] << g.y.values[j] << z.real() << z.imag() << std::arg(z);
      w.end_row();
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) out.push_back(c);
  return out;
}

double to_double(const std::string& s) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (pos != s.size() && s.find_first_not_of(" \t\r", pos) != std::string::npos) throw ConfigError("not a number: '" + s + "'");
  return v;
}

}  // namespace

ScanGrid read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("grid csv is empty");
  const auto head = split(line);
  if (head.size() < 4) throw ConfigError("grid csv needs x, y, re, im columns");
  std::vector<std::array<double, 4>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto c = split(line);
    if (c.size() < 4) throw ConfigError("short grid csv row");
    rows.push_back({to_double(c[0]), to_double(c[1]), to_double(c[2]), to_double(c[3])});
  }
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (xs.empty() || r[0] != xs.back()) {
      if (!xs.empty() && !(r[0] > xs.back())) throw ConfigError("grid csv x column must ascend in blocks");
      xs.push_back(r[0]);
    }
    if (xs.size() == 1) ys.push_back(r[1]);
  }
  if (rows.size() != xs.size() * ys.size()) throw ConfigError("grid csv is not rectangular");
  ScanGrid g;
  g.x = {head[0], xs};
  g.y = {head[1], ys};
  g.samples.resize(xs.size(), ys.size());
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < ys.size(); ++j) {
      const auto& r = rows[i * ys.size() + j];
      if (r[1] != ys[j]) throw ConfigError("grid csv y column differs between blocks");
      g.samples(i, j) = {r[2], r[3]};
    }
  g.validate();
  return g;
}

void write_vortex_csv(std::ostream& os, const ScanGrid& g, const VortexScan& v) {
  CsvWriter w(os, {g.x.label, g.y.label, "winding"});
  for (const auto& e : v.vortices) {
    w << 0.5 * (g.x.values[e.ix] + g.x.values[e.ix + 1]) << 0.5 * (g.y.values[e.iy] + g.y.values[e.iy + 1])
      << double(e.winding);
    w.end_row();
  }
}

nlohmann::json vortex_summary(const ScanGrid& g, const VortexScan& v) {
  int np = 0, nm = 0;
  for (const auto& e : v.vortices) (e.winding > 0 ? np : nm) += std::abs(e.winding);
  nlohmann::json j{{"n_plus", np}, {"n_minus", nm}, {"indeterminate", v.indeterminate.size()},
                   {"max_abs_winding", v.max_abs_winding}};
  try {
    j["boundary"] = boundary_winding(g);
  } catch (const NumericalError&) {
    j["boundary"] = nullptr;
  }
  if (v.max_abs_winding > 1) j["diagnostic"] = "plaquette winding above 1; refine the grid";
  return j;
}

nlohmann::json basis_json(const GaugeBasis& b) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < b.dim(); ++i) {
    std::vector<int> l, m;
    for (int n = 0; n < b.n_sites(); ++n) {
      l.push_back(b.link_z(i, n));
      m.push_back(b.matter_z(i, n));
    }
    arr.push_back({{"encoding", b.code(i)}, {"link_z", l}, {"matter_z", m}});
  }
  return arr;
}

KeyValueConfig KeyValueConfig::parse(std::istream& is) {
  KeyValueConfig c;
  std::string line;
  int ln = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    ++ln;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(ln) + ": expected key=value");
    const std::string k = trim(line.substr(0, eq));
    if (k.empty()) throw ConfigError("config line " + std::to_string(ln) + ": empty key");
    if (c.has(k)) throw ConfigError("config line " + std::to_string(ln) + ": duplicate key " + k);
    c.kv_[k] = trim(line.substr(eq + 1));
  }
  return c;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  return parse(f);
}

std::string KeyValueConfig::get(const std::string& key, const std::string& def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

double KeyValueConfig::get(const std::string& key, double def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : to_double(it->second);
}

int KeyValueConfig::get(const std::string& key, int def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  const double v = to_double(it->second);
  if (v != std::floor(v)) throw ConfigError("key " + key + " must be an integer");
  return static_cast<int>(v);
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& allowed) const {
  std::string bad;
  for (const auto& [k, v] : kv_)
    if (!allowed.count(k)) bad += (bad.empty() ? "" : ", ") + k;
  if (!bad.empty()) throw ConfigError("unknown config keys: " + bad);
}

}  // namespace qlm
