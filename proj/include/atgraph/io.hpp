#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace atgraph {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Label-sequence file: header line `alpha=<real>`, then one label per line.
inline void write_labels_file(std::ostream& os, double alpha,
                              const label_sequence& ls) {
  os << "alpha=" << format_double(alpha) << "\n";
  for (label_t l : ls.labels()) os << l << "\n";
}

inline void write_labels_file(const std::string& path, double alpha,
                              const label_sequence& ls) {
  std::ofstream f(path);
  if (!f) throw error("cannot open for writing: " + path);
  write_labels_file(f, alpha, ls);
}

struct labels_file {
  double alpha = 0.0;
  label_sequence labels;
};

inline labels_file read_labels_file(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("alpha=", 0) != 0)
    throw error("labels file must start with an alpha= header");
  labels_file out;
  out.alpha = std::stod(line.substr(6));
  std::vector<label_t> ls;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ls.push_back(std::stoll(line));
  }
  out.labels = label_sequence::from_labels(std::move(ls));
  return out;
}

inline labels_file read_labels_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error("cannot open: " + path);
  return read_labels_file(f);
}

/// Edge list export: one `u v` pair per line; a trailing unmatched end is
/// dropped.
inline void write_edge_list(std::ostream& os, const label_sequence& ls) {
  const auto& l = ls.labels();
  for (std::size_t e = 0; e + 1 < l.size(); e += 2)
    os << l[e] << " " << l[e + 1] << "\n";
}

inline void write_edge_list(const std::string& path, const label_sequence& ls) {
  std::ofstream f(path);
  if (!f) throw error("cannot open for writing: " + path);
  write_edge_list(f, ls);
}

/// Schedule file: `# provenance: ...` header, one arrival time per line,
/// `inf` marks the infinite tail.
inline void write_schedule_file(std::ostream& os, const arrival_schedule& s) {
  os << "# provenance: " << s.provenance() << "\n";
  for (step_t t : s.finite_times()) os << t << "\n";
  os << "inf\n";
}

inline void write_schedule_file(const std::string& path,
                                const arrival_schedule& s) {
  std::ofstream f(path);
  if (!f) throw error("cannot open for writing: " + path);
  write_schedule_file(f, s);
}

inline arrival_schedule read_schedule_file(std::istream& is) {
  std::vector<step_t> times;
  std::string provenance = "file";
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto p = line.find("provenance:");
      if (p != std::string::npos) {
        provenance = line.substr(p + 11);
        if (!provenance.empty() && provenance[0] == ' ') provenance.erase(0, 1);
      }
      continue;
    }
    if (line == "inf") {
      times.push_back(infinite_time);
      continue;
    }
    times.push_back(std::stoll(line));
  }
  return arrival_schedule::from_times(std::move(times), std::move(provenance));
}

inline arrival_schedule read_schedule_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error("cannot open: " + path);
  return read_schedule_file(f);
}

/// Stick-variable dump: line j holds psi_j.
inline void write_psi_dump(std::ostream& os, const std::vector<double>& psi) {
  for (double p : psi) os << format_double(p) << "\n";
}

inline void write_psi_dump(const std::string& path,
                           const std::vector<double>& psi) {
  std::ofstream f(path);
  if (!f) throw error("cannot open for writing: " + path);
  write_psi_dump(f, psi);
}

}  // namespace atgraph
