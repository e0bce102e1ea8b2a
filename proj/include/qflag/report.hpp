#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qflag/check.hpp"
#include "qflag/rational.hpp"

namespace qflag {

/// One verification case. Subset indices are 0-based here; the CLI and the
/// report use 1-based indices.
struct CaseConfig {
  char type = 'A';
  int rank = 1;
  std::vector<int> subset;
  bool symbolic = false;
  std::vector<Rational> qs{Rational(1, 2), Rational(2, 3), Rational(3, 5)};
  long dim_cap = 4096;
  long cyclic_cap = 20000;
  unsigned seed = 1;
  int cocycle_samples = 3;

  bool run_quantum = true;
  bool run_projection = true;
  bool run_invariance = true;
  bool run_matrix_units = true;
  bool run_modular = true;
  bool run_cycle = true;
  bool run_pairing = true;
  bool run_cocycle = true;
  bool run_classical = true;

  void validate() const {
    if (rank < 1) throw std::invalid_argument("rank must be positive");
    for (int i : subset) {
      if (i < 0 || i >= rank) throw std::invalid_argument("subset index " + std::to_string(i + 1) + " is out of range");
    }
    if (!symbolic) {
      if (qs.empty()) throw std::invalid_argument("evaluated mode needs at least one q value");
      for (const auto& q : qs) {
        if (sgn(q) <= 0 || q >= 1) throw std::invalid_argument("q must lie strictly between 0 and 1, got " + to_string(q));
      }
    }
    if (dim_cap < 1 || cyclic_cap < 1) throw std::invalid_argument("caps must be positive");
    if (cocycle_samples < 0) throw std::invalid_argument("cocycle sample count must be non-negative");
  }

  std::string label() const {
    std::string s = std::string(1, type) + std::to_string(rank) + " S={";
    for (std::size_t k = 0; k < subset.size(); ++k) s += (k ? "," : "") + std::to_string(subset[k] + 1);
    return s + "}";
  }
};

struct Report {
  CaseConfig config;
  std::vector<Check> checks;

  void add(Check c) { checks.push_back(std::move(c)); }
  void sort() {
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  }
  long count(Status s) const {
    return static_cast<long>(std::count_if(checks.begin(), checks.end(), [&](const Check& c) { return c.status == s; }));
  }
  bool passed() const { return count(Status::Fail) == 0; }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

/// Structured report. With timing off the output is a pure function of the
/// configuration.
inline nlohmann::ordered_json report_json(const Report& r, bool timing = true) {
  using nlohmann::ordered_json;
  const CaseConfig& c = r.config;
  ordered_json cs;
  cs["type"] = std::string(1, c.type);
  cs["rank"] = c.rank;
  ordered_json sub = ordered_json::array();
  for (int i : c.subset) sub.push_back(i + 1);
  cs["subset"] = sub;
  if (c.symbolic) {
    cs["q"] = "symbolic";
  } else {
    ordered_json qs = ordered_json::array();
    for (const auto& q : c.qs) qs.push_back(to_string(q));
    cs["q"] = qs;
  }
  cs["dim_cap"] = c.dim_cap;
  cs["cyclic_cap"] = c.cyclic_cap;
  cs["seed"] = c.seed;
  ordered_json out;
  out["case"] = cs;
  ordered_json checks = ordered_json::array();
  for (const auto& k : r.checks) {
    ordered_json j;
    j["name"] = k.name;
    j["status"] = status_name(k.status);
    j["lhs"] = k.lhs;
    j["rhs"] = k.rhs;
    j["detail"] = k.detail;
    j["certificate"] = k.certificate;
    if (timing) j["wall_ms"] = k.wall_ms;
    checks.push_back(std::move(j));
  }
  out["checks"] = checks;
  ordered_json counts;
  for (Status s : {Status::Pass, Status::Fail, Status::Skipped, Status::Measured}) counts[status_name(s)] = r.count(s);
  out["counts"] = counts;
  out["verdict"] = r.passed() ? "pass" : "fail";
  return out;
}

inline std::string report_text(const Report& r, bool timing = true) { return report_json(r, timing).dump(2) + "\n"; }

/// Human-readable summary: one line per check and a verdict line.
inline std::string report_summary(const Report& r) {
  std::ostringstream os;
  os << "case " << r.config.label() << " q=";
  if (r.config.symbolic) {
    os << "symbolic";
  } else {
    for (std::size_t k = 0; k < r.config.qs.size(); ++k) os << (k ? "," : "") << to_string(r.config.qs[k]);
  }
  os << "\n";
  for (const auto& c : r.checks) {
    std::string st = status_name(c.status);
    std::transform(st.begin(), st.end(), st.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    os << st << " " << c.name;
    if (!c.lhs.empty() || !c.rhs.empty()) os << "  " << c.lhs << " | " << c.rhs;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  os << "verdict " << (r.passed() ? "pass" : "fail") << ": " << r.count(Status::Pass) << " pass, " << r.count(Status::Fail)
     << " fail, " << r.count(Status::Skipped) << " skipped, " << r.count(Status::Measured) << " measured\n";
  return os.str();
}

inline void write_report(const Report& r, const std::string& path, bool timing = true) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << report_text(r, timing);
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace qflag
