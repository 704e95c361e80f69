#pragma once

// Per-node savings rows, savings.csv, sweeps and the text tables.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "errors.hpp"
#include "scenario.hpp"

namespace ckptsim {

struct SavingsRow {
  std::string scenario;
  std::size_t node = 0;
  std::string compute_action = "No action";
  double t_comp_min = 0.0;
  std::string wait_action = "No action";
  double t_wait_min = 0.0;
  double tt_min = 0.0;
  Joules save_j = 0.0;
  double save_j_per_s_wait = 0.0;
  double save_j_per_s_total = 0.0;
  double save_pct = 0.0;
  Joules eni_j = 0.0;
};

inline constexpr const char* kSavingsHeader =
    "scenario,node,compute_action,t_comp_min,wait_action,t_wait_min,tt_min,save_j,"
    "save_j_per_s_wait,save_j_per_s_total,save_pct,eni_j";

inline std::string wait_action_label(WaitAction a, const FrequencyTable& table) {
  switch (a) {
    case WaitAction::Sleep: return "sleep";
    case WaitAction::MinFreq: return table.min().display();
    case WaitAction::NoAction: break;
  }
  return "No action";
}

/// One row per surviving node; nodes the failure does not block get zeros.
inline std::vector<SavingsRow> savings_rows(const Scenario& s, const SimResult& r) {
  std::vector<SavingsRow> rows;
  for (const auto& o : r.nodes) {
    if (o.failed) continue;
    SavingsRow row;
    row.scenario = s.name;
    row.node = o.node;
    if (o.plan) {
      const auto& p = *o.plan;
      const auto& pr = p.predicted;
      if (p.level != s.freq_table.max_index()) row.compute_action = p.compute_freq.display();
      row.wait_action = wait_action_label(p.wait_action, s.freq_table);
      row.t_comp_min = pr.t_comp_f / 60.0;
      row.t_wait_min = pr.t_wait / 60.0;
      row.tt_min = p.t_failed / 60.0;
      row.save_j = o.saving;
      row.eni_j = o.eni;
      if (pr.t_wait > 0) row.save_j_per_s_wait = o.saving / pr.t_wait;
      if (p.t_failed > 0) row.save_j_per_s_total = o.saving / p.t_failed;
      if (o.eni > 0) row.save_pct = 100.0 * o.saving / o.eni;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

inline void write_savings_csv(const std::vector<SavingsRow>& rows, std::ostream& out) {
  out << kSavingsHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.node << ',' << r.compute_action << ',' << detail::fmt("%.6f", r.t_comp_min)
        << ',' << r.wait_action << ',' << detail::fmt("%.6f", r.t_wait_min) << ','
        << detail::fmt("%.6f", r.tt_min) << ',' << detail::fmt("%.6f", r.save_j) << ','
        << detail::fmt("%.6f", r.save_j_per_s_wait) << ',' << detail::fmt("%.6f", r.save_j_per_s_total)
        << ',' << detail::fmt("%.6f", r.save_pct) << ',' << detail::fmt("%.6f", r.eni_j) << '\n';
  }
  if (!out) throw std::runtime_error("savings: write failed");
}

inline std::vector<SavingsRow> read_savings_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSavingsHeader) throw ValidationError("savings csv: bad header");
  std::vector<SavingsRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    if (f.size() != 12) throw ScenarioError(lineno, "savings csv: expected 12 fields");
    try {
      SavingsRow r;
      r.scenario = f[0];
      r.node = std::stoull(f[1]);
      r.compute_action = f[2];
      r.t_comp_min = std::stod(f[3]);
      r.wait_action = f[4];
      r.t_wait_min = std::stod(f[5]);
      r.tt_min = std::stod(f[6]);
      r.save_j = std::stod(f[7]);
      r.save_j_per_s_wait = std::stod(f[8]);
      r.save_j_per_s_total = std::stod(f[9]);
      r.save_pct = std::stod(f[10]);
      r.eni_j = std::stod(f[11]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ScenarioError(lineno, "savings csv: malformed number");
    }
  }
  return rows;
}

inline void render_table(const std::vector<SavingsRow>& rows, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-5s %-11s %8s %-11s %8s %8s %12s %9s %9s %7s\n", "node", "compute", "T(min)",
                "wait", "T(min)", "TT(min)", "save(J)", "J/s wait", "J/s TT", "%");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-5zu %-11s %8.2f %-11s %8.2f %8.2f %12.2f %9.2f %9.2f %7.2f\n", r.node,
                  r.compute_action.c_str(), r.t_comp_min, r.wait_action.c_str(), r.t_wait_min, r.tt_min,
                  r.save_j, r.save_j_per_s_wait, r.save_j_per_s_total, r.save_pct);
    out << buf;
  }
}

/// Groups rows by scenario name and prints one table each.
inline void render_report(const std::vector<SavingsRow>& rows, std::ostream& out) {
  std::map<std::string, std::vector<SavingsRow>> by;
  for (const auto& r : rows) by[r.scenario].push_back(r);
  bool first = true;
  for (const auto& [name, group] : by) {
    if (!first) out << '\n';
    first = false;
    out << "== " << name << " ==\n";
    render_table(group, out);
  }
}

/// Collects savings.csv from `dir` and every directory below it.
inline std::vector<SavingsRow> collect_savings(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ValidationError("report: not a directory: " + dir.string());
  std::vector<fs::path> files;
  if (fs::exists(dir / "savings.csv")) files.push_back(dir / "savings.csv");
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() == "savings.csv" && e.path().parent_path() != dir)
      files.push_back(e.path());
  if (files.empty()) throw ValidationError("report: no savings.csv under " + dir.string());
  std::sort(files.begin(), files.end());

  std::vector<SavingsRow> rows;
  for (const auto& f : files) {
    std::ifstream in(f);
    auto part = read_savings_csv(in);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

struct SweepPoint {
  Seconds failure_time = 0.0;
  std::vector<SavingsRow> rows;
};

/// Reruns the scenario once per failure time; the failed node is taken from
/// the scenario (node 0 when it has none).
inline std::vector<SweepPoint> sweep(const Scenario& s, const std::vector<Seconds>& times, bool parallel = false) {
  if (times.empty()) throw ValidationError("sweep: empty list of failure times");
  auto one = [&s](Seconds t) {
    Scenario c = s;
    c.failure = FailureSpec{s.failure ? s.failure->failed_node : 0, t};
    if (!(t >= 0)) throw ValidationError("sweep: failure time must be >= 0");
    return SweepPoint{t, savings_rows(c, run(c))};
  };
  std::vector<SweepPoint> points;
  if (parallel) {
    std::vector<std::future<SweepPoint>> jobs;
    for (auto t : times) jobs.push_back(std::async(std::launch::async, one, t));
    for (auto& j : jobs) points.push_back(j.get());
  } else {
    for (auto t : times) points.push_back(one(t));
  }
  return points;
}

inline void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out) {
  out << "failure_time,node,save_j,save_pct\n";
  for (const auto& p : points)
    for (const auto& r : p.rows)
      out << detail::fmt("%.6f", p.failure_time) << ',' << r.node << ',' << detail::fmt("%.6f", r.save_j) << ','
          << detail::fmt("%.6f", r.save_pct) << '\n';
  if (!out) throw std::runtime_error("sweep: write failed");
}

}  // namespace ckptsim
