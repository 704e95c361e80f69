#pragma once

// Scenario description and the key/value scenario file format.
//
//   [system]        name, nodes, wait_mode, p_base, p_idle_wait, p_active_wait,
//                   t_go_sleep, p_go_sleep, t_wakeup, p_wakeup, p_sleep
//   [frequencies]   one row per level: ghz p_comp beta p_ckpt gamma
//   [frequency_adjust]  p_comp, p_ckpt, beta, gamma deltas for non-max rows
//   [ft]            t_ckpt, ckpt_interval, t_down, t_restart,
//                   move_ahead (fraction | off), phase_offsets
//   [thresholds]    mu1, mu2 (inf allowed)
//   [strategy]      scale_compute, min_freq_wait (yes | no)
//   [failure]       node, time
//   [script.<n>]    compute <seconds> | ssend <peer> | recv <peer>
//
// '#' and ';' start comments.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "energy_model.hpp"
#include "errors.hpp"
#include "strategy.hpp"

namespace ckptsim {

struct Op {
  enum class Kind { Compute, Ssend, Recv };
  Kind kind = Kind::Compute;
  Seconds work = 0.0;   // Compute: duration at maximum frequency
  std::size_t peer = 0;  // Ssend / Recv
  std::size_t line = 0;  // source line, 0 when built in code

  static Op compute(Seconds w) { return {Kind::Compute, w, 0, 0}; }
  static Op ssend(std::size_t p) { return {Kind::Ssend, 0.0, p, 0}; }
  static Op recv(std::size_t p) { return {Kind::Recv, 0.0, p, 0}; }

  bool is_comm() const { return kind != Kind::Compute; }
};

/// One operation list per node.
using CommScript = std::vector<std::vector<Op>>;

/// Adjustment applied to every non-maximum frequency row.
struct FrequencyAdjust {
  Watts p_comp = 0.0;
  Watts p_ckpt = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  bool empty() const { return p_comp == 0 && p_ckpt == 0 && beta == 0 && gamma == 0; }
};

struct Scenario {
  std::string name = "scenario";
  std::size_t nodes = 0;
  FrequencyTable base_table;  // rows as written
  FrequencyAdjust adjust;
  FrequencyTable freq_table;  // effective table
  NodePowerProfile node_profile;
  FTConfig ft;
  WaitMode wait_mode = WaitMode::ActiveWait;
  SleepThresholds thresholds;
  StrategyOptions options;
  MoveAheadPolicy move_ahead = 0.5;
  CommScript comm_script;
  std::vector<Seconds> ckpt_phase_offsets;
  std::optional<FailureSpec> failure;

  SelectorContext selector_context() const {
    return {freq_table, wait_mode, node_profile, ft, thresholds, move_ahead, options};
  }

  void validate() const;
};

inline FrequencyTable apply_adjust(const FrequencyTable& table, const FrequencyAdjust& adj) {
  if (adj.empty()) return table;
  auto levels = table.levels();
  for (std::size_t i = 1; i < levels.size(); ++i) {
    levels[i].p_comp += adj.p_comp;
    levels[i].p_ckpt += adj.p_ckpt;
    levels[i].beta += adj.beta;
    levels[i].gamma += adj.gamma;
  }
  return FrequencyTable(std::move(levels));
}

inline void validate_script(const CommScript& script, std::size_t nodes) {
  if (script.size() != nodes)
    throw ScriptError("script: expected " + std::to_string(nodes) + " node scripts, got " +
                      std::to_string(script.size()));
  auto where = [](const Op& op) {
    return op.line ? "line " + std::to_string(op.line) + ": " : std::string();
  };
  // sends[a][b] counts a -> b messages, recvs[b][a] the matching receives
  std::vector<std::vector<std::size_t>> sends(nodes, std::vector<std::size_t>(nodes, 0));
  auto recvs = sends;
  for (std::size_t n = 0; n < nodes; ++n) {
    for (const auto& op : script[n]) {
      if (op.kind == Op::Kind::Compute) {
        if (!(op.work >= 0)) throw ScriptError(where(op) + "compute duration must be >= 0");
        continue;
      }
      if (op.peer >= nodes)
        throw ScriptError(where(op) + "node " + std::to_string(n) + " references unknown peer " +
                          std::to_string(op.peer));
      if (op.peer == n)
        throw ScriptError(where(op) + "node " + std::to_string(n) + " communicates with itself");
      (op.kind == Op::Kind::Ssend ? sends[n][op.peer] : recvs[n][op.peer])++;
    }
  }
  for (std::size_t a = 0; a < nodes; ++a)
    for (std::size_t b = 0; b < nodes; ++b)
      if (sends[a][b] != recvs[b][a])
        throw ScriptError("script: unmatched messages " + std::to_string(a) + " -> " +
                          std::to_string(b) + " (" + std::to_string(sends[a][b]) + " ssend, " +
                          std::to_string(recvs[b][a]) + " recv)");
}

inline void Scenario::validate() const {
  if (nodes < 2) throw ValidationError("scenario: at least 2 nodes required");
  freq_table.validate();
  node_profile.validate();
  ft.validate();
  thresholds.validate();
  if (move_ahead && !(*move_ahead >= 0))
    throw ValidationError("scenario: move_ahead fraction must be >= 0");
  if (ckpt_phase_offsets.size() != nodes)
    throw ValidationError("scenario: one checkpoint phase offset per node required");
  for (auto o : ckpt_phase_offsets)
    if (!(o >= 0 && o <= ft.ckpt_interval))
      throw ValidationError("scenario: phase offsets must lie in [0, ckpt_interval]");
  if (failure) {
    if (failure->failed_node >= nodes) throw ValidationError("scenario: failed node out of range");
    if (!(failure->failure_time >= 0)) throw ValidationError("scenario: failure time must be >= 0");
  }
  validate_script(comm_script, nodes);
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline double parse_number(const std::string& tok, std::size_t line, const std::string& what) {
  if (tok == "inf" || tok == "infinity") return kInfinity;
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, what + ": expected a number, got '" + tok + "'");
  }
}

inline std::size_t parse_index(const std::string& tok, std::size_t line, const std::string& what) {
  const double v = parse_number(tok, line, what);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw ScenarioError(line, what + ": expected a non-negative integer, got '" + tok + "'");
  return static_cast<std::size_t>(v);
}

inline bool parse_bool(const std::string& tok, std::size_t line, const std::string& what) {
  if (tok == "yes" || tok == "true" || tok == "on" || tok == "1") return true;
  if (tok == "no" || tok == "false" || tok == "off" || tok == "0") return false;
  throw ScenarioError(line, what + ": expected yes/no, got '" + tok + "'");
}

struct Entry {
  std::string value;
  std::size_t line;
};

}  // namespace detail

inline MoveAheadPolicy parse_move_ahead(const std::string& tok, std::size_t line = 0) {
  if (tok == "off" || tok == "none" || tok == "no") return std::nullopt;
  return detail::parse_number(tok, line, "move_ahead");
}

inline WaitMode parse_wait_mode(const std::string& tok, std::size_t line = 0) {
  if (tok == "active") return WaitMode::ActiveWait;
  if (tok == "idle") return WaitMode::IdleWait;
  throw ScenarioError(line, "wait_mode: expected active or idle, got '" + tok + "'");
}

/// Parses scenario text. `origin` names the source in diagnostics.
inline Scenario parse_scenario(std::istream& in, const std::string& origin = "<input>") {
  using detail::Entry;
  std::map<std::string, std::map<std::string, Entry>> kv;
  std::vector<std::pair<std::vector<std::string>, std::size_t>> freq_rows;
  std::map<std::size_t, std::vector<Op>> scripts;
  std::map<std::size_t, std::size_t> script_lines;

  std::string section;
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const auto cut = raw.find_first_of("#;");
    const std::string line = detail::trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError(lineno, "malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"system",     "frequencies", "frequency_adjust", "ft",
                                    "thresholds", "strategy",    "failure"};
      bool ok = section.rfind("script.", 0) == 0;
      for (auto k : known) ok = ok || section == k;
      if (!ok) throw ScenarioError(lineno, "unknown section [" + section + "]");
      if (section.rfind("script.", 0) == 0) {
        const auto n = detail::parse_index(section.substr(7), lineno, "script node");
        if (script_lines.count(n)) throw ScenarioError(lineno, "duplicate section [" + section + "]");
        script_lines[n] = lineno;
        scripts[n];
      }
      continue;
    }
    if (section.empty()) throw ScenarioError(lineno, "content outside of a section");

    if (section == "frequencies") {
      freq_rows.emplace_back(detail::split_ws(line), lineno);
      continue;
    }
    if (section.rfind("script.", 0) == 0) {
      const auto n = detail::parse_index(section.substr(7), lineno, "script node");
      const auto tok = detail::split_ws(line);
      if (tok.size() != 2) throw ScenarioError(lineno, "script: expected '<op> <argument>'");
      Op op;
      if (tok[0] == "compute") {
        op = Op::compute(detail::parse_number(tok[1], lineno, "compute"));
        if (!(op.work >= 0)) throw ScenarioError(lineno, "compute duration must be >= 0");
      } else if (tok[0] == "ssend") {
        op = Op::ssend(detail::parse_index(tok[1], lineno, "ssend peer"));
      } else if (tok[0] == "recv") {
        op = Op::recv(detail::parse_index(tok[1], lineno, "recv peer"));
      } else {
        throw ScenarioError(lineno, "script: unknown operation '" + tok[0] + "'");
      }
      op.line = lineno;
      if (op.is_comm() && op.peer == n)
        throw ScenarioError(lineno, "node " + std::to_string(n) + " communicates with itself");
      scripts[n].push_back(op);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ScenarioError(lineno, "expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ScenarioError(lineno, "expected 'key = value'");
    if (kv[section].count(key)) throw ScenarioError(lineno, "duplicate key '" + key + "'");
    kv[section][key] = Entry{value, lineno};
  }

  static const std::map<std::string, std::vector<std::string>> allowed = {
      {"system",
       {"name", "nodes", "wait_mode", "p_base", "p_idle_wait", "p_active_wait", "t_go_sleep",
        "p_go_sleep", "t_wakeup", "p_wakeup", "p_sleep"}},
      {"frequency_adjust", {"p_comp", "p_ckpt", "beta", "gamma"}},
      {"ft", {"t_ckpt", "ckpt_interval", "t_down", "t_restart", "move_ahead", "phase_offsets"}},
      {"thresholds", {"mu1", "mu2"}},
      {"strategy", {"scale_compute", "min_freq_wait"}},
      {"failure", {"node", "time"}},
  };
  for (const auto& [sec, entries] : kv) {
    const auto& names = allowed.at(sec);
    for (const auto& [key, e] : entries)
      if (std::find(names.begin(), names.end(), key) == names.end())
        throw ScenarioError(e.line, "unknown key '" + key + "' in [" + sec + "]");
  }

  auto find = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto s = kv.find(sec);
    if (s == kv.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  auto require = [&](const std::string& sec, const std::string& key) -> const Entry& {
    if (auto e = find(sec, key)) return *e;
    throw ScenarioError(0, origin + ": missing key '" + key + "' in [" + sec + "]");
  };
  auto number = [&](const std::string& sec, const std::string& key) {
    const auto& e = require(sec, key);
    return detail::parse_number(e.value, e.line, key);
  };
  auto number_or = [&](const std::string& sec, const std::string& key, double fallback) {
    auto e = find(sec, key);
    return e ? detail::parse_number(e->value, e->line, key) : fallback;
  };
  // Runs a validation step and pins any failure to the line of `key`.
  auto checked = [&](const std::string& sec, const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& err) {
      const auto e = find(sec, key);
      throw ScenarioError(e ? e->line : 0, err.what());
    }
  };

  Scenario s;
  if (auto e = find("system", "name")) s.name = e->value;
  {
    const auto& e = require("system", "nodes");
    s.nodes = detail::parse_index(e.value, e.line, "nodes");
    if (s.nodes < 2) throw ScenarioError(e.line, "nodes: at least 2 nodes required");
  }
  if (auto e = find("system", "wait_mode")) s.wait_mode = parse_wait_mode(e->value, e->line);

  if (freq_rows.empty()) throw ScenarioError(0, origin + ": missing [frequencies] rows");
  std::vector<FrequencyLevel> levels;
  for (const auto& [tok, line] : freq_rows) {
    if (tok.size() != 5)
      throw ScenarioError(line, "frequencies: expected 'ghz p_comp beta p_ckpt gamma'");
    FrequencyLevel l;
    l.label = tok[0];
    l.ghz = detail::parse_number(tok[0], line, "ghz");
    l.p_comp = detail::parse_number(tok[1], line, "p_comp");
    l.beta = detail::parse_number(tok[2], line, "beta");
    l.p_ckpt = detail::parse_number(tok[3], line, "p_ckpt");
    l.gamma = detail::parse_number(tok[4], line, "gamma");
    if (!(l.beta >= 1.0)) throw ScenarioError(line, "frequency " + l.label + ": beta must be >= 1");
    if (!(l.gamma >= 1.0)) throw ScenarioError(line, "frequency " + l.label + ": gamma must be >= 1");
    levels.push_back(l);
  }
  try {
    s.base_table = FrequencyTable(levels);
  } catch (const ValidationError& err) {
    throw ScenarioError(freq_rows.front().second, err.what());
  }
  s.adjust.p_comp = number_or("frequency_adjust", "p_comp", 0.0);
  s.adjust.p_ckpt = number_or("frequency_adjust", "p_ckpt", 0.0);
  s.adjust.beta = number_or("frequency_adjust", "beta", 0.0);
  s.adjust.gamma = number_or("frequency_adjust", "gamma", 0.0);
  try {
    s.freq_table = apply_adjust(s.base_table, s.adjust);
  } catch (const ValidationError& err) {
    throw ScenarioError(0, origin + ": [frequency_adjust] " + err.what());
  }

  auto& p = s.node_profile;
  p.p_base = number("system", "p_base");
  p.p_idle_wait = number_or("system", "p_idle_wait", p.p_base);
  p.p_active_wait = number_or("system", "p_active_wait", s.freq_table.max().p_comp);
  p.t_go_sleep = number("system", "t_go_sleep");
  p.p_go_sleep = number("system", "p_go_sleep");
  p.t_wakeup = number("system", "t_wakeup");
  p.p_wakeup = number("system", "p_wakeup");
  p.p_sleep = number("system", "p_sleep");
  checked("system", "p_sleep", [&] { p.validate(); });

  s.ft.t_ckpt = number("ft", "t_ckpt");
  s.ft.ckpt_interval = number("ft", "ckpt_interval");
  s.ft.t_down = number("ft", "t_down");
  s.ft.t_restart = number("ft", "t_restart");
  checked("ft", "ckpt_interval", [&] { s.ft.validate(); });
  if (auto e = find("ft", "move_ahead")) s.move_ahead = parse_move_ahead(e->value, e->line);
  if (auto e = find("ft", "phase_offsets")) {
    for (const auto& t : detail::split_ws(e->value))
      s.ckpt_phase_offsets.push_back(detail::parse_number(t, e->line, "phase_offsets"));
    if (s.ckpt_phase_offsets.size() == 1) s.ckpt_phase_offsets.resize(s.nodes, s.ckpt_phase_offsets[0]);
    if (s.ckpt_phase_offsets.size() != s.nodes)
      throw ScenarioError(e->line, "phase_offsets: expected one value per node");
  } else {
    s.ckpt_phase_offsets.assign(s.nodes, 0.0);
  }

  s.thresholds.mu1 = number_or("thresholds", "mu1", 1.0);
  s.thresholds.mu2 = number_or("thresholds", "mu2", 1.0);
  checked("thresholds", "mu1", [&] { s.thresholds.validate(); });

  if (auto e = find("strategy", "scale_compute"))
    s.options.scale_compute = detail::parse_bool(e->value, e->line, "scale_compute");
  if (auto e = find("strategy", "min_freq_wait"))
    s.options.min_freq_wait = detail::parse_bool(e->value, e->line, "min_freq_wait");

  if (kv.count("failure")) {
    FailureSpec f;
    const auto& n = require("failure", "node");
    f.failed_node = detail::parse_index(n.value, n.line, "failure node");
    if (f.failed_node >= s.nodes) throw ScenarioError(n.line, "failure node out of range");
    f.failure_time = number("failure", "time");
    if (!(f.failure_time >= 0)) throw ScenarioError(require("failure", "time").line, "failure time must be >= 0");
    s.failure = f;
  }

  s.comm_script.assign(s.nodes, {});
  for (auto& [n, ops] : scripts) {
    if (n >= s.nodes)
      throw ScenarioError(script_lines[n], "script for node " + std::to_string(n) + " out of range");
    for (const auto& op : ops)
      if (op.is_comm() && op.peer >= s.nodes)
        throw ScenarioError(op.line, "unknown peer " + std::to_string(op.peer));
    s.comm_script[n] = std::move(ops);
  }
  for (std::size_t n = 0; n < s.nodes; ++n)
    if (!script_lines.count(n))
      throw ScenarioError(0, origin + ": missing [script." + std::to_string(n) + "]");

  try {
    s.validate();
  } catch (const ScriptError& err) {
    throw ScenarioError(0, origin + ": " + err.what());
  } catch (const ValidationError& err) {
    throw ScenarioError(0, origin + ": " + err.what());
  }
  return s;
}

inline Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<text>") {
  std::istringstream in(text);
  return parse_scenario(in, origin);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(0, "cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

}  // namespace ckptsim
