#pragma once

// Trace serialization. CSV is exact and can be read back; the Paraver state
// trace (.prv + .pcf) is for viewing only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ledger.hpp"

namespace ckptsim {

inline constexpr const char* kCsvHeader = "node,state,freq,start_s,end_s,power_w,energy_j";

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline void check_sink(const std::ostream& out) {
  if (!out) throw std::runtime_error("trace: write failed");
}

}  // namespace detail

/// Seconds to integer nanoseconds, rounding half away from zero.
inline std::int64_t to_ns(Seconds t) { return std::llround(t * 1e9); }

inline void emit_csv(const EnergyLedger& ledger, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (std::size_t n = 0; n < ledger.nodes(); ++n)
    for (const auto& iv : ledger.intervals(n))
      out << n << ',' << state_name(iv.state) << ',' << iv.freq << ',' << detail::fixed6(iv.start) << ','
          << detail::fixed6(iv.end) << ',' << detail::fixed6(iv.power) << ','
          << detail::fixed6(iv.energy()) << '\n';
  detail::check_sink(out);
}

inline std::string to_csv(const EnergyLedger& ledger) {
  std::ostringstream s;
  emit_csv(ledger, s);
  return s.str();
}

/// Reads a trace written by emit_csv. Intervals are taken as written.
inline EnergyLedger parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ValidationError("trace csv: bad header");
  EnergyLedger ledger;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw ScenarioError(lineno, "trace csv: expected 7 fields");

    LedgerInterval iv;
    bool known = false;
    for (auto st : kAllStates)
      if (f[1] == state_name(st)) {
        iv.state = st;
        known = true;
      }
    if (!known) throw ScenarioError(lineno, "trace csv: unknown state '" + f[1] + "'");
    try {
      const auto node = static_cast<std::size_t>(std::stoull(f[0]));
      iv.freq = f[2];
      iv.start = std::stod(f[3]);
      iv.end = std::stod(f[4]);
      iv.power = std::stod(f[5]);
      ledger.append_raw(node, iv);
    } catch (const std::logic_error&) {
      throw ScenarioError(lineno, "trace csv: malformed number");
    }
  }
  return ledger;
}

/// Paraver state records, one task per node.
inline void emit_prv(const EnergyLedger& ledger, std::ostream& out) {
  const auto n = ledger.nodes();
  Seconds end = 0.0;
  for (std::size_t i = 0; i < n; ++i) end = std::max(end, ledger.horizon(i));

  out << "#Paraver (01/01/70 at 00:00):" << to_ns(end) << "_ns:" << n << '(';
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << 1;
  out << "):1:" << n << '(';
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << "1:" << i + 1;
  out << ")\n";

  for (std::size_t i = 0; i < n; ++i)
    for (const auto& iv : ledger.intervals(i))
      out << "1:" << i + 1 << ":1:" << i + 1 << ":1:" << to_ns(iv.start) << ':' << to_ns(iv.end) << ':'
          << static_cast<int>(iv.state) << '\n';
  detail::check_sink(out);
}

/// Companion .pcf with the state labels.
inline void emit_pcf(std::ostream& out) {
  out << "DEFAULT_OPTIONS\n\nLEVEL               THREAD\nUNITS               NANOSEC\n\nSTATES\n";
  out << "0    Idle\n";
  for (auto st : kAllStates) out << static_cast<int>(st) << "    " << state_label(st) << '\n';
  out << "\nSTATES_COLOR\n";
  static const char* colors[] = {"{117,195,255}", "{0,0,255}",     "{255,255,255}", "{153,102,51}",
                                 "{173,216,230}", "{255,255,0}",   "{0,153,0}",     "{255,0,174}",
                                 "{120,120,120}", "{255,140,0}"};
  for (int i = 0; i <= 9; ++i) out << i << "    " << colors[i] << '\n';
  detail::check_sink(out);
}

}  // namespace ckptsim
