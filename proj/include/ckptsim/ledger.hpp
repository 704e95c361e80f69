#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "energy_model.hpp"

namespace ckptsim {

/// Node states as they appear in traces. The numeric values are the Paraver
/// state codes written by trace_io.
enum class TraceState : int {
  Computing = 1,
  Blocked = 2,
  Checkpointing = 3,
  Down = 4,
  Restarting = 5,
  Reexecuting = 6,
  GoingToSleep = 7,
  Sleeping = 8,
  Waking = 9,
};

inline const char* state_name(TraceState s) {
  switch (s) {
    case TraceState::Computing: return "computing";
    case TraceState::Blocked: return "blocked";
    case TraceState::Checkpointing: return "checkpointing";
    case TraceState::Down: return "down";
    case TraceState::Restarting: return "restarting";
    case TraceState::Reexecuting: return "reexecuting";
    case TraceState::GoingToSleep: return "going_to_sleep";
    case TraceState::Sleeping: return "sleeping";
    case TraceState::Waking: return "waking";
  }
  return "unknown";
}

inline const char* state_label(TraceState s) {
  switch (s) {
    case TraceState::Computing: return "Computing";
    case TraceState::Blocked: return "Blocked wait";
    case TraceState::Checkpointing: return "Checkpoint";
    case TraceState::Down: return "Down";
    case TraceState::Restarting: return "Restart";
    case TraceState::Reexecuting: return "Re-execution";
    case TraceState::GoingToSleep: return "Going to sleep";
    case TraceState::Sleeping: return "Sleeping";
    case TraceState::Waking: return "Waking up";
  }
  return "Unknown";
}

inline constexpr TraceState kAllStates[] = {
    TraceState::Computing,    TraceState::Blocked,     TraceState::Checkpointing,
    TraceState::Down,         TraceState::Restarting,  TraceState::Reexecuting,
    TraceState::GoingToSleep, TraceState::Sleeping,    TraceState::Waking,
};

struct LedgerInterval {
  TraceState state = TraceState::Computing;
  std::string freq;
  Watts power = 0.0;
  Seconds start = 0.0;
  Seconds end = 0.0;

  Seconds duration() const { return end - start; }
  Joules energy() const { return power * (end - start); }
};

/// Per-node power timeline. Intervals of one node are appended in time order
/// and tile the node's timeline; contiguous intervals with the same state,
/// frequency and power are merged.
class EnergyLedger {
public:
  EnergyLedger() = default;
  explicit EnergyLedger(std::size_t nodes) : nodes_(nodes) {}

  std::size_t nodes() const noexcept { return nodes_.size(); }
  const std::vector<LedgerInterval>& intervals(std::size_t node) const { return nodes_.at(node); }

  void append(std::size_t node, LedgerInterval iv) {
    if (!(iv.end > iv.start)) return;
    auto& v = nodes_.at(node);
    if (!v.empty()) {
      auto& last = v.back();
      if (last.end == iv.start && last.state == iv.state && last.power == iv.power &&
          last.freq == iv.freq) {
        last.end = iv.end;
        return;
      }
    }
    v.push_back(std::move(iv));
  }

  /// Appends without merging; used when reading traces back.
  void append_raw(std::size_t node, LedgerInterval iv) {
    if (node >= nodes_.size()) nodes_.resize(node + 1);
    nodes_[node].push_back(std::move(iv));
  }

  Joules energy(std::size_t node) const {
    Joules e = 0.0;
    for (const auto& iv : nodes_.at(node)) e += iv.energy();
    return e;
  }

  Joules total_energy() const {
    Joules e = 0.0;
    for (std::size_t n = 0; n < nodes_.size(); ++n) e += energy(n);
    return e;
  }

  /// Energy of `node` over [from, to], clipping intervals at the bounds.
  Joules energy_between(std::size_t node, Seconds from, Seconds to) const {
    Joules e = 0.0;
    for (const auto& iv : nodes_.at(node)) {
      const Seconds a = std::max(iv.start, from);
      const Seconds b = std::min(iv.end, to);
      if (b > a) e += iv.power * (b - a);
    }
    return e;
  }

  Seconds horizon(std::size_t node) const {
    const auto& v = nodes_.at(node);
    return v.empty() ? 0.0 : v.back().end;
  }

private:
  std::vector<std::vector<LedgerInterval>> nodes_;
};

}  // namespace ckptsim
