#pragma once

// Closed-form time and energy model for one surviving node's intervention
// interval: the span from the failure until the node's first rendezvous with
// the recovered process. Times are seconds, powers watts, energies joules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ckptsim {

using Seconds = double;
using Watts = double;
using Joules = double;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One P-state: clock label, application and checkpoint power, and the
/// runtime stretch of each relative to the maximum frequency.
struct FrequencyLevel {
  std::string label;  // e.g. "2.8"
  double ghz = 0.0;
  Watts p_comp = 0.0;
  double beta = 1.0;
  Watts p_ckpt = 0.0;
  double gamma = 1.0;

  std::string display() const { return label + " GHz"; }
};

/// Levels ordered by strictly decreasing clock. Index 0 is the maximum
/// frequency, the last index the minimum.
class FrequencyTable {
public:
  FrequencyTable() = default;
  explicit FrequencyTable(std::vector<FrequencyLevel> levels) : levels_(std::move(levels)) {
    validate();
  }

  const std::vector<FrequencyLevel>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  const FrequencyLevel& operator[](std::size_t i) const { return levels_.at(i); }

  std::size_t max_index() const noexcept { return 0; }
  std::size_t min_index() const noexcept { return levels_.empty() ? 0 : levels_.size() - 1; }
  const FrequencyLevel& max() const { return levels_.at(max_index()); }
  const FrequencyLevel& min() const { return levels_.at(min_index()); }

  void validate() const {
    if (levels_.empty()) throw ValidationError("frequency table: must not be empty");
    std::size_t unit = 0;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      const auto& l = levels_[i];
      if (!(l.beta >= 1.0)) throw ValidationError("frequency " + l.label + ": beta must be >= 1");
      if (!(l.gamma >= 1.0)) throw ValidationError("frequency " + l.label + ": gamma must be >= 1");
      if (!(l.p_comp > 0.0)) throw ValidationError("frequency " + l.label + ": p_comp must be > 0");
      if (!(l.p_ckpt > 0.0)) throw ValidationError("frequency " + l.label + ": p_ckpt must be > 0");
      if (i > 0 && !(l.ghz < levels_[i - 1].ghz))
        throw ValidationError("frequency table: clocks must be strictly decreasing");
      if (l.beta == 1.0) ++unit;
    }
    if (levels_[0].beta != 1.0 || levels_[0].gamma != 1.0)
      throw ValidationError("frequency table: maximum level must have beta = gamma = 1");
    if (unit != 1) throw ValidationError("frequency table: exactly one level may have beta = 1");
  }

  friend bool operator==(const FrequencyTable& a, const FrequencyTable& b) {
    if (a.levels_.size() != b.levels_.size()) return false;
    for (std::size_t i = 0; i < a.levels_.size(); ++i) {
      const auto& x = a.levels_[i];
      const auto& y = b.levels_[i];
      if (x.ghz != y.ghz || x.p_comp != y.p_comp || x.beta != y.beta || x.p_ckpt != y.p_ckpt ||
          x.gamma != y.gamma)
        return false;
    }
    return true;
  }

private:
  std::vector<FrequencyLevel> levels_;
};

enum class WaitMode { ActiveWait, IdleWait };

enum class WaitAction { Sleep, MinFreq, NoAction };

inline const char* to_string(WaitMode m) { return m == WaitMode::ActiveWait ? "active" : "idle"; }

inline const char* to_string(WaitAction a) {
  switch (a) {
    case WaitAction::Sleep: return "sleep";
    case WaitAction::MinFreq: return "min-freq";
    case WaitAction::NoAction: return "none";
  }
  return "?";
}

/// Node-level powers and S-state transition costs.
struct NodePowerProfile {
  Watts p_base = 60.0;
  Watts p_active_wait = 166.0;  // billed for busy waits at the maximum level
  Watts p_idle_wait = 60.0;
  Seconds t_go_sleep = 25.0;
  Seconds t_wakeup = 5.0;
  Watts p_go_sleep = 51.0;
  Watts p_wakeup = 91.0;
  Watts p_sleep = 12.0;

  Seconds t_switch() const { return t_go_sleep + t_wakeup; }

  void validate() const {
    if (!(p_base > 0 && p_active_wait > 0 && p_idle_wait > 0 && p_go_sleep > 0 && p_wakeup > 0 &&
          p_sleep > 0))
      throw ValidationError("power profile: all powers must be > 0");
    if (!(t_go_sleep >= 0 && t_wakeup >= 0))
      throw ValidationError("power profile: transition times must be >= 0");
    if (!(p_sleep < p_idle_wait)) throw ValidationError("power profile: p_sleep must be < p_idle_wait");
    if (!(p_idle_wait <= p_active_wait))
      throw ValidationError("power profile: p_idle_wait must be <= p_active_wait");
  }
};

/// Checkpoint/restart timing, all at maximum frequency.
struct FTConfig {
  Seconds t_ckpt = 120.0;
  Seconds ckpt_interval = 1800.0;
  Seconds t_down = 0.0;
  Seconds t_restart = 120.0;

  void validate() const {
    if (!(t_ckpt >= 0 && ckpt_interval >= 0 && t_down >= 0 && t_restart >= 0))
      throw ValidationError("ft: all durations must be >= 0");
    if (!(ckpt_interval > t_ckpt)) throw ValidationError("ft: ckpt_interval must exceed t_ckpt");
  }
};

/// Communication interval between surviving node i and failed node j, with
/// the fraction of it each side still has to execute at failure time.
struct CommLink {
  std::size_t i = 0;
  std::size_t j = 0;
  Seconds i_comm = 0.0;
  double alpha_ij = 0.0;
  double alpha_ji = 0.0;

  void validate() const {
    if (!(i_comm > 0)) throw ValidationError("link: i_comm must be > 0");
    if (!(alpha_ij >= 0 && alpha_ij <= 1 && alpha_ji >= 0 && alpha_ji <= 1))
      throw ValidationError("link: alpha must lie in [0, 1]");
  }
};

/// Margins for the sleep decision. Infinity disables sleeping.
struct SleepThresholds {
  double mu1 = 1.0;
  double mu2 = 1.0;

  void validate() const {
    if (!(mu1 > 0 && mu2 > 0)) throw ValidationError("thresholds: mu1 and mu2 must be > 0");
  }
};

/// What the selector knows about a surviving node at failure time.
///
/// `t_comp_max` is remaining application work (seconds at maximum frequency)
/// before the node posts its operation with the failed node; `n_ckpt` the
/// checkpoints that phase contains at maximum frequency. The remaining fields
/// let the selector recount checkpoints at other frequencies: the checkpoint
/// timer value at failure, the unfinished part of a checkpoint in progress at
/// failure (always at maximum frequency), and whether an early checkpoint
/// before blocking is allowed for this node.
struct InterventionEstimate {
  Seconds t_comp_max = 0.0;
  Seconds t_failed = 0.0;
  int n_ckpt = 0;
  Seconds ckpt_counter = 0.0;
  Seconds ckpt_residual = 0.0;
  bool move_ahead_eligible = false;
  Seconds t_recover = 0.0;
};

// ---------------------------------------------------------------------------
// Times

inline Seconds t_comp(double alpha_ij, Seconds i_comm, const FrequencyLevel& f) {
  return alpha_ij * i_comm * f.beta;
}

inline Seconds t_ckpt_at(const FrequencyLevel& f, const FTConfig& ft) { return ft.t_ckpt * f.gamma; }

inline Seconds t_recover(const FTConfig& ft, Seconds t_reexec) {
  if (t_reexec < 0) throw ContractError("t_recover: re-execution time must be >= 0");
  return ft.t_down + ft.t_restart + t_reexec;
}

inline Seconds t_failed(Seconds t_recover, double alpha_ji, Seconds i_comm) {
  return t_recover + alpha_ji * i_comm;
}

/// Clamped at zero. Callers decide feasibility on the unclamped difference.
inline Seconds t_wait(Seconds t_failed, Seconds t_comp_f) { return std::max(t_failed - t_comp_f, 0.0); }

// ---------------------------------------------------------------------------
// Energies

inline Joules e_comp(Seconds t_comp_max, int n_ckpt, const FrequencyLevel& f, const FTConfig& ft) {
  if (n_ckpt < 0) throw ContractError("e_comp: n_ckpt must be >= 0");
  return t_comp_max * f.beta * f.p_comp + n_ckpt * t_ckpt_at(f, ft) * f.p_ckpt;
}

inline Joules e_awake_wait(Seconds t_wait, WaitMode mode, const NodePowerProfile& prof) {
  if (t_wait < 0) throw ContractError("e_awake_wait: wait must be >= 0");
  return t_wait * (mode == WaitMode::ActiveWait ? prof.p_active_wait : prof.p_idle_wait);
}

inline Joules ei_sleep_wait(Seconds t_wait, const NodePowerProfile& prof) {
  const Seconds t_sleep = t_wait - prof.t_go_sleep - prof.t_wakeup;
  if (t_sleep < 0) throw ContractError("ei_sleep_wait: wait shorter than sleep + wakeup transitions");
  return prof.t_go_sleep * prof.p_go_sleep + t_sleep * prof.p_sleep + prof.t_wakeup * prof.p_wakeup;
}

struct WaitEnergy {
  Joules energy = 0.0;
  WaitAction action = WaitAction::NoAction;
};

/// Wait-phase energy under intervention. `prof.p_active_wait` must carry the
/// awake busy-wait power of the intervened node (the minimum-frequency
/// application power when the wait may be slowed down).
///
/// Sleeping needs both margins and a wait that physically fits the two
/// transitions; with mu1 < 1 the second condition is the binding one.
inline WaitEnergy ei_wait(Seconds t_wait, WaitMode mode, const NodePowerProfile& prof,
                          const SleepThresholds& th) {
  if (t_wait < 0) throw ContractError("ei_wait: wait must be >= 0");
  const Joules awake = e_awake_wait(t_wait, mode, prof);
  const Seconds t_sw = prof.t_switch();
  if (t_wait > th.mu1 * t_sw && t_wait >= t_sw) {
    const Joules asleep = ei_sleep_wait(t_wait, prof);
    if (asleep < th.mu2 * awake) return {asleep, WaitAction::Sleep};
  }
  if (mode == WaitMode::ActiveWait && t_wait > 0) return {awake, WaitAction::MinFreq};
  return {awake, WaitAction::NoAction};
}

/// Copy of `prof` whose busy-wait power is the minimum-frequency
/// application power.
inline NodePowerProfile slowed_wait_profile(NodePowerProfile prof, const FrequencyTable& table) {
  prof.p_active_wait = table.min().p_comp;
  return prof;
}

/// Baseline energy over the intervention interval: compute phase and awake
/// wait, both at maximum frequency.
inline Joules eni(Seconds t_comp_max, int n_ckpt, Seconds t_failed, const FrequencyTable& table,
                  WaitMode mode, const NodePowerProfile& prof, const FTConfig& ft) {
  const auto& fa = table.max();
  const Seconds busy = t_comp_max + n_ckpt * t_ckpt_at(fa, ft);
  if (busy > t_failed) throw ContractError("eni: compute phase longer than t_failed");
  return e_comp(t_comp_max, n_ckpt, fa, ft) + e_awake_wait(t_wait(t_failed, busy), mode, prof);
}

/// Energy with intervention: compute phase at `level`, wait phase billed per
/// `action`. MinFreq bills the minimum-frequency application power; NoAction
/// bills the awake power of `mode` from `prof`.
inline Joules ei(const FrequencyTable& table, std::size_t level, WaitAction action,
                 Seconds t_comp_max, int n_ckpt, Seconds t_failed, WaitMode mode,
                 const NodePowerProfile& prof, const FTConfig& ft) {
  const auto& f = table[level];
  const Seconds busy = t_comp_max * f.beta + n_ckpt * t_ckpt_at(f, ft);
  if (busy > t_failed) throw ContractError("ei: frequency " + f.label + " is infeasible");
  const Seconds wait = t_failed - busy;
  Joules wait_energy = 0.0;
  switch (action) {
    case WaitAction::Sleep: wait_energy = ei_sleep_wait(wait, prof); break;
    case WaitAction::MinFreq:
      if (mode != WaitMode::ActiveWait) throw ContractError("ei: MinFreq requires active waits");
      wait_energy = wait * table.min().p_comp;
      break;
    case WaitAction::NoAction: wait_energy = e_awake_wait(wait, mode, prof); break;
  }
  return e_comp(t_comp_max, n_ckpt, f, ft) + wait_energy;
}

inline Joules energy_saving(Joules eni, Joules ei) { return eni - ei; }

}  // namespace ckptsim
