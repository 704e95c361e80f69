#pragma once

// Failure-time strategy selection for surviving nodes: pick the compute-phase
// frequency and the wait-phase action with the lowest energy over the
// intervention interval, never letting the recovered process wait.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "energy_model.hpp"

namespace ckptsim {

struct FailureSpec {
  std::size_t failed_node = 0;
  Seconds failure_time = 0.0;
};

/// Failure plus the re-execution it implies.
struct FailureContext {
  std::size_t failed_node = 0;
  Seconds failure_time = 0.0;
  Seconds t_reexec = 0.0;
};

/// Early checkpoint before blocking on a recovering process. Fires when the
/// checkpoint timer has reached `fraction * ckpt_interval`; disabled when
/// empty.
using MoveAheadPolicy = std::optional<double>;

/// Which levers the selector may pull.
struct StrategyOptions {
  bool scale_compute = true;  // try every level for the compute phase
  bool min_freq_wait = true;  // drop to the minimum level while busy-waiting
};

struct SelectorContext {
  FrequencyTable table;
  WaitMode mode = WaitMode::ActiveWait;
  NodePowerProfile profile;
  FTConfig ft;
  SleepThresholds thresholds;
  MoveAheadPolicy move_ahead;
  StrategyOptions options;
};

/// Compute phase of an intervention interval at one frequency.
struct ComputePhase {
  Seconds busy = 0.0;  // wall time from failure until blocking
  int timer_ckpts = 0;
  bool moved_ahead = false;
  Joules energy = 0.0;

  int n_ckpt() const { return timer_ckpts + (moved_ahead ? 1 : 0); }
};

/// Timer checkpoints fire when the timer (wall time spent computing since
/// the last checkpoint) reaches the interval strictly before the work is
/// done; the timer restarts at zero when a checkpoint completes.
inline ComputePhase compute_phase(const InterventionEstimate& est, const FrequencyTable& table,
                                  std::size_t level, const FTConfig& ft,
                                  const MoveAheadPolicy& move_ahead) {
  const auto& f = table[level];
  const Seconds wall = est.t_comp_max * f.beta;
  const Seconds c0 = est.ckpt_residual > 0 ? 0.0 : est.ckpt_counter;
  const Seconds interval = ft.ckpt_interval;

  int n = 0;
  Seconds c_end = c0 + wall;
  if (wall > 0) {
    const Seconds first = std::max(interval - c0, 0.0);
    if (wall > first) {
      n = static_cast<int>(std::ceil((wall - first) / interval));
      c_end = wall - first - (n - 1) * interval;
    }
  }

  ComputePhase cp;
  cp.timer_ckpts = n;
  cp.moved_ahead = est.move_ahead_eligible && move_ahead && c_end >= *move_ahead * interval;
  cp.busy = est.ckpt_residual + wall + cp.n_ckpt() * t_ckpt_at(f, ft);
  cp.energy = est.ckpt_residual * table.max().p_ckpt + e_comp(est.t_comp_max, cp.n_ckpt(), f, ft);
  return cp;
}

/// Closed-form estimate from the communication links of `node`. Returns
/// nothing when the node has no link to the failed node. With several links,
/// the one whose blocking point comes first represents the node.
inline std::optional<InterventionEstimate> estimate_times(std::size_t node,
                                                          const FailureContext& failure,
                                                          const std::vector<CommLink>& links,
                                                          const FTConfig& ft,
                                                          Seconds ckpt_counter = 0.0) {
  const CommLink* rep = nullptr;
  for (const auto& l : links) {
    if (l.i != node || l.j != failure.failed_node) continue;
    l.validate();
    if (!rep || l.alpha_ij * l.i_comm < rep->alpha_ij * rep->i_comm) rep = &l;
  }
  if (!rep) return std::nullopt;

  InterventionEstimate est;
  est.t_comp_max = rep->alpha_ij * rep->i_comm;
  est.t_recover = t_recover(ft, failure.t_reexec);
  est.t_failed = t_failed(est.t_recover, rep->alpha_ji, rep->i_comm);
  est.ckpt_counter = ckpt_counter;

  FrequencyTable unit({FrequencyLevel{"max", 1.0, 1.0, 1.0, 1.0, 1.0}});
  est.n_ckpt = compute_phase(est, unit, 0, ft, std::nullopt).n_ckpt();
  return est;
}

struct PlanPrediction {
  Seconds t_comp_f = 0.0;  // compute phase wall time, checkpoints included
  Seconds t_wait = 0.0;
  Joules e_comp = 0.0;
  Joules e_wait = 0.0;
  Joules e_total = 0.0;
  Joules eni = 0.0;
  Joules saving = 0.0;
};

struct InterventionPlan {
  std::size_t node = 0;
  std::size_t level = 0;  // index into the frequency table
  FrequencyLevel compute_freq;
  WaitAction wait_action = WaitAction::NoAction;
  int n_ckpt = 0;
  bool moved_ahead = false;
  Seconds t_failed = 0.0;
  Seconds baseline_t_comp = 0.0;  // compute phase at maximum frequency
  PlanPrediction predicted;
};

/// Baseline (no intervention) energy for an estimate. The node must block on
/// the failed process, i.e. its maximum-frequency compute phase fits.
inline Joules baseline_energy(const InterventionEstimate& est, const SelectorContext& ctx) {
  const auto base = compute_phase(est, ctx.table, ctx.table.max_index(), ctx.ft, ctx.move_ahead);
  if (base.busy > est.t_failed) throw ContractError("baseline_energy: node does not block");
  return base.energy + e_awake_wait(est.t_failed - base.busy, ctx.mode, ctx.profile);
}

/// Sweeps every admissible frequency; for each, the wait action follows the
/// sleep gate. Keeps the strictly cheapest total, so ties go to the higher
/// frequency. Returns nothing when the node would not block at maximum
/// frequency (it is then not affected by the failure).
inline std::optional<InterventionPlan> evaluate(std::size_t node, const InterventionEstimate& est,
                                                const SelectorContext& ctx) {
  const auto& table = ctx.table;
  const auto base = compute_phase(est, table, table.max_index(), ctx.ft, ctx.move_ahead);
  if (base.busy > est.t_failed) return std::nullopt;
  const Joules eni_j = base.energy + e_awake_wait(est.t_failed - base.busy, ctx.mode, ctx.profile);

  const NodePowerProfile awake =
      ctx.options.min_freq_wait ? slowed_wait_profile(ctx.profile, table) : ctx.profile;

  std::optional<InterventionPlan> best;
  Joules min_energy = kInfinity;
  const std::size_t last = ctx.options.scale_compute ? table.size() : 1;
  for (std::size_t level = 0; level < last; ++level) {
    const auto cp = compute_phase(est, table, level, ctx.ft, ctx.move_ahead);
    if (cp.busy > est.t_failed) continue;  // the recovered process would wait

    const Seconds wait = est.t_failed - cp.busy;
    auto we = ei_wait(wait, ctx.mode, awake, ctx.thresholds);
    if (we.action == WaitAction::MinFreq && !ctx.options.min_freq_wait)
      we.action = WaitAction::NoAction;

    const Joules total = cp.energy + we.energy;
    if (total < min_energy) {
      min_energy = total;
      InterventionPlan p;
      p.node = node;
      p.level = level;
      p.compute_freq = table[level];
      p.wait_action = we.action;
      p.n_ckpt = cp.n_ckpt();
      p.moved_ahead = cp.moved_ahead;
      p.t_failed = est.t_failed;
      p.baseline_t_comp = base.busy;
      p.predicted = {cp.busy, wait, cp.energy, we.energy, total, eni_j, eni_j - total};
      best = p;
    }
  }
  if (!best) throw ContractError("evaluate: no feasible frequency");
  return best;
}

/// One entry per node; entries without an estimate (failed node, nodes not
/// directly blocked by it) stay empty.
inline std::vector<std::optional<InterventionPlan>> evaluate_all(
    const std::vector<std::optional<InterventionEstimate>>& estimates, const SelectorContext& ctx) {
  std::vector<std::optional<InterventionPlan>> plans(estimates.size());
  for (std::size_t n = 0; n < estimates.size(); ++n)
    if (estimates[n]) plans[n] = evaluate(n, *estimates[n], ctx);
  return plans;
}

}  // namespace ckptsim
