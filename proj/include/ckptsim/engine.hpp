#pragma once

// Event-driven simulation of one representative process per node talking
// through blocking synchronous sends and blocking receives, with
// timer-driven uncoordinated checkpoints, one fail-stop, recovery of the
// failed node, and enactment of the failure-time plans on the survivors.
//
// A scenario is simulated several times with identical inputs:
//   failure-free   script check and application end
//   baseline       failure, no intervention (reference for savings); yields
//                  each survivor's estimate at failure time. Repeated while
//                  the set of early checkpoints settles.
//   intervened     failure with plans enacted
// Runs only differ after the failure, so the estimates are exact.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "energy_model.hpp"
#include "errors.hpp"
#include "ledger.hpp"
#include "scenario.hpp"
#include "strategy.hpp"

namespace ckptsim {

enum class Phase {
  Computing,
  BlockedSend,
  BlockedRecv,
  Checkpointing,
  Down,
  Restarting,
  Reexecuting,
  GoingToSleep,
  Sleeping,
  Waking,
  Finished,
};

enum class EventKind {
  ComputeDone,
  CkptTimer,
  CkptDone,
  Failure,
  DownDone,
  RestartDone,
  ReexecDone,
  SleepDone,
  WakeStart,
  WakeDone,
};

/// Both sides of a synchronous send leave the call when the later of the two
/// has posted. Transfers take no time.
inline Seconds rendezvous_time(Seconds send_posted, Seconds recv_posted) {
  return std::max(send_posted, recv_posted);
}

/// Early checkpoint before blocking on a recovering process.
inline bool should_move_ahead(Seconds since_ckpt, const FTConfig& ft, const MoveAheadPolicy& policy) {
  return policy && since_ckpt >= *policy * ft.ckpt_interval;
}

struct Rendezvous {
  std::size_t sender = 0;
  std::size_t receiver = 0;
  std::size_t ordinal = 0;  // k-th message from sender to receiver
  Seconds time = 0.0;
};

struct RunTrace {
  EnergyLedger ledger;
  std::vector<Rendezvous> rendezvous;
  std::vector<Seconds> finish;
  Seconds makespan = 0.0;
};

struct NodeOutcome {
  std::size_t node = 0;
  bool failed = false;
  std::optional<InterventionEstimate> estimate;  // empty: not directly blocked
  std::optional<InterventionPlan> plan;
  Seconds window_start = 0.0;
  Seconds window_end = 0.0;
  Joules eni = 0.0;  // baseline ledger over the window
  Joules ei = 0.0;   // intervened ledger over the window
  Joules saving = 0.0;

  bool affected() const { return plan.has_value(); }
};

struct SimResult {
  std::string scenario;
  std::optional<FailureSpec> failure;
  bool no_failure_run = false;  // failure requested after the application ended
  Seconds t_recover = 0.0;
  RunTrace baseline;
  RunTrace intervened;
  std::vector<NodeOutcome> nodes;
};

namespace detail {

struct EnactedPlan {
  std::size_t level = 0;
  WaitAction action = WaitAction::NoAction;
  Seconds rendezvous_time = 0.0;  // arrival of the recovered partner
};

struct RunSetup {
  std::optional<FailureSpec> failure;
  std::vector<char> move_ahead_eligible;
  std::vector<std::optional<EnactedPlan>> plans;
};

/// Survivor state captured at the failure instant.
struct Snapshot {
  Phase phase = Phase::Computing;
  Seconds counter = 0.0;
  Seconds ckpt_residual = 0.0;
  bool posted = false;
  std::optional<std::size_t> next_peer;  // peer of the next communication
  Seconds work_before = 0.0;             // work until that communication
};

/// First communication of a survivor after the failure.
struct Contact {
  bool posted = false;
  bool matched = false;
  Seconds post_time = 0.0;
  Seconds match_time = 0.0;
};

struct RunOutput {
  RunTrace trace;
  std::vector<Snapshot> snapshot;
  std::vector<Contact> contact;
  Seconds failed_last_ckpt = 0.0;
  bool failure_applied = false;
};

struct Event {
  Seconds time;
  int priority;  // failures observe every other change at the same instant
  std::uint64_t seq;
  EventKind kind;
  std::size_t node;
  std::uint64_t gen;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.priority, a.seq) > std::tie(b.time, b.priority, b.seq);
  }
};

class Run {
public:
  Run(const Scenario& s, RunSetup setup) : s_(s), setup_(std::move(setup)) {
    const auto n = s_.nodes;
    procs_.resize(n);
    out_.trace.ledger = EnergyLedger(n);
    out_.trace.finish.assign(n, 0.0);
    out_.snapshot.resize(n);
    out_.contact.resize(n);
    setup_.move_ahead_eligible.resize(n, 0);
    setup_.plans.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      procs_[i].counter = s_.ckpt_phase_offsets[i];
      load_op(i);
    }
  }

  RunOutput execute() {
    if (setup_.failure)
      push(setup_.failure->failure_time, EventKind::Failure, setup_.failure->failed_node, 1);
    for (std::size_t i = 0; i < procs_.size(); ++i) advance(i);

    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      if (ev.kind != EventKind::Failure && ev.gen != procs_[ev.node].gen) continue;
      now_ = ev.time;
      dispatch(ev);
    }

    for (std::size_t i = 0; i < procs_.size(); ++i) {
      if (procs_[i].phase != Phase::Finished) {
        const auto& op = s_.comm_script[i][procs_[i].pc];
        throw ScriptError("deadlock: node " + std::to_string(i) + " blocked on " +
                          (op.kind == Op::Kind::Ssend ? "ssend to " : "recv from ") +
                          std::to_string(op.peer));
      }
      out_.trace.makespan = std::max(out_.trace.makespan, out_.trace.finish[i]);
    }
    return std::move(out_);
  }

private:
  struct Proc {
    Phase phase = Phase::Computing;
    std::size_t pc = 0;
    Seconds work_left = 0.0;
    std::size_t level = 0;
    Seconds counter = 0.0;
    Seconds last_ckpt_end = 0.0;
    Seconds seg_start = 0.0;
    std::uint64_t gen = 0;
    bool posted = false;
    bool post_after_ckpt = false;
    std::optional<std::size_t> pending_level;
    // failure window: from the failure to the first rendezvous with the
    // failed node
    bool tracking = false;
    bool in_window = false;
    bool move_checked = false;
    bool slowed = false;  // busy-waiting at the minimum level
    Seconds wake_start = 0.0;
    Seconds wake_end = 0.0;
    // open ledger interval
    bool open = false;
    TraceState state = TraceState::Computing;
    Watts power = 0.0;
    std::size_t open_level = 0;
    Seconds open_start = 0.0;
  };

  const FrequencyLevel& lvl(std::size_t i) const { return s_.freq_table[i]; }
  std::size_t max_level() const { return s_.freq_table.max_index(); }
  std::size_t failed() const { return setup_.failure->failed_node; }
  bool is_failed(std::size_t n) const { return setup_.failure && n == failed(); }

  void push(Seconds t, EventKind k, std::size_t node, int priority = 0) {
    queue_.push(Event{t, priority, seq_++, k, node, procs_[node].gen});
  }

  void open(std::size_t n, TraceState st, Watts power) {
    auto& p = procs_[n];
    close(n);
    p.open = true;
    p.state = st;
    p.power = power;
    p.open_level = p.level;
    p.open_start = now_;
  }

  void close(std::size_t n) {
    auto& p = procs_[n];
    if (!p.open) return;
    out_.trace.ledger.append(n, {p.state, lvl(p.open_level).label, p.power, p.open_start, now_});
    p.open = false;
  }

  void load_op(std::size_t n) {
    auto& p = procs_[n];
    const auto& script = s_.comm_script[n];
    p.work_left = (p.pc < script.size() && script[p.pc].kind == Op::Kind::Compute) ? script[p.pc].work : 0.0;
  }

  Watts wait_power(std::size_t n) const {
    const auto& p = procs_[n];
    if (s_.wait_mode == WaitMode::IdleWait) return s_.node_profile.p_idle_wait;
    if (p.slowed) return lvl(p.level).p_comp;
    return p.level == max_level() ? s_.node_profile.p_active_wait : lvl(p.level).p_comp;
  }

  void advance(std::size_t n) {
    auto& p = procs_[n];
    const auto& script = s_.comm_script[n];
    while (p.pc < script.size()) {
      const auto& op = script[p.pc];
      if (op.kind == Op::Kind::Compute) {
        if (p.work_left > 0) {
          start_compute(n);
          return;
        }
        ++p.pc;
        load_op(n);
        continue;
      }
      if (p.in_window && !p.move_checked && op.peer == failed()) {
        p.move_checked = true;
        if (setup_.move_ahead_eligible[n] && should_move_ahead(p.counter, s_.ft, s_.move_ahead)) {
          start_ckpt(n, true);
          return;
        }
      }
      post(n);
      return;
    }
    p.phase = Phase::Finished;
    close(n);
    out_.trace.finish[n] = now_;
  }

  void start_compute(std::size_t n) {
    auto& p = procs_[n];
    p.phase = Phase::Computing;
    open(n, TraceState::Computing, lvl(p.level).p_comp);
    p.seg_start = now_;
    const Seconds to_done = p.work_left * lvl(p.level).beta;
    const Seconds to_timer = s_.ft.ckpt_interval - p.counter;
    if (to_timer < to_done)
      push(now_ + std::max(to_timer, 0.0), EventKind::CkptTimer, n);
    else
      push(now_ + to_done, EventKind::ComputeDone, n);
  }

  // Accounts the compute segment up to now and cancels its pending event.
  void stop_compute(std::size_t n) {
    auto& p = procs_[n];
    const Seconds elapsed = now_ - p.seg_start;
    p.counter += elapsed;
    p.work_left -= elapsed / lvl(p.level).beta;
    if (p.work_left < 0) p.work_left = 0;
    ++p.gen;
  }

  void start_ckpt(std::size_t n, bool post_after) {
    auto& p = procs_[n];
    p.phase = Phase::Checkpointing;
    p.post_after_ckpt = post_after;
    open(n, TraceState::Checkpointing, lvl(p.level).p_ckpt);
    p.seg_start = now_;
    push(now_ + t_ckpt_at(lvl(p.level), s_.ft), EventKind::CkptDone, n);
  }

  void post(std::size_t n) {
    auto& p = procs_[n];
    const auto& op = s_.comm_script[n][p.pc];
    p.phase = op.kind == Op::Kind::Ssend ? Phase::BlockedSend : Phase::BlockedRecv;
    p.posted = true;
    if (p.tracking && !out_.contact[n].posted) {
      out_.contact[n].posted = true;
      out_.contact[n].post_time = now_;
    }
    if (ready(op.peer, n, op.kind)) {
      complete(n, op.peer);
      return;
    }
    enter_wait(n);
  }

  // Whether `peer` is awake and blocked on the operation matching `kind`
  // from `n`.
  bool ready(std::size_t peer, std::size_t n, Op::Kind kind) const {
    const auto& q = procs_[peer];
    if (!q.posted) return false;
    if (q.phase != Phase::BlockedSend && q.phase != Phase::BlockedRecv) return false;
    const auto& qop = s_.comm_script[peer][q.pc];
    if (qop.peer != n) return false;
    return kind == Op::Kind::Ssend ? qop.kind == Op::Kind::Recv : qop.kind == Op::Kind::Ssend;
  }

  void enter_wait(std::size_t n) {
    auto& p = procs_[n];
    const auto& op = s_.comm_script[n][p.pc];
    const auto& plan = setup_.plans[n];
    if (plan && p.in_window && op.peer == failed()) {
      const auto& prof = s_.node_profile;
      switch (plan->action) {
        case WaitAction::Sleep: {
          p.level = max_level();
          p.phase = Phase::GoingToSleep;
          open(n, TraceState::GoingToSleep, prof.p_go_sleep);
          const Seconds asleep = now_ + prof.t_go_sleep;
          p.wake_start = std::max(plan->rendezvous_time - prof.t_wakeup, asleep);
          p.wake_end = std::max(plan->rendezvous_time, p.wake_start);
          push(asleep, EventKind::SleepDone, n);
          return;
        }
        case WaitAction::MinFreq:
          p.level = s_.freq_table.min_index();
          p.slowed = true;
          break;
        case WaitAction::NoAction: p.level = max_level(); break;
      }
    }
    open(n, TraceState::Blocked, wait_power(n));
  }

  void complete(std::size_t a, std::size_t b) {
    const auto& op = s_.comm_script[a][procs_[a].pc];
    const std::size_t sender = op.kind == Op::Kind::Ssend ? a : b;
    const std::size_t receiver = sender == a ? b : a;
    const auto ordinal = sent_[{sender, receiver}]++;
    out_.trace.rendezvous.push_back({sender, receiver, ordinal, now_});

    for (auto x : {a, b}) {
      auto& p = procs_[x];
      const auto peer = s_.comm_script[x][p.pc].peer;
      p.posted = false;
      if (p.tracking) {
        out_.contact[x].matched = true;
        out_.contact[x].match_time = now_;
        p.tracking = false;
      }
      if (p.in_window && setup_.failure && peer == failed()) {
        p.in_window = false;
        p.slowed = false;
        p.level = max_level();
      }
      ++p.pc;
      load_op(x);
    }
    advance(a);
    advance(b);
  }

  void dispatch(const Event& ev) {
    const auto n = ev.node;
    auto& p = procs_[n];
    switch (ev.kind) {
      case EventKind::ComputeDone:
        stop_compute(n);
        p.work_left = 0;
        ++p.pc;
        load_op(n);
        advance(n);
        break;
      case EventKind::CkptTimer:
        stop_compute(n);
        start_ckpt(n, false);
        break;
      case EventKind::CkptDone:
        p.counter = 0;
        p.last_ckpt_end = now_;
        if (p.pending_level) {
          p.level = *p.pending_level;
          p.pending_level.reset();
        }
        if (p.post_after_ckpt) {
          p.post_after_ckpt = false;
          post(n);
        } else {
          advance(n);
        }
        break;
      case EventKind::Failure: on_failure(); break;
      case EventKind::DownDone:
        p.phase = Phase::Restarting;
        open(n, TraceState::Restarting, lvl(max_level()).p_ckpt);
        push(now_ + s_.ft.t_restart, EventKind::RestartDone, n);
        break;
      case EventKind::RestartDone:
        p.phase = Phase::Reexecuting;
        open(n, TraceState::Reexecuting, lvl(max_level()).p_comp);
        push(now_ + (setup_.failure->failure_time - p.last_ckpt_end), EventKind::ReexecDone, n);
        break;
      case EventKind::ReexecDone:
        p.counter = 0;
        p.level = max_level();
        advance(n);
        break;
      case EventKind::SleepDone:
        p.phase = Phase::Sleeping;
        open(n, TraceState::Sleeping, s_.node_profile.p_sleep);
        push(p.wake_start, EventKind::WakeStart, n);
        break;
      case EventKind::WakeStart:
        p.phase = Phase::Waking;
        open(n, TraceState::Waking, s_.node_profile.p_wakeup);
        push(p.wake_end, EventKind::WakeDone, n);
        break;
      case EventKind::WakeDone: {
        const auto& op = s_.comm_script[n][p.pc];
        p.phase = op.kind == Op::Kind::Ssend ? Phase::BlockedSend : Phase::BlockedRecv;
        open(n, TraceState::Blocked, wait_power(n));
        if (ready(op.peer, n, op.kind)) complete(n, op.peer);
        break;
      }
    }
  }

  void on_failure() {
    const auto j = failed();
    if (procs_[j].phase == Phase::Finished) return;
    out_.failure_applied = true;

    // Re-base running compute segments so the snapshot is exact.
    for (std::size_t n = 0; n < procs_.size(); ++n) {
      if (procs_[n].phase != Phase::Computing) continue;
      stop_compute(n);
      start_compute(n);
    }

    for (std::size_t n = 0; n < procs_.size(); ++n) {
      if (n == j) continue;
      snapshot(n);
      auto& p = procs_[n];
      if (p.phase == Phase::Finished) continue;
      p.tracking = true;
      const bool direct = out_.snapshot[n].next_peer == j;
      p.in_window = direct;
      if (direct && p.posted) p.move_checked = true;  // already blocked
    }

    auto& f = procs_[j];
    if (f.phase == Phase::Computing) stop_compute(j);
    ++f.gen;  // drops a checkpoint in progress
    f.posted = false;
    f.post_after_ckpt = false;
    f.phase = Phase::Down;
    out_.failed_last_ckpt = f.last_ckpt_end;
    open(j, TraceState::Down, 0.0);
    push(now_ + s_.ft.t_down, EventKind::DownDone, j);

    for (std::size_t n = 0; n < procs_.size(); ++n) {
      const auto& plan = setup_.plans[n];
      if (n == j || !plan) continue;
      auto& p = procs_[n];
      if (!p.in_window) throw ContractError("plan for a node not blocked by the failed node");
      switch (p.phase) {
        case Phase::Computing:
          stop_compute(n);
          p.level = plan->level;
          start_compute(n);
          break;
        case Phase::Checkpointing: p.pending_level = plan->level; break;
        case Phase::BlockedSend:
        case Phase::BlockedRecv: enter_wait(n); break;
        default: throw ContractError("plan enactment: unexpected node phase");
      }
    }
  }

  void snapshot(std::size_t n) {
    const auto& p = procs_[n];
    auto& snap = out_.snapshot[n];
    snap.phase = p.phase;
    snap.counter = p.counter;
    snap.posted = p.posted;
    if (p.phase == Phase::Checkpointing)
      snap.ckpt_residual = p.seg_start + t_ckpt_at(lvl(p.level), s_.ft) - now_;
    if (p.phase == Phase::Finished) return;

    const auto& script = s_.comm_script[n];
    Seconds work = p.posted ? 0.0 : p.work_left;
    std::size_t k = p.pc;
    if (!p.posted && k < script.size() && script[k].kind == Op::Kind::Compute) ++k;
    for (; k < script.size(); ++k) {
      if (script[k].is_comm()) {
        snap.next_peer = script[k].peer;
        break;
      }
      work += script[k].work;
    }
    snap.work_before = work;
  }

  const Scenario& s_;
  RunSetup setup_;
  std::vector<Proc> procs_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> sent_;
  std::uint64_t seq_ = 0;
  Seconds now_ = 0.0;
  RunOutput out_;
};

}  // namespace detail

/// Estimates of every node at failure time, taken from the baseline run.
/// Entries stay empty for the failed node and for survivors whose next
/// communication is not with the failed node or that would not block on it.
struct FailurePrediction {
  std::vector<std::optional<InterventionEstimate>> estimates;
  std::vector<Seconds> rendezvous;  // partner arrival per estimated node
  Seconds t_recover = 0.0;
  std::vector<char> move_ahead_eligible;
  RunTrace baseline;
};

namespace detail {

// Estimates read off one failure run. `eligible` is the set of nodes that
// took an early checkpoint in that run; `candidates` receives the nodes
// whose early checkpoint would still fit before the rendezvous.
inline FailurePrediction read_estimates(const Scenario& s, const FailureSpec& failure, RunOutput& out,
                                        const std::vector<char>& eligible, std::vector<char>& candidates) {
  FailurePrediction fp;
  fp.estimates.resize(s.nodes);
  fp.rendezvous.assign(s.nodes, 0.0);
  fp.move_ahead_eligible = eligible;
  candidates.assign(s.nodes, 0);
  if (!out.failure_applied) return fp;
  const Seconds F = failure.failure_time;
  fp.t_recover = t_recover(s.ft, F - out.failed_last_ckpt);

  for (std::size_t n = 0; n < s.nodes; ++n) {
    if (n == failure.failed_node) continue;
    const auto& snap = out.snapshot[n];
    const auto& c = out.contact[n];
    if (snap.phase == Phase::Finished || snap.next_peer != failure.failed_node || !c.matched) continue;

    InterventionEstimate est;
    est.t_comp_max = snap.work_before;
    est.t_failed = c.match_time - F;
    est.t_recover = fp.t_recover;
    est.ckpt_counter = snap.counter;
    est.ckpt_residual = snap.ckpt_residual;

    const auto& table = s.freq_table;
    const auto plain = compute_phase(est, table, table.max_index(), s.ft, std::nullopt);
    est.move_ahead_eligible = true;
    const auto moved = compute_phase(est, table, table.max_index(), s.ft, s.move_ahead);
    const auto& taken = eligible[n] ? moved : plain;
    if (c.posted && std::abs(c.post_time - (F + taken.busy)) > 1e-6 * std::max(1.0, c.post_time))
      throw ContractError("predict: closed-form compute phase disagrees with the simulation for node " +
                          std::to_string(n));
    if (taken.busy > est.t_failed) continue;  // the node arrives last: not blocked

    candidates[n] = s.move_ahead && !snap.posted && moved.busy <= est.t_failed;
    est.move_ahead_eligible = eligible[n];
    est.n_ckpt = taken.n_ckpt();
    fp.estimates[n] = est;
    fp.rendezvous[n] = c.match_time;
  }
  return fp;
}

}  // namespace detail

// An early checkpoint can move later rendezvous with the failed node, so the
// eligible set is narrowed until the run it produces keeps every member
// eligible. The last run is the baseline.
inline FailurePrediction predict(const Scenario& s, const FailureSpec& failure) {
  std::vector<char> eligible(s.nodes, 0), candidates;
  detail::RunSetup setup;
  setup.failure = failure;
  setup.move_ahead_eligible = eligible;
  auto out = detail::Run(s, setup).execute();
  auto fp = detail::read_estimates(s, failure, out, eligible, candidates);
  if (candidates == eligible) {
    fp.baseline = std::move(out.trace);
    return fp;
  }
  eligible = candidates;
  for (std::size_t round = 0;; ++round) {
    setup.move_ahead_eligible = eligible;
    out = detail::Run(s, setup).execute();
    fp = detail::read_estimates(s, failure, out, eligible, candidates);
    bool same = true;
    for (std::size_t n = 0; n < s.nodes; ++n) {
      if (eligible[n] && !candidates[n]) {
        eligible[n] = 0;
        same = false;
      }
    }
    if (same) break;
    if (round > s.nodes) throw ContractError("predict: early-checkpoint set does not settle");
  }
  fp.baseline = std::move(out.trace);
  return fp;
}

/// Runs the failure-free, prediction, baseline and intervened simulations.
inline SimResult run(const Scenario& s) {
  s.validate();
  SimResult r;
  r.scenario = s.name;
  r.failure = s.failure;
  r.nodes.resize(s.nodes);
  for (std::size_t n = 0; n < s.nodes; ++n) r.nodes[n].node = n;

  auto clean = detail::Run(s, {}).execute();
  const bool too_late = s.failure && clean.trace.finish[s.failure->failed_node] <= s.failure->failure_time;
  if (!s.failure || too_late) {
    r.no_failure_run = too_late;
    r.baseline = clean.trace;
    r.intervened = std::move(clean.trace);
    return r;
  }

  const auto& failure = *s.failure;
  const auto fp = predict(s, failure);
  r.t_recover = fp.t_recover;
  r.nodes[failure.failed_node].failed = true;

  const auto ctx = s.selector_context();
  detail::RunSetup inter;
  inter.failure = failure;
  inter.move_ahead_eligible = fp.move_ahead_eligible;
  inter.plans.resize(s.nodes);
  for (std::size_t n = 0; n < s.nodes; ++n) {
    if (!fp.estimates[n]) continue;
    auto& o = r.nodes[n];
    o.estimate = fp.estimates[n];
    o.plan = evaluate(n, *o.estimate, ctx);
    if (o.plan) inter.plans[n] = detail::EnactedPlan{o.plan->level, o.plan->wait_action, fp.rendezvous[n]};
  }

  r.baseline = fp.baseline;
  r.intervened = detail::Run(s, inter).execute().trace;

  for (auto& o : r.nodes) {
    if (!o.plan) continue;
    o.window_start = failure.failure_time;
    o.window_end = fp.rendezvous[o.node];
    o.eni = r.baseline.ledger.energy_between(o.node, o.window_start, o.window_end);
    o.ei = r.intervened.ledger.energy_between(o.node, o.window_start, o.window_end);
    o.saving = energy_saving(o.eni, o.ei);
  }
  return r;
}

/// Plans for every survivor directly blocked by `failure`; one entry per
/// node, empty for the failed node and unaffected nodes.
inline std::vector<std::optional<InterventionPlan>> evaluate_all(const FailureSpec& failure,
                                                                 Scenario s) {
  s.failure = failure;
  s.validate();
  return evaluate_all(predict(s, failure).estimates, s.selector_context());
}

}  // namespace ckptsim
