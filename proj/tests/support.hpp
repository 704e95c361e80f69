#pragma once

// Test helpers shared by the unit tests and the acceptance binary: fixture
// loading, a random scenario generator, a brute-force selector and the
// property checks run over random scenarios.

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ckptsim/ckptsim.hpp"

namespace ckptsim::testing {

inline std::string fixture(const std::string& name) { return std::string(CKPTSIM_SCENARIO_DIR) + "/" + name; }

inline FrequencyTable table3() {
  return FrequencyTable({{"2.8", 2.8, 166, 1.0, 150, 1.0},
                         {"2.1", 2.1, 148, 1.2, 142, 1.1},
                         {"1.7", 1.7, 139, 1.5, 131, 1.2},
                         {"1.2", 1.2, 126, 2.1, 125, 1.4}});
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-9) {
  return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

// ---------------------------------------------------------------------------
// Random scenarios

struct RandomOptions {
  bool force_single_level = false;
  std::optional<WaitMode> mode;
  std::optional<double> mu1;
  std::optional<double> mu2;
  std::optional<StrategyOptions> options;
};

class ScenarioGen {
public:
  explicit ScenarioGen(std::uint64_t seed) : rng_(seed) {}

  double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int pick(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  FrequencyTable table(bool single) {
    const int k = single ? 1 : pick(1, 5);
    std::vector<FrequencyLevel> levels;
    double ghz = 3.0, p_comp = uni(140, 200), p_ckpt = uni(120, 180), beta = 1.0, gamma = 1.0;
    for (int i = 0; i < k; ++i) {
      char label[16];
      std::snprintf(label, sizeof label, "%.2f", ghz);
      levels.push_back({label, ghz, p_comp, beta, p_ckpt, gamma});
      ghz -= uni(0.1, 0.5);
      p_comp -= uni(2, 20);
      p_ckpt -= uni(0, 15);
      beta += uni(0.05, 0.6);
      gamma += coin(0.2) ? 0.0 : uni(0.0, 0.3);
    }
    return FrequencyTable(levels);
  }

  /// Messages in one global order, so every script completes.
  CommScript script(std::size_t nodes) {
    CommScript s(nodes);
    const int messages = pick(1, 3 * static_cast<int>(nodes));
    auto work = [&] { return coin(0.15) ? 0.0 : uni(1, 2500); };
    for (int m = 0; m < messages; ++m) {
      const auto a = static_cast<std::size_t>(pick(0, static_cast<int>(nodes) - 1));
      auto b = static_cast<std::size_t>(pick(0, static_cast<int>(nodes) - 2));
      if (b >= a) ++b;
      s[a].push_back(Op::compute(work()));
      s[a].push_back(Op::ssend(b));
      s[b].push_back(Op::compute(work()));
      s[b].push_back(Op::recv(a));
    }
    for (auto& ops : s)
      if (coin()) ops.push_back(Op::compute(work()));
    return s;
  }

  Scenario scenario(const RandomOptions& o = {}) {
    Scenario s;
    s.name = "random";
    s.nodes = static_cast<std::size_t>(pick(2, 6));
    s.freq_table = table(o.force_single_level);
    s.base_table = s.freq_table;

    auto& p = s.node_profile;
    p.p_base = uni(40, 90);
    p.p_idle_wait = p.p_base;
    p.p_sleep = uni(2, p.p_idle_wait * 0.8);
    p.t_go_sleep = uni(0, 40);
    p.t_wakeup = uni(0, 20);
    p.p_go_sleep = uni(20, 120);
    p.p_wakeup = uni(20, 150);
    const double top = s.freq_table.max().p_comp;
    const double floor = std::max(p.p_idle_wait, s.freq_table.min().p_comp);
    p.p_active_wait = coin(0.7) ? top : uni(floor, top);

    s.ft.t_ckpt = uni(5, 200);
    s.ft.ckpt_interval = s.ft.t_ckpt + uni(50, 2000);
    s.ft.t_down = uni(0, 100);
    s.ft.t_restart = uni(0, 200);
    s.move_ahead = coin(0.3) ? MoveAheadPolicy{} : MoveAheadPolicy{uni(0, 1)};

    s.wait_mode = o.mode ? *o.mode : (coin() ? WaitMode::ActiveWait : WaitMode::IdleWait);
    s.thresholds.mu1 = o.mu1 ? *o.mu1 : uni(0.5, 8);
    s.thresholds.mu2 = o.mu2 ? *o.mu2 : uni(0.3, 1.0);
    if (s.thresholds.mu2 <= 0.3) s.thresholds.mu2 = 0.31;
    if (o.options)
      s.options = *o.options;
    else
      s.options = {coin(0.85), coin(0.85)};

    s.comm_script = script(s.nodes);
    for (std::size_t n = 0; n < s.nodes; ++n) s.ckpt_phase_offsets.push_back(uni(0, s.ft.ckpt_interval));

    Scenario clean = s;
    const auto free_run = run(clean);
    const Seconds end = free_run.baseline.makespan;
    s.failure = FailureSpec{static_cast<std::size_t>(pick(0, static_cast<int>(s.nodes) - 1)),
                            uni(0, 0.9 * std::max(end, 1.0))};
    s.validate();
    return s;
  }

private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Brute-force selector: every (frequency, wait action) pair, checkpoints
// counted by stepping the timer.

struct BruteChoice {
  std::size_t level = 0;
  WaitAction action = WaitAction::NoAction;
  Joules energy = kInfinity;
  Seconds busy = 0.0;
};

inline int step_checkpoints(Seconds wall, Seconds counter, Seconds interval, Seconds& counter_end) {
  int n = 0;
  Seconds left = wall;
  Seconds c = counter;
  while (left > 0) {
    const Seconds to_timer = interval - c;
    if (to_timer < left) {
      left -= std::max(to_timer, 0.0);
      c = 0.0;
      ++n;
    } else {
      c += left;
      left = 0;
    }
  }
  counter_end = c;
  return n;
}

/// Lowest-energy pair; on equal energy the higher frequency, then the action
/// listed first (minimum frequency, no action, sleep) wins. Only meaningful
/// for mu2 <= 1, where an admissible sleep is always cheaper than staying
/// awake.
inline std::optional<BruteChoice> brute_force(const InterventionEstimate& est, const SelectorContext& ctx) {
  const auto& t = ctx.table;
  const auto& ft = ctx.ft;
  const auto& prof = ctx.profile;

  auto phase = [&](std::size_t level, Seconds& busy, Joules& energy) {
    const auto& f = t[level];
    const Seconds wall = est.t_comp_max * f.beta;
    Seconds c_end = 0;
    const Seconds c0 = est.ckpt_residual > 0 ? 0.0 : est.ckpt_counter;
    int n = step_checkpoints(wall, c0, ft.ckpt_interval, c_end);
    if (est.move_ahead_eligible && ctx.move_ahead && c_end >= *ctx.move_ahead * ft.ckpt_interval) ++n;
    busy = est.ckpt_residual + wall + n * ft.t_ckpt * f.gamma;
    energy = est.ckpt_residual * t.max().p_ckpt + wall * f.p_comp + n * ft.t_ckpt * f.gamma * f.p_ckpt;
  };

  Seconds base_busy = 0;
  Joules base_e = 0;
  phase(t.max_index(), base_busy, base_e);
  if (base_busy > est.t_failed) return std::nullopt;

  std::optional<BruteChoice> best;
  const std::size_t last = ctx.options.scale_compute ? t.size() : 1;
  for (std::size_t level = 0; level < last; ++level) {
    Seconds busy = 0;
    Joules ec = 0;
    phase(level, busy, ec);
    if (busy > est.t_failed) continue;
    const Seconds wait = est.t_failed - busy;
    const bool active = ctx.mode == WaitMode::ActiveWait;

    const Watts awake_w = active ? prof.p_active_wait : prof.p_idle_wait;
    const Watts slow_w = t.min().p_comp;
    std::vector<std::pair<WaitAction, Joules>> options;
    const Seconds sw = prof.t_go_sleep + prof.t_wakeup;
    const Joules sleep_e = prof.t_go_sleep * prof.p_go_sleep + (wait - sw) * prof.p_sleep + prof.t_wakeup * prof.p_wakeup;
    const Joules cheapest_awake = (active && ctx.options.min_freq_wait ? slow_w : awake_w) * wait;
    if (active && ctx.options.min_freq_wait && wait > 0) options.emplace_back(WaitAction::MinFreq, slow_w * wait);
    options.emplace_back(WaitAction::NoAction, awake_w * wait);
    if (wait > ctx.thresholds.mu1 * sw && wait >= sw && sleep_e < ctx.thresholds.mu2 * cheapest_awake)
      options.emplace_back(WaitAction::Sleep, sleep_e);

    for (const auto& [a, we] : options) {
      const Joules total = ec + we;
      if (!best || total < best->energy) best = BruteChoice{level, a, total, busy};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Property checks over one scenario. Each returns an empty string on success.

inline std::string check_oracle(const Scenario& s, const SimResult& r) {
  std::ostringstream err;
  const auto ctx = s.selector_context();
  for (const auto& o : r.nodes) {
    if (!o.plan) continue;
    const auto& pr = o.plan->predicted;
    if (!close_rel(o.ei, pr.e_total, 1e-6, 1e-6))
      err << "node " << o.node << ": ledger EI " << o.ei << " vs closed form " << pr.e_total << "; ";
    if (!close_rel(o.eni, pr.eni, 1e-6, 1e-6))
      err << "node " << o.node << ": ledger ENI " << o.eni << " vs closed form " << pr.eni << "; ";
    if (s.thresholds.mu2 <= 1.0) {
      const auto b = brute_force(*o.estimate, ctx);
      if (!b)
        err << "node " << o.node << ": brute force found no plan; ";
      else if (b->level != o.plan->level || b->action != o.plan->wait_action)
        err << "node " << o.node << ": selector (" << o.plan->level << ", " << to_string(o.plan->wait_action)
            << ") vs brute force (" << b->level << ", " << to_string(b->action) << "); ";
      else if (!close_rel(b->energy, pr.e_total, 1e-9, 1e-9))
        err << "node " << o.node << ": energy " << pr.e_total << " vs brute force " << b->energy << "; ";
    }
  }
  return err.str();
}

inline std::string check_time_neutral(const SimResult& r, double tol = 1e-6) {
  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;
  std::map<Key, Seconds> base;
  for (const auto& rv : r.baseline.rendezvous) base[{rv.sender, rv.receiver, rv.ordinal}] = rv.time;
  std::ostringstream err;
  if (r.baseline.rendezvous.size() != r.intervened.rendezvous.size())
    err << "rendezvous count " << r.baseline.rendezvous.size() << " vs " << r.intervened.rendezvous.size() << "; ";
  for (const auto& rv : r.intervened.rendezvous) {
    auto it = base.find({rv.sender, rv.receiver, rv.ordinal});
    if (it == base.end()) {
      err << "extra rendezvous " << rv.sender << "->" << rv.receiver << "; ";
      continue;
    }
    if (std::abs(it->second - rv.time) > tol * std::max(1.0, std::abs(rv.time)))
      err << "rendezvous " << rv.sender << "->" << rv.receiver << " #" << rv.ordinal << " at " << rv.time
          << " vs " << it->second << "; ";
  }
  return err.str();
}

/// Compute phase held at the maximum frequency and sleep disabled: the only
/// saving left is busy-waiting at the minimum level, when that is allowed and
/// the waits are active. `s` must bill baseline busy waits at the maximum
/// application power.
inline std::string check_identity(const Scenario& s, const SimResult& r) {
  std::ostringstream err;
  const Watts delta = s.freq_table.max().p_comp - s.freq_table.min().p_comp;
  for (const auto& o : r.nodes) {
    if (!o.plan) continue;
    const Seconds wait = o.plan->predicted.t_wait;
    const bool slowed = s.wait_mode == WaitMode::ActiveWait && s.options.min_freq_wait;
    const Joules expect = slowed ? wait * delta : 0.0;
    if (!close_rel(o.saving, expect, 1e-6, 1e-6))
      err << "node " << o.node << ": saving " << o.saving << " expected " << expect << "; ";
    if (o.plan->level != s.freq_table.max_index()) err << "node " << o.node << ": compute slowed; ";
    if (o.plan->wait_action == WaitAction::Sleep) err << "node " << o.node << ": slept; ";
  }
  return err.str();
}

}  // namespace ckptsim::testing
