#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace ckptsim;
using Catch::Approx;
using ckptsim::testing::table3;

namespace {

SelectorContext context(WaitMode mode = WaitMode::ActiveWait, double mu1 = 6, MoveAheadPolicy ma = 0.5) {
  SelectorContext c;
  c.table = table3();
  c.mode = mode;
  c.thresholds = {mu1, 1};
  c.move_ahead = ma;
  return c;
}

InterventionEstimate estimate(Seconds work, Seconds failed, Seconds counter = 0, bool eligible = false) {
  InterventionEstimate e;
  e.t_comp_max = work;
  e.t_failed = failed;
  e.ckpt_counter = counter;
  e.move_ahead_eligible = eligible;
  return e;
}

}  // namespace

TEST_CASE("compute phase counts timer checkpoints") {
  const auto t = table3();
  FTConfig ft{120, 600, 0, 120};
  auto cp = compute_phase(estimate(1500, 1e9), t, 0, ft, std::nullopt);
  CHECK(cp.timer_ckpts == 2);
  CHECK(cp.busy == Approx(1500 + 240));

  cp = compute_phase(estimate(1200, 1e9), t, 0, ft, std::nullopt);
  CHECK(cp.timer_ckpts == 1);  // the timer reaches 1200 exactly when the work is done

  cp = compute_phase(estimate(100, 1e9), t, 0, FTConfig{120, 1800, 0, 120}, std::nullopt);
  CHECK(cp.timer_ckpts == 0);

  // a slower clock pulls more checkpoints into the phase
  cp = compute_phase(estimate(500, 1e9, 300), t, 3, ft, std::nullopt);
  CHECK(cp.timer_ckpts == 2);  // 1050 s of wall time from counter 300
  CHECK(cp.busy == Approx(1050 + 2 * 168));
  CHECK(cp.energy == Approx(1050 * 126 + 2 * 168 * 125));
}

TEST_CASE("compute phase moves the checkpoint ahead") {
  const auto t = table3();
  FTConfig ft;
  // counter 480 at failure, 481.2 s of work: 961.2 >= 900
  auto cp = compute_phase(estimate(481.2, 2521.2, 480, true), t, 0, ft, 0.5);
  CHECK(cp.moved_ahead);
  CHECK(cp.n_ckpt() == 1);
  CHECK(cp.busy == Approx(601.2));

  cp = compute_phase(estimate(481.2, 2521.2, 480, false), t, 0, ft, 0.5);
  CHECK_FALSE(cp.moved_ahead);
  cp = compute_phase(estimate(481.2, 2521.2, 480, true), t, 0, ft, std::nullopt);
  CHECK_FALSE(cp.moved_ahead);
  cp = compute_phase(estimate(103.8, 333.6, 300, true), t, 0, ft, 0.5);
  CHECK_FALSE(cp.moved_ahead);
  cp = compute_phase(estimate(0, 100, 0, true), t, 0, ft, 0.0);
  CHECK(cp.moved_ahead);  // fraction 0: always
  CHECK(should_move_ahead(1800 - 1e-9, ft, 0.5));
  CHECK_FALSE(should_move_ahead(899, ft, 0.5));
  CHECK(should_move_ahead(0, ft, 0.0));
  CHECK_FALSE(should_move_ahead(1800, ft, std::nullopt));
}

TEST_CASE("checkpoint in progress at failure") {
  const auto t = table3();
  FTConfig ft;
  auto e = estimate(100, 1000, 1799);
  e.ckpt_residual = 50;
  const auto cp = compute_phase(e, t, 0, ft, std::nullopt);
  CHECK(cp.timer_ckpts == 0);  // the timer restarts when the checkpoint ends
  CHECK(cp.busy == Approx(150));
  CHECK(cp.energy == Approx(50 * 150 + 100 * 166));
}

TEST_CASE("closed-form estimate from links") {
  FTConfig ft{120, 1800, 0, 120};
  FailureContext f{0, 1000, 0};
  std::vector<CommLink> links = {{1, 0, 600, 0.5, 0.5}, {1, 0, 600, 0.2, 0.9}, {2, 3, 600, 0.1, 0.1}};
  auto e = estimate_times(1, f, links, ft);
  REQUIRE(e);
  CHECK(e->t_comp_max == Approx(120));  // the link that blocks first
  CHECK(e->t_failed == Approx(120 + 540));
  CHECK(e->n_ckpt == 0);

  CHECK_FALSE(estimate_times(2, f, links, ft));
  CHECK_FALSE(estimate_times(3, f, links, ft));

  e = estimate_times(1, f, {{1, 0, 600, 0.0, 1.0}}, ft);
  REQUIRE(e);
  CHECK(e->t_comp_max == 0.0);

  FailureContext late{0, 1000, 1800};
  e = estimate_times(1, late, {{1, 0, 600, 1.0, 1.0}}, FTConfig{120, 1800, 60, 120});
  REQUIRE(e);
  CHECK(e->t_recover == Approx(60 + 120 + 1800));

  CHECK_THROWS_AS(estimate_times(1, f, {{1, 0, 0, 0.5, 0.5}}, ft), ValidationError);
}

TEST_CASE("selector on the long-wait survivor") {
  const auto ctx = context();
  const auto plan = evaluate(1, estimate(481.2, 2521.2, 480, true), ctx);
  REQUIRE(plan);
  CHECK(plan->level == 0);
  CHECK(plan->wait_action == WaitAction::Sleep);
  CHECK(plan->moved_ahead);
  CHECK(plan->predicted.t_wait == Approx(1920));
  CHECK(plan->predicted.saving == Approx(294310));
  CHECK(plan->predicted.saving / plan->predicted.eni * 100 == Approx(70.65).margin(0.01));
}

TEST_CASE("selector slows compute and wait when the wait is short") {
  const auto ctx = context();
  const auto plan = evaluate(1, estimate(140.8, 300.8), ctx);
  REQUIRE(plan);
  CHECK(plan->compute_freq.label == "1.2");
  CHECK(plan->wait_action == WaitAction::MinFreq);
  CHECK(plan->predicted.saving == Approx(12032));
  CHECK(100 * plan->predicted.saving / plan->predicted.eni == Approx(24.10).margin(0.005));
}

TEST_CASE("selector under idle waits") {
  const auto ctx = context(WaitMode::IdleWait);
  const auto plan = evaluate(1, estimate(140.8, 300.8), ctx);
  REQUIRE(plan);
  CHECK(plan->compute_freq.label == "2.1");
  CHECK(plan->wait_action == WaitAction::NoAction);
  CHECK(plan->predicted.saving == Approx(56.32));
}

TEST_CASE("selector never lets the recovered process wait") {
  const auto ctx = context();
  // 1.2 GHz would need 210 s
  const auto plan = evaluate(1, estimate(100, 160), ctx);
  REQUIRE(plan);
  CHECK(plan->predicted.t_comp_f <= 160);
  CHECK(plan->compute_freq.label == "1.7");

  CHECK_FALSE(evaluate(1, estimate(200, 100), ctx));  // not blocked at all
  CHECK_THROWS_AS(baseline_energy(estimate(200, 100), ctx), ContractError);
}

TEST_CASE("ties go to the higher frequency") {
  auto ctx = context();
  // no work left: every level costs the same
  const auto plan = evaluate(1, estimate(0, 20), ctx);
  REQUIRE(plan);
  CHECK(plan->level == 0);
  CHECK(plan->wait_action == WaitAction::MinFreq);
}

TEST_CASE("strategy switches") {
  auto ctx = context();
  ctx.options.scale_compute = false;
  auto plan = evaluate(1, estimate(140.8, 300.8), ctx);
  REQUIRE(plan);
  CHECK(plan->level == 0);
  CHECK(plan->predicted.saving == Approx(160 * 40));

  ctx.options.min_freq_wait = false;
  plan = evaluate(1, estimate(140.8, 300.8), ctx);
  REQUIRE(plan);
  CHECK(plan->wait_action == WaitAction::NoAction);
  CHECK(plan->predicted.saving == Approx(0).margin(1e-9));
}

TEST_CASE("only the maximum frequency: compute phase unchanged") {
  auto ctx = context();
  ctx.table = FrequencyTable({table3().max()});
  for (double w : {0.0, 50.0, 100.0, 150.0}) {
    const auto plan = evaluate(1, estimate(w, 160), ctx);
    REQUIRE(plan);
    CHECK(plan->predicted.t_comp_f == plan->baseline_t_comp);
  }
}

TEST_CASE("selector equals brute force on random estimates") {
  ckptsim::testing::ScenarioGen g(7);
  for (int i = 0; i < 3000; ++i) {
    SelectorContext ctx;
    ctx.table = g.table(false);
    ctx.mode = g.coin() ? WaitMode::ActiveWait : WaitMode::IdleWait;
    ctx.profile.p_active_wait = ctx.table.max().p_comp;
    ctx.profile.t_go_sleep = g.uni(0, 40);
    ctx.profile.t_wakeup = g.uni(0, 20);
    ctx.thresholds = {g.uni(0.5, 8), g.uni(0.3, 1)};
    ctx.ft = {g.uni(5, 200), 0, 0, 0};
    ctx.ft.ckpt_interval = ctx.ft.t_ckpt + g.uni(50, 2000);
    ctx.move_ahead = g.coin(0.3) ? MoveAheadPolicy{} : MoveAheadPolicy{g.uni(0, 1)};
    ctx.options = {g.coin(0.85), g.coin(0.85)};

    auto e = estimate(g.coin(0.1) ? 0 : g.uni(0, 3000), 0, g.uni(0, ctx.ft.ckpt_interval), g.coin());
    if (g.coin(0.1)) e.ckpt_residual = g.uni(0, ctx.ft.t_ckpt);
    e.t_failed = g.uni(0, 8000);

    const auto plan = evaluate(1, e, ctx);
    const auto brute = ckptsim::testing::brute_force(e, ctx);
    REQUIRE(plan.has_value() == brute.has_value());
    if (!plan) continue;
    CHECK(plan->level == brute->level);
    CHECK(plan->wait_action == brute->action);
    CHECK(plan->predicted.e_total == Approx(brute->energy).epsilon(1e-9));
    // never worse than staying at the maximum frequency and awake
    CHECK(plan->predicted.saving >= -1e-9);
  }
}

TEST_CASE("selector is deterministic") {
  const auto ctx = context();
  const auto a = evaluate(1, estimate(140.8, 300.8), ctx);
  const auto b = evaluate(1, estimate(140.8, 300.8), ctx);
  CHECK(a->level == b->level);
  CHECK(a->wait_action == b->wait_action);
  CHECK(a->predicted.e_total == b->predicted.e_total);
}
