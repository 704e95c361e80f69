// ckptsim: run, sweep and report failure-time energy interventions.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ckptsim/ckptsim.hpp"

namespace fs = std::filesystem;
using namespace ckptsim;

namespace {

struct Overrides {
  std::string wait_mode;
  std::string mu1;
  std::string mu2;
  std::string move_ahead;
  bool no_failure = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--wait-mode", o.wait_mode, "active or idle")->check(CLI::IsMember({"active", "idle"}));
  cmd->add_option("--mu1", o.mu1, "sleep threshold on the wait length (inf allowed)");
  cmd->add_option("--mu2", o.mu2, "sleep threshold on the energy ratio (inf allowed)");
  cmd->add_option("--move-ahead", o.move_ahead, "early checkpoint fraction, or off");
}

Scenario load(const std::string& path, const Overrides& o) {
  Scenario s = load_scenario(path);
  if (!o.wait_mode.empty()) s.wait_mode = parse_wait_mode(o.wait_mode);
  if (!o.mu1.empty()) s.thresholds.mu1 = detail::parse_number(o.mu1, 0, "--mu1");
  if (!o.mu2.empty()) s.thresholds.mu2 = detail::parse_number(o.mu2, 0, "--mu2");
  if (!o.move_ahead.empty()) s.move_ahead = parse_move_ahead(o.move_ahead);
  if (o.no_failure) s.failure.reset();
  s.validate();
  return s;
}

template <class F>
void write_file(const fs::path& p, F&& fn) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + p.string());
  fn(out);
}

void write_trace(const fs::path& dir, const std::string& stem, const EnergyLedger& l) {
  write_file(dir / (stem + ".csv"), [&](std::ostream& o) { emit_csv(l, o); });
  write_file(dir / (stem + ".prv"), [&](std::ostream& o) { emit_prv(l, o); });
  write_file(dir / (stem + ".pcf"), [&](std::ostream& o) { emit_pcf(o); });
}

int cmd_run(const std::string& cfg, const Overrides& o, const fs::path& out) {
  const auto s = load(cfg, o);
  const auto r = run(s);
  const auto rows = savings_rows(s, r);
  fs::create_directories(out);
  write_file(out / "savings.csv", [&](std::ostream& f) { write_savings_csv(rows, f); });
  write_trace(out, "trace_baseline", r.baseline.ledger);
  write_trace(out, "trace_intervened", r.intervened.ledger);

  std::cout << "== " << s.name << " ==\n";
  if (!r.failure)
    std::cout << "no failure\n";
  else if (r.no_failure_run)
    std::cout << "failed node finished before the failure time; nothing to do\n";
  render_table(rows, std::cout);
  return 0;
}

int cmd_sweep(const std::string& cfg, const Overrides& o, const std::vector<double>& times, bool parallel,
              const fs::path& out) {
  auto s = load(cfg, o);
  const auto points = sweep(s, times, parallel);
  fs::create_directories(out);
  write_file(out / "sweep.csv", [&](std::ostream& f) { write_sweep_csv(points, f); });
  for (const auto& p : points) {
    std::cout << "== " << s.name << " failure at " << p.failure_time << " s ==\n";
    render_table(p.rows, std::cout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Failure-time energy interventions for checkpointed message-passing runs"};
  app.require_subcommand(1);

  const char* env_out = std::getenv("CKPTSIM_OUT");
  std::string out = env_out && *env_out ? env_out : "out";
  Overrides over;
  std::string cfg;
  std::string dir;
  std::vector<double> times;
  bool parallel = false;

  auto* run_cmd = app.add_subcommand("run", "simulate one scenario and write savings and traces");
  run_cmd->add_option("scenario", cfg, "scenario file")->required();
  run_cmd->add_option("--out", out, "output directory (default $CKPTSIM_OUT or ./out)");
  run_cmd->add_flag("--no-failure", over.no_failure, "ignore the scenario's failure");
  add_overrides(run_cmd, over);

  auto* sweep_cmd = app.add_subcommand("sweep", "rerun a scenario for several failure times");
  sweep_cmd->add_option("scenario", cfg, "scenario file")->required();
  auto* times_opt =
      sweep_cmd->add_option("--times", times, "failure times in seconds")->required()->expected(0, -1);
  sweep_cmd->add_option("--out", out, "output directory (default $CKPTSIM_OUT or ./out)");
  sweep_cmd->add_flag("--parallel", parallel, "run failure times concurrently");
  add_overrides(sweep_cmd, over);

  auto* report_cmd = app.add_subcommand("report", "print the savings tables found under a directory");
  report_cmd->add_option("dir", dir, "directory holding savings.csv files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(cfg, over, out);
    if (*sweep_cmd) {
      // a bare --times arrives as one empty result and would parse as 0
      const auto& given = times_opt->results();
      if (given.size() == 1 && given[0].empty()) times.clear();
      return cmd_sweep(cfg, over, times, parallel, out);
    }
    if (*report_cmd) {
      render_report(collect_savings(dir), std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "ckptsim: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
