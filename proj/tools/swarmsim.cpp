// swarmsim: headless trials, parameter sweeps, analysis and the session server.

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "swarmsim/harness/analysis.hpp"
#include "swarmsim/harness/sweep.hpp"
#include "swarmsim/session/server.hpp"

#include <boost/asio/signal_set.hpp>

namespace {

using namespace swarmsim;

int cmd_trial(double speed, double separation, double broadcast, std::uint64_t seed, double max_duration,
              const std::string &record) {
  GridPoint g{-1, speed, separation, broadcast};
  const auto config = make_config(g, seed, max_duration);
  TrialResult result;
  if (record.empty()) {
    result = run_trial(config);
  } else {
    std::ofstream out(record);
    if (!out) throw std::runtime_error("cannot write " + record);
    result = run_trial(config, trajectory_writer(out));
  }
  if (result.completion_time)
    fmt::print("completed in {:.1f} s\n", *result.completion_time);
  else
    fmt::print("timeout after {:g} s\n", max_duration);
  fmt::print("messages delivered: {}\n", result.messages_delivered);
  for (std::size_t i = 0; i < result.informed_at.size(); ++i) {
    auto show = [](const std::optional<double> &t) { return t ? fmt::format("{:.1f}", *t) : std::string("-"); };
    fmt::print("robot {:>2}  informed {:>6}  entered {:>6}\n", i, show(result.informed_at[i]),
               show(result.first_entry[i]));
  }
  return result.completion_time ? 0 : 3;
}

int cmd_sweep(const std::string &grid_kind, const std::vector<double> &speeds, const std::vector<double> &seps,
              const std::vector<double> &broadcasts, const SweepOptions &opt, const std::string &out) {
  std::vector<GridPoint> grid;
  if (grid_kind == "paper") {
    grid = paper_grid();
  } else {
    if (speeds.empty() || seps.empty() || broadcasts.empty())
      throw CLI::ValidationError("--grid custom needs --speeds, --separations and --broadcasts");
    grid = custom_grid(speeds, seps, broadcasts);
    for (const auto &g : grid) make_config(g, 0, opt.max_trial_duration).validate();
  }
  const auto report = run_sweep_to_file(grid, opt, out);
  fmt::print("{} configs x {} seeds: {} rows reused, {} computed -> {}\n", grid.size(), opt.seeds_per_config,
             report.reused, report.computed, out);
  return 0;
}

int cmd_analyze(const std::string &in_path, double censor) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot read " + in_path);
  const auto rows = read_results(in);
  print_summary(std::cout, fit_performance_model(rows, censor));
  return 0;
}

int cmd_serve(unsigned short port, const std::string &teams_path, const std::string &data_dir, bool hide_target) {
  std::vector<session::TeamEntry> teams;
  if (!teams_path.empty()) {
    std::ifstream in(teams_path);
    if (!in) throw std::runtime_error("cannot read " + teams_path);
    teams = session::teams_from_json(session::json::parse(in));
  }
  session::SessionOptions opt;
  opt.snapshot.hide_target_until_informed = hide_target;
  session::SessionManager manager(data_dir, teams, opt);
  session::ServerState state{manager, {}, [](const std::string &line) { fmt::print(stderr, "{}\n", line); }};

  session::net::io_context ioc{1};
  auto listener = std::make_shared<session::Listener>(
      ioc, session::tcp::endpoint{session::net::ip::make_address("0.0.0.0"), port}, state);
  listener->run();
  session::net::signal_set signals(ioc, SIGINT, SIGTERM);
  signals.async_wait([&](const boost::system::error_code &, int) { ioc.stop(); });
  fmt::print(stderr, "listening on port {} ({} teams, data in {})\n", listener->port(), teams.size(), data_dir);
  ioc.run();
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Swarm search simulator"};
  app.require_subcommand(1);

  auto *trial = app.add_subcommand("trial", "run one autonomous trial");
  double speed = 10, separation = 20, broadcast = 8, max_duration = 180;
  std::uint64_t seed = 1;
  std::string record;
  trial->add_option("--speed", speed, "cm/s")->capture_default_str();
  trial->add_option("--separation", separation, "cm")->capture_default_str();
  trial->add_option("--broadcast", broadcast, "s")->capture_default_str();
  trial->add_option("--seed", seed)->capture_default_str();
  trial->add_option("--max-duration", max_duration, "s")->capture_default_str();
  trial->add_option("--record", record, "write one JSON line per tick");

  auto *sweep = app.add_subcommand("sweep", "run a parameter sweep into a results CSV");
  std::string grid_kind = "paper", out = "results.csv";
  std::vector<double> speeds, seps, broadcasts;
  SweepOptions opt;
  sweep->add_option("--grid", grid_kind)->check(CLI::IsMember({"paper", "custom"}))->capture_default_str();
  sweep->add_option("--speeds", speeds, "custom grid speed levels")->delimiter(',');
  sweep->add_option("--separations", seps, "custom grid separation levels")->delimiter(',');
  sweep->add_option("--broadcasts", broadcasts, "custom grid broadcast levels")->delimiter(',');
  sweep->add_option("--seeds", opt.seeds_per_config, "trials per configuration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--master-seed", opt.master_seed)->capture_default_str();
  sweep->add_option("--max-duration", opt.max_trial_duration, "s")->capture_default_str();
  sweep->add_option("--workers", opt.workers, "0 = all cores")->capture_default_str();
  sweep->add_option("--out", out)->capture_default_str();

  auto *analyze = app.add_subcommand("analyze", "summarise a results CSV and fit the regression");
  std::string in_path;
  double censor = 180;
  analyze->add_option("--in", in_path)->required();
  analyze->add_option("--censor", censor, "value used for timed-out trials")->capture_default_str();

  auto *serve = app.add_subcommand("serve", "run the operator session server");
  unsigned short port = 8080;
  std::string teams_path, data_dir = "sessions";
  bool hide_target = false;
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--teams", teams_path, "teams available to study-mode sessions");
  serve->add_option("--data-dir", data_dir)->capture_default_str();
  serve->add_flag("--hide-target", hide_target, "show the target only once the operator's robot knows it");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*trial) return cmd_trial(speed, separation, broadcast, seed, max_duration, record);
    if (*sweep) return cmd_sweep(grid_kind, speeds, seps, broadcasts, opt, out);
    if (*analyze) return cmd_analyze(in_path, censor);
    if (*serve) return cmd_serve(port, teams_path, data_dir, hide_target);
  } catch (const CLI::Error &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
