#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "swarmsim/harness/results_csv.hpp"

namespace swarmsim {

/// Trial seed of repetition `rep` of a configuration. Independent of the
/// number of repetitions, so growing a sweep keeps earlier rows.
[[nodiscard]] constexpr std::uint64_t trial_seed(std::uint64_t master_seed, int config_id, int rep) {
  return derive_seed(derive_seed(master_seed, static_cast<std::uint64_t>(config_id)), static_cast<std::uint64_t>(rep));
}

struct SweepOptions {
  int seeds_per_config = 10;
  std::uint64_t master_seed = 1;
  double max_trial_duration = 180.0;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct SweepJob {
  GridPoint point;
  std::uint64_t seed = 0;
};

[[nodiscard]] inline std::vector<SweepJob> sweep_jobs(const std::vector<GridPoint> &grid, const SweepOptions &opt) {
  if (opt.seeds_per_config < 1) throw std::invalid_argument("seeds_per_config must be at least 1");
  std::vector<SweepJob> jobs;
  jobs.reserve(grid.size() * static_cast<std::size_t>(opt.seeds_per_config));
  for (const auto &g : grid)
    for (int rep = 0; rep < opt.seeds_per_config; ++rep) jobs.push_back({g, trial_seed(opt.master_seed, g.config_id, rep)});
  return jobs;
}

[[nodiscard]] inline ResultRow run_job(const SweepJob &job, const SweepOptions &opt) {
  return {job.point, run_trial(make_config(job.point, job.seed, opt.max_trial_duration))};
}

/// Runs `jobs` on a worker pool and hands each row to `sink` in job order,
/// so the output never depends on scheduling.
template <class Sink>
void run_ordered(const std::vector<SweepJob> &jobs, const SweepOptions &opt, Sink &&sink) {
  if (jobs.empty()) return;
  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));

  std::vector<std::optional<ResultRow>> slots(jobs.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      std::optional<ResultRow> row;
      try {
        row = run_job(jobs[i], opt);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
      {
        std::lock_guard lock(mutex);
        slots[i] = std::move(row);
        if (!slots[i]) slots[i].emplace();  // wake the writer on failure too
      }
      ready.notify_one();
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);

  try {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      ResultRow row;
      {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return slots[i].has_value() || failure; });
        if (failure) break;
        row = std::move(*slots[i]);
        slots[i].reset();
      }
      sink(row);
    }
  } catch (...) {
    next = jobs.size();
    throw;
  }
  next = jobs.size();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// In-memory sweep.
[[nodiscard]] inline std::vector<ResultRow> run_sweep(const std::vector<GridPoint> &grid, const SweepOptions &opt) {
  std::vector<ResultRow> rows;
  run_ordered(sweep_jobs(grid, opt), opt, [&](const ResultRow &r) { rows.push_back(r); });
  return rows;
}

struct SweepFileReport {
  std::size_t reused = 0;
  std::size_t computed = 0;
};

/// Sweep written to a results file. Rows are appended in job order as they
/// finish, so an interrupted file is a prefix of the complete one; a re-run
/// keeps rows already recorded and computes only the rest. The finished file
/// is byte-identical whether or not the run was interrupted.
inline SweepFileReport run_sweep_to_file(const std::vector<GridPoint> &grid, const SweepOptions &opt,
                                         const std::filesystem::path &out_path, int swarm_size = 10) {
  const auto jobs = sweep_jobs(grid, opt);
  const std::string header = results_header(swarm_size);

  std::map<std::pair<int, std::uint64_t>, std::string> existing;
  std::vector<std::string> existing_order;
  if (std::filesystem::exists(out_path)) {
    std::ifstream in(out_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + out_path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string content = buffer.str();
    // a torn final line from an interrupted run is dropped
    if (const auto last_nl = content.rfind('\n'); last_nl == std::string::npos) {
      content.clear();
    } else {
      content.resize(last_nl + 1);
    }
    std::istringstream lines(content);
    std::string line;
    if (std::getline(lines, line) && line == header) {
      while (std::getline(lines, line)) {
        if (line.empty()) continue;
        try {
          const auto row = parse_row(line, swarm_size);
          existing.emplace(std::pair{row.point.config_id, row.result.seed}, line);
          existing_order.push_back(line);
        } catch (const CsvError &) {
          // unreadable rows are recomputed
        }
      }
    }
  }

  // Fast path: the file holds exactly the first rows of this sweep.
  std::size_t prefix = 0;
  while (prefix < existing_order.size() && prefix < jobs.size()) {
    const auto it = existing.find({jobs[prefix].point.config_id, jobs[prefix].seed});
    if (it == existing.end() || it->second != existing_order[prefix]) break;
    ++prefix;
  }
  const bool append = prefix == existing_order.size();

  const auto tmp_path = std::filesystem::path(out_path.string() + ".tmp");
  std::ofstream out;
  SweepFileReport report;
  std::vector<SweepJob> todo;
  if (append) {
    {
      // rewrite the clean prefix to drop any torn tail
      std::ofstream clean(tmp_path, std::ios::binary | std::ios::trunc);
      clean << header << '\n';
      for (std::size_t i = 0; i < prefix; ++i) clean << existing_order[i] << '\n';
      if (!clean) throw std::runtime_error("cannot write " + tmp_path.string());
    }
    std::filesystem::rename(tmp_path, out_path);
    out.open(out_path, std::ios::binary | std::ios::app);
    report.reused = prefix;
    todo.assign(jobs.begin() + static_cast<std::ptrdiff_t>(prefix), jobs.end());
    if (!out) throw std::runtime_error("cannot write " + out_path.string());
    run_ordered(todo, opt, [&](const ResultRow &row) {
      out << format_row(row) << '\n';
      out.flush();
      if (!out) throw std::runtime_error("write failed: " + out_path.string());
    });
    report.computed = todo.size();
    return report;
  }

  // General path: rebuild the file in job order, reusing any recorded rows.
  out.open(tmp_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + tmp_path.string());
  out << header << '\n';
  std::vector<std::optional<std::string>> reuse(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (auto it = existing.find({jobs[i].point.config_id, jobs[i].seed}); it != existing.end()) {
      reuse[i] = it->second;
      ++report.reused;
    } else {
      todo.push_back(jobs[i]);
    }
  }
  std::size_t cursor = 0;
  auto flush_reused = [&] {
    while (cursor < jobs.size() && reuse[cursor]) out << *reuse[cursor++] << '\n';
  };
  flush_reused();
  run_ordered(todo, opt, [&](const ResultRow &row) {
    out << format_row(row) << '\n';
    ++cursor;
    flush_reused();
    if (!out) throw std::runtime_error("write failed: " + tmp_path.string());
  });
  report.computed = todo.size();
  out.close();
  std::filesystem::rename(tmp_path, out_path);
  return report;
}

}  // namespace swarmsim
