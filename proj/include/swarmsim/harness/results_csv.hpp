#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "swarmsim/harness/config.hpp"
#include "swarmsim/harness/trial.hpp"

namespace swarmsim {

/// One results.csv row: the grid point and the trial outcome.
struct ResultRow {
  GridPoint point;
  TrialResult result;

  friend bool operator==(const ResultRow &, const ResultRow &) = default;
};

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] inline std::string results_header(int swarm_size) {
  std::string h = "config_id,speed_cmps,separation_cm,broadcast_s,seed,completion_s";
  for (int i = 0; i < swarm_size; ++i) h += fmt::format(",informed_at_{}", i);
  for (int i = 0; i < swarm_size; ++i) h += fmt::format(",entry_at_{}", i);
  return h;
}

namespace detail {

inline std::string format_time(const std::optional<double> &t) { return t ? fmt::format("{:.1f}", *t) : ""; }

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  const auto *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw CsvError(fmt::format("bad {} field '{}'", what, s));
  return value;
}

inline std::optional<double> parse_time(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_number<double>(s, "time");
}

}  // namespace detail

[[nodiscard]] inline std::string format_row(const ResultRow &row) {
  const auto &r = row.result;
  std::string line = fmt::format("{},{:.1f},{:g},{:g},{},{}", row.point.config_id, row.point.speed,
                                 row.point.separation, row.point.broadcast, r.seed,
                                 detail::format_time(r.completion_time));
  for (const auto &t : r.informed_at) line += "," + detail::format_time(t);
  for (const auto &t : r.first_entry) line += "," + detail::format_time(t);
  return line;
}

[[nodiscard]] inline ResultRow parse_row(std::string_view line, int swarm_size) {
  const auto f = detail::split_fields(line);
  const auto expected = static_cast<std::size_t>(6 + 2 * swarm_size);
  if (f.size() != expected) throw CsvError(fmt::format("expected {} fields, got {}", expected, f.size()));
  ResultRow row;
  row.point.config_id = detail::parse_number<int>(f[0], "config_id");
  row.point.speed = detail::parse_number<double>(f[1], "speed_cmps");
  row.point.separation = detail::parse_number<double>(f[2], "separation_cm");
  row.point.broadcast = detail::parse_number<double>(f[3], "broadcast_s");
  row.result.config_id = row.point.config_id;
  row.result.seed = detail::parse_number<std::uint64_t>(f[4], "seed");
  row.result.completion_time = detail::parse_time(f[5]);
  for (int i = 0; i < swarm_size; ++i)
    row.result.informed_at.push_back(detail::parse_time(f[static_cast<std::size_t>(6 + i)]));
  for (int i = 0; i < swarm_size; ++i)
    row.result.first_entry.push_back(detail::parse_time(f[static_cast<std::size_t>(6 + swarm_size + i)]));
  return row;
}

/// Reads a results file. Rows must all be complete; see `read_result_lines`
/// for tolerant reading of a partially written file.
[[nodiscard]] inline std::vector<ResultRow> read_results(std::istream &in, int swarm_size = 10) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty results file");
  if (line != results_header(swarm_size)) throw CsvError("unexpected results header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_row(line, swarm_size));
  }
  return rows;
}

}  // namespace swarmsim
