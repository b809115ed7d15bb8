#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "swarmsim/session/protocol.hpp"

namespace swarmsim::session {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}.{:03d}Z", fmt::gmtime(std::chrono::system_clock::to_time_t(now)),
                     static_cast<int>(ms));
}

/// Per-session directory of append-only JSON-lines files:
///   plan.json       the round plan, written once
///   outcomes.jsonl  one line per finished round
///   inputs.jsonl    the tick-stamped input log of each finished round
///   ratings.jsonl   one line per accepted rating
///   events.jsonl    round starts, aborts, ignored inputs, tick timing
/// Session state is recovered from these files alone.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  [[nodiscard]] const std::filesystem::path &dir() const { return dir_; }
  [[nodiscard]] bool exists() const { return std::filesystem::exists(dir_ / "plan.json"); }

  void create(const std::string &session_id, const std::vector<RoundSpec> &plan) const {
    std::filesystem::create_directories(dir_);
    if (exists()) throw StoreError("session already exists: " + dir_.string());
    json rounds = json::array();
    for (const auto &r : plan) rounds.push_back(to_json(r));
    json doc{{"session_id", session_id}, {"created_at", utc_timestamp()}, {"rounds", std::move(rounds)}};
    const auto tmp = dir_ / "plan.json.tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << doc.dump(2) << '\n';
      if (!out) throw StoreError("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, dir_ / "plan.json");
  }

  [[nodiscard]] json load_plan_document() const {
    std::ifstream in(dir_ / "plan.json", std::ios::binary);
    if (!in) throw StoreError("no plan in " + dir_.string());
    try {
      return json::parse(in);
    } catch (const nlohmann::json::exception &e) {
      throw StoreError(std::string("corrupt plan.json: ") + e.what());
    }
  }

  [[nodiscard]] std::vector<RoundSpec> load_plan() const {
    const auto doc = load_plan_document();
    std::vector<RoundSpec> plan;
    for (const auto &r : doc.at("rounds")) plan.push_back(round_from_json(r));
    return plan;
  }

  void append(const std::string &file, const json &record) const {
    std::ofstream out(dir_ / file, std::ios::binary | std::ios::app);
    out << record.dump() << '\n';
    out.flush();
    if (!out) throw StoreError("cannot append to " + (dir_ / file).string());
  }

  /// Records of a JSON-lines file; a torn final line is skipped.
  [[nodiscard]] std::vector<json> read(const std::string &file) const {
    std::vector<json> records;
    std::ifstream in(dir_ / file, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = json::parse(line, nullptr, false);
      if (j.is_discarded()) continue;
      records.push_back(std::move(j));
    }
    return records;
  }

  void append_outcome(const RoundOutcome &o, int config_id, int attempt, const std::string &at) const {
    json rec{{"round_index", o.round_index}, {"config_id", config_id}, {"attempt", attempt},
             {"seed", o.seed},               {"success", o.success}};
    rec["completion_s"] = o.completion_time ? json(*o.completion_time) : json(nullptr);
    rec["snapshot_count"] = o.snapshot_count;
    rec["input_count"] = o.input_log.size();
    rec["ended_at"] = at;
    append("inputs.jsonl", json{{"round_index", o.round_index}, {"attempt", attempt}, {"seed", o.seed},
                                {"inputs", input_log_to_json(o.input_log)}});
    append("outcomes.jsonl", rec);
  }

  /// Finished rounds, rebuilt from the outcome and input-log files.
  [[nodiscard]] std::vector<RoundOutcome> load_outcomes() const {
    std::vector<json> inputs = read("inputs.jsonl");
    std::vector<RoundOutcome> out;
    for (const auto &rec : read("outcomes.jsonl")) {
      RoundOutcome o;
      o.round_index = rec.at("round_index").get<int>();
      o.seed = rec.at("seed").get<std::uint64_t>();
      o.success = rec.at("success").get<bool>();
      if (!rec.at("completion_s").is_null()) o.completion_time = rec.at("completion_s").get<double>();
      o.snapshot_count = rec.at("snapshot_count").get<std::size_t>();
      const int attempt = rec.value("attempt", 0);
      for (const auto &in : inputs) {
        if (in.at("round_index").get<int>() == o.round_index && in.value("attempt", 0) == attempt) {
          o.input_log = input_log_from_json(in.at("inputs"));
          break;
        }
      }
      out.push_back(std::move(o));
    }
    return out;
  }

  void append_rating(const RatingRecord &r) const { append("ratings.jsonl", to_json(r)); }

  [[nodiscard]] std::vector<RatingRecord> load_ratings() const {
    std::vector<RatingRecord> out;
    for (const auto &rec : read("ratings.jsonl")) out.push_back(rating_from_json(rec));
    return out;
  }

  void append_event(json event) const {
    event["at"] = utc_timestamp();
    append("events.jsonl", event);
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace swarmsim::session
