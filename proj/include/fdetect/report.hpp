#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace fdetect {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.3.0";

/// Machine-readable outcome of one command or experiment.
///
/// JSON layout: {tool_version, command, inputs, results, summary, timestamp}
/// plus an optional "error" object. `rows` is the flat per-trial (or per-step)
/// table used for CSV output and mirrored under results.
struct Report {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Json summary = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json error = nullptr; ///< {kind, message} when the command failed

  void add_row(std::vector<Json> row) { rows.push_back(std::move(row)); }
};

/// Current UTC time as ISO-8601 ("2026-01-02T03:04:05Z").
std::string utc_timestamp();

Json to_json(const Report& report, const std::string& timestamp);
std::string dump_json(const Report& report, const std::string& timestamp);

/// Header row then one line per row; doubles with 17 significant digits,
/// strings quoted when they contain a comma or quote.
std::string dump_csv(const Report& report);

/// Checks the stable key layout of a JSON report; returns a list of problems.
std::vector<std::string> validate_report_json(const Json& doc);

} // namespace fdetect
