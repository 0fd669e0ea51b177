#include "fdetect/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace fdetect {

namespace {

constexpr const char* kInputKeys[] = {"group", "chars", "set", "k", "seed", "tolerances"};
constexpr const char* kResultKeys[] = {"achieved", "bounds", "norms", "potential_trace", "margins"};

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

} // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const Report& report, const std::string& timestamp) {
  Json doc;
  doc["tool_version"] = kToolVersion;
  doc["command"] = report.command;
  Json inputs = Json::object();
  for (const char* key : kInputKeys) inputs[key] = report.inputs.contains(key) ? report.inputs[key] : Json();
  for (const auto& [key, value] : report.inputs.items()) {
    if (!inputs.contains(key)) inputs[key] = value;
  }
  doc["inputs"] = std::move(inputs);
  Json results = Json::object();
  for (const char* key : kResultKeys) results[key] = report.results.contains(key) ? report.results[key] : Json();
  for (const auto& [key, value] : report.results.items()) {
    if (!results.contains(key)) results[key] = value;
  }
  if (!report.columns.empty()) {
    Json table = Json::object();
    table["columns"] = report.columns;
    Json rows = Json::array();
    for (const auto& row : report.rows) rows.push_back(Json(row));
    table["rows"] = std::move(rows);
    results["table"] = std::move(table);
  }
  doc["results"] = std::move(results);
  doc["summary"] = report.summary;
  if (!report.error.is_null()) doc["error"] = report.error;
  doc["timestamp"] = timestamp;
  return doc;
}

std::string dump_json(const Report& report, const std::string& timestamp) {
  return to_json(report, timestamp).dump(2) + "\n";
}

std::string dump_csv(const Report& report) {
  std::ostringstream os;
  for (std::size_t c = 0; c < report.columns.size(); ++c) os << (c ? "," : "") << csv_cell(Json(report.columns[c]));
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> validate_report_json(const Json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) return {"report is not a JSON object"};
  auto need = [&](const char* key, bool (Json::*pred)() const noexcept, const char* type) {
    if (!doc.contains(key)) {
      problems.push_back(std::string("missing key '") + key + "'");
    } else if (!(doc[key].*pred)()) {
      problems.push_back(std::string("key '") + key + "' is not " + type);
    }
  };
  need("tool_version", &Json::is_string, "a string");
  need("command", &Json::is_string, "a string");
  need("inputs", &Json::is_object, "an object");
  need("results", &Json::is_object, "an object");
  need("summary", &Json::is_object, "an object");
  need("timestamp", &Json::is_string, "a string");
  if (doc.contains("inputs") && doc["inputs"].is_object()) {
    for (const char* key : kInputKeys) {
      if (!doc["inputs"].contains(key)) problems.push_back(std::string("inputs lacks '") + key + "'");
    }
  }
  if (doc.contains("results") && doc["results"].is_object()) {
    for (const char* key : kResultKeys) {
      if (!doc["results"].contains(key)) problems.push_back(std::string("results lacks '") + key + "'");
    }
    if (doc["results"].contains("table")) {
      const auto& table = doc["results"]["table"];
      if (!table.contains("columns") || !table.contains("rows") || !table["rows"].is_array()) {
        problems.push_back("results.table must hold columns and rows");
      } else {
        for (const auto& row : table["rows"]) {
          if (!row.is_array() || row.size() != table["columns"].size()) {
            problems.push_back("results.table row width differs from column count");
            break;
          }
        }
      }
    }
  }
  if (doc.contains("error") && !(doc["error"].is_object() && doc["error"].contains("kind") && doc["error"].contains("message"))) {
    problems.push_back("error must hold kind and message");
  }
  return problems;
}

} // namespace fdetect
