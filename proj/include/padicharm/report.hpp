#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace padicharm {

inline constexpr int kReportSchemaVersion = 1;

struct CheckReport {
  std::string name;
  bool pass = false;
  double max_deviation = 0.0;
  std::string detail;
  double runtime_s = 0.0;
  bool error = false;

  std::string status() const { return error ? "error" : (pass ? "pass" : "fail"); }
  nlohmann::json to_json() const;
};

struct RunReport {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<CheckReport> checks;
  nlohmann::json artifacts = nlohmann::json::object();
  std::string csv;  // tabular payload, if any

  bool all_pass() const;
  nlohmann::json to_json() const;
};

// canonical JSON text; an empty report is {"checks":[]}
std::string emit_json(const RunReport& r);
// CSV projection; throws std::invalid_argument when the report has no tabular payload
std::string emit_csv(const RunReport& r);

}  // namespace padicharm
