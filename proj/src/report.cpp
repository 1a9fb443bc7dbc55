#include "padicharm/report.hpp"

#include <cmath>
#include <stdexcept>

namespace padicharm {

nlohmann::json CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["status"] = status();
  j["max_deviation"] = std::isfinite(max_deviation) ? max_deviation : -1.0;
  j["runtime_s"] = runtime_s;
  j["detail"] = detail;
  return nlohmann::json(j);
}

bool RunReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass || c.error) return false;
  return true;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) j["checks"].push_back(c.to_json());
  if (!command.empty()) {
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = command;
    j["parameters"] = parameters;
  }
  if (!command.empty() || !artifacts.empty()) j["artifacts"] = artifacts;
  return j;
}

std::string emit_json(const RunReport& r) {
  if (r.command.empty() && r.checks.empty() && r.artifacts.empty()) return "{\"checks\":[]}";
  // nlohmann::json keeps keys sorted, which gives a stable field order
  return r.to_json().dump(2);
}

std::string emit_csv(const RunReport& r) {
  if (r.csv.empty()) throw std::invalid_argument("csv output is only available for count tables");
  return r.csv;
}

}  // namespace padicharm
