#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ucantor/checker.hpp"
#include "ucantor/config_io.hpp"
#include "ucantor/extension.hpp"
#include "ucantor/oracle.hpp"

namespace ucantor {

/// Level table with Lambda, m_k and s_k for k <= depth.
nlohmann::json describe_json(const RunConfig& rc);

/// Level-indexed measures: check_theorem1 plus the three corollaries
/// (inapplicable ones are reported with their reason). Word rules:
/// check_theorem2, and for level-only rules also the level-indexed checks.
nlohmann::json check_json(const RunConfig& rc, bool symbolic);

OracleOptions oracle_options(const Horizons& h);
nlohmann::json oracle_json(const OracleReport& report, const Horizons& h);

nlohmann::json extend_json(const RunConfig& rc);

/// Checker verdict against oracle growth for every *.json in `dir`, in
/// file-name order.
nlohmann::json cross_validate_json(const std::filesystem::path& dir, bool symbolic);

nlohmann::json to_json(const DoublingVerdict& v);
nlohmann::json to_json(const ConditionRecord& r);

/// Adds "schema", "command" and the single timestamp key "generated_at",
/// then renders with sorted keys.
std::string render_report(const std::string& command, nlohmann::json body, const std::string& timestamp);

/// UTC ISO-8601; honours SOURCE_DATE_EPOCH when set.
std::string timestamp_now();

/// depth,sup_ratio,exact with 12 significant digits.
std::string series_csv(const OracleReport& report);

}  // namespace ucantor
