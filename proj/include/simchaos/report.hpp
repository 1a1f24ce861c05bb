#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "simchaos/chaos.hpp"
#include "simchaos/dass.hpp"
#include "simchaos/space.hpp"

namespace simchaos {

inline constexpr const char* kToolVersion = "0.1.0";

/// Resolved key=value configuration, sorted so reports serialize stably.
using Config = std::map<std::string, std::string>;

/// Parses `key = value` lines; blank lines and `#` comments are skipped and
/// quotes around values are dropped.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

nlohmann::json bracket_json(const DistanceBracket& d);
nlohmann::json quantity_json(const Quantity& q);
nlohmann::json witness_json(const WitnessReport& report);
nlohmann::json devaney_json(const DevaneyReport& report);
nlohmann::json diameter_json(const DiameterReport& report);
nlohmann::json separation_json(const SeparationTable& table, int offset);
nlohmann::json condition_json(const DassConditionReport& report);

/// {space, check, depth, values[], witnesses[], pass} plus tool version and
/// configuration.
nlohmann::json check_report(const std::string& space, const std::string& check, int depth, nlohmann::json values,
                            nlohmann::json witnesses, bool pass, const Config& config);

/// Two-space indented text with a trailing newline.
std::string dump_report(const nlohmann::json& report);
void save_report(const std::string& path, const nlohmann::json& report);

}  // namespace simchaos
