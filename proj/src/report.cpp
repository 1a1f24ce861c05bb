#include "simchaos/report.hpp"

#include <fstream>
#include <sstream>

#include "simchaos/errors.hpp"

namespace simchaos {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config(const std::string& text) {
  Config out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Parse, "config line " + std::to_string(number) + " lacks '='");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw Error(ErrorKind::Parse, "config line " + std::to_string(number) + " has an empty key");
    out[key] = value;
  }
  return out;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json bracket_json(const DistanceBracket& d) {
  json j{{"lower", d.lower}, {"upper", d.upper}, {"method", d.method}};
  if (d.exact) j["exact"] = d.exact->to_string();
  return j;
}

json quantity_json(const Quantity& q) {
  json j{{"name", q.name}, {"lower", q.lower}, {"upper", q.upper}, {"method", q.method}};
  if (!q.exact.empty()) j["exact"] = q.exact;
  return j;
}

json witness_json(const WitnessReport& report) {
  json inputs = json::object();
  for (const auto& [k, v] : report.inputs) inputs[k] = v;
  json quantities = json::array();
  for (const auto& q : report.quantities) quantities.push_back(quantity_json(q));
  return json{{"kind", to_string(report.kind)}, {"space", report.space},       {"inputs", inputs},
              {"witnesses", report.witnesses},  {"quantities", quantities},   {"horizon", report.horizon},
              {"pass", report.pass}};
}

json devaney_json(const DevaneyReport& report) {
  json parts = json::array();
  for (const auto& r : report.reports) parts.push_back(witness_json(r));
  return json{{"space", report.space}, {"depth", report.depth}, {"samples", report.samples},
              {"seed", report.seed},   {"reports", parts},      {"pass", report.pass}};
}

json diameter_json(const DiameterReport& report) {
  json levels = json::array();
  for (const auto& l : report.levels) {
    json j{{"depth", l.depth},
           {"law", l.law.to_string()},
           {"law_value", l.law.to_double()},
           {"regions_checked", l.regions_checked},
           {"exhaustive", l.exhaustive}};
    if (l.measured) {
      j["measured"] = l.measured->to_string();
      j["measured_value"] = l.measured->to_double();
    }
    levels.push_back(j);
  }
  return json{{"levels", levels},
              {"strictly_decreasing", report.strictly_decreasing},
              {"matches_law", report.matches_law},
              {"pass", report.pass()}};
}

json separation_json(const SeparationTable& table, int offset) {
  json partners = json::array();
  for (const auto& e : table.best_partner) {
    partners.push_back(json{{"prefix", format_word(e.prefix, offset)},
                            {"partner", format_word(e.partner, offset)},
                            {"distance", bracket_json(e.distance)}});
  }
  json j{{"degree", table.degree},
         {"refine", table.refine},
         {"epsilon_lower", table.epsilon_lower},
         {"epsilon_upper", table.epsilon_upper},
         {"closest", json::array({format_word(table.prefixes.at(table.closest_i), offset),
                                  format_word(table.prefixes.at(table.closest_j), offset)})},
         {"best_partner", partners},
         {"pass", table.pass()}};
  if (table.epsilon_exact) j["epsilon_exact"] = table.epsilon_exact->to_string();
  return j;
}

json condition_json(const DassConditionReport& report) {
  json levels = json::array();
  for (const auto& l : report.levels) {
    levels.push_back(json{{"level", l.level},
                          {"clusters", l.clusters},
                          {"max_diameter", l.max_diameter},
                          {"epsilon", l.epsilon},
                          {"closest", json::array({l.closest_a, l.closest_b})}});
  }
  return json{{"levels", levels},
              {"diameters_decreasing", report.diameters_decreasing},
              {"separated", report.separated},
              {"weak_separation", report.weak_separation},
              {"weak_threshold", report.weak_threshold},
              {"pass", report.pass()}};
}

json check_report(const std::string& space, const std::string& check, int depth, json values, json witnesses,
                  bool pass, const Config& config) {
  json cfg = json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  return json{{"space", space},
              {"check", check},
              {"depth", depth},
              {"values", std::move(values)},
              {"witnesses", std::move(witnesses)},
              {"pass", pass},
              {"tool", json{{"name", "simchaos"}, {"version", kToolVersion}}},
              {"config", cfg}};
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

void save_report(const std::string& path, const json& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  out << dump_report(report);
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path);
}

}  // namespace simchaos
