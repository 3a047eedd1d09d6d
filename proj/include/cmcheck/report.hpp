#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmcheck/precision.hpp"

namespace cmcheck {

using Fields = std::vector<std::pair<std::string, std::string>>;

/// One result line. Numeric values are decimal strings so that extended
/// precision survives serialization.
struct Record {
  std::string name;
  std::string provenance;  // closed-form | series | quadrature | scan | exact | bisection
  bool pass = true;
  std::string value;
  Fields fields;
};

struct Report {
  std::string command;
  Fields inputs;
  std::vector<Record> results;
  bool pass = true;
  double timing_ms = 0;
  std::string error;
  int exit_code = 0;

  void add(Record r) {
    pass = pass && r.pass;
    results.push_back(std::move(r));
  }
};

inline nlohmann::ordered_json to_json(const Report& report, bool include_timing = true) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.inputs) inputs[k] = v;
  j["inputs"] = inputs;
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const auto& r : report.results) {
    nlohmann::ordered_json rec;
    rec["name"] = r.name;
    rec["provenance"] = r.provenance;
    rec["pass"] = r.pass;
    rec["value"] = r.value;
    nlohmann::ordered_json fields = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.fields) fields[k] = v;
    rec["fields"] = fields;
    results.push_back(rec);
  }
  j["results"] = results;
  j["pass"] = report.pass;
  if (!report.error.empty()) j["error"] = report.error;
  j["exit_code"] = report.exit_code;
  if (include_timing) j["timing_ms"] = report.timing_ms;
  return j;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline constexpr const char* kCsvHeader = "name,provenance,pass,value,fields";

/// One record per row; extra fields are folded into `key=value;...`.
inline std::string to_csv(const Report& report) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : report.results) {
    std::string extra;
    for (const auto& [k, v] : r.fields) {
      if (!extra.empty()) extra += ';';
      extra += k + '=' + v;
    }
    os << detail::csv_escape(r.name) << ',' << detail::csv_escape(r.provenance) << ','
       << (r.pass ? "true" : "false") << ',' << detail::csv_escape(r.value) << ','
       << detail::csv_escape(extra) << '\n';
  }
  return os.str();
}

}  // namespace cmcheck
