#pragma once
/// Machine-readable run reports (JSON schema version 1).
///
/// Every report carries the schema and tool versions, the effective
/// configuration, one entry per check and the overall verdict. Non-finite
/// doubles are written as the strings "inf", "-inf" and "nan" so that every
/// report round-trips losslessly; finite doubles use the shortest exact form.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "plap/errors.hpp"
#include "plap/reports.hpp"

namespace plap {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

/// Double to JSON with explicit non-finite spellings.
inline json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double get_num(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("not a number: '" + s + "'");
  }
  if (!j.is_number()) throw InputError("expected a number, got " + j.dump());
  return j.get<double>();
}

inline json num_list(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline std::vector<double> get_num_list(const json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers, got " + j.dump());
  std::vector<double> v;
  for (const auto& x : j) v.push_back(get_num(x));
  return v;
}

inline void to_json(json& j, const IdentityReport& r) {
  j = json{{"identity_id", r.identity_id},         {"samples", r.samples},
           {"skipped", r.skipped},                 {"max_rel_residual", num(r.max_rel_residual)},
           {"max_abs_residual", num(r.max_abs_residual)}, {"worst_case", r.worst_case},
           {"tol", num(r.tol)},                    {"pass", r.pass}};
}

inline void from_json(const json& j, IdentityReport& r) {
  r.identity_id = j.at("identity_id").get<std::string>();
  r.samples = j.at("samples").get<std::uint64_t>();
  r.skipped = j.at("skipped").get<std::uint64_t>();
  r.max_rel_residual = get_num(j.at("max_rel_residual"));
  r.max_abs_residual = get_num(j.at("max_abs_residual"));
  r.worst_case = j.at("worst_case").get<std::string>();
  r.tol = get_num(j.at("tol"));
  r.pass = j.at("pass").get<bool>();
}

inline void to_json(json& j, const InequalityReport& r) {
  j = json{{"identity_id", r.identity_id}, {"samples", r.samples},      {"skipped", r.skipped},
           {"min_margin", num(r.min_margin)}, {"worst_case", r.worst_case}, {"tol_neg", num(r.tol_neg)},
           {"pass", r.pass}};
}

inline void from_json(const json& j, InequalityReport& r) {
  r.identity_id = j.at("identity_id").get<std::string>();
  r.samples = j.at("samples").get<std::uint64_t>();
  r.skipped = j.at("skipped").get<std::uint64_t>();
  r.min_margin = get_num(j.at("min_margin"));
  r.worst_case = j.at("worst_case").get<std::string>();
  r.tol_neg = get_num(j.at("tol_neg"));
  r.pass = j.at("pass").get<bool>();
}

/// Outcome of one check inside a run. `status` is "pass", "fail", "error"
/// (a numerical or precondition failure, message in `error`) or
/// "exploration" (reported without a verdict).
struct CheckEntry {
  CheckEntry() = default;
  CheckEntry(std::string k, std::string i, std::string st = "pass", json d = json::object())
      : kind(std::move(k)), id(std::move(i)), status(std::move(st)), data(std::move(d)) {}

  std::string kind;  // e.g. "identity", "inequality", "scan", "ratio"
  std::string id;
  std::string status = "pass";
  json data = json::object();
  std::string error;

  bool ok() const { return status == "pass" || status == "exploration"; }
};

inline std::string status_of(bool pass) { return pass ? "pass" : "fail"; }

inline void to_json(json& j, const CheckEntry& c) {
  j = json{{"kind", c.kind}, {"id", c.id}, {"status", c.status}, {"data", c.data}};
  if (!c.error.empty()) j["error"] = c.error;
}

inline void from_json(const json& j, CheckEntry& c) {
  c.kind = j.at("kind").get<std::string>();
  c.id = j.at("id").get<std::string>();
  c.status = j.at("status").get<std::string>();
  c.data = j.at("data");
  c.error = j.contains("error") ? j.at("error").get<std::string>() : std::string();
}

struct RunReport {
  int schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string subcommand;
  json config = json::object();  // effective parameters, defaults included
  std::vector<CheckEntry> checks;
  bool pass = false;
  std::optional<double> wall_time;  // seconds; only when timing was requested

  /// pass <=> at least one check and every check passes (explorations count as passing).
  void finalize() {
    pass = !checks.empty();
    for (const auto& c : checks) pass = pass && c.ok();
  }
};

inline void to_json(json& j, const RunReport& r) {
  j = json{{"schema_version", r.schema_version}, {"tool_version", r.tool_version}, {"subcommand", r.subcommand},
           {"config", r.config},                 {"checks", r.checks},             {"pass", r.pass}};
  if (r.wall_time) j["wall_time"] = num(*r.wall_time);
}

inline void from_json(const json& j, RunReport& r) {
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) throw InputError("unsupported report schema version");
  r.tool_version = j.at("tool_version").get<std::string>();
  r.subcommand = j.at("subcommand").get<std::string>();
  r.config = j.at("config");
  r.checks = j.at("checks").get<std::vector<CheckEntry>>();
  r.pass = j.at("pass").get<bool>();
  r.wall_time = j.contains("wall_time") ? std::optional<double>(get_num(j.at("wall_time"))) : std::nullopt;
}

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
inline std::string serialize(const RunReport& r) { return json(r).dump(2) + "\n"; }

inline RunReport parse_report(const std::string& text) { return json::parse(text).get<RunReport>(); }

}  // namespace plap
