#pragma once

// Verification reports: per-check records, summary, config echo.
// JSON keys are emitted in a fixed order so identical runs give identical bytes.

#include "crdeform/config.hpp"

#include "json.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace crdeform {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kToolName = "crdeform";
inline constexpr const char* kToolVersion = "1.0.0";

enum class CheckStatus { Pass, Fail, Diagnostic };

inline const char* to_string(CheckStatus s)
{
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Diagnostic: return "diagnostic";
  }
  return "?";
}

inline CheckStatus check_status_from_string(const std::string& s)
{
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "diagnostic") return CheckStatus::Diagnostic;
  throw std::invalid_argument("unknown check status '" + s + "'");
}

struct CheckRecord
{
  std::string id;
  CheckStatus status = CheckStatus::Diagnostic;
  ojson measured = ojson::object();
  ojson tolerance = ojson::object();
  ojson truncation = ojson::object();
  std::string note;

  bool operator==(const CheckRecord&) const = default;
};

struct VerificationReport
{
  std::string tool = kToolName, version = kToolVersion;
  std::string command;
  ojson config = ojson::object();
  std::vector<CheckRecord> checks;
  bool complete = true;
  std::string error;  // set when a numerical failure cut the run short

  int count(CheckStatus s) const
  {
    int n = 0;
    for (const auto& c : checks) n += c.status == s ? 1 : 0;
    return n;
  }
  bool all_gating_pass() const { return count(CheckStatus::Fail) == 0; }

  bool operator==(const VerificationReport&) const = default;
};

inline ojson config_to_json(const RunConfig& c)
{
  ojson j;
  j["degree"] = c.degree;
  j["order"] = c.order;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["kernel_threshold"] = c.kernel_threshold;
  j["identity_tolerance"] = c.identity_tolerance;
  j["projector_tolerance"] = c.projector_tolerance;
  j["commutator_tolerance"] = c.commutator_tolerance;
  j["angle_tolerance"] = c.angle_tolerance;
  j["estimate_floor"] = c.estimate_floor;
  j["majorant_b"] = c.majorant_b.get_str();
  j["majorant_c"] = c.majorant_c.get_str();
  j["majorant_r"] = c.majorant_r;
  j["majorant_order"] = c.majorant_order;
  j["kuranishi_params"] = c.kuranishi_params;
  j["format"] = c.format;
  j["checks"] = c.checks;
  return j;
}

inline ojson to_json(const CheckRecord& r)
{
  ojson j;
  j["id"] = r.id;
  j["status"] = to_string(r.status);
  j["measured"] = r.measured;
  j["tolerance"] = r.tolerance;
  j["truncation"] = r.truncation;
  j["note"] = r.note;
  return j;
}

inline ojson to_json(const VerificationReport& rep)
{
  ojson j;
  j["tool"] = rep.tool;
  j["version"] = rep.version;
  j["command"] = rep.command;
  j["config"] = rep.config;
  j["checks"] = ojson::array();
  for (const auto& c : rep.checks) j["checks"].push_back(to_json(c));
  ojson s;
  s["total"] = rep.checks.size();
  s["passed"] = rep.count(CheckStatus::Pass);
  s["failed"] = rep.count(CheckStatus::Fail);
  s["diagnostic"] = rep.count(CheckStatus::Diagnostic);
  s["complete"] = rep.complete;
  s["error"] = rep.error.empty() ? ojson(nullptr) : ojson(rep.error);
  j["summary"] = s;
  return j;
}

inline VerificationReport report_from_json(const ojson& j)
{
  VerificationReport rep;
  rep.tool = j.at("tool").get<std::string>();
  rep.version = j.at("version").get<std::string>();
  rep.command = j.at("command").get<std::string>();
  rep.config = j.at("config");
  for (const auto& c : j.at("checks")) {
    CheckRecord r;
    r.id = c.at("id").get<std::string>();
    r.status = check_status_from_string(c.at("status").get<std::string>());
    r.measured = c.at("measured");
    r.tolerance = c.at("tolerance");
    r.truncation = c.at("truncation");
    r.note = c.at("note").get<std::string>();
    rep.checks.push_back(std::move(r));
  }
  const auto& s = j.at("summary");
  rep.complete = s.at("complete").get<bool>();
  rep.error = s.at("error").is_null() ? std::string() : s.at("error").get<std::string>();
  return rep;
}

namespace detail {

inline std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

/// One row per check; nested values are compact JSON inside a quoted field.
inline std::string to_csv(const VerificationReport& rep)
{
  std::ostringstream os;
  os << "check_id,status,measured,tolerance,truncation,note\n";
  for (const auto& c : rep.checks)
    os << detail::csv_field(c.id) << ',' << to_string(c.status) << ',' << detail::csv_field(c.measured.dump()) << ','
       << detail::csv_field(c.tolerance.dump()) << ',' << detail::csv_field(c.truncation.dump()) << ','
       << detail::csv_field(c.note) << '\n';
  return os.str();
}

inline std::string emit_report(const VerificationReport& rep, const std::string& format)
{
  if (format == "json") return to_json(rep).dump(2) + "\n";
  if (format == "csv") return to_csv(rep);
  throw std::invalid_argument("emit_report: unknown format '" + format + "'");
}

}  // namespace crdeform
