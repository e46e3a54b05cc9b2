#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "geovex/engine/report.hpp"
#include "geovex/harness/theorems.hpp"
#include "geovex/io/scenario_io.hpp"
#include "geovex/version.hpp"

namespace geovex {

/// Everything one CLI invocation decides, in a renderable form. JSON output
/// contains no wall-clock fields, so a fixed scenario, seed, and tolerance
/// set renders to identical bytes on every run; timings appear in the text
/// rendering only.
struct RunReport {
  std::string command;               // subcommand that produced the report
  std::string scenario;              // scenario name
  std::string digest;                // digest of the scenario's canonical form
  std::string suite;                 // theorem suite name, when applicable
  std::vector<CheckReport> checks;
  std::vector<TheoremReport> cases;
  int exit_status = 0;
};

/// 1 when any check or case failed, else 0 (usage/config errors exit 2 and
/// never reach report rendering).
inline int report_verdict(const std::vector<CheckReport>& checks,
                          const std::vector<TheoremReport>& cases) {
  for (const auto& c : checks)
    if (!c.pass()) return 1;
  for (const auto& r : cases)
    if (!r.pass()) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// JSON rendering (deterministic: no timings)
// ---------------------------------------------------------------------------

inline Json witness_to_json(const ViolationWitness& w) {
  Json j;
  j["predicate"] = w.predicate;
  j["x"] = detail::vec_to_json(w.x);
  j["y"] = detail::vec_to_json(w.y);
  j["t"] = w.t;
  if (w.has_s) j["s"] = w.s;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  j["slack"] = w.slack;
  if (!w.curve_point.empty()) j["curve_point"] = detail::vec_to_json(w.curve_point);
  if (!w.detail.empty()) j["detail"] = w.detail;
  return j;
}

inline Json check_to_json(const CheckReport& c) {
  Json j;
  j["predicate"] = c.predicate;
  j["scenario"] = c.scenario;
  j["samples"] = c.samples;
  j["violations"] = c.violation_count;
  j["max_slack"] = c.max_slack;
  if (c.approximate) j["approximate"] = true;
  j["pass"] = c.pass();
  Json ws = Json::array();
  for (const auto& w : c.witnesses) ws.push_back(witness_to_json(w));
  j["witnesses"] = std::move(ws);
  return j;
}

inline Json case_to_json(const TheoremReport& r) {
  Json j;
  j["id"] = r.id;
  j["scenario"] = r.scenario;
  j["status"] = status_name(r.status);
  Json hyp = Json::array();
  for (const auto& c : r.hypothesis) hyp.push_back(check_to_json(c));
  j["hypothesis"] = std::move(hyp);
  Json con = Json::array();
  for (const auto& c : r.conclusion) con.push_back(check_to_json(c));
  j["conclusion"] = std::move(con);
  Json notes = Json::array();
  for (const auto& n : r.notes) notes.push_back(n);
  j["notes"] = std::move(notes);
  return j;
}

inline Json report_to_json(const RunReport& rep) {
  Json j;
  j["version"] = tool_version;
  j["command"] = rep.command;
  if (!rep.scenario.empty()) j["scenario"] = rep.scenario;
  if (!rep.digest.empty()) j["digest"] = rep.digest;
  if (!rep.suite.empty()) j["suite"] = rep.suite;
  if (!rep.checks.empty() || rep.cases.empty()) {
    Json cs = Json::array();
    for (const auto& c : rep.checks) cs.push_back(check_to_json(c));
    j["checks"] = std::move(cs);
  }
  if (!rep.cases.empty()) {
    Json rs = Json::array();
    for (const auto& r : rep.cases) rs.push_back(case_to_json(r));
    j["cases"] = std::move(rs);
  }
  j["exit_status"] = rep.exit_status;
  return j;
}

inline std::string render_report_json(const RunReport& rep) {
  return report_to_json(rep).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Text rendering (human-facing: includes timings)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_g(double v, int prec = 9) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

}  // namespace detail

inline std::string render_witness_text(const ViolationWitness& w, const std::string& indent) {
  std::string out = indent + "witness: x = " + format_coords(w.x) + ", y = " + format_coords(w.y) +
                    ", t = " + detail::fmt_g(w.t);
  if (w.has_s) out += ", s = " + detail::fmt_g(w.s);
  out += "\n" + indent + "         lhs = " + detail::fmt_g(w.lhs) +
         ", rhs = " + detail::fmt_g(w.rhs) + ", slack = " + detail::fmt_g(w.slack) + "\n";
  if (!w.curve_point.empty())
    out += indent + "         curve point = " + format_coords(w.curve_point) + "\n";
  if (!w.detail.empty()) out += indent + "         " + w.detail + "\n";
  return out;
}

inline std::string render_check_text(const CheckReport& c, const std::string& indent = "") {
  std::string out = indent + (c.pass() ? "[PASS] " : "[FAIL] ") + c.predicate + " on " +
                    c.scenario + ": " + std::to_string(c.samples) + " samples, " +
                    std::to_string(c.violation_count) + " violations, max slack " +
                    detail::fmt_g(c.max_slack);
  if (c.approximate) out += " (approximate)";
  out += " [" + detail::fmt_g(c.wall_seconds, 3) + " s]\n";
  for (const auto& w : c.witnesses) out += render_witness_text(w, indent + "  ");
  return out;
}

inline std::string render_case_text(const TheoremReport& r) {
  std::string out = "[" + std::string(status_name(r.status)) + "] " + r.id + " on " + r.scenario +
                    " [" + detail::fmt_g(r.wall_seconds, 3) + " s]\n";
  if (!r.hypothesis.empty()) {
    out += "  hypotheses:\n";
    for (const auto& c : r.hypothesis) out += render_check_text(c, "    ");
  }
  if (!r.conclusion.empty()) {
    out += "  conclusions:\n";
    for (const auto& c : r.conclusion) out += render_check_text(c, "    ");
  }
  for (const auto& n : r.notes) out += "  note: " + n + "\n";
  return out;
}

inline std::string render_report_text(const RunReport& rep) {
  std::string out = "geovex " + std::string(tool_version) + " — " + rep.command;
  if (!rep.scenario.empty()) out += " — scenario " + rep.scenario;
  if (!rep.suite.empty()) out += " — suite " + rep.suite;
  out += "\n";
  if (!rep.digest.empty()) out += "scenario digest: " + rep.digest + "\n";
  for (const auto& c : rep.checks) out += render_check_text(c);
  for (const auto& r : rep.cases) out += render_case_text(r);

  int fails = 0;
  for (const auto& c : rep.checks)
    if (!c.pass()) ++fails;
  for (const auto& r : rep.cases)
    if (!r.pass()) ++fails;
  const std::size_t total = rep.checks.size() + rep.cases.size();
  out += "result: " + std::to_string(total - static_cast<std::size_t>(fails)) + "/" +
         std::to_string(total) + " passed\n";
  return out;
}

}  // namespace geovex
