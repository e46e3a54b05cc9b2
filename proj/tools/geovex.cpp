// geovex — command-line front end for the geodesic invexity toolkit.
//
// Exit codes: 0 = success / predicate holds / no counterexample,
//             1 = a violation or counterexample was found,
//             2 = usage, schema, or configuration error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geovex/harness/library.hpp"
#include "geovex/harness/search.hpp"
#include "geovex/io/report_io.hpp"
#include "geovex/io/scenario_io.hpp"

namespace {

using namespace geovex;

struct CommonOpts {
  std::string scenario;
  int samples = -1;  // -1 = keep scenario value
  int t_grid = -1;
  std::int64_t seed = -1;
  std::vector<std::string> tol_kv;
  std::string report = "text";
  std::string out;
};

void add_override_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--samples", o.samples, "override the scenario's sampled pair count");
  cmd->add_option("--t-grid", o.t_grid, "override the scenario's curve-parameter grid size");
  cmd->add_option("--seed", o.seed, "override the scenario's sampler seed");
  cmd->add_option("--tol", o.tol_kv, "tolerance override KEY=VAL (repeatable)");
}

void add_report_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--report", o.report, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", o.out, "write the report to a file instead of stdout");
}

bool is_builtin_scenario(const std::string& name) {
  const auto& names = builtin_scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

InvexityScenario resolve_scenario(const CommonOpts& o) {
  InvexityScenario sc =
      is_builtin_scenario(o.scenario) ? builtin_scenario(o.scenario) : load_scenario_file(o.scenario);
  if (o.samples >= 0) {
    if (o.samples < 1) throw error(errc::config_error, "--samples must be at least 1");
    sc.sampler.pairs = o.samples;
  }
  if (o.t_grid >= 0) {
    if (o.t_grid < 2) throw error(errc::config_error, "--t-grid must be at least 2");
    sc.sampler.t_grid = o.t_grid;
  }
  if (o.seed >= 0) sc.sampler.seed = static_cast<std::uint64_t>(o.seed);
  for (const std::string& kv : o.tol_kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw error(errc::config_error, "--tol expects KEY=VAL, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw error(errc::config_error, "--tol " + key + ": '" + kv.substr(eq + 1) + "' is not a number");
    }
    sc.tol.set(key, value);
  }
  return sc;
}

void emit(const CommonOpts& o, const std::string& body) {
  if (o.out.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw error(errc::config_error, "cannot write output file '" + o.out + "'");
  f << body;
}

void emit_report(const CommonOpts& o, const RunReport& rep) {
  emit(o, o.report == "json" ? render_report_json(rep) : render_report_text(rep));
}

/// Accepts "0.1,0.2", "[0.1, 0.2]", or "(0.1, 0.2)".
Vec parse_point_arg(const std::string& flag, std::string s) {
  auto drop = [&s](char c) { s.erase(std::remove(s.begin(), s.end(), c), s.end()); };
  drop('[');
  drop(']');
  drop('(');
  drop(')');
  drop(' ');
  Vec v;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw error(errc::config_error, flag + ": '" + tok + "' is not a number");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (v.empty()) throw error(errc::config_error, flag + ": empty point");
  return v;
}

std::string point_arg(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += detail::fmt_g(v[i], 17);
  }
  return s;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const CommonOpts& o) {
  InvexityScenario sc;
  try {
    sc = resolve_scenario(o);
  } catch (const error& e) {
    std::printf("invalid: %s\n", e.what());
    return 2;
  }
  std::printf("valid: %s\n", sc.name.c_str());
  std::printf("  manifold: %s (dim %d)\n",
              sc.manifold->kind == ManifoldKind::Euclidean ? "euclidean" : "poincare-ball",
              sc.manifold->dim);
  if (sc.set.kind == SetSpec::Kind::BallUnion)
    std::printf("  set: union of %zu metric ball(s)\n", sc.set.centers.size());
  else
    std::printf("  set: expression %s\n", sc.set.expr.print().c_str());
  std::string fnames;
  for (const auto& [name, expr] : sc.functions) {
    if (!fnames.empty()) fnames += ", ";
    fnames += name;
  }
  std::printf("  functions: %s\n", fnames.empty() ? "(none)" : fnames.c_str());
  std::printf("  sampler: seed %llu, pairs %d, t-grid %d\n",
              static_cast<unsigned long long>(sc.sampler.seed), sc.sampler.pairs, sc.sampler.t_grid);
  std::printf("  digest: %s\n", scenario_digest(sc).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckOpts {
  std::vector<std::string> predicates;
  std::string function;
  std::string x_arg, y_arg;
  double t = 0.5;
  bool t_given = false;
  double s = 0.0;
  bool s_given = false;
};

/// Qualified predicate name for a witness ("preinvex" -> "preinvex:<f>").
std::string qualified_predicate(const InvexityScenario& sc, const std::string& predicate,
                                const std::string& fname) {
  if (predicate == "preinvex" || predicate == "invex-function")
    return predicate + ":" + resolve_function(sc, fname);
  return predicate;
}

int cmd_check(const CommonOpts& o, const CheckOpts& c) {
  InvexityScenario sc = resolve_scenario(o);
  RunReport rep;
  rep.command = "check";
  rep.scenario = sc.name;
  rep.digest = scenario_digest(sc);

  if (!c.x_arg.empty() || !c.y_arg.empty()) {
    // witness replay mode
    if (c.x_arg.empty() || c.y_arg.empty())
      throw error(errc::config_error, "witness replay needs both --x and --y");
    if (c.predicates.size() != 1)
      throw error(errc::config_error, "witness replay needs exactly one --predicate");
    ViolationWitness w;
    w.predicate = qualified_predicate(sc, c.predicates[0], c.function);
    w.x = parse_point_arg("--x", c.x_arg);
    w.y = parse_point_arg("--y", c.y_arg);
    w.t = c.t;
    w.s = c.s;
    w.has_s = c.s_given;
    const ReplayResult r = replay_witness(sc, w);

    CheckReport cr;
    cr.predicate = w.predicate;
    cr.scenario = sc.name;
    cr.samples = 1;
    cr.tol = sc.tol;
    cr.max_slack = r.slack;
    if (r.violated) {
      w.lhs = r.lhs;
      w.rhs = r.rhs;
      w.slack = r.slack;
      w.detail = "replayed witness";
      cr.record(w);
    }
    rep.checks.push_back(std::move(cr));
    rep.exit_status = report_verdict(rep.checks, rep.cases);
    emit_report(o, rep);
    return rep.exit_status;
  }

  std::vector<std::pair<std::string, std::string>> jobs;  // (predicate, fname)
  if (c.predicates.empty()) {
    jobs.emplace_back("invex-set", "");
    for (const auto& [fname, expr] : sc.functions) {
      if (!c.function.empty() && fname != c.function) continue;
      jobs.emplace_back("preinvex", fname);
      jobs.emplace_back("invex-function", fname);
    }
    if (!c.function.empty() && jobs.size() == 1)
      scenario_function(sc, c.function);  // unknown --function: throw rather than skip silently
  } else {
    for (const std::string& p : c.predicates) jobs.emplace_back(p, c.function);
  }

  for (const auto& [predicate, fname] : jobs)
    rep.checks.push_back(run_predicate(sc, predicate, fname));
  rep.exit_status = report_verdict(rep.checks, rep.cases);
  emit_report(o, rep);
  return rep.exit_status;
}

// ---------------------------------------------------------------------------
// theorems
// ---------------------------------------------------------------------------

int cmd_theorems(const CommonOpts& o, const std::string& suite_name) {
  const auto& names = builtin_suite_names();
  if (std::find(names.begin(), names.end(), suite_name) == names.end()) {
    std::string known;
    for (const auto& n : names) {
      if (!known.empty()) known += ", ";
      known += n;
    }
    throw error(errc::config_error, "unknown suite '" + suite_name + "' (available: " + known + ")");
  }
  const TheoremSuite suite = builtin_suite(suite_name);
  RunReport rep;
  rep.command = "theorems";
  rep.suite = suite_name;
  rep.cases = run_suite(suite);
  rep.exit_status = report_verdict(rep.checks, rep.cases);
  emit_report(o, rep);
  return rep.exit_status;
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

int cmd_trace(const CommonOpts& o, const std::string& x_arg, const std::string& y_arg, int steps) {
  if (steps < 0) throw error(errc::config_error, "--steps must be nonnegative");
  InvexityScenario sc = resolve_scenario(o);
  const Point x(sc.manifold, parse_point_arg("--x", x_arg), sc.tol.boundary_eps);
  const Point y(sc.manifold, parse_point_arg("--y", y_arg), sc.tol.boundary_eps);
  if (membership_deficit(sc, x) > 0.0)
    throw error(errc::config_error, "--x " + format_coords(x.x) + " is not in the scenario set");
  if (membership_deficit(sc, y) > 0.0)
    throw error(errc::config_error, "--y " + format_coords(y.x) + " is not in the scenario set");

  const GeodesicHandle geo = family_geodesic(sc, x, y);
  std::string csv = "t";
  for (int d = 0; d < sc.manifold->dim; ++d) csv += ",coord" + std::to_string(d);
  csv += ",in_set";
  for (const auto& [fname, expr] : sc.functions) csv += ",f_" + fname;
  csv += "\n";

  const int rows = steps == 0 ? 1 : steps + 1;
  for (int i = 0; i < rows; ++i) {
    const double t = steps == 0 ? 0.0 : static_cast<double>(i) / steps;
    const Point p = geo.eval(t);
    csv += detail::fmt_g(t, 17);
    for (int d = 0; d < sc.manifold->dim; ++d) csv += "," + detail::fmt_g(p.x[static_cast<std::size_t>(d)], 17);
    csv += membership_deficit(sc, p) == 0.0 ? ",1" : ",0";
    for (const auto& [fname, expr] : sc.functions)
      csv += "," + detail::fmt_g(eval_function(sc, expr, p), 17);
    csv += "\n";
  }
  emit(o, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

int cmd_search(const CommonOpts& o, const std::string& predicate, const std::string& function,
               const SearchBudget& budget) {
  InvexityScenario sc = resolve_scenario(o);
  SearchStats stats;
  const std::optional<ViolationWitness> found =
      search_counterexample(sc, predicate, function, budget, &stats);

  if (o.report == "json") {
    RunReport rep;
    rep.command = "search";
    rep.scenario = sc.name;
    rep.digest = scenario_digest(sc);
    CheckReport cr;
    cr.predicate = found ? found->predicate : qualified_predicate(sc, predicate, function);
    cr.scenario = sc.name;
    cr.samples = stats.samples;
    cr.tol = sc.tol;
    if (found) {
      cr.record(*found);
      cr.max_slack = found->slack;
    }
    rep.checks.push_back(std::move(cr));
    rep.exit_status = found ? 1 : 0;
    emit_report(o, rep);
    return rep.exit_status;
  }

  std::string out;
  if (found) {
    out += "counterexample found after " + std::to_string(stats.samples) + " sampled pairs [" +
           detail::fmt_g(stats.wall_seconds, 3) + " s]\n";
    out += render_witness_text(*found, "  ");
    out += "replay:\n  geovex check --scenario " + o.scenario + " --predicate " + predicate;
    if (found->predicate.find(':') != std::string::npos)
      out += " --function " + found->predicate.substr(found->predicate.find(':') + 1);
    out += " --x \"" + point_arg(found->x) + "\" --y \"" + point_arg(found->y) + "\"";
    out += " --t " + detail::fmt_g(found->t, 17);
    if (found->has_s) out += " --s " + detail::fmt_g(found->s, 17);
    for (const std::string& kv : o.tol_kv) out += " --tol " + kv;
    out += "\n";
  } else {
    out += "no counterexample found (" + std::to_string(stats.samples) + " sampled pairs, budget " +
           std::to_string(budget.max_samples) + ") [" + detail::fmt_g(stats.wall_seconds, 3) + " s]\n";
  }
  emit(o, out);
  return found ? 1 : 0;
}

// ---------------------------------------------------------------------------
// dump / list
// ---------------------------------------------------------------------------

int cmd_dump(const CommonOpts& o) {
  const InvexityScenario sc = resolve_scenario(o);
  emit(o, serialize_scenario(sc));
  return 0;
}

int cmd_list() {
  std::printf("builtin scenarios:\n");
  for (const auto& n : builtin_scenario_names()) std::printf("  %s\n", n.c_str());
  std::printf("builtin theorem suites:\n");
  for (const auto& n : builtin_suite_names()) std::printf("  %s\n", n.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for geodesic (alpha,E)-invex sets and preinvex functions"};
  app.set_version_flag("--version", geovex::tool_version);
  app.require_subcommand(1);

  CommonOpts common;

  CLI::App* validate = app.add_subcommand("validate", "strictly validate a scenario definition");
  validate->add_option("--scenario", common.scenario, "builtin scenario name or JSON file path")
      ->required();

  CLI::App* check = app.add_subcommand("check", "run invexity predicates over sampled pairs");
  CheckOpts copts;
  check->add_option("--scenario", common.scenario, "builtin scenario name or JSON file path")
      ->required();
  check->add_option("--predicate", copts.predicates,
                    "predicate to check: invex-set, preinvex, invex-function, property-P, "
                    "condition-C (repeatable; default: invex-set + per-function checks)");
  check->add_option("--function", copts.function, "named scenario function for per-function predicates");
  check->add_option("--x", copts.x_arg, "witness replay: first point (comma-separated coordinates)");
  check->add_option("--y", copts.y_arg, "witness replay: second point");
  check->add_option("--t", copts.t, "witness replay: curve parameter in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  check->add_option("--s", copts.s, "witness replay: second curve parameter")
      ->check(CLI::Range(0.0, 1.0));
  add_override_flags(check, common);
  add_report_flags(check, common);

  CLI::App* theorems = app.add_subcommand("theorems", "run a theorem verification suite");
  std::string suite_name;
  theorems->add_option("--suite", suite_name, "builtin suite name")->required();
  add_report_flags(theorems, common);

  CLI::App* trace = app.add_subcommand("trace", "tabulate the family curve between two set points");
  std::string trace_x, trace_y;
  int trace_steps = 32;
  trace->add_option("--scenario", common.scenario, "builtin scenario name or JSON file path")
      ->required();
  trace->add_option("--x", trace_x, "first point (comma-separated coordinates)")->required();
  trace->add_option("--y", trace_y, "second point")->required();
  trace->add_option("--steps", trace_steps, "number of curve steps (0 = single row at t = 0)");
  trace->add_option("--out", common.out, "write the CSV to a file instead of stdout");

  CLI::App* search = app.add_subcommand("search", "look for a counterexample to a predicate");
  std::string search_predicate, search_function;
  SearchBudget budget;
  search->add_option("--scenario", common.scenario, "builtin scenario name or JSON file path")
      ->required();
  search->add_option("--predicate", search_predicate,
                     "predicate to attack: invex-set, preinvex, invex-function, property-P, condition-C")
      ->required();
  search->add_option("--function", search_function, "named scenario function");
  search->add_option("--budget-samples", budget.max_samples, "maximum sampled pairs");
  search->add_option("--budget-seconds", budget.max_seconds, "wall-clock budget in seconds");
  search->add_option("--seed", budget.seed, "search stream seed");
  search->add_option("--tol", common.tol_kv, "tolerance override KEY=VAL (repeatable)");
  add_report_flags(search, common);

  CLI::App* dump = app.add_subcommand("dump", "print a scenario's canonical JSON form");
  dump->add_option("--scenario", common.scenario, "builtin scenario name or JSON file path")
      ->required();
  dump->add_option("--out", common.out, "write the JSON to a file instead of stdout");

  app.add_subcommand("list", "list builtin scenarios and theorem suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  copts.t_given = check->count("--t") > 0;
  copts.s_given = check->count("--s") > 0;

  try {
    if (validate->parsed()) return cmd_validate(common);
    if (check->parsed()) return cmd_check(common, copts);
    if (theorems->parsed()) return cmd_theorems(common, suite_name);
    if (trace->parsed()) return cmd_trace(common, trace_x, trace_y, trace_steps);
    if (search->parsed())
      return cmd_search(common, search_predicate, search_function, budget);
    if (dump->parsed()) return cmd_dump(common);
    return cmd_list();
  } catch (const geovex::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
