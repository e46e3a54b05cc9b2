#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geovex/dsl/parser.hpp"
#include "geovex/engine/scenario.hpp"

namespace geovex {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Content digest
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading (strict schema)
// ---------------------------------------------------------------------------

namespace detail {

/// Best-effort 1-based line of the first occurrence of "key" in the raw
/// document; 0 when not found.
inline int line_of_key(const std::string& raw, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const auto pos = raw.find(needle);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(raw.begin(), raw.begin() + static_cast<long>(pos), '\n'));
}

[[noreturn]] inline void schema_fail(const std::string& raw, const std::string& key,
                                     const std::string& msg) {
  const int line = line_of_key(raw, key);
  std::string out = msg;
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  throw error(errc::schema_error, out);
}

inline bool contains_key(std::initializer_list<const char*> keys, const std::string& k) {
  for (const char* a : keys)
    if (k == a) return true;
  return false;
}

/// Strictness: every present key must be allowed, every required key present.
inline void require_keys(const Json& obj, const std::string& where,
                         std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional, const std::string& raw) {
  if (!obj.is_object()) schema_fail(raw, where, where + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (!contains_key(required, k) && !contains_key(optional, k))
      schema_fail(raw, k, "unknown key '" + k + "' in " + where);
  for (const char* k : required)
    if (!obj.contains(k)) schema_fail(raw, where, where + " is missing required key '" + std::string(k) + "'");
}

inline double read_number(const Json& j, const std::string& where, const std::string& raw) {
  if (!j.is_number()) schema_fail(raw, where, where + " must be a number");
  return j.get<double>();
}

inline int read_int(const Json& j, const std::string& where, const std::string& raw) {
  if (!j.is_number_integer()) schema_fail(raw, where, where + " must be an integer");
  return j.get<int>();
}

inline std::string read_string(const Json& j, const std::string& where, const std::string& raw) {
  if (!j.is_string()) schema_fail(raw, where, where + " must be a string");
  return j.get<std::string>();
}

inline Vec read_vec(const Json& j, const std::string& where, int dim, const std::string& raw) {
  if (!j.is_array()) schema_fail(raw, where, where + " must be an array of numbers");
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(read_number(e, where, raw));
  if (dim >= 0 && static_cast<int>(v.size()) != dim)
    schema_fail(raw, where, where + " must have " + std::to_string(dim) + " components");
  return v;
}

/// Parse an expression string, naming the JSON field on failure.
inline Expr read_expr(const Json& j, const std::string& where, const std::string& raw) {
  const std::string src = read_string(j, where, raw);
  try {
    return parse(src);
  } catch (const parse_error& e) {
    throw error(errc::parse_error, where + ": " + e.what());
  }
}

inline std::vector<Expr> read_components(const Json& j, const std::string& where, int dim,
                                         const std::string& raw) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    schema_fail(raw, where, where + " must be an array of " + std::to_string(dim) + " expressions");
  std::vector<Expr> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(read_expr(j[i], where + "[" + std::to_string(i) + "]", raw));
  return out;
}

inline void require_in_chart(const ManifoldPtr& m, const Vec& v, const std::string& where,
                             const std::string& raw) {
  if (static_cast<int>(v.size()) != m->dim)
    schema_fail(raw, where, where + " must have " + std::to_string(m->dim) + " components");
  if (!m->in_chart(v, Tolerances{}.boundary_eps))
    schema_fail(raw, where, where + " lies outside the manifold chart");
}

}  // namespace detail

/// Build a scenario from a parsed document; `raw` is the original text used
/// for best-effort line numbers in diagnostics.
inline InvexityScenario scenario_from_json(const Json& doc, const std::string& raw) {
  using detail::read_expr;
  using detail::read_int;
  using detail::read_number;
  using detail::read_string;
  using detail::read_vec;
  using detail::require_keys;
  using detail::schema_fail;

  require_keys(doc, "scenario", {"name", "manifold", "set"},
               {"maps", "functions", "sampler", "tolerances"}, raw);

  InvexityScenario sc;
  sc.name = read_string(doc["name"], "name", raw);
  if (sc.name.empty()) schema_fail(raw, "name", "name must be nonempty");

  // manifold
  const Json& jm = doc["manifold"];
  require_keys(jm, "manifold", {"kind", "dim"}, {}, raw);
  const std::string mkind = read_string(jm["kind"], "manifold.kind", raw);
  const int dim = read_int(jm["dim"], "manifold.dim", raw);
  if (dim < 1) schema_fail(raw, "dim", "manifold.dim must be at least 1");
  if (mkind == "euclidean")
    sc.manifold = ManifoldSpec::euclidean(dim);
  else if (mkind == "poincare-ball")
    sc.manifold = ManifoldSpec::poincare_ball(dim);
  else
    schema_fail(raw, "kind", "manifold.kind must be 'euclidean' or 'poincare-ball'");

  // set
  const Json& js = doc["set"];
  require_keys(js, "set", {"kind"}, {"centers", "radii", "expr"}, raw);
  const std::string skind = read_string(js["kind"], "set.kind", raw);
  if (skind == "ball-union") {
    require_keys(js, "set", {"kind", "centers", "radii"}, {}, raw);
    if (!js["centers"].is_array() || js["centers"].empty())
      schema_fail(raw, "centers", "set.centers must be a nonempty array of points");
    std::vector<Vec> centers;
    for (std::size_t i = 0; i < js["centers"].size(); ++i) {
      centers.push_back(
          read_vec(js["centers"][i], "set.centers[" + std::to_string(i) + "]", dim, raw));
      detail::require_in_chart(sc.manifold, centers.back(),
                               "set.centers[" + std::to_string(i) + "]", raw);
    }
    if (!js["radii"].is_array() || js["radii"].size() != centers.size())
      schema_fail(raw, "radii", "set.radii must list one radius per center");
    std::vector<double> radii;
    for (std::size_t i = 0; i < js["radii"].size(); ++i) {
      radii.push_back(read_number(js["radii"][i], "set.radii[" + std::to_string(i) + "]", raw));
      if (!(radii.back() > 0.0)) schema_fail(raw, "radii", "set.radii entries must be positive");
    }
    sc.set = SetSpec::ball_union(std::move(centers), std::move(radii));
  } else if (skind == "expression") {
    require_keys(js, "set", {"kind", "expr"}, {}, raw);
    sc.set = SetSpec::expression(read_expr(js["expr"], "set.expr", raw));
  } else {
    schema_fail(raw, "kind", "set.kind must be 'ball-union' or 'expression'");
  }

  // maps (each optional with the canonical default)
  if (doc.contains("maps")) {
    const Json& jmaps = doc["maps"];
    require_keys(jmaps, "maps", {}, {"E", "eta", "alpha"}, raw);
    if (jmaps.contains("E")) {
      const Json& je = jmaps["E"];
      require_keys(je, "maps.E", {"kind"}, {"anchor", "rho", "components"}, raw);
      const std::string kind = read_string(je["kind"], "maps.E.kind", raw);
      if (kind == "identity") {
        require_keys(je, "maps.E", {"kind"}, {}, raw);
        sc.E = EMapDef::identity();
      } else if (kind == "geodesic-projection") {
        require_keys(je, "maps.E", {"kind", "anchor", "rho"}, {}, raw);
        Vec anchor = read_vec(je["anchor"], "maps.E.anchor", dim, raw);
        detail::require_in_chart(sc.manifold, anchor, "maps.E.anchor", raw);
        const double rho = read_number(je["rho"], "maps.E.rho", raw);
        if (!(rho > 0.0)) schema_fail(raw, "rho", "maps.E.rho must be positive");
        sc.E = EMapDef::geodesic_projection(std::move(anchor), rho);
      } else if (kind == "expression") {
        require_keys(je, "maps.E", {"kind", "components"}, {}, raw);
        sc.E = EMapDef::expression(detail::read_components(je["components"], "maps.E.components", dim, raw));
      } else {
        schema_fail(raw, "kind",
                    "maps.E.kind must be 'identity', 'geodesic-projection', or 'expression'");
      }
    }
    if (jmaps.contains("eta")) {
      const Json& jeta = jmaps["eta"];
      require_keys(jeta, "maps.eta", {"kind"},
                   {"center1", "r1", "center2", "r2", "components"}, raw);
      const std::string kind = read_string(jeta["kind"], "maps.eta.kind", raw);
      if (kind == "log-map") {
        require_keys(jeta, "maps.eta", {"kind"}, {}, raw);
        sc.eta = EtaDef::log_map();
      } else if (kind == "zero") {
        require_keys(jeta, "maps.eta", {"kind"}, {}, raw);
        sc.eta = EtaDef::zero();
      } else if (kind == "piecewise-balls") {
        require_keys(jeta, "maps.eta", {"kind", "center1", "r1", "center2", "r2"}, {}, raw);
        Vec c1 = read_vec(jeta["center1"], "maps.eta.center1", dim, raw);
        Vec c2 = read_vec(jeta["center2"], "maps.eta.center2", dim, raw);
        detail::require_in_chart(sc.manifold, c1, "maps.eta.center1", raw);
        detail::require_in_chart(sc.manifold, c2, "maps.eta.center2", raw);
        const double r1 = read_number(jeta["r1"], "maps.eta.r1", raw);
        const double r2 = read_number(jeta["r2"], "maps.eta.r2", raw);
        if (!(r1 > 0.0) || !(r2 > 0.0))
          schema_fail(raw, "r1", "maps.eta radii must be positive");
        sc.eta = EtaDef::piecewise_balls(std::move(c1), r1, std::move(c2), r2);
      } else if (kind == "expression") {
        require_keys(jeta, "maps.eta", {"kind", "components"}, {}, raw);
        sc.eta = EtaDef::expression(
            detail::read_components(jeta["components"], "maps.eta.components", dim, raw));
      } else {
        schema_fail(raw, "kind",
                    "maps.eta.kind must be 'log-map', 'zero', 'piecewise-balls', or 'expression'");
      }
    }
    if (jmaps.contains("alpha")) {
      const Json& ja = jmaps["alpha"];
      require_keys(ja, "maps.alpha", {"kind"}, {"value", "expr"}, raw);
      const std::string kind = read_string(ja["kind"], "maps.alpha.kind", raw);
      if (kind == "constant") {
        require_keys(ja, "maps.alpha", {"kind", "value"}, {}, raw);
        const double value = read_number(ja["value"], "maps.alpha.value", raw);
        if (value == 0.0) schema_fail(raw, "value", "maps.alpha.value must be nonzero");
        sc.alpha = AlphaDef::constant(value);
      } else if (kind == "expression") {
        require_keys(ja, "maps.alpha", {"kind", "expr"}, {}, raw);
        sc.alpha = AlphaDef::expression(read_expr(ja["expr"], "maps.alpha.expr", raw));
      } else {
        schema_fail(raw, "kind", "maps.alpha.kind must be 'constant' or 'expression'");
      }
    }
  }

  // functions
  if (doc.contains("functions")) {
    const Json& jf = doc["functions"];
    if (!jf.is_object()) schema_fail(raw, "functions", "functions must map names to expressions");
    for (const auto& [name, src] : jf.items()) {
      if (name.empty()) schema_fail(raw, "functions", "function names must be nonempty");
      sc.functions.emplace(name, read_expr(src, "functions." + name, raw));
    }
  }

  // sampler
  if (doc.contains("sampler")) {
    const Json& jsamp = doc["sampler"];
    require_keys(jsamp, "sampler", {}, {"seed", "pairs", "t_grid", "box"}, raw);
    if (jsamp.contains("seed")) {
      if (!jsamp["seed"].is_number_integer())
        schema_fail(raw, "seed", "sampler.seed must be an integer");
      const std::int64_t seed = jsamp["seed"].get<std::int64_t>();
      if (seed < 0) schema_fail(raw, "seed", "sampler.seed must be nonnegative");
      sc.sampler.seed = static_cast<std::uint64_t>(seed);
    }
    if (jsamp.contains("pairs")) {
      sc.sampler.pairs = read_int(jsamp["pairs"], "sampler.pairs", raw);
      if (sc.sampler.pairs < 1) schema_fail(raw, "pairs", "sampler.pairs must be at least 1");
    }
    if (jsamp.contains("t_grid")) {
      sc.sampler.t_grid = read_int(jsamp["t_grid"], "sampler.t_grid", raw);
      if (sc.sampler.t_grid < 2) schema_fail(raw, "t_grid", "sampler.t_grid must be at least 2");
    }
    if (jsamp.contains("box")) {
      const Json& jb = jsamp["box"];
      if (!jb.is_array() || static_cast<int>(jb.size()) != dim)
        schema_fail(raw, "box", "sampler.box must list one [lo, hi] interval per dimension");
      for (std::size_t d = 0; d < jb.size(); ++d) {
        const Vec iv = read_vec(jb[d], "sampler.box[" + std::to_string(d) + "]", 2, raw);
        if (!(iv[0] < iv[1]))
          schema_fail(raw, "box", "sampler.box intervals must satisfy lo < hi");
        sc.sampler.box.emplace_back(iv[0], iv[1]);
      }
    }
  }

  // tolerances (overrides; keys follow the Tolerances registry)
  if (doc.contains("tolerances")) {
    const Json& jt = doc["tolerances"];
    if (!jt.is_object()) schema_fail(raw, "tolerances", "tolerances must map keys to numbers");
    for (const auto& [key, val] : jt.items()) {
      try {
        sc.tol.set(key, read_number(val, "tolerances." + key, raw));
      } catch (const error& e) {
        if (e.code() != errc::config_error) throw;
        schema_fail(raw, key, e.what());
      }
    }
  }

  return sc;
}

inline InvexityScenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto upto = std::min(byte, text.size());
    const int line =
        1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    throw error(errc::schema_error, "line " + std::to_string(line) + ": " + e.what());
  }
  return scenario_from_json(doc, text);
}

inline InvexityScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::config_error, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Serialization (canonical bytes, used for digests and shipped data files)
// ---------------------------------------------------------------------------

namespace detail {

inline Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace detail

inline Json scenario_to_json(const InvexityScenario& sc) {
  if (!sc.set.sections.empty())
    throw error(errc::config_error, "derived scenarios (with section constraints) cannot be serialized");
  if (sc.manifold->kind == ManifoldKind::Custom)
    throw error(errc::config_error, "custom-metric scenarios cannot be serialized");
  Json doc;
  doc["name"] = sc.name;
  doc["manifold"] = {
      {"kind", sc.manifold->kind == ManifoldKind::Euclidean ? "euclidean" : "poincare-ball"},
      {"dim", sc.manifold->dim}};

  Json set;
  if (sc.set.kind == SetSpec::Kind::BallUnion) {
    set["kind"] = "ball-union";
    Json centers = Json::array();
    for (const Vec& c : sc.set.centers) centers.push_back(detail::vec_to_json(c));
    set["centers"] = std::move(centers);
    Json radii = Json::array();
    for (double r : sc.set.radii) radii.push_back(r);
    set["radii"] = std::move(radii);
  } else {
    set["kind"] = "expression";
    set["expr"] = sc.set.expr.print();
  }
  doc["set"] = std::move(set);

  Json maps;
  switch (sc.E.kind) {
    case EMapDef::Kind::Identity:
      maps["E"] = {{"kind", "identity"}};
      break;
    case EMapDef::Kind::GeodesicProjection:
      maps["E"] = {{"kind", "geodesic-projection"},
                   {"anchor", detail::vec_to_json(sc.E.anchor)},
                   {"rho", sc.E.rho}};
      break;
    case EMapDef::Kind::Expression: {
      Json comps = Json::array();
      for (const Expr& e : sc.E.components) comps.push_back(e.print());
      maps["E"] = {{"kind", "expression"}, {"components", std::move(comps)}};
      break;
    }
  }
  switch (sc.eta.kind) {
    case EtaDef::Kind::LogMap:
      maps["eta"] = {{"kind", "log-map"}};
      break;
    case EtaDef::Kind::Zero:
      maps["eta"] = {{"kind", "zero"}};
      break;
    case EtaDef::Kind::PiecewiseBalls:
      maps["eta"] = {{"kind", "piecewise-balls"},
                     {"center1", detail::vec_to_json(sc.eta.center1)},
                     {"r1", sc.eta.r1},
                     {"center2", detail::vec_to_json(sc.eta.center2)},
                     {"r2", sc.eta.r2}};
      break;
    case EtaDef::Kind::Expression: {
      Json comps = Json::array();
      for (const Expr& e : sc.eta.components) comps.push_back(e.print());
      maps["eta"] = {{"kind", "expression"}, {"components", std::move(comps)}};
      break;
    }
  }
  if (sc.alpha.kind == AlphaDef::Kind::Constant)
    maps["alpha"] = {{"kind", "constant"}, {"value", sc.alpha.c}};
  else
    maps["alpha"] = {{"kind", "expression"}, {"expr", sc.alpha.expr.print()}};
  doc["maps"] = std::move(maps);

  Json funcs = Json::object();
  for (const auto& [name, e] : sc.functions) funcs[name] = e.print();
  doc["functions"] = std::move(funcs);

  Json sampler;
  sampler["seed"] = sc.sampler.seed;
  sampler["pairs"] = sc.sampler.pairs;
  sampler["t_grid"] = sc.sampler.t_grid;
  if (!sc.sampler.box.empty()) {
    Json box = Json::array();
    for (const auto& [lo, hi] : sc.sampler.box) box.push_back(Json::array({lo, hi}));
    sampler["box"] = std::move(box);
  }
  doc["sampler"] = std::move(sampler);

  Json tols = Json::object();
  const Tolerances defaults;
  for (const auto& e : Tolerances::entries())
    if (sc.tol.*(e.field) != defaults.*(e.field)) tols[e.key] = sc.tol.*(e.field);
  if (!tols.empty()) doc["tolerances"] = std::move(tols);

  return doc;
}

/// Canonical bytes: 2-space indent plus a trailing newline.
inline std::string serialize_scenario(const InvexityScenario& sc) {
  return scenario_to_json(sc).dump(2) + "\n";
}

/// Digest of the canonical serialization, independent of file formatting.
inline std::string scenario_digest(const InvexityScenario& sc) {
  return hex16(fnv1a(serialize_scenario(sc)));
}

}  // namespace geovex
