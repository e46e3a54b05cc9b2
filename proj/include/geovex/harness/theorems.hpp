#pragma once

#include <algorithm>
#include <array>
#include <future>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geovex/engine/checks.hpp"

namespace geovex {

// ---------------------------------------------------------------------------
// Case plumbing
// ---------------------------------------------------------------------------

enum class CaseStatus { Pass, ApproximatePass, SkippedHypothesis, Fail };

inline const char* status_name(CaseStatus s) {
  switch (s) {
    case CaseStatus::Pass: return "PASS";
    case CaseStatus::ApproximatePass: return "APPROXIMATE-PASS";
    case CaseStatus::SkippedHypothesis: return "SKIPPED-HYPOTHESIS";
    case CaseStatus::Fail: return "FAIL";
  }
  return "?";
}

/// One theorem applied to one scenario, with the auxiliary data the theorem
/// needs: a lambda grid (P4.1), an outer scalar function phi in the variable
/// u (T4.4), a finite function family (T4.5), or a bivariate expression in
/// (p, q) (T4.6).
struct TheoremCase {
  std::string id;  // "P4.1", "T4.2", "T4.3", "T4.4", "T4.5", "T4.6"
  InvexityScenario scenario;
  std::string fname;
  std::vector<double> lambdas;
  std::optional<Expr> phi;
  std::vector<std::string> family;
  std::optional<Expr> bivariate;
};

struct TheoremReport {
  std::string id;
  std::string scenario;
  CaseStatus status = CaseStatus::Pass;
  std::vector<CheckReport> hypothesis;
  std::vector<CheckReport> conclusion;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  bool pass() const {
    return status == CaseStatus::Pass || status == CaseStatus::ApproximatePass;
  }
};

namespace detail {

/// Record a hypothesis check; a failed hypothesis downgrades the case to
/// SKIPPED-HYPOTHESIS (never to FAIL).
inline bool gate(TheoremReport& rep, CheckReport hyp) {
  const bool ok = hyp.pass();
  rep.hypothesis.push_back(std::move(hyp));
  if (!ok) rep.status = CaseStatus::SkippedHypothesis;
  return ok;
}

/// Record a conclusion check; failures mark the case FAIL, approximate
/// passes mark it APPROXIMATE-PASS.
inline void conclude(TheoremReport& rep, CheckReport con) {
  if (!con.pass())
    rep.status = CaseStatus::Fail;
  else if (con.approximate && rep.status == CaseStatus::Pass)
    rep.status = CaseStatus::ApproximatePass;
  rep.conclusion.push_back(std::move(con));
}

inline TheoremReport case_header(const TheoremCase& c) {
  TheoremReport rep;
  rep.id = c.id;
  rep.scenario = c.scenario.name;
  return rep;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// P4.1: lower sections of a preinvex function are invex sets
// ---------------------------------------------------------------------------

inline TheoremReport test_lower_sections(const TheoremCase& c) {
  detail::Stopwatch clock;
  TheoremReport rep = detail::case_header(c);
  const InvexityScenario& sc = c.scenario;
  const std::string fname = resolve_function(sc, c.fname);
  if (!detail::gate(rep, check_preinvex(sc, fname))) {
    rep.wall_seconds = clock.seconds();
    return rep;
  }
  int tested = 0;
  for (double lambda : c.lambdas) {
    const InvexityScenario sub = lower_section(sc, fname, lambda);
    try {
      sample_pair(sub, 0, sampling_box(sub));  // non, then full check
    } catch (const error& e) {
      if (e.code() != errc::empty_set) throw;
      rep.notes.push_back("lambda = " + format_double(lambda) + ": section empty, skipped");
      continue;
    }
    detail::conclude(rep, check_invex_set(sub));
    ++tested;
  }
  if (tested == 0) rep.notes.push_back("no nonempty section on the lambda grid");
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// T4.2: preinvex (+ differentiability) implies invex
// ---------------------------------------------------------------------------

inline TheoremReport test_preinvex_implies_invex(const TheoremCase& c) {
  detail::Stopwatch clock;
  TheoremReport rep = detail::case_header(c);
  const InvexityScenario& sc = c.scenario;
  const std::string fname = resolve_function(sc, c.fname);
  if (!detail::gate(rep, check_preinvex(sc, fname))) {
    rep.wall_seconds = clock.seconds();
    return rep;
  }
  detail::conclude(rep, check_invex_function(sc, fname));

  // the proof's limit step: [f(gamma(t)) - f(E(y))]/t approaches the
  // differential monotonically as t drops through the ladder
  CheckReport dq;
  dq.predicate = "difference-quotient:" + fname;
  dq.scenario = sc.name;
  dq.tol = sc.tol;
  const ScalarField f = function_field(sc, scenario_function(sc, fname));
  constexpr std::array<double, 3> ladder{1e-2, 1e-3, 1e-4};
  constexpr double noise = 1e-3;
  const auto box = sampling_box(sc);
  for (int i = 0; i < 10; ++i) {
    const auto& [x, y] = sample_pair(sc, i, box);
    const Point ey = eval_E(sc.E, y, sc.tol);
    const Point ex = eval_E(sc.E, x, sc.tol);
    const double a = eval_alpha(sc.alpha, ex, ey);
    const TangentVector dir = eval_eta(sc.eta, ex, ey);
    const double deriv = differential(f, TangentVector(ey, scaled(dir.v, a)), sc.tol);
    const GeodesicHandle geo = family_geodesic(sc, x, y);
    const double f_ey = f(geo.eval(0.0));
    double prev = std::numeric_limits<double>::infinity();
    double prev_t = 0.0;
    for (double t : ladder) {
      ++dq.samples;
      const double quotient = (f(geo.eval(t)) - f_ey) / t;
      const double err = std::abs(quotient - deriv);
      if (std::isfinite(prev)) dq.observe_slack(err - prev);
      if (err > prev + noise) {
        ViolationWitness w;
        w.predicate = dq.predicate;
        w.x = x.x;
        w.y = y.x;
        w.t = t;
        w.lhs = err;
        w.rhs = prev;
        w.slack = err - prev;
        w.detail = "quotient error grows from t = " + format_double(prev_t) + " to t = " +
                   format_double(t);
        dq.record(w);
      }
      prev = err;
      prev_t = t;
    }
  }
  detail::conclude(rep, std::move(dq));
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// T4.3: invex + Condition (C) implies preinvex
// ---------------------------------------------------------------------------

inline TheoremReport test_invex_plus_C_implies_preinvex(const TheoremCase& c) {
  detail::Stopwatch clock;
  TheoremReport rep = detail::case_header(c);
  const InvexityScenario& sc = c.scenario;
  const std::string fname = resolve_function(sc, c.fname);
  const bool inv_ok = detail::gate(rep, check_invex_function(sc, fname));
  const bool cond_ok = detail::gate(rep, check_condition_C_sampled(sc));
  if (!inv_ok || !cond_ok) {
    rep.wall_seconds = clock.seconds();
    return rep;
  }
  detail::conclude(rep, check_preinvex(sc, fname));

  // the proof's key cancellation at q = gamma(t):
  //   t a(E(x),E(q)) eta(E(x),E(q)) + (1-t) a(E(y),E(q)) eta(E(y),E(q)) = 0
  CheckReport canc;
  canc.predicate = "eq3-cancellation";
  canc.scenario = sc.name;
  canc.tol = sc.tol;
  const auto box = sampling_box(sc);
  const auto ts = t_grid(sc.sampler.t_grid);
  for (int i = 0; i < grid_check_pairs(sc); ++i) {
    const auto& [x, y] = sample_pair(sc, i, box);
    const Point ex = eval_E(sc.E, x, sc.tol);
    const Point ey = eval_E(sc.E, y, sc.tol);
    const GeodesicHandle geo = family_geodesic(sc, x, y);
    for (double t : ts) {
      ++canc.samples;
      const Point q = geo.eval(t);
      const Point eq = eval_E(sc.E, q, sc.tol);
      Vec sum = scaled(eval_eta(sc.eta, ex, eq).v, t * eval_alpha(sc.alpha, ex, eq));
      axpy(sum, (1.0 - t) * eval_alpha(sc.alpha, ey, eq), eval_eta(sc.eta, ey, eq).v);
      const double dev = riemannian_norm(TangentVector(eq, sum));
      canc.observe_slack(dev);
      if (dev > sc.tol.tol_cond) {
        ViolationWitness w;
        w.predicate = canc.predicate;
        w.x = x.x;
        w.y = y.x;
        w.t = t;
        w.slack = dev;
        w.curve_point = q.x;
        w.detail = "cancellation vector has nonzero norm at q = gamma(t)";
        canc.record(w);
      }
    }
  }
  detail::conclude(rep, std::move(canc));
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// T4.4: increasing convex phi composed with preinvex f stays preinvex
// ---------------------------------------------------------------------------

inline TheoremReport test_composition(const TheoremCase& c) {
  detail::Stopwatch clock;
  TheoremReport rep = detail::case_header(c);
  const InvexityScenario& sc = c.scenario;
  const std::string fname = resolve_function(sc, c.fname);
  if (!c.phi) throw error(errc::config_error, "case " + c.id + " needs a phi expression");
  const Expr& phi = *c.phi;
  const auto phi_at = [&phi](double u) {
    Bindings b;
    b.scalar("u", u);
    return eval_scalar(phi, b);
  };

  if (!detail::gate(rep, check_preinvex(sc, fname))) {
    rep.wall_seconds = clock.seconds();
    return rep;
  }

  // sample the range of f over S (endpoints, E-images, and curve points)
  const ScalarField f = function_field(sc, scenario_function(sc, fname));
  const auto box = sampling_box(sc);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  const int probe_pairs = std::min(sc.sampler.pairs, 100);
  for (int i = 0; i < probe_pairs; ++i) {
    const auto& [x, y] = sample_pair(sc, i, box);
    const GeodesicHandle geo = family_geodesic(sc, x, y);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double v = f(geo.eval(t));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (const Point* p : {&x, &y}) {
      const double v = f(*p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }

  // 1-D grid check: phi increasing and convex on [lo, hi]
  CheckReport mono;
  mono.predicate = "phi-increasing-convex";
  mono.scenario = sc.name;
  mono.tol = sc.tol;
  constexpr int grid_n = 101;
  std::array<double, grid_n> u{}, v{};
  double scale = 1.0;
  for (int k = 0; k < grid_n; ++k) {
    u[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (grid_n - 1);
    v[static_cast<std::size_t>(k)] = phi_at(u[static_cast<std::size_t>(k)]);
    scale = std::max(scale, std::abs(v[static_cast<std::size_t>(k)]));
    ++mono.samples;
  }
  const double slop = 1e-12 * scale;
  for (int k = 0; k + 1 < grid_n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (v[ku + 1] < v[ku] - slop) {
      ViolationWitness w;
      w.predicate = mono.predicate;
      w.t = u[ku + 1];
      w.lhs = v[ku + 1];
      w.rhs = v[ku];
      w.slack = v[ku] - v[ku + 1];
      w.detail = "phi decreases between u = " + format_double(u[ku]) + " and u = " +
                 format_double(u[ku + 1]);
      mono.record(w);
    }
    if (k + 2 < grid_n) {
      const double mid_bound = 0.5 * (v[ku] + v[ku + 2]);
      if (v[ku + 1] > mid_bound + slop) {
        ViolationWitness w;
        w.predicate = mono.predicate;
        w.t = u[ku + 1];
        w.lhs = v[ku + 1];
        w.rhs = mid_bound;
        w.slack = v[ku + 1] - mid_bound;
        w.detail = "phi fails midpoint convexity at u = " + format_double(u[ku + 1]);
        mono.record(w);
      }
    }
  }
  if (!detail::gate(rep, std::move(mono))) {
    rep.wall_seconds = clock.seconds();
    return rep;
  }

  const ScalarField composite = [&f, &phi_at](const Point& p) { return phi_at(f(p)); };
  detail::conclude(rep, check_preinvex_field(sc, composite, "preinvex:phi(" + fname + ")"));
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// T4.5: pointwise supremum of a finite preinvex family stays preinvex
// ---------------------------------------------------------------------------

inline TheoremReport test_sup_family(const TheoremCase& c) {
  detail::Stopwatch clock;
  TheoremReport rep = detail::case_header(c);
  const InvexityScenario& sc = c.scenario;
  if (c.family.empty()) throw error(errc::config_error, "case " + c.id + " needs a function family");
  bool ok = true;
  for (const std::string& name : c.family) ok = detail::gate(rep, check_preinvex(sc, name)) && ok;
  if (!ok) {
    rep.wall_seconds = clock.seconds();
    return rep;
  }

  std::vector<const Expr*> members;
  std::string label = "preinvex:max(";
  for (std::size_t j = 0; j < c.family.size(); ++j) {
    members.push_back(&scenario_function(sc, c.family[j]));
    label += (j ? ", " : "") + c.family[j];
  }
  label += ")";
  const InvexityScenario* scp = &sc;
  const ScalarField sup = [scp, members](const Point& p) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Expr* e : members) best = std::max(best, eval_function(*scp, *e, p));
    return best;
  };
  detail::conclude(rep, check_preinvex_field(sc, sup, label));
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// T4.6: infimum over the second variable of a bivariate preinvex function
// ---------------------------------------------------------------------------

namespace detail {
// sub-seed bases keeping anchor and surrogate draws disjoint from pair draws
constexpr std::uint64_t anchor_stream_base = 1000003;
constexpr std::uint64_t surrogate_stream_base = 2000003;
}  // namespace detail

/// The fixed finite sample Q shared by every surrogate-inf evaluation.
inline std::vector<Point> inf_surrogate_points(const InvexityScenario& sc, int size = 200) {
  const auto box = sampling_box(sc);
  std::vector<Point> q;
  q.reserve(static_cast<std::size_t>(size));
  for (int j = 0; j < size; ++j) {
    Rng rng = Rng::substream(sc.sampler.seed, detail::surrogate_stream_base + static_cast<std::uint64_t>(j));
    q.push_back(sample_point(sc, rng, box));
  }
  return q;
}

/// fhat(p) = min over Q of F(p, q); the scenario and expression must outlive
/// the returned field.
inline ScalarField inf_surrogate(const InvexityScenario& sc, const Expr& F,
                                 std::shared_ptr<const std::vector<Point>> q_sample) {
  const InvexityScenario* scp = &sc;
  const Expr* fp = &F;
  return [scp, fp, q_sample](const Point& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : *q_sample) best = std::min(best, eval_function2(*scp, *fp, p, q));
    return best;
  };
}

inline TheoremReport test_inf_bivariate(const TheoremCase& c) {
  detail::Stopwatch clock;
  TheoremReport rep = detail::case_header(c);
  const InvexityScenario& sc = c.scenario;
  if (!c.bivariate) throw error(errc::config_error, "case " + c.id + " needs a bivariate expression");
  const Expr& F = *c.bivariate;
  const auto box = sampling_box(sc);

  // hypothesis: F preinvex in each variable at 5 anchor points
  bool ok = true;
  for (int k = 0; k < 5; ++k) {
    Rng rng = Rng::substream(sc.sampler.seed, detail::anchor_stream_base + static_cast<std::uint64_t>(k));
    const Point anchor = sample_point(sc, rng, box);
    const InvexityScenario* scp = &sc;
    const Expr* fp = &F;
    const ScalarField in_p = [scp, fp, anchor](const Point& p) {
      return eval_function2(*scp, *fp, p, anchor);
    };
    const ScalarField in_q = [scp, fp, anchor](const Point& q) {
      return eval_function2(*scp, *fp, anchor, q);
    };
    const std::string tag = "anchor" + std::to_string(k);
    ok = detail::gate(rep, check_preinvex_field(sc, in_p, "preinvex:F(., " + tag + ")")) && ok;
    ok = detail::gate(rep, check_preinvex_field(sc, in_q, "preinvex:F(" + tag + ", .)")) && ok;
  }
  if (!ok) {
    rep.wall_seconds = clock.seconds();
    return rep;
  }

  const auto q_sample = std::make_shared<const std::vector<Point>>(inf_surrogate_points(sc));
  const ScalarField fhat = inf_surrogate(sc, F, q_sample);
  detail::conclude(rep, check_preinvex_field(sc, fhat, "preinvex:inf-F", sc.tol.inf_tol,
                                             /*approximate=*/true));
  rep.notes.push_back("infimum approximated over a fixed sample of " +
                      std::to_string(q_sample->size()) + " points");
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

inline TheoremReport run_case(const TheoremCase& c) {
  if (c.id == "P4.1") return test_lower_sections(c);
  if (c.id == "T4.2") return test_preinvex_implies_invex(c);
  if (c.id == "T4.3") return test_invex_plus_C_implies_preinvex(c);
  if (c.id == "T4.4") return test_composition(c);
  if (c.id == "T4.5") return test_sup_family(c);
  if (c.id == "T4.6") return test_inf_bivariate(c);
  throw error(errc::config_error, "unknown theorem id '" + c.id +
                                      "' (expected P4.1, T4.2, T4.3, T4.4, T4.5, or T4.6)");
}

struct TheoremSuite {
  std::string name;
  std::vector<TheoremCase> cases;
};

/// Run every case (independent cases run concurrently) and return reports
/// ordered by theorem id.
inline std::vector<TheoremReport> run_suite(const TheoremSuite& suite) {
  std::vector<std::future<TheoremReport>> futures;
  futures.reserve(suite.cases.size());
  for (const TheoremCase& c : suite.cases)
    futures.push_back(std::async(std::launch::async, [&c] { return run_case(c); }));
  std::vector<TheoremReport> reports;
  reports.reserve(futures.size());
  for (auto& f : futures) reports.push_back(f.get());
  std::stable_sort(reports.begin(), reports.end(),
                   [](const TheoremReport& a, const TheoremReport& b) { return a.id < b.id; });
  return reports;
}

}  // namespace geovex
