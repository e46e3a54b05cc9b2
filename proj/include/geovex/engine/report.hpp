#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geovex/config.hpp"
#include "geovex/linalg.hpp"

namespace geovex {

/// One concrete violation of a predicate, replayable from its coordinates.
struct ViolationWitness {
  std::string predicate;
  Vec x, y;              // the sampled pair, chart coordinates
  double t = 0.0;        // curve parameter
  double s = 0.0;        // second parameter (property-P, condition-C)
  bool has_s = false;
  double lhs = 0.0, rhs = 0.0;
  double slack = 0.0;    // positive amount by which the predicate fails
  Vec curve_point;       // offending curve point, when one exists
  std::string detail;
};

struct CheckReport {
  static constexpr int max_witnesses = 10;

  std::string predicate;
  std::string scenario;
  std::int64_t samples = 0;          // individual predicate evaluations
  std::int64_t violation_count = 0;  // total violations (witnesses are capped)
  std::vector<ViolationWitness> witnesses;
  double max_slack = 0.0;            // largest slack observed, violating or not
  bool approximate = false;          // a finite surrogate is in force
  Tolerances tol;
  double wall_seconds = 0.0;         // reported in text output only

  bool pass() const { return violation_count == 0; }

  void record(const ViolationWitness& w) {
    ++violation_count;
    if (static_cast<int>(witnesses.size()) < max_witnesses) witnesses.push_back(w);
  }
  void observe_slack(double s) {
    if (s > max_slack) max_slack = s;
  }
};

}  // namespace geovex
