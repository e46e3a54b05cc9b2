#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "geovex/errors.hpp"

namespace geovex {

/// Numerical knobs shared by the geometry kernels and the predicate engine.
/// Every field can be overridden per run (CLI: --tol KEY=VAL, scenario files:
/// "tolerances" section). Keys are matched case-insensitively.
struct Tolerances {
  double tol_geo = 1e-7;             // geodesic initial conditions, speed constancy, transport isometry
  double tol_roundtrip = 1e-9;       // exp/log roundtrip, closed-form manifolds
  double tol_roundtrip_ode = 1e-6;   // exp/log roundtrip when the ODE engine is in the chain
  double tol_quad = 1e-6;            // curve-length quadrature
  double fd_step = 1e-5;             // finite-difference step for differentials/gradients
  double tol_grad = 1e-4;            // gradient/differential duality
  double tol_ineq = 1e-7;            // preinvexity slack, closed-form paths
  double tol_ineq_fd = 1e-5;         // invexity slack, finite differences in the chain
  double tol_cond = 1e-6;            // Condition (C) and Property (P) vector deviations
  double inf_tol = 1e-3;             // allowance for the finite-sample infimum surrogate
  double ode_steps = 256;            // fixed RK4 steps on [0,1]
  double christoffel_fd_step = 1e-5; // metric finite-difference step for Christoffel symbols
  double boundary_eps = 1e-12;       // Poincare ball points rejected at 1 - boundary_eps

  struct Entry {
    const char* key;
    double Tolerances::* field;
  };

  static const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        {"TOL_GEO", &Tolerances::tol_geo},
        {"TOL_ROUNDTRIP", &Tolerances::tol_roundtrip},
        {"TOL_ROUNDTRIP_ODE", &Tolerances::tol_roundtrip_ode},
        {"TOL_QUAD", &Tolerances::tol_quad},
        {"FD_STEP", &Tolerances::fd_step},
        {"TOL_GRAD", &Tolerances::tol_grad},
        {"TOL_INEQ", &Tolerances::tol_ineq},
        {"TOL_INEQ_FD", &Tolerances::tol_ineq_fd},
        {"TOL_COND", &Tolerances::tol_cond},
        {"INF_TOL", &Tolerances::inf_tol},
        {"ODE_STEPS", &Tolerances::ode_steps},
        {"CHRISTOFFEL_FD_STEP", &Tolerances::christoffel_fd_step},
        {"BOUNDARY_EPS", &Tolerances::boundary_eps},
    };
    return table;
  }

  void set(const std::string& key, double value) {
    for (const auto& e : entries()) {
      if (iequal(key, e.key)) {
        if (!(std::isfinite(value)) || (iequal(key, "ODE_STEPS") && value < 1))
          throw error(errc::config_error, "invalid value for tolerance " + std::string(e.key));
        this->*(e.field) = value;
        return;
      }
    }
    throw error(errc::config_error, "unknown tolerance key '" + key + "'");
  }

  double get(const std::string& key) const {
    for (const auto& e : entries())
      if (iequal(key, e.key)) return this->*(e.field);
    throw error(errc::config_error, "unknown tolerance key '" + key + "'");
  }

  int ode_step_count() const { return static_cast<int>(ode_steps); }

private:
  static bool iequal(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      char x = a[i], y = b[i];
      if (x >= 'a' && x <= 'z') x = static_cast<char>(x - 'a' + 'A');
      if (y >= 'a' && y <= 'z') y = static_cast<char>(y - 'a' + 'A');
      if (x != y) return false;
    }
    return true;
  }
};

}  // namespace geovex
