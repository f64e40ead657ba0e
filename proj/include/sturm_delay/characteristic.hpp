#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sturm_delay/integrator.hpp"

namespace sturm_delay {

/// Characteristic value at mu: H = w'(pi) + mu^2 w(pi). Positive roots of H
/// are the spectral parameters. H_norm = H / mu^2 for mu >= 1 (H below) keeps
/// magnitudes flat for bracketing; it has the same positive roots.
struct CharValue {
  double mu = 0.0;
  double H = 0.0;
  double H_norm = 0.0;
  double w_pi = 0.0;
  double dw_pi = 0.0;
};

/// Assembled from the final integration node (pi is always a node).
inline CharValue characteristic_H(const ProblemSpec& spec, double mu) {
  const PiecewiseSolution sol = solve_w(spec, mu);
  CharValue cv;
  cv.mu = mu;
  cv.w_pi = sol.segments[2].values.back();
  cv.dw_pi = sol.segments[2].derivs.back();
  cv.H = cv.dw_pi + mu * mu * cv.w_pi;
  cv.H_norm = mu >= 1.0 ? cv.H / (mu * mu) : cv.H;
  return cv;
}

struct BoundRow {
  std::string quantity;
  double observed = 0.0;
  double bound = 0.0;
  double threshold_mu = 0.0;  // bound is claimed only for mu >= threshold
  bool applicable = false;
  bool pass = true;  // vacuously true when not applicable
};

struct BoundReport {
  double mu = 0.0;
  std::array<double, 3> q_int{};  // integrals of |q| per segment
  std::vector<BoundRow> rows;

  bool all_applicable_pass() const {
    for (const auto& r : rows)
      if (r.applicable && !r.pass) return false;
    return true;
  }
};

/// Sampled node maxima of |w_i| and |w_i'|/mu against the a-priori envelope
/// bounds; each bound applies only above its contraction threshold.
inline BoundReport envelope_bound_audit(const ProblemSpec& spec, double mu) {
  const std::array<double, 3> qi = abs_q_integrals(spec);
  const PiecewiseSolution sol = solve_w(spec, mu);

  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  const double root2 = std::sqrt(2.0);
  const double thr1 = 2.0 * qi[0];
  const double thr2 = std::max(thr1, 2.0 * qi[1]);
  const double thr3 = std::max(thr2, 2.0 * qi[2]);
  const double ad = std::abs(spec.delta);
  const double adt = std::abs(spec.delta * spec.theta);

  BoundReport rep;
  rep.mu = mu;
  rep.q_int = qi;
  auto add = [&](std::string name, double observed, double bound, double thr) {
    BoundRow r;
    r.quantity = std::move(name);
    r.observed = observed;
    r.bound = bound;
    r.threshold_mu = thr;
    r.applicable = mu >= thr;
    r.pass = !r.applicable || observed <= bound * (1.0 + 1e-9);
    rep.rows.push_back(std::move(r));
  };
  add("|w1|", max_abs(sol.segments[0].values), 2.0 * root2, thr1);
  add("|w1'|/mu", max_abs(sol.segments[0].derivs) / mu, 2.0 * root2, thr1);
  add("|w2|", max_abs(sol.segments[1].values), 8.0 * root2 / ad, thr2);
  add("|w2'|/mu", max_abs(sol.segments[1].derivs) / mu, 8.0 * root2 / ad, thr2);
  add("|w3|", max_abs(sol.segments[2].values), 32.0 * root2 / adt, thr3);
  return rep;
}

}  // namespace sturm_delay
