#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sturm_delay/piecewise.hpp"
#include "sturm_delay/quadrature.hpp"

namespace sturm_delay {

struct NumericsConfig {
  int steps_per_unit_mu = 40;
  int min_steps_per_segment = 400;
  double root_tol = 1e-10;
  double picard_tol = 1e-12;
  int picard_max_iter = 60;
  int quad_panels_base = 16;
  int validation_samples = 2048;
};

/// A full problem instance: potential q, retardation, transmission constants
/// delta/theta at the interior points h1/h2, and solver knobs.
struct ProblemSpec {
  double h1 = 1.0;
  double h2 = 2.0;
  double delta = 1.0;
  double theta = 1.0;
  PiecewiseFunction q;
  PiecewiseFunction retard;
  NumericsConfig numerics;

  Partition partition() const { return {h1, h2}; }
  Interval segment(SegmentId s) const { return segment_interval(partition(), s); }

  // One-sided by construction: each segment's own descriptor is used, so the
  // values at h1/h2 are that segment's limits.
  double q_on(SegmentId s, double x) const { return eval_segment_function(q.on(s), x); }
  double retard_on(SegmentId s, double x) const {
    return eval_segment_function(retard.on(s), x);
  }
};

/// One sampled assumption: `margin` is the worst (most negative) slack seen,
/// `where` the abscissa attaining it.
struct CheckResult {
  std::string name;
  bool pass = true;
  double margin = 0.0;
  double where = 0.0;
};

struct ValidationReport {
  std::vector<std::string> structural_errors;
  std::vector<CheckResult> assumption_checks;  // retard >= 0, retarded argument range
  std::vector<CheckResult> smoothness_checks;  // gate for the refined asymptotics

  bool structural_ok() const { return structural_errors.empty(); }
  bool assumptions_ok() const {
    for (const auto& c : assumption_checks)
      if (!c.pass) return false;
    return true;
  }
  bool conditions_ab_ok() const {
    for (const auto& c : smoothness_checks)
      if (!c.pass) return false;
    return true;
  }
  bool all_pass() const {
    return structural_ok() && assumptions_ok() && conditions_ab_ok();
  }
};

namespace detail {

struct MinTrack {
  double margin = std::numeric_limits<double>::infinity();
  double where = 0.0;
  void consider(double m, double x) {
    if (m < margin) {
      margin = m;
      where = x;
    }
  }
};

inline void check_structure(const ProblemSpec& spec, std::vector<std::string>& errs) {
  if (!(std::isfinite(spec.h1) && std::isfinite(spec.h2) && 0.0 < spec.h1 &&
        spec.h1 < spec.h2 && spec.h2 < kPi))
    errs.push_back("transmission points must satisfy 0 < h1 < h2 < pi");
  if (!(std::isfinite(spec.delta) && spec.delta != 0.0))
    errs.push_back("delta must be nonzero");
  if (!(std::isfinite(spec.theta) && spec.theta != 0.0))
    errs.push_back("theta must be nonzero");
  const auto& nm = spec.numerics;
  if (nm.steps_per_unit_mu < 1) errs.push_back("steps_per_unit_mu must be >= 1");
  if (nm.min_steps_per_segment < 1) errs.push_back("min_steps_per_segment must be >= 1");
  if (!(nm.root_tol > 0.0)) errs.push_back("root_tol must be positive");
  if (!(nm.picard_tol > 0.0)) errs.push_back("picard_tol must be positive");
  if (nm.picard_max_iter < 1) errs.push_back("picard_max_iter must be >= 1");
  if (nm.quad_panels_base < 1) errs.push_back("quad_panels_base must be >= 1");
  if (nm.validation_samples < 16) errs.push_back("validation_samples must be >= 16");

  if (spec.h1 < spec.h2) {
    for (SegmentId s : kSegments) {
      const Interval iv = segment_interval({spec.h1, spec.h2}, s);
      for (const PiecewiseFunction* f : {&spec.q, &spec.retard}) {
        if (const auto* t = std::get_if<TableFn>(&f->on(s))) {
          if (t->abscissae().front() > iv.lo + 1e-12 ||
              t->abscissae().back() < iv.hi - 1e-12)
            errs.push_back(std::string("table on ") + name_of(s) +
                           " does not span the segment closure");
        }
      }
    }
  }
}

}  // namespace detail

/// Sampled validation of the structural and analytic assumptions. The
/// structural failures make the instance unusable; the sampled analytic
/// checks are reported only, and the smoothness subset merely downgrades the
/// refined asymptotics to advisory.
inline ValidationReport validate_problem(const ProblemSpec& spec) {
  ValidationReport rep;
  detail::check_structure(spec, rep.structural_errors);
  if (!rep.structural_ok()) return rep;

  const int samples = spec.numerics.validation_samples;
  const std::array<double, 3> seg_lo_bound = {0.0, spec.h1, spec.h2};

  for (SegmentId s : kSegments) {
    const Interval iv = spec.segment(s);
    const double len = iv.length();
    detail::MinTrack nonneg, range, slope, second_diff, q_first_diff;
    for (int i = 0; i <= samples; ++i) {
      const double x = iv.lo + len * i / samples;
      const double dlt = spec.retard_on(s, x);
      nonneg.consider(dlt, x);
      range.consider(x - dlt - seg_lo_bound[index_of(s)], x);
    }
    // Retardation slope / curvature and potential slope via central
    // differences on interior points.
    const double fd = len / (4.0 * samples);
    for (int i = 1; i < samples; ++i) {
      const double x = iv.lo + len * i / samples;
      const double dm = spec.retard_on(s, x - fd);
      const double d0 = spec.retard_on(s, x);
      const double dp = spec.retard_on(s, x + fd);
      const double d1 = (dp - dm) / (2.0 * fd);
      const double d2 = (dp - 2.0 * d0 + dm) / (fd * fd);
      slope.consider(1.0 - d1, x);
      second_diff.consider(1e8 - std::abs(d2), x);
      const double qm = spec.q_on(s, x - fd);
      const double qp = spec.q_on(s, x + fd);
      q_first_diff.consider(1e8 - std::abs((qp - qm) / (2.0 * fd)), x);
    }
    const std::string sn = name_of(s);
    rep.assumption_checks.push_back(
        {"retard >= 0 on " + sn, nonneg.margin >= -1e-10, nonneg.margin, nonneg.where});
    const std::string bound_name =
        s == SegmentId::S1 ? "x - retard(x) >= 0 on s1"
                           : (s == SegmentId::S2 ? "x - retard(x) >= h1 on s2"
                                                 : "x - retard(x) >= h2 on s3");
    rep.assumption_checks.push_back(
        {bound_name, range.margin >= -1e-10, range.margin, range.where});
    rep.smoothness_checks.push_back(
        {"retard' <= 1 on " + sn, slope.margin >= -1e-6, slope.margin, slope.where});
    rep.smoothness_checks.push_back({"retard'' bounded on " + sn,
                                     second_diff.margin >= 0.0 &&
                                         std::isfinite(second_diff.margin),
                                     second_diff.margin, second_diff.where});
    rep.smoothness_checks.push_back({"q' bounded on " + sn,
                                     q_first_diff.margin >= 0.0 &&
                                         std::isfinite(q_first_diff.margin),
                                     q_first_diff.margin, q_first_diff.where});
  }

  // Vanishing retardation at the left end of each segment.
  const std::array<std::pair<std::string, double>, 3> starts = {
      std::pair{std::string("retard(0) = 0"), 0.0},
      std::pair{std::string("retard(h1+0) = 0"), spec.h1},
      std::pair{std::string("retard(h2+0) = 0"), spec.h2}};
  for (int i = 0; i < 3; ++i) {
    const double v = spec.retard_on(kSegments[i], starts[i].second);
    rep.smoothness_checks.push_back(
        {starts[i].first, std::abs(v) <= 1e-10, -std::abs(v), starts[i].second});
  }
  return rep;
}

/// Smoothness gate only (the advisory flag on refined asymptotics).
inline bool conditions_ab_ok(const ProblemSpec& spec) {
  const ValidationReport rep = validate_problem(spec);
  return rep.structural_ok() && rep.conditions_ab_ok();
}

/// Integrals of |q| over the three segments (contraction thresholds).
inline std::array<double, 3> abs_q_integrals(const ProblemSpec& spec) {
  std::array<double, 3> out{};
  for (SegmentId s : kSegments) {
    const Interval iv = spec.segment(s);
    auto f = [&](double x) { return std::abs(spec.q_on(s, x)); };
    out[index_of(s)] =
        adaptive_simpson(f, iv.lo, iv.hi, 1e-10,
                         std::max(8, spec.numerics.quad_panels_base))
            .value;
  }
  return out;
}

}  // namespace sturm_delay
