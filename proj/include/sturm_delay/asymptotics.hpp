#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sturm_delay/integrator.hpp"
#include "sturm_delay/problem.hpp"
#include "sturm_delay/quadrature.hpp"

namespace sturm_delay {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Leading-order spectral parameter: N + 1/4.
inline double mu_leading(int N) {
  if (N < 1) throw std::invalid_argument("mu_leading: N must be >= 1");
  return N + 0.25;
}

namespace detail {

inline double max_retard(const ProblemSpec& spec, SegmentId s, int samples = 256) {
  const Interval iv = spec.segment(s);
  double mx = 0.0;
  for (int i = 0; i <= samples; ++i)
    mx = std::max(mx, spec.retard_on(s, iv.lo + iv.length() * i / samples));
  return mx;
}

/// Integral of g(segment, x) over [a,b] intersected with the partition,
/// splitting at the joints; panel seeding scaled by `oscillation` (an upper
/// estimate of the integrand's cycle count across the whole domain).
template <class G>
inline double integral_split(const ProblemSpec& spec, double a, double b, G&& g,
                             double abs_tol, double oscillation) {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  bool ok = true;
  for (SegmentId s : kSegments) {
    const Interval iv = spec.segment(s);
    const double lo = std::max(a, iv.lo);
    const double hi = std::min(b, iv.hi);
    if (!(hi > lo)) continue;
    const int panels =
        spec.numerics.quad_panels_base + int(std::ceil(oscillation * (hi - lo) / 2.0));
    auto f = [&](double x) { return g(s, x); };
    const QuadResult r = adaptive_simpson(f, lo, hi, abs_tol / 3.0, panels);
    ok = ok && r.converged;
    total += r.value;
  }
  if (!ok)
    throw QuadratureError("integral_split: quadrature refinement did not converge");
  return total;
}

}  // namespace detail

/// Q_N = int_0^pi q(t) cos((N+1/4) retard(t)) dt, segment by segment with
/// one-sided limits at the joints and oscillation-resolving panel counts.
inline double q_delay_integral(const ProblemSpec& spec, int N) {
  if (N < 1) throw std::invalid_argument("q_delay_integral: N must be >= 1");
  const double m = N + 0.25;
  double total = 0.0;
  for (SegmentId s : kSegments) {
    const Interval iv = spec.segment(s);
    const double mx = detail::max_retard(spec, s);
    const int panels =
        spec.numerics.quad_panels_base * (1 + int(std::ceil(N * mx)));
    auto f = [&](double t) {
      return spec.q_on(s, t) * std::cos(m * spec.retard_on(s, t));
    };
    const QuadResult r = adaptive_simpson(f, iv.lo, iv.hi, 1e-10 / 3.0, panels);
    if (!r.converged)
      throw QuadratureError("q_delay_integral: refinement did not converge");
    total += r.value;
  }
  return total;
}

/// Refined spectral-parameter prediction and its ingredients.
struct AsymptoticEigen {
  int N = 0;
  double mu_eq35 = 0.0;   // N + 1/4
  double Q_N = 0.0;       // retard-weighted q integral
  double bracket = 0.0;   // 2 + Q_N
  double mu_eq47 = 0.0;   // N + 1/4 - 2 (2 + Q_N) / (pi (4N+1))
};

inline AsymptoticEigen mu_refined(const ProblemSpec& spec, int N) {
  AsymptoticEigen a;
  a.N = N;
  a.mu_eq35 = mu_leading(N);
  a.Q_N = q_delay_integral(spec, N);
  a.bracket = 2.0 + a.Q_N;
  a.mu_eq47 = a.mu_eq35 - 2.0 * a.bracket / (kPi * (4.0 * N + 1.0));
  return a;
}

inline double segment_prefactor(const ProblemSpec& spec, SegmentId s) {
  switch (s) {
    case SegmentId::S1: return 1.0;
    case SegmentId::S2: return 1.0 / spec.delta;
    case SegmentId::S3: return 1.0 / (spec.delta * spec.theta);
  }
  return 1.0;
}

/// First-order eigenfunction shape: prefactor * sqrt(2) cos(pi/4 + mu x).
inline double eigenfunction_first_order(const ProblemSpec& spec, double mu, double x,
                                        SegmentId seg) {
  if (!(mu > 0.0))
    throw std::invalid_argument("eigenfunction_first_order: mu must be > 0");
  return segment_prefactor(spec, seg) * std::sqrt(2.0) * std::cos(kPi / 4.0 + mu * x);
}

/// Segment dispatched by x (right-continuous at the joints).
inline double eigenfunction_first_order(const ProblemSpec& spec, double mu, double x) {
  if (!(x >= 0.0 && x <= kPi))
    throw std::domain_error("eigenfunction_first_order: x outside [0,pi]");
  return eigenfunction_first_order(spec, mu, x,
                                   segment_of(spec.partition(), x, Side::Right));
}

namespace detail {

struct RefinedContext {
  int N = 0;
  double m = 0.0;       // N + 1/4, the carrier frequency
  double b2coef = 0.0;  // 2 (2 + Q_N) / (pi (4N+1)), multiplies x
};

inline RefinedContext refined_context(const ProblemSpec& spec, int N) {
  const AsymptoticEigen a = mu_refined(spec, N);
  RefinedContext c;
  c.N = N;
  c.m = a.mu_eq35;
  c.b2coef = 2.0 * a.bracket / (kPi * (4.0 * N + 1.0));
  return c;
}

/// Carrier combination shared by all three segments: the running integrals
/// S(x) = int_0^x q sin(m*retard), C(x) = int_0^x q cos(m*retard) feed the
/// (1 + (S - C)/(2N)) bracket on the cos-minus-sin carrier, and the linear
/// secular term b2coef*x rides the cos-plus-sin carrier.
inline double refined_carrier(const RefinedContext& c, double x, double Sx,
                              double Cx) {
  const double cs = std::cos(c.m * x), sn = std::sin(c.m * x);
  const double b1 = 1.0 + (Sx - Cx) / (2.0 * c.N);
  const double b2 = c.b2coef * x;
  return (cs - sn) * b1 + (cs + sn) * b2;
}

}  // namespace detail

/// Refined eigenfunction value at one point, explicit segment form.
inline double eigenfunction_refined(const ProblemSpec& spec, int N, double x,
                                    SegmentId seg) {
  if (N < 1) throw std::invalid_argument("eigenfunction_refined: N must be >= 1");
  if (!(x >= 0.0 && x <= kPi))
    throw std::domain_error("eigenfunction_refined: x outside [0,pi]");
  const detail::RefinedContext c = detail::refined_context(spec, N);
  double max_r = 0.0;
  for (SegmentId s : kSegments) max_r = std::max(max_r, detail::max_retard(spec, s));
  const double osc = c.m * (1.0 + max_r);
  auto s_g = [&](SegmentId s, double t) {
    return spec.q_on(s, t) * std::sin(c.m * spec.retard_on(s, t));
  };
  auto c_g = [&](SegmentId s, double t) {
    return spec.q_on(s, t) * std::cos(c.m * spec.retard_on(s, t));
  };
  const double Sx = detail::integral_split(spec, 0.0, x, s_g, 1e-10, osc);
  const double Cx = detail::integral_split(spec, 0.0, x, c_g, 1e-10, osc);
  return segment_prefactor(spec, seg) * detail::refined_carrier(c, x, Sx, Cx);
}

inline double eigenfunction_refined(const ProblemSpec& spec, int N, double x) {
  if (!(x >= 0.0 && x <= kPi))
    throw std::domain_error("eigenfunction_refined: x outside [0,pi]");
  return eigenfunction_refined(spec, N, x, segment_of(spec.partition(), x, Side::Right));
}

/// Refined eigenfunction on a sorted grid; the running integrals accumulate
/// across the grid so the cost stays linear in the number of points.
inline std::vector<double> eigenfunction_refined_grid(const ProblemSpec& spec, int N,
                                                      const std::vector<double>& xs) {
  if (N < 1) throw std::invalid_argument("eigenfunction_refined_grid: N must be >= 1");
  const detail::RefinedContext c = detail::refined_context(spec, N);
  std::vector<double> out(xs.size());
  double Sx = 0.0, Cx = 0.0, prev = 0.0;
  double max_r = 0.0;
  for (SegmentId s : kSegments) max_r = std::max(max_r, detail::max_retard(spec, s));
  const double osc = c.m * (1.0 + max_r);
  auto s_g = [&](SegmentId s, double t) {
    return spec.q_on(s, t) * std::sin(c.m * spec.retard_on(s, t));
  };
  auto c_g = [&](SegmentId s, double t) {
    return spec.q_on(s, t) * std::cos(c.m * spec.retard_on(s, t));
  };
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double x = xs[j];
    if (!(x >= 0.0 && x <= kPi))
      throw std::domain_error("eigenfunction_refined_grid: x outside [0,pi]");
    if (j > 0 && x < prev)
      throw std::invalid_argument("eigenfunction_refined_grid: grid must be sorted");
    Sx += detail::integral_split(spec, prev, x, s_g, 1e-11, osc);
    Cx += detail::integral_split(spec, prev, x, c_g, 1e-11, osc);
    prev = x;
    const SegmentId seg = segment_of(spec.partition(), x, Side::Right);
    out[j] = segment_prefactor(spec, seg) * detail::refined_carrier(c, x, Sx, Cx);
  }
  return out;
}

struct DecayRow {
  double mu = 0.0;
  double integral_cos = 0.0;  // int_0^pi q(t) cos(mu (2t - retard(t))) dt
  double integral_sin = 0.0;
  double mu_abs_cos = 0.0;
  double mu_abs_sin = 0.0;
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double max_mu_abs = 0.0;
  bool advisory = false;  // smoothness conditions unverified
};

/// Oscillatory-decay audit: both phase-modulated integrals at the right
/// endpoint for each mu, reported as mu * |integral|.
inline DecayReport check_oscillatory_decay(const ProblemSpec& spec,
                                    const std::vector<double>& mu_list) {
  DecayReport rep;
  rep.advisory = !conditions_ab_ok(spec);
  for (double mu : mu_list) {
    if (!(mu > 0.0))
      throw std::invalid_argument("check_oscillatory_decay: mu values must be > 0");
    auto cg = [&](SegmentId s, double t) {
      return spec.q_on(s, t) * std::cos(mu * (2.0 * t - spec.retard_on(s, t)));
    };
    auto sg = [&](SegmentId s, double t) {
      return spec.q_on(s, t) * std::sin(mu * (2.0 * t - spec.retard_on(s, t)));
    };
    DecayRow row;
    row.mu = mu;
    row.integral_cos = detail::integral_split(spec, 0.0, kPi, cg, 1e-10, 2.0 * mu);
    row.integral_sin = detail::integral_split(spec, 0.0, kPi, sg, 1e-10, 2.0 * mu);
    row.mu_abs_cos = mu * std::abs(row.integral_cos);
    row.mu_abs_sin = mu * std::abs(row.integral_sin);
    rep.max_mu_abs = std::max({rep.max_mu_abs, row.mu_abs_cos, row.mu_abs_sin});
    rep.rows.push_back(row);
  }
  return rep;
}

/// Comparison surface for one spectral index: numeric solution against both
/// asymptotic orders on a shared grid.
struct EigenfunctionSample {
  int N = 0;
  double mu_num = 0.0;
  std::vector<double> grid, w_num, u_first, u_asym;
};

inline EigenfunctionSample make_eigenfunction_sample(const ProblemSpec& spec, int N,
                                                     double mu_num, int grid_size) {
  if (grid_size < 2)
    throw std::invalid_argument("make_eigenfunction_sample: grid_size must be >= 2");
  EigenfunctionSample smp;
  smp.N = N;
  smp.mu_num = mu_num;
  smp.grid.resize(grid_size);
  for (int j = 0; j < grid_size; ++j) smp.grid[j] = kPi * j / (grid_size - 1);
  const PiecewiseSolution sol = solve_w(spec, mu_num);
  smp.w_num.resize(grid_size);
  smp.u_first.resize(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    smp.w_num[j] = eval_solution(sol, spec, smp.grid[j], Side::Right).value;
    smp.u_first[j] = eigenfunction_first_order(spec, mu_num, smp.grid[j]);
  }
  smp.u_asym = eigenfunction_refined_grid(spec, N, smp.grid);
  return smp;
}

}  // namespace sturm_delay
