#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sturm_delay/problem.hpp"

namespace sturm_delay {

namespace detail {

inline double hermite_value(double y0, double d0, double y1, double d1, double h,
                            double t) {
  const double t2 = t * t, t3 = t2 * t;
  return y0 * (1.0 - 3.0 * t2 + 2.0 * t3) + y1 * (3.0 * t2 - 2.0 * t3) +
         h * (d0 * (t - 2.0 * t2 + t3) + d1 * (t3 - t2));
}

inline double hermite_slope(double y0, double d0, double y1, double d1, double h,
                            double t) {
  const double t2 = t * t;
  return (y0 * (6.0 * t2 - 6.0 * t) + y1 * (6.0 * t - 6.0 * t2)) / h +
         d0 * (1.0 - 4.0 * t + 3.0 * t2) + d1 * (3.0 * t2 - 2.0 * t);
}

}  // namespace detail

/// Dense solution on one segment: uniform nodes with values and derivatives,
/// evaluable anywhere on the closure through the piecewise cubic Hermite
/// interpolant (which reproduces the node data exactly).
struct SolutionSegment {
  SegmentId segment = SegmentId::S1;
  double mu = 0.0;
  std::vector<double> nodes, values, derivs;

  double x_lo() const { return nodes.front(); }
  double x_hi() const { return nodes.back(); }

  double value_at(double x) const {
    const auto [i, t, h] = locate(x);
    return detail::hermite_value(values[i], derivs[i], values[i + 1], derivs[i + 1], h,
                                 t);
  }
  double deriv_at(double x) const {
    const auto [i, t, h] = locate(x);
    return detail::hermite_slope(values[i], derivs[i], values[i + 1], derivs[i + 1], h,
                                 t);
  }

 private:
  struct Cell {
    std::size_t i;
    double t;
    double h;
  };
  Cell locate(double x) const {
    const std::size_t m = nodes.size() - 1;
    const double step = (x_hi() - x_lo()) / double(m);
    double fi = std::floor((x - x_lo()) / step);
    std::size_t i = fi <= 0.0 ? 0 : std::min(std::size_t(fi), m - 1);
    const double h = nodes[i + 1] - nodes[i];
    return {i, (x - nodes[i]) / h, h};
  }
};

struct ValueDeriv {
  double value = 0.0;
  double deriv = 0.0;
};

/// The shooting solution w = (w1,w2,w3) for one mu, segment by segment.
struct PiecewiseSolution {
  double mu = 0.0;
  std::array<SolutionSegment, 3> segments;

  const SolutionSegment& on(SegmentId s) const { return segments[index_of(s)]; }
};

/// Fixed-step classical RK4 on y'' + q(x) y(x - retard(x)) + mu^2 y = 0 over
/// one segment. The retarded value is read from the stored Hermite history
/// when it falls at or before the last completed node, and from a Hermite
/// extrapolation of the last completed step when it falls inside the step in
/// progress (quadratic Taylor from the initial data on the very first step).
/// Validated instances keep x - retard(x) inside the current segment, so no
/// other segment is ever consulted.
inline SolutionSegment integrate_segment(const ProblemSpec& spec, double mu,
                                         SegmentId seg, double y0, double dy0) {
  if (!(mu > 0.0)) throw std::invalid_argument("integrate_segment: mu must be > 0");
  if (!std::isfinite(y0) || !std::isfinite(dy0))
    throw std::invalid_argument("integrate_segment: non-finite initial data");

  const Interval iv = spec.segment(seg);
  const double len = iv.length();
  const auto& nm = spec.numerics;
  const std::size_t m = std::max<std::size_t>(
      nm.min_steps_per_segment,
      std::size_t(std::ceil(nm.steps_per_unit_mu * mu * len)));
  const double h = len / double(m);

  SolutionSegment out;
  out.segment = seg;
  out.mu = mu;
  out.nodes.resize(m + 1);
  for (std::size_t i = 0; i < m; ++i) out.nodes[i] = iv.lo + h * double(i);
  out.nodes[m] = iv.hi;
  out.values.reserve(m + 1);
  out.derivs.reserve(m + 1);
  out.values.push_back(y0);
  out.derivs.push_back(dy0);

  // Curvature at the segment start; the retarded argument equals the start
  // there (the range assumption pins retard to 0 at the left end).
  const double retard0 = spec.retard_on(seg, iv.lo);
  if (retard0 > 1e-12)
    throw std::domain_error(std::string("integrate_segment: retarded argument leaves ") +
                            name_of(seg) + " at its left endpoint");
  const double acc0 = -(spec.q_on(seg, iv.lo) + mu * mu) * y0;

  const auto& values = out.values;
  const auto& derivs = out.derivs;
  const auto& nodes = out.nodes;

  auto history = [&](double u, std::size_t n) -> double {
    if (u <= iv.lo) {
      if (u < iv.lo - 1e-12)
        throw std::domain_error(
            std::string("integrate_segment: retarded argument left ") + name_of(seg));
      return values[0];
    }
    if (u <= nodes[n]) {
      const double step = (nodes[n] - iv.lo) / double(n);
      double fi = std::floor((u - iv.lo) / step);
      const std::size_t c =
          fi <= 0.0 ? 0 : std::min(std::size_t(fi), n - 1);
      const double hc = nodes[c + 1] - nodes[c];
      return detail::hermite_value(values[c], derivs[c], values[c + 1], derivs[c + 1],
                                   hc, (u - nodes[c]) / hc);
    }
    if (n >= 1) {
      const double hc = nodes[n] - nodes[n - 1];
      return detail::hermite_value(values[n - 1], derivs[n - 1], values[n], derivs[n],
                                   hc, (u - nodes[n - 1]) / hc);
    }
    const double s = u - iv.lo;
    return y0 + dy0 * s + 0.5 * acc0 * s * s;
  };

  // Retarded forcing q(xi) * w(xi - retard(xi)); independent of the stage
  // state, so each distinct stage abscissa is looked up once.
  auto forcing = [&](double xi, std::size_t n) -> double {
    const double d = spec.retard_on(seg, xi);
    if (d < -1e-12)
      throw std::domain_error("integrate_segment: negative retardation");
    const double u = xi - (d > 0.0 ? d : 0.0);
    return spec.q_on(seg, xi) * history(u, n);
  };

  const double mu2 = mu * mu;
  double y = y0, v = dy0;
  for (std::size_t n = 0; n < m; ++n) {
    const double x = nodes[n];
    const double hs = nodes[n + 1] - x;
    const double f0 = forcing(x, n);
    const double fm = forcing(x + 0.5 * hs, n);
    const double f1 = forcing(nodes[n + 1], n);

    const double a1 = -f0 - mu2 * y;
    const double y2 = y + 0.5 * hs * v, v2 = v + 0.5 * hs * a1;
    const double a2 = -fm - mu2 * y2;
    const double y3 = y + 0.5 * hs * v2, v3 = v + 0.5 * hs * a2;
    const double a3 = -fm - mu2 * y3;
    const double y4 = y + hs * v3, v4 = v + hs * a3;
    const double a4 = -f1 - mu2 * y4;

    y += hs / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
    v += hs / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    if (!std::isfinite(y) || !std::isfinite(v))
      throw std::runtime_error(std::string("integrate_segment: state overflow on ") +
                               name_of(seg) + " near x = " + std::to_string(x) +
                               " (mu = " + std::to_string(mu) + ")");
    out.values.push_back(y);
    out.derivs.push_back(v);
  }
  return out;
}

/// Shooting solution: segment one starts from (1, -mu) so the left boundary
/// relation holds by construction; segments two and three start from the
/// previous segment's endpoint data divided by delta and theta respectively.
inline PiecewiseSolution solve_w(const ProblemSpec& spec, double mu) {
  PiecewiseSolution sol;
  sol.mu = mu;
  auto& s1 = sol.segments[0];
  auto& s2 = sol.segments[1];
  auto& s3 = sol.segments[2];
  s1 = integrate_segment(spec, mu, SegmentId::S1, 1.0, -mu);
  s2 = integrate_segment(spec, mu, SegmentId::S2, s1.values.back() / spec.delta,
                         s1.derivs.back() / spec.delta);
  s3 = integrate_segment(spec, mu, SegmentId::S3, s2.values.back() / spec.theta,
                         s2.derivs.back() / spec.theta);
  return sol;
}

/// Hermite-interpolated (w, w') at x; the side selector resolves the joints.
inline ValueDeriv eval_solution(const PiecewiseSolution& sol, const ProblemSpec& spec,
                                double x, Side side = Side::Right) {
  if (!(x >= -1e-12 && x <= kPi + 1e-12))
    throw std::domain_error("eval_solution: x outside [0,pi]");
  x = std::min(std::max(x, 0.0), kPi);
  const SolutionSegment& s = sol.on(segment_of(spec.partition(), x, side));
  return {s.value_at(x), s.deriv_at(x)};
}

}  // namespace sturm_delay
