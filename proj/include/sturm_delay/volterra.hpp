#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sturm_delay/integrator.hpp"
#include "sturm_delay/problem.hpp"
#include "sturm_delay/quadrature.hpp"

namespace sturm_delay {

/// Thrown when the fixed-point map is not provably contractive (mu below
/// twice the segment's |q| integral) and the caller did not force.
class NonContractiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PicardResult {
  SegmentId segment = SegmentId::S1;
  double mu = 0.0;
  std::vector<double> grid, values, derivs;
  std::vector<double> sup_changes;  // per-iteration sup-norm change
  int iterations = 0;
  double final_delta = 0.0;
  bool converged = false;
  bool forced = false;
};

/// Fixed-point iteration on the segment's integral equation
///   w(x) = W cos mu(x-a) + (W'/mu) sin mu(x-a)
///          - (1/mu) int_a^x q(t) sin(mu(x-t)) w(t - retard(t)) dt,
/// starting from the inhomogeneous trigonometric part. Integrals use the
/// running Simpson rule on the same uniform grid the shooting integrator
/// uses; retarded abscissae read the current iterate through a four-point
/// Lagrange stencil (linear interpolation leaves an O(h^2) floor well above
/// the cross-validation tolerances).
inline PicardResult picard_segment(const ProblemSpec& spec, double mu, SegmentId seg,
                                   double w_start, double dw_start,
                                   bool force = false) {
  if (!(mu > 0.0)) throw std::invalid_argument("picard_segment: mu must be > 0");
  const double q_seg = abs_q_integrals(spec)[index_of(seg)];
  const bool contractive = mu >= 2.0 * q_seg;
  if (!contractive && !force)
    throw NonContractiveError(std::string("picard_segment: mu = ") +
                              std::to_string(mu) + " below contraction threshold " +
                              std::to_string(2.0 * q_seg) + " on " + name_of(seg) +
                              " (pass force to override)");

  const Interval iv = spec.segment(seg);
  const double len = iv.length();
  const auto& nm = spec.numerics;
  const std::size_t m = std::max<std::size_t>(
      nm.min_steps_per_segment,
      std::size_t(std::ceil(nm.steps_per_unit_mu * mu * len)));
  const double h = len / double(m);

  PicardResult out;
  out.segment = seg;
  out.mu = mu;
  out.forced = !contractive;
  out.grid.resize(m + 1);
  for (std::size_t i = 0; i < m; ++i) out.grid[i] = iv.lo + h * double(i);
  out.grid[m] = iv.hi;

  // Per-node data reused every sweep: local phase, q value, and the fixed
  // four-point stencil through which the retarded value reads the iterate.
  std::vector<double> cosx(m + 1), sinx(m + 1), qv(m + 1), inhom(m + 1);
  std::vector<std::size_t> stencil_base(m + 1);
  std::vector<std::array<double, 4>> stencil_w(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    const double x = out.grid[i];
    const double xi = x - iv.lo;
    cosx[i] = std::cos(mu * xi);
    sinx[i] = std::sin(mu * xi);
    qv[i] = spec.q_on(seg, x);
    inhom[i] = w_start * cosx[i] + dw_start / mu * sinx[i];
    const double d = spec.retard_on(seg, x);
    double u = x - d;
    if (u < iv.lo - 1e-12)
      throw std::domain_error(std::string("picard_segment: retarded argument left ") +
                              name_of(seg));
    u = std::min(std::max(u, iv.lo), x);
    const double fi = std::floor((u - iv.lo) / h);
    const std::size_t cell = fi <= 0.0 ? 0 : std::min(std::size_t(fi), m - 1);
    const std::size_t base =
        m >= 3 ? std::min(cell > 0 ? cell - 1 : 0, m - 3) : 0;
    stencil_base[i] = base;
    const double s = (u - out.grid[base]) / h;
    stencil_w[i] = {-(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
                    s * (s - 2.0) * (s - 3.0) / 2.0,
                    -s * (s - 1.0) * (s - 3.0) / 2.0,
                    s * (s - 1.0) * (s - 2.0) / 6.0};
  }

  std::vector<double> w = inhom, w_next(m + 1), gc(m + 1), gs(m + 1);
  std::vector<double> Cc, Cs;
  auto sweep_integrals = [&](const std::vector<double>& cur) {
    for (std::size_t i = 0; i <= m; ++i) {
      const std::size_t b = stencil_base[i];
      const auto& lw = stencil_w[i];
      const double wd = lw[0] * cur[b] + lw[1] * cur[b + 1] + lw[2] * cur[b + 2] +
                        lw[3] * cur[b + 3];
      gc[i] = qv[i] * cosx[i] * wd;
      gs[i] = qv[i] * sinx[i] * wd;
    }
    Cc = cumulative_uniform(gc, h);
    Cs = cumulative_uniform(gs, h);
  };

  for (int it = 1; it <= nm.picard_max_iter; ++it) {
    sweep_integrals(w);
    double delta = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      w_next[i] = inhom[i] - (sinx[i] * Cc[i] - cosx[i] * Cs[i]) / mu;
      delta = std::max(delta, std::abs(w_next[i] - w[i]));
    }
    w.swap(w_next);
    out.iterations = it;
    out.final_delta = delta;
    out.sup_changes.push_back(delta);
    if (delta <= nm.picard_tol) {
      out.converged = true;
      break;
    }
  }

  sweep_integrals(w);
  out.derivs.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i)
    out.derivs[i] = -mu * w_start * sinx[i] + dw_start * cosx[i] -
                    (cosx[i] * Cc[i] + sinx[i] * Cs[i]);
  out.values = std::move(w);
  return out;
}

struct CrossCheckReport {
  double mu = 0.0;
  double discrepancy = 0.0;          // max over segments of the sup-norm gap
  std::array<double, 3> per_segment{};
  std::array<int, 3> iterations{};
  std::array<std::vector<double>, 3> traces;  // per-iteration sup changes
  bool forced = false;
  bool converged = true;
};

/// Rebuilds w by chained Picard iterations (segment one from the defining
/// initial data, later segments from the previous Picard endpoint through the
/// transmission constants) and reports the worst node-wise gap against the
/// shooting solution on the shared grid.
inline CrossCheckReport cross_validate(const ProblemSpec& spec, double mu,
                                       bool force = false) {
  const std::array<double, 3> qi = abs_q_integrals(spec);
  const double thr = 2.0 * std::max({qi[0], qi[1], qi[2]});
  if (mu < thr && !force)
    throw NonContractiveError("cross_validate: mu = " + std::to_string(mu) +
                              " below contraction threshold " + std::to_string(thr) +
                              " (pass force to override)");

  const PiecewiseSolution rk = solve_w(spec, mu);
  CrossCheckReport rep;
  rep.mu = mu;
  rep.forced = mu < thr;

  PicardResult p = picard_segment(spec, mu, SegmentId::S1, 1.0, -mu, force);
  for (SegmentId s : kSegments) {
    const int k = index_of(s);
    if (s != SegmentId::S1) {
      const double scale = s == SegmentId::S2 ? spec.delta : spec.theta;
      p = picard_segment(spec, mu, s, p.values.back() / scale,
                         p.derivs.back() / scale, force);
    }
    const auto& shoot = rk.segments[k];
    if (shoot.values.size() != p.values.size())
      throw std::logic_error("cross_validate: grid mismatch");
    double sup = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i)
      sup = std::max(sup, std::abs(p.values[i] - shoot.values[i]));
    rep.per_segment[k] = sup;
    rep.iterations[k] = p.iterations;
    rep.traces[k] = p.sup_changes;
    rep.converged = rep.converged && p.converged;
    rep.discrepancy = std::max(rep.discrepancy, sup);
  }
  return rep;
}

}  // namespace sturm_delay
