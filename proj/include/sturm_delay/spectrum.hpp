#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sturm_delay/asymptotics.hpp"
#include "sturm_delay/characteristic.hpp"

namespace sturm_delay {

/// One located spectral parameter with its asymptotic predictions.
/// `eigenvalue` is mu_num squared (the eigenvalue proper); `advisory` is set
/// when the smoothness conditions gating the refined predictions failed
/// validation, so mu_eq47-derived columns are indicative only.
struct EigenRecord {
  int N = 0;
  double mu_num = std::numeric_limits<double>::quiet_NaN();
  double eigenvalue = std::numeric_limits<double>::quiet_NaN();
  double mu_eq35 = 0.0;
  double mu_eq47 = 0.0;
  double err35 = 0.0;
  double err47 = 0.0;
  double scaled35 = 0.0;  // N * err35
  double scaled47 = 0.0;  // N^2 * err47
  bool advisory = false;
  int window_hits = 0;
};

enum class FindStatus { Ok, NoRootInWindow, MultipleRoots };

struct FindResult {
  FindStatus status = FindStatus::Ok;
  EigenRecord record;
  std::vector<double> candidates;             // all roots seen in the window
  std::optional<double> nearest_outside;      // closest sign change when none inside
};

struct SpectrumScan {
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  long grid_points = 0;
  std::vector<double> roots;
};

namespace detail {

/// Bisection to bracket width <= tol, then one secant polish kept inside the
/// bracket. f(lo) and f(hi) must have opposite signs.
template <class F>
double refine_bracket(F&& f, double lo, double hi, double flo, double fhi,
                      double tol) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) != (fm < 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  const double denom = fhi - flo;
  if (denom != 0.0) {
    const double sec = hi - fhi * (hi - lo) / denom;
    if (sec > lo && sec < hi && std::isfinite(sec)) return sec;
  }
  return 0.5 * (lo + hi);
}

struct BracketScan {
  std::vector<double> roots;
  long points = 0;
};

/// Sign-change sweep over [lo,hi] with `count` uniform samples; suspected
/// tangencies (a deep |f| dip without sign change) get an 8x local re-sweep.
template <class F>
BracketScan bracket_scan(F&& f, double lo, double hi, long count, double tol) {
  BracketScan out;
  if (count < 2) count = 2;
  out.points = count;
  std::vector<double> xs(count), vs(count);
  for (long i = 0; i < count; ++i) {
    xs[i] = lo + (hi - lo) * double(i) / double(count - 1);
    vs[i] = f(xs[i]);
  }
  double scale = 0.0;
  for (double v : vs) scale = std::max(scale, std::abs(v));
  auto push_root = [&](double r) {
    if (out.roots.empty() || r - out.roots.back() > 10.0 * tol)
      out.roots.push_back(r);
  };
  for (long i = 0; i + 1 < count; ++i) {
    if (vs[i] == 0.0) {
      push_root(xs[i]);
      continue;
    }
    if ((vs[i] < 0.0) != (vs[i + 1] < 0.0)) {
      push_root(refine_bracket(f, xs[i], xs[i + 1], vs[i], vs[i + 1], tol));
      continue;
    }
    // Deep dip between same-signed neighbours: look closer before moving on.
    if (i > 0 && std::abs(vs[i]) < 0.02 * scale && std::abs(vs[i]) < std::abs(vs[i - 1]) &&
        std::abs(vs[i]) < std::abs(vs[i + 1])) {
      const double a = xs[i - 1], b = xs[i + 1];
      double px = a, pv = vs[i - 1];
      for (int k = 1; k <= 16; ++k) {
        const double x = a + (b - a) * k / 16.0;
        const double v = (k == 16) ? vs[i + 1] : f(x);
        out.points += (k == 16) ? 0 : 1;
        if (pv == 0.0)
          push_root(px);
        else if ((pv < 0.0) != (v < 0.0))
          push_root(refine_bracket(f, px, x, pv, v, tol));
        px = x;
        pv = v;
      }
    }
  }
  if (vs.back() == 0.0) push_root(xs.back());
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

}  // namespace detail

/// Dense sign-change scan plus bisection refinement over [mu_lo, mu_hi].
/// An empty root list is a valid outcome.
inline SpectrumScan scan_spectrum(const ProblemSpec& spec, double mu_lo, double mu_hi,
                                  int points_per_unit = 64) {
  if (!(0.0 < mu_lo && mu_lo < mu_hi))
    throw std::invalid_argument("scan_spectrum: need 0 < mu_lo < mu_hi");
  if (points_per_unit < 8) points_per_unit = 8;
  auto f = [&](double mu) { return characteristic_H(spec, mu).H_norm; };
  const long count =
      std::max<long>(2, long(std::ceil((mu_hi - mu_lo) * points_per_unit)) + 1);
  const detail::BracketScan bs =
      detail::bracket_scan(f, mu_lo, mu_hi, count, spec.numerics.root_tol);
  SpectrumScan scan;
  scan.mu_lo = mu_lo;
  scan.mu_hi = mu_hi;
  scan.grid_points = bs.points;
  scan.roots = bs.roots;
  return scan;
}

/// Locates the spectral parameter in the window (N, N+1/2). Samples the open
/// window interior first; when nothing crosses there, probes the window edges
/// (roots may sit on the boundary) and assigns an edge root to this window
/// when its centre N+1/4 is the nearest window centre, which is always the
/// case within the half-gap. Fills the asymptotic comparison fields.
inline FindResult find_eigen_near(const ProblemSpec& spec, int N) {
  if (N < 1) throw std::invalid_argument("find_eigen_near: N must be >= 1");
  const double tol = spec.numerics.root_tol;
  const double eps = 1e-9;
  const double lo = N + eps, hi = N + 0.5 - eps;
  auto f = [&](double mu) { return characteristic_H(spec, mu).H_norm; };

  FindResult res;
  const detail::BracketScan inside = detail::bracket_scan(f, lo, hi, 64, tol);
  res.candidates = inside.roots;

  // Edge probe: a root within root_tol of mu = N or mu = N + 1/2 belongs to
  // this window (the neighbouring window centres are three times farther).
  if (res.candidates.empty()) {
    const double pad = std::max(1e-6, 10.0 * tol);
    for (const double edge : {double(N), N + 0.5}) {
      const double a = edge - pad, b = edge + pad;
      const double fa = f(a), fb = f(b);
      if (fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0)) {
        const double r = detail::refine_bracket(f, a, b, fa, fb, tol);
        if (std::abs(r - edge) <= tol) res.candidates.push_back(r);
      }
    }
    std::sort(res.candidates.begin(), res.candidates.end());
  }

  EigenRecord& rec = res.record;
  rec.N = N;
  rec.window_hits = int(res.candidates.size());
  const AsymptoticEigen asym = mu_refined(spec, N);
  rec.mu_eq35 = asym.mu_eq35;
  rec.mu_eq47 = asym.mu_eq47;
  rec.advisory = !conditions_ab_ok(spec);

  if (res.candidates.empty()) {
    res.status = FindStatus::NoRootInWindow;
    const detail::BracketScan nearby =
        detail::bracket_scan(f, std::max(0.25, N - 1.0), N + 1.5, 256, tol);
    double best = std::numeric_limits<double>::quiet_NaN();
    double bestd = std::numeric_limits<double>::infinity();
    for (double r : nearby.roots) {
      const double dcentre = std::abs(r - (N + 0.25));
      if (dcentre < bestd) {
        bestd = dcentre;
        best = r;
      }
    }
    if (std::isfinite(best)) res.nearest_outside = best;
    return res;
  }

  res.status =
      res.candidates.size() == 1 ? FindStatus::Ok : FindStatus::MultipleRoots;
  // With several hits, report the one nearest the window centre.
  double pick = res.candidates.front();
  for (double r : res.candidates)
    if (std::abs(r - (N + 0.25)) < std::abs(pick - (N + 0.25))) pick = r;
  rec.mu_num = pick;
  rec.eigenvalue = pick * pick;
  rec.err35 = std::abs(rec.mu_num - rec.mu_eq35);
  rec.err47 = std::abs(rec.mu_num - rec.mu_eq47);
  rec.scaled35 = N * rec.err35;
  rec.scaled47 = double(N) * double(N) * rec.err47;
  return res;
}

enum class SimplicityVerdict { Simple, Inconclusive, NotARoot };

struct SimplicityReport {
  double root = 0.0;
  double residual = 0.0;     // H_norm at the candidate
  double slope = 0.0;        // central-difference slope of H_norm
  bool sign_change = false;
  SimplicityVerdict verdict = SimplicityVerdict::Inconclusive;
};

/// Certifies an isolated odd-order crossing: H_norm changes sign across the
/// root and its central-difference slope clears the floor.
inline SimplicityReport simplicity_check(const ProblemSpec& spec, double root,
                                         double probe = 1e-4,
                                         double slope_floor = 1e-6) {
  SimplicityReport rep;
  rep.root = root;
  rep.residual = characteristic_H(spec, root).H_norm;
  if (std::abs(rep.residual) > 1e-4) {
    rep.verdict = SimplicityVerdict::NotARoot;
    return rep;
  }
  const double fl = characteristic_H(spec, root - probe).H_norm;
  const double fr = characteristic_H(spec, root + probe).H_norm;
  rep.sign_change = (fl < 0.0) != (fr < 0.0) && fl != 0.0 && fr != 0.0;
  rep.slope = (fr - fl) / (2.0 * probe);
  rep.verdict = rep.sign_change && std::abs(rep.slope) >= slope_floor
                    ? SimplicityVerdict::Simple
                    : SimplicityVerdict::Inconclusive;
  return rep;
}

}  // namespace sturm_delay
