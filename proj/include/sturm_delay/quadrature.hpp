#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace sturm_delay {

struct QuadResult {
  double value = 0.0;
  bool converged = true;
  long evals = 0;
};

namespace detail {

template <class F>
void adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth, QuadResult& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  out.evals += 2;
  const double h6 = (b - a) / 12.0;
  const double left = h6 * (fa + 4.0 * flm + fm);
  const double right = h6 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    out.converged = false;
    out.value += left + right + delta / 15.0;
    return;
  }
  if (std::abs(delta) <= 15.0 * tol) {
    out.value += left + right + delta / 15.0;
    return;
  }
  adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Composite adaptive Simpson: base_panels uniform panels, each refined
/// recursively until its share of abs_tol is met (or max_depth bottoms out).
template <class F>
QuadResult adaptive_simpson(F&& f, double a, double b, double abs_tol,
                            int base_panels = 8, int max_depth = 28) {
  QuadResult out;
  if (!(b > a)) {
    if (b == a) return out;
    QuadResult r = adaptive_simpson(f, b, a, abs_tol, base_panels, max_depth);
    r.value = -r.value;
    return r;
  }
  if (base_panels < 1) base_panels = 1;
  const double w = (b - a) / base_panels;
  const double panel_tol = abs_tol / base_panels;
  for (int p = 0; p < base_panels; ++p) {
    const double pa = a + p * w;
    const double pb = (p + 1 == base_panels) ? b : pa + w;
    const double pm = 0.5 * (pa + pb);
    const double fa = f(pa), fm = f(pm), fb = f(pb);
    out.evals += 3;
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    detail::adaptive_simpson_rec(f, pa, pb, fa, fm, fb, whole, panel_tol, max_depth,
                                 out);
  }
  return out;
}

/// Running integral of uniformly sampled data: I[k] = int_{x0}^{x0+k*h} f.
/// Simpson cells for even indices, one-sided quadratic rule for the odd ones.
inline std::vector<double> cumulative_uniform(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> I(n, 0.0);
  if (n < 2) return I;
  if (n == 2) {
    I[1] = 0.5 * h * (f[0] + f[1]);
    return I;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0) {
      I[i] = I[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    } else if (i + 1 < n) {
      I[i] = I[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
    } else {
      I[i] = I[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
  }
  return I;
}

}  // namespace sturm_delay
