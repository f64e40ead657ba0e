#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sturm_delay {

inline constexpr double kPi = 3.14159265358979323846;

/// The three subintervals [0,h1], [h1,h2], [h2,pi] of the problem domain.
enum class SegmentId : int { S1 = 0, S2 = 1, S3 = 2 };

/// One-sided limit selector at the interior joints h1, h2.
enum class Side { Left, Right };

inline constexpr std::array<SegmentId, 3> kSegments{SegmentId::S1, SegmentId::S2,
                                                    SegmentId::S3};

inline constexpr int index_of(SegmentId s) { return static_cast<int>(s); }

inline const char* name_of(SegmentId s) {
  switch (s) {
    case SegmentId::S1: return "s1";
    case SegmentId::S2: return "s2";
    case SegmentId::S3: return "s3";
  }
  return "?";
}

/// Interior transmission points splitting [0,pi] into the three segments.
struct Partition {
  double h1 = 0.0;
  double h2 = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

inline Interval segment_interval(const Partition& p, SegmentId s) {
  switch (s) {
    case SegmentId::S1: return {0.0, p.h1};
    case SegmentId::S2: return {p.h1, p.h2};
    case SegmentId::S3: return {p.h2, kPi};
  }
  return {0.0, 0.0};
}

/// Segment owning x; the side selector resolves x == h1 or x == h2.
inline SegmentId segment_of(const Partition& p, double x, Side side) {
  if (x < p.h1) return SegmentId::S1;
  if (x == p.h1) return side == Side::Left ? SegmentId::S1 : SegmentId::S2;
  if (x < p.h2) return SegmentId::S2;
  if (x == p.h2) return side == Side::Left ? SegmentId::S2 : SegmentId::S3;
  return SegmentId::S3;
}

// ---------------------------------------------------------------------------
// Per-segment function descriptors
// ---------------------------------------------------------------------------

struct ConstantFn {
  double value = 0.0;
};

/// c0 + c1*x + c2*x^2 + ... in the global coordinate.
struct PolynomialFn {
  std::vector<double> coeffs;
};

/// a*cos(b*x + c) + d
struct SinusoidFn {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

/// Sampled table with monotone cubic (Fritsch-Carlson) interpolation.
/// Abscissae must be strictly increasing; evaluation clamps to the knot range.
class TableFn {
 public:
  TableFn(std::vector<double> x, std::vector<double> f)
      : x_(std::move(x)), f_(std::move(f)) {
    if (x_.size() < 2 || x_.size() != f_.size())
      throw std::invalid_argument("table: need >= 2 knots and matching value count");
    for (std::size_t i = 0; i + 1 < x_.size(); ++i)
      if (!(x_[i] < x_[i + 1]))
        throw std::invalid_argument("table: abscissae must be strictly increasing");
    build_slopes();
  }

  double eval(double x) const {
    if (x <= x_.front()) x = x_.front();
    if (x >= x_.back()) x = x_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    if (i + 1 >= x_.size()) i = x_.size() - 2;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return f_[i] * (1.0 - 3.0 * t2 + 2.0 * t3) + f_[i + 1] * (3.0 * t2 - 2.0 * t3) +
           h * (m_[i] * (t - 2.0 * t2 + t3) + m_[i + 1] * (t3 - t2));
  }

  const std::vector<double>& abscissae() const { return x_; }
  const std::vector<double>& values() const { return f_; }

 private:
  void build_slopes() {
    const std::size_t n = x_.size();
    std::vector<double> d(n - 1), h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      d[i] = (f_[i + 1] - f_[i]) / h[i];
    }
    m_.assign(n, 0.0);
    m_.front() = d.front();
    m_.back() = d.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
  }

  std::vector<double> x_, f_, m_;
};

using SegmentFunction = std::variant<ConstantFn, PolynomialFn, SinusoidFn, TableFn>;

inline double eval_segment_function(const SegmentFunction& f, double x) {
  return std::visit(
      [x](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, ConstantFn>) {
          return fn.value;
        } else if constexpr (std::is_same_v<T, PolynomialFn>) {
          double v = 0.0;
          for (auto it = fn.coeffs.rbegin(); it != fn.coeffs.rend(); ++it)
            v = v * x + *it;
          return v;
        } else if constexpr (std::is_same_v<T, SinusoidFn>) {
          return fn.a * std::cos(fn.b * x + fn.c) + fn.d;
        } else {
          return fn.eval(x);
        }
      },
      f);
}

/// Three per-segment descriptors; discontinuities allowed at h1, h2 only.
struct PiecewiseFunction {
  std::array<SegmentFunction, 3> segments{ConstantFn{0.0}, ConstantFn{0.0},
                                          ConstantFn{0.0}};

  const SegmentFunction& on(SegmentId s) const { return segments[index_of(s)]; }
  SegmentFunction& on(SegmentId s) { return segments[index_of(s)]; }
};

/// Value of the active segment descriptor; no averaging at the joints — the
/// side selector picks the owning segment there.
inline double eval_piecewise(const PiecewiseFunction& f, const Partition& p, double x,
                             Side side = Side::Right) {
  if (!(x >= 0.0 && x <= kPi))
    throw std::domain_error("eval_piecewise: x outside [0,pi]");
  return eval_segment_function(f.on(segment_of(p, x, side)), x);
}

inline PiecewiseFunction constant_piecewise(double v) {
  PiecewiseFunction f;
  f.segments = {ConstantFn{v}, ConstantFn{v}, ConstantFn{v}};
  return f;
}

}  // namespace sturm_delay
