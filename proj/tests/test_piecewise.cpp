#include <doctest.h>

#include <cmath>

#include "sturm_delay/piecewise.hpp"
#include "sturm_delay/quadrature.hpp"

using namespace sturm_delay;

TEST_CASE("segment dispatch and one-sided limits") {
  const Partition p{1.0, 2.0};
  CHECK(segment_of(p, 0.5, Side::Right) == SegmentId::S1);
  CHECK(segment_of(p, 1.0, Side::Left) == SegmentId::S1);
  CHECK(segment_of(p, 1.0, Side::Right) == SegmentId::S2);
  CHECK(segment_of(p, 2.0, Side::Left) == SegmentId::S2);
  CHECK(segment_of(p, 2.0, Side::Right) == SegmentId::S3);
  CHECK(segment_of(p, 3.0, Side::Left) == SegmentId::S3);

  PiecewiseFunction f;
  f.on(SegmentId::S1) = ConstantFn{1.0};
  f.on(SegmentId::S2) = ConstantFn{2.0};
  f.on(SegmentId::S3) = ConstantFn{5.0};
  CHECK(eval_piecewise(f, p, 1.0, Side::Left) == 1.0);
  CHECK(eval_piecewise(f, p, 1.0, Side::Right) == 2.0);
  CHECK(eval_piecewise(f, p, 2.0, Side::Left) == 2.0);
  CHECK(eval_piecewise(f, p, 2.0, Side::Right) == 5.0);
  CHECK_THROWS_AS(eval_piecewise(f, p, -0.1), std::domain_error);
  CHECK_THROWS_AS(eval_piecewise(f, p, kPi + 0.1), std::domain_error);
}

TEST_CASE("descriptor evaluation") {
  const Partition p{1.0, 2.0};
  PiecewiseFunction f;
  f.on(SegmentId::S2) = ConstantFn{3.0};
  CHECK(eval_piecewise(f, p, 1.5) == 3.0);

  f.on(SegmentId::S1) = SinusoidFn{1.0, 1.0, 0.0, 0.0};
  CHECK(eval_piecewise(f, p, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  f.on(SegmentId::S1) = PolynomialFn{{1.0, -2.0, 0.5}};
  CHECK(eval_piecewise(f, p, 0.5) == doctest::Approx(1.0 - 1.0 + 0.125));
}

TEST_CASE("table interpolation") {
  TableFn ramp({0.0, 1.0}, {0.0, 1.0});
  CHECK(ramp.eval(0.5) == doctest::Approx(0.5).epsilon(1e-15));

  // Linear data stays linear under the monotone cubic rule.
  TableFn lin({0.0, 0.3, 0.7, 1.0}, {0.0, 0.6, 1.4, 2.0});
  for (double x : {0.1, 0.33, 0.5, 0.9})
    CHECK(lin.eval(x) == doctest::Approx(2.0 * x).epsilon(1e-12));

  // Monotone data gives monotone interpolants (no overshoot).
  TableFn mono({0.0, 0.5, 0.6, 2.0}, {0.0, 0.01, 0.9, 1.0});
  double prev = mono.eval(0.0);
  for (int i = 1; i <= 200; ++i) {
    const double v = mono.eval(2.0 * i / 200.0);
    CHECK(v >= prev - 1e-12);
    CHECK(v <= 1.0 + 1e-12);
    prev = v;
  }

  CHECK_THROWS_AS(TableFn({0.0, 0.0, 1.0}, {0.0, 0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TableFn({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TableFn({0.0, 1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("adaptive simpson") {
  auto f = [](double x) { return std::sin(3.0 * x); };
  const double exact = (1.0 - std::cos(3.0 * kPi)) / 3.0;
  const QuadResult r = adaptive_simpson(f, 0.0, kPi, 1e-12, 8);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-11));

  // Kinked integrand (|cos|) still converges.
  auto g = [](double x) { return std::abs(std::cos(x)); };
  const QuadResult r2 = adaptive_simpson(g, 0.0, kPi, 1e-11, 8);
  CHECK(r2.converged);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-9));

  CHECK(adaptive_simpson(f, 1.0, 1.0, 1e-12).value == 0.0);
}

TEST_CASE("cumulative simpson on a uniform grid") {
  const std::size_t n = 401;
  const double h = 1.0 / (n - 1);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(-2.0 * (i * h));
  const auto I = cumulative_uniform(f, h);
  for (std::size_t i = 0; i < n; i += 37) {
    const double x = i * h;
    const double exact = (1.0 - std::exp(-2.0 * x)) / 2.0;
    CHECK(I[i] == doctest::Approx(exact).epsilon(1e-10));
  }
}
