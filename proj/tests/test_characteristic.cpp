#include <doctest.h>

#include <cmath>

#include "sturm_delay/characteristic.hpp"
#include "sturm_delay/spectrum.hpp"
#include "support/oracles.hpp"
#include "support/problems.hpp"

using namespace sturm_delay;
namespace tt = sturm_delay::testing;

TEST_CASE("characteristic closed-form values") {
  const ProblemSpec spec = tt::zero_problem();
  const CharValue a = characteristic_H(spec, 0.5);
  CHECK(a.w_pi == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(a.dw_pi == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(a.H == doctest::Approx(-0.75).epsilon(1e-9));
  CHECK(a.H_norm == a.H);  // mu < 1 is left unnormalized
  CHECK(a.H == a.dw_pi + 0.25 * a.w_pi);

  const CharValue b = characteristic_H(spec, 1.0);
  CHECK(std::abs(b.H) <= 1e-9);

  const CharValue c = characteristic_H(spec, 2.0);
  CHECK(c.H == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(c.H_norm == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("H_norm tracks the free closed form across mu") {
  // Default resolution carries the fixed-step dispersion error (~1e-6 scale
  // at mu = 50); 256 steps per unit reach 1e-9.
  for (auto [d, t] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    ProblemSpec spec = tt::zero_problem(d, t);
    auto closed_norm = [&](double mu) {
      return (std::cos(mu * kPi) - std::sin(mu * kPi) -
              (std::sin(mu * kPi) + std::cos(mu * kPi)) / mu) /
             (d * t);
    };
    for (double mu = 1.0; mu <= 50.0; mu += 0.125)
      CHECK(std::abs(characteristic_H(spec, mu).H_norm - closed_norm(mu)) <= 2e-6);
    spec.numerics.steps_per_unit_mu = 256;
    spec.numerics.min_steps_per_segment = 1000;
    for (double mu = 1.0; mu <= 50.0; mu += 1.0 / 3.0)
      CHECK(std::abs(characteristic_H(spec, mu).H_norm - closed_norm(mu)) <= 1e-9);
  }
}

TEST_CASE("transmission constants scale H but leave the roots in place") {
  const ProblemSpec ref = tt::zero_problem();
  const ProblemSpec scaled = tt::zero_problem(2.0, 3.0);
  for (double mu : {0.6, 1.7, 4.2, 9.1}) {
    const double h0 = characteristic_H(ref, mu).H;
    const double h1 = characteristic_H(scaled, mu).H * 6.0;
    CHECK(h1 == doctest::Approx(h0).epsilon(1e-12));
  }
  const SpectrumScan s0 = scan_spectrum(ref, 0.5, 5.0);
  const SpectrumScan s1 = scan_spectrum(scaled, 0.5, 5.0);
  const SpectrumScan s2 = scan_spectrum(tt::zero_problem(-1.5, 0.25), 0.5, 5.0);
  REQUIRE(s0.roots.size() == s1.roots.size());
  REQUIRE(s0.roots.size() == s2.roots.size());
  for (std::size_t i = 0; i < s0.roots.size(); ++i) {
    CHECK(std::abs(s0.roots[i] - s1.roots[i]) <= 1e-9);
    CHECK(std::abs(s0.roots[i] - s2.roots[i]) <= 1e-9);
  }
}

TEST_CASE("normalized characteristic stays within O(1) of the leading term") {
  // delta*theta*H/(sqrt(2)*mu) + mu*sin(mu*pi - pi/4) stays bounded; the sup
  // must not grow when the mu range doubles.
  for (const ProblemSpec& spec :
       {tt::zero_problem(), tt::cos_q_problem(2.0, 3.0)}) {
    auto B = [&](double mu) {
      const CharValue cv = characteristic_H(spec, mu);
      return spec.delta * spec.theta * cv.H / (std::sqrt(2.0) * mu) +
             mu * std::sin(mu * kPi - kPi / 4.0);
    };
    double sup_half = 0.0, sup_full = 0.0;
    for (double mu = 10.0; mu <= 55.0; mu += 0.125)
      sup_half = std::max(sup_half, std::abs(B(mu)));
    sup_full = sup_half;
    for (double mu = 55.125; mu <= 100.0; mu += 0.125)
      sup_full = std::max(sup_full, std::abs(B(mu)));
    CHECK(sup_full <= 1.25 * sup_half);
    CHECK(sup_full <= 25.0);  // genuinely O(1), not O(mu)
  }
}

TEST_CASE("bound audit") {
  SUBCASE("free problem: everything applicable and within sqrt(2)") {
    const BoundReport rep = envelope_bound_audit(tt::zero_problem(), 5.0);
    CHECK(rep.all_applicable_pass());
    for (const auto& r : rep.rows) {
      CHECK(r.applicable);  // thresholds are zero when q vanishes
      CHECK(r.pass);
    }
    CHECK(rep.rows[0].observed == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    CHECK(rep.rows[0].bound == doctest::Approx(2.0 * std::sqrt(2.0)));
  }
  SUBCASE("unit potential above threshold") {
    const BoundReport rep = envelope_bound_audit(tt::const_q_problem(1.0), 4.0);
    CHECK(rep.q_int[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.all_applicable_pass());
    for (const auto& r : rep.rows) CHECK(r.applicable);
  }
  SUBCASE("below threshold rows are marked not applicable") {
    const BoundReport rep = envelope_bound_audit(tt::const_q_problem(1.0), 0.1);
    for (const auto& r : rep.rows) {
      CHECK(!r.applicable);
      CHECK(r.pass);  // vacuous
    }
  }
  SUBCASE("scaled constants shrink the later segments") {
    const BoundReport rep = envelope_bound_audit(tt::zero_problem(2.0, 3.0), 7.0);
    CHECK(rep.all_applicable_pass());
    CHECK(rep.rows[2].bound == doctest::Approx(8.0 * std::sqrt(2.0) / 2.0));
    CHECK(rep.rows[4].bound == doctest::Approx(32.0 * std::sqrt(2.0) / 6.0));
  }
}
